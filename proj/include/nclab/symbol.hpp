#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "nclab/lattice.hpp"

namespace nclab {

using Complex = std::complex<double>;

/// Evaluation map (first argument, torus point) -> value. The first argument is the
/// lattice/frequency variable; for angular parts it is the unit direction θ.
using SymbolFn = std::function<Complex(std::span<const double> first, std::span<const double> x)>;

/// DISCRETE: σ(n′,x) on ℤⁿ×𝕋ⁿ. TOROIDAL: τ(x,k), stored with the frequency first.
enum class Side { Discrete, Toroidal };

struct HomogeneousTerm {
    double degree = 0.0;
    SymbolFn angular;  // (θ, x), |θ| = 1
};

struct Remainder {
    double order = 0.0;
    SymbolFn eval;
};

/// For |ξ| ≥ cutoff_radius the symbol equals Σ_j |ξ|^{d_j} a_j(x, ξ/|ξ|) + remainder.
struct ClassicalStructure {
    std::vector<HomogeneousTerm> terms;
    double cutoff_radius = 1.0;
    std::optional<Remainder> remainder;

    const HomogeneousTerm* find(double degree) const;
};

class Symbol {
public:
    Symbol(int n, SymbolFn eval, double order, Side side, double rho = 1.0, double delta = 0.0,
           std::optional<ClassicalStructure> classical = std::nullopt);

    Complex operator()(std::span<const double> first, std::span<const double> x) const { return eval_(first, x); }
    Complex at(const LatticePoint& k, const TorusPoint& x) const;
    Complex at(const Frequency& xi, const TorusPoint& x) const;

    int dim() const { return n_; }
    double order() const { return order_; }
    double rho() const { return rho_; }
    double delta() const { return delta_; }
    Side side() const { return side_; }
    const std::optional<ClassicalStructure>& classical() const { return classical_; }
    const SymbolFn& fn() const { return eval_; }

    /// Same metadata, different evaluation map.
    Symbol with_fn(SymbolFn f) const;
    Symbol with_order(double m) const;
    Symbol with_side(Side s) const;
    Symbol with_classical(std::optional<ClassicalStructure> c) const;

private:
    int n_;
    SymbolFn eval_;
    double order_;
    Side side_;
    double rho_;
    double delta_;
    std::optional<ClassicalStructure> classical_;
};

/// τ(x,k) = conj(σ(−k,x)). Angular parts map to conj(a(x,−θ)).
Symbol flip(const Symbol& sigma);

/// Inverse of flip: σ(n′,x) = conj(τ(x,−n′)).
Symbol unflip(const Symbol& tau);

/// Exact forward differences Δ^α in the first variable.
Symbol difference(const Symbol& sigma, const MultiIndex& alpha);

/// ∂_x^β by spectral differentiation on the uniform Q-grid per axis. Exact for
/// trigonometric polynomials in x of degree < Q/2.
Symbol partial_x(const Symbol& sigma, const MultiIndex& beta, int Q);

/// ∂_x^β σ(first, ·) on the Q-grid (lexicographic grid order, last axis fastest).
std::vector<Complex> partial_x_on_grid(const Symbol& sigma, const MultiIndex& beta, int Q,
                                       std::span<const double> first);

struct SeminormWindow {
    double r_min = 0.0;
    double r_max = 0.0;
};

struct SeminormOptions {
    int torus_points = 16;        // x-grid per axis; also the spectral grid when β ≠ 0
    std::size_t max_shells = 0;   // 0: all integer radii for n = 1, 128 for n ≥ 2
};

struct SeminormReport {
    MultiIndex alpha;
    MultiIndex beta;
    SeminormWindow window;
    double sup_ratio = 0.0;
    double fitted_exponent = 0.0;
    double residual = 0.0;
    std::size_t shells = 0;
};

/// Sup of |Δ^α ∂^β σ| (1+|n′|)^{−(m−ρ|α|+δ|β|)} over the window, plus the log-log decay fit
/// of the per-shell sup against log(1+r).
SeminormReport seminorm_estimate(const Symbol& sigma, const MultiIndex& alpha, const MultiIndex& beta,
                                 SeminormWindow window, const SeminormOptions& opts = {});

struct ExtractionOptions {
    double base_radius = 1024.0;  // T
    int levels = 4;               // t = T, 2T, 4T, 8T
    double tolerance = 1e-6;
    bool allow_extraction = true;
};

enum class ComponentSource { Declared, Extracted };

struct HomogeneousValue {
    Complex value;
    ComponentSource source;
};

/// Degree-d homogeneous component at (x, θ): the declared angular part if present,
/// otherwise Richardson extrapolation of t^{−d} σ(tθ, x).
HomogeneousValue homogeneous_component(const Symbol& sigma, double degree, std::span<const double> x,
                                       std::span<const double> theta, const ExtractionOptions& opts = {});

/// Overrides the first-variable values at finitely many lattice points.
Symbol finite_modify(const Symbol& sigma, std::map<LatticePoint, Complex> patch);

/// Patches lattice points with |k| < cutoff radius (at least the origin) where the symbol
/// cannot be evaluated, using the angular average of the leading term at |k| = 1.
Symbol regularize_origin(const Symbol& sigma);

/// True when σ(k, ·) shows no x-dependence (sampled variation ≤ tol) over the box.
bool is_x_independent(const Symbol& sigma, const TruncationBox& box, double tol = 1e-12);

}  // namespace nclab
