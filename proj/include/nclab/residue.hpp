#pragma once

#include <vector>

#include "nclab/symbol.hpp"

namespace nclab {

/// Quadrature on 𝕊ⁿ⁻¹ ⊂ ℝⁿ, 1 ≤ n ≤ 3. Weights sum to the surface measure.
struct SphereRule {
    int n = 1;
    int order = 0;
    std::vector<std::vector<double>> nodes;
    std::vector<double> weights;
};

/// n=1: {±1}; n=2: `order` equispaced angles; n=3: Gauss–Legendre in cos(polar) times
/// 2·order equispaced azimuths.
SphereRule sphere_rule(int n, int order);

/// Default sphere order: 2 (n=1), 64 (n=2), 24 (n=3).
int default_sphere_order(int n);

/// LATTICE: prefactor 1/n, frequencies in lattice-dual units.
/// PAPER: prefactor 1/(n(2π)ⁿ), frequencies in angular units.
enum class Convention { Lattice, Paper };

const char* to_string(Convention c);
const char* to_string(ComponentSource s);

struct ResidueOptions {
    Convention convention = Convention::Lattice;
    int sphere_order = 0;  // 0: default_sphere_order(n)
    int torus_Q = 128;
    ExtractionOptions extraction;
};

struct ResidueReport {
    Complex value;
    Convention convention = Convention::Lattice;
    int n = 1;
    int sphere_order = 0;
    int torus_Q = 0;
    ComponentSource source = ComponentSource::Declared;
    bool flipped = false;
};

/// prefactor · ∫_{𝕋ⁿ} ∫_{𝕊ⁿ⁻¹} a_{−n}(x,θ) dΣ(θ) dx with a tensor rectangle rule on the torus.
ResidueReport noncommutative_residue(const Symbol& a, const ResidueOptions& opts = {});

/// Residue formula for the Dixmier trace of t_σ: flip σ, then take its residue.
/// σ must be DISCRETE of order exactly −n.
ResidueReport dixmier_trace_formula(const Symbol& sigma, const ResidueOptions& opts = {});

}  // namespace nclab
