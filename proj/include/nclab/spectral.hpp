#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nclab/quantize.hpp"

namespace nclab {

/// Singular values sorted nonincreasing.
struct SingularSpectrum {
    std::vector<double> values;
    std::size_t source_size = 0;
};

SingularSpectrum singular_values(const Eigen::MatrixXcd& a);
inline SingularSpectrum singular_values(const OperatorMatrix& a) { return singular_values(a.entries); }

/// max |A − A*| / max |A|.
double hermiticity_deviation(const Eigen::MatrixXcd& a);

/// Real eigenvalues, nonincreasing. Rejects matrices with hermiticity_deviation > rel_tol.
std::vector<double> eigenvalues_hermitian(const Eigen::MatrixXcd& a, double rel_tol = 1e-10);
inline std::vector<double> eigenvalues_hermitian(const OperatorMatrix& a, double rel_tol = 1e-10) {
    return eigenvalues_hermitian(a.entries, rel_tol);
}

/// S_N for N = 1..len.
std::vector<double> partial_sums(std::span<const double> s);

/// D_N = S_N / ln N for N = 2..len (element 0 is N = 2).
std::vector<double> dixmier_quotients(std::span<const double> s);
inline std::vector<double> dixmier_quotients(const SingularSpectrum& s) { return dixmier_quotients(s.values); }

/// max_N D_N over the available N.
double l1inf_norm(std::span<const double> s);
inline double l1inf_norm(const SingularSpectrum& s) { return l1inf_norm(s.values); }

struct FitOptions {
    double f0 = 0.2;
    double f1 = 1.0;
    double discard = 0.5;
};

struct SpectralSummary {
    std::vector<double> values;
    std::vector<double> partial_sums;  // S_1..S_len
    std::vector<double> quotients;     // D_2..D_len
    double l1inf_norm = 0.0;
    double trace_estimate = 0.0;  // slope c of S_N ≈ c ln N + b
    double intercept = 0.0;
    std::size_t window_begin = 0;  // N₀
    std::size_t window_end = 0;    // N₁
    double fit_rms = 0.0;
    double stability_span = 0.0;  // max − min of c over five sliding sub-windows
};

/// Log-fit Dixmier-trace estimate over N ∈ [⌈f₀L⌉, ⌊f₁L⌋], L = ⌊(1−d)·len⌋.
/// Accepts signed sequences (eigenvalues of a symmetrised operator).
SpectralSummary trace_estimate(std::span<const double> s, const FitOptions& opts = {});
inline SpectralSummary trace_estimate(const SingularSpectrum& s, const FitOptions& opts = {}) {
    return trace_estimate(s.values, opts);
}

}  // namespace nclab
