#pragma once

#include <Eigen/Dense>

#include "nclab/lattice.hpp"
#include "nclab/symbol.hpp"

namespace nclab {

/// LATTICE_DELTA: rows/columns are δ_k ∈ ℓ²(ℤⁿ). FOURIER_MODE: e_m(x) = e^{2πi m·x} ∈ L²(𝕋ⁿ).
enum class Basis { LatticeDelta, FourierMode };

const char* to_string(Basis b);

/// Dense truncated operator; row/column i is box.point(i).
struct OperatorMatrix {
    Eigen::MatrixXcd entries;
    TruncationBox box;
    Basis basis;
};

/// Uniform grid j/Q per axis with weight Q^{−n}.
struct QuadratureGrid {
    int n = 1;
    int Q = 64;

    double weight() const;
    /// Smallest power of two ≥ max(64, 4(2M+1)).
    static QuadratureGrid for_box(const TruncationBox& box);
};

/// [n′,k] = Q^{−n} Σ_ξ σ(n′,ξ) e^{2πi(n′−k)·ξ}, one FFT per row.
OperatorMatrix assemble_discrete(const Symbol& sigma, const TruncationBox& box, const QuadratureGrid& grid);

/// [η,m] = Q^{−n} Σ_x τ(x,m) e^{−2πi(η−m)·x}, one FFT per column.
OperatorMatrix assemble_toroidal(const Symbol& tau, const TruncationBox& box, const QuadratureGrid& grid);

OperatorMatrix adjoint(const OperatorMatrix& a);

/// 𝓕 A 𝓕⁻¹ with 𝓕 e_{−k} = δ_k: B[n′,k] = A[−n′,−k].
OperatorMatrix conjugate_by_fourier(const OperatorMatrix& a);

struct IdentityReport {
    double full_deviation = 0.0;
    double interior_deviation = 0.0;
    int bandwidth = 0;              // x-Fourier bandwidth b read off the discrete matrix
    std::int64_t interior_half_width = 0;  // M − b
    double max_entry = 0.0;
};

/// Compares t_σ with 𝓕 τ(x,D)* 𝓕⁻¹ for τ = flip(σ).
IdentityReport verify_identity(const Symbol& sigma, const TruncationBox& box, const QuadratureGrid& grid);

/// Largest |row − col| offset (per-axis max) carrying an entry above rel_tol · max|entry|.
int matrix_bandwidth(const OperatorMatrix& a, double rel_tol = 1e-13);

}  // namespace nclab
