#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nclab/residue.hpp"
#include "nclab/spectral.hpp"

namespace nclab {

/// Sorted |σ(k)| over the box for a symbol independent of its second variable.
SingularSpectrum diagonal_fast_path(const Symbol& sigma, std::int64_t M);

struct OperatorSpectrumOptions {
    std::int64_t M = 16;
    int Q = 0;  // 0: QuadratureGrid::for_box
    bool symmetrize = true;
    bool allow_fast_path = true;
};

/// Spectrum of τ(x,D) for τ = flip(σ): singular values, or signed eigenvalues of (A+A*)/2.
struct OperatorSpectrum {
    std::vector<double> values;  // nonincreasing
    bool fast_path = false;
    bool symmetrized = false;
    int Q = 0;
    double hermiticity_deviation = 0.0;  // of the unsymmetrised matrix
    double min_eigenvalue = 0.0;
};

OperatorSpectrum operator_spectrum(const Symbol& sigma, const OperatorSpectrumOptions& opts);

struct ConnesOptions {
    OperatorSpectrumOptions spectrum;
    FitOptions fit;
    bool discard_auto = true;  // d = 0 on the fast path, 0.5 otherwise
    ResidueOptions residue;
};

struct ConnesComparison {
    int n = 1;
    std::int64_t M = 0;
    int Q = 0;
    bool symmetrized = false;
    bool fast_path = false;
    double spectral_estimate = 0.0;
    Complex residue_lattice;
    Complex residue_paper;
    ComponentSource residue_source = ComponentSource::Declared;
    double relative_deviation = 0.0;
    SpectralSummary summary;
    double hermiticity_deviation = 0.0;
    double min_eigenvalue = 0.0;
    std::vector<std::string> warnings;
};

ConnesComparison run_connes_check(const Symbol& sigma, const ConnesOptions& opts);

}  // namespace nclab
