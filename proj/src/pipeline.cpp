#include "nclab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "nclab/errors.hpp"

namespace nclab {

SingularSpectrum diagonal_fast_path(const Symbol& sigma, std::int64_t M) {
    const TruncationBox box(sigma.dim(), M);
    if (!is_x_independent(sigma, box))
        throw UsageError("diagonal fast path requires a symbol independent of its second variable");
    SingularSpectrum out;
    out.source_size = box.size();
    out.values.reserve(box.size());
    const std::vector<double> x0(sigma.dim(), 0.0);
    for (std::size_t i = 0; i < box.size(); ++i) {
        const auto f = box.point(i).as_frequency();
        out.values.push_back(std::abs(sigma(f, x0)));
    }
    std::sort(out.values.begin(), out.values.end(), std::greater<>());
    return out;
}

OperatorSpectrum operator_spectrum(const Symbol& sigma, const OperatorSpectrumOptions& opts) {
    if (sigma.side() != Side::Discrete) throw UsageError("operator_spectrum expects a DISCRETE symbol");
    const TruncationBox box(sigma.dim(), opts.M);
    OperatorSpectrum out;
    out.symmetrized = opts.symmetrize;

    if (opts.allow_fast_path && is_x_independent(sigma, box)) {
        // Diagonal multiplier: singular values |σ(k)|, symmetrised eigenvalues Re σ(k).
        out.fast_path = true;
        const std::vector<double> x0(sigma.dim(), 0.0);
        double max_abs = 0.0, max_im = 0.0;
        out.values.reserve(box.size());
        for (std::size_t i = 0; i < box.size(); ++i) {
            const auto f = box.point(i).as_frequency();
            const Complex v = sigma(f, x0);
            max_abs = std::max(max_abs, std::abs(v));
            max_im = std::max(max_im, std::abs(v.imag()));
            out.values.push_back(opts.symmetrize ? v.real() : std::abs(v));
        }
        std::sort(out.values.begin(), out.values.end(), std::greater<>());
        out.hermiticity_deviation = max_abs > 0.0 ? 2.0 * max_im / max_abs : 0.0;
        out.min_eigenvalue = out.values.empty() ? 0.0 : out.values.back();
        return out;
    }

    const QuadratureGrid grid = opts.Q > 0 ? QuadratureGrid{box.dim(), opts.Q} : QuadratureGrid::for_box(box);
    out.Q = grid.Q;
    OperatorMatrix A = assemble_toroidal(flip(sigma), box, grid);
    out.hermiticity_deviation = hermiticity_deviation(A.entries);
    if (opts.symmetrize) {
        Eigen::MatrixXcd H = 0.5 * (A.entries + A.entries.adjoint());
        out.values = eigenvalues_hermitian(H);
        out.min_eigenvalue = out.values.back();
    } else {
        out.values = singular_values(A).values;
        out.min_eigenvalue = out.values.back();
    }
    return out;
}

ConnesComparison run_connes_check(const Symbol& sigma, const ConnesOptions& opts) {
    ConnesComparison cmp;
    cmp.n = sigma.dim();
    cmp.M = opts.spectrum.M;

    ResidueOptions lattice = opts.residue;
    lattice.convention = Convention::Lattice;
    const ResidueReport r_lat = dixmier_trace_formula(sigma, lattice);
    ResidueOptions paper = opts.residue;
    paper.convention = Convention::Paper;
    const ResidueReport r_pap = dixmier_trace_formula(sigma, paper);

    const OperatorSpectrum spec = operator_spectrum(sigma, opts.spectrum);
    FitOptions fit = opts.fit;
    if (opts.discard_auto) fit.discard = spec.fast_path ? 0.0 : 0.5;
    cmp.summary = trace_estimate(spec.values, fit);

    cmp.Q = spec.Q;
    cmp.symmetrized = spec.symmetrized;
    cmp.fast_path = spec.fast_path;
    cmp.spectral_estimate = cmp.summary.trace_estimate;
    cmp.residue_lattice = r_lat.value;
    cmp.residue_paper = r_pap.value;
    cmp.residue_source = r_lat.source;
    cmp.hermiticity_deviation = spec.hermiticity_deviation;
    cmp.min_eigenvalue = spec.min_eigenvalue;
    const double r = std::abs(r_lat.value);
    cmp.relative_deviation = r > 0.0 ? std::abs(Complex(cmp.spectral_estimate) - r_lat.value) / r
                                     : std::abs(cmp.spectral_estimate);

    const std::size_t decile = std::max<std::size_t>(1, spec.values.size() / 10);
    const double top = std::accumulate(spec.values.begin(), spec.values.begin() + decile, 0.0) / decile;
    if (cmp.min_eigenvalue < -0.1 * top) {
        std::ostringstream os;
        os << "positivity materially violated: min eigenvalue " << cmp.min_eigenvalue
           << " < -0.1 x top-decile mean " << top;
        cmp.warnings.push_back(os.str());
    }
    return cmp;
}

}  // namespace nclab
