#include "nclab/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "nclab/errors.hpp"

namespace nclab {

namespace {

void require_finite(const Eigen::MatrixXcd& a) {
    if (!a.allFinite()) throw UsageError("matrix has non-finite entries");
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

// Least squares S_N ≈ slope·ln N + intercept for N in [lo, hi] (1-based N).
LineFit fit_log(std::span<const double> sums, std::size_t lo, std::size_t hi) {
    long double mx = 0, my = 0;
    const auto m = static_cast<long double>(hi - lo + 1);
    for (std::size_t N = lo; N <= hi; ++N) {
        mx += std::log(static_cast<long double>(N));
        my += sums[N - 1];
    }
    mx /= m;
    my /= m;
    long double sxx = 0, sxy = 0;
    for (std::size_t N = lo; N <= hi; ++N) {
        const long double dx = std::log(static_cast<long double>(N)) - mx;
        sxx += dx * dx;
        sxy += dx * (sums[N - 1] - my);
    }
    LineFit f;
    f.slope = static_cast<double>(sxy / sxx);
    f.intercept = static_cast<double>(my - sxy / sxx * mx);
    long double ss = 0;
    for (std::size_t N = lo; N <= hi; ++N) {
        const long double e = sums[N - 1] - (f.intercept + f.slope * std::log(static_cast<long double>(N)));
        ss += e * e;
    }
    f.rms = static_cast<double>(std::sqrt(ss / m));
    return f;
}

}  // namespace

SingularSpectrum singular_values(const Eigen::MatrixXcd& a) {
    require_finite(a);
    SingularSpectrum out;
    out.source_size = static_cast<std::size_t>(a.rows());
    const auto m = static_cast<lapack_int>(a.rows());
    const auto n = static_cast<lapack_int>(a.cols());
    if (m == 0 || n == 0) return out;
    Eigen::MatrixXcd work = a;
    std::vector<double> s(std::min(m, n));
    const lapack_int info =
        LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, reinterpret_cast<lapack_complex_double*>(work.data()), m,
                       s.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw NonConvergenceError("SVD failed (LAPACK info " + std::to_string(info) + ")");
    std::sort(s.begin(), s.end(), std::greater<>());
    out.values = std::move(s);
    return out;
}

double hermiticity_deviation(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) throw UsageError("matrix is not square");
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

std::vector<double> eigenvalues_hermitian(const Eigen::MatrixXcd& a, double rel_tol) {
    require_finite(a);
    const double dev = hermiticity_deviation(a);
    if (dev > rel_tol)
        throw UsageError("matrix is not Hermitian: max|A - A*| / max|A| = " + std::to_string(dev));
    const auto n = static_cast<lapack_int>(a.rows());
    std::vector<double> w(n);
    if (n == 0) return w;
    Eigen::MatrixXcd work = a;
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n,
                                           reinterpret_cast<lapack_complex_double*>(work.data()), n, w.data());
    if (info != 0) throw NonConvergenceError("Hermitian eigensolver failed (LAPACK info " + std::to_string(info) + ")");
    std::sort(w.begin(), w.end(), std::greater<>());
    return w;
}

std::vector<double> partial_sums(std::span<const double> s) {
    std::vector<double> out(s.size());
    long double acc = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        acc += s[i];
        out[i] = static_cast<double>(acc);
    }
    return out;
}

std::vector<double> dixmier_quotients(std::span<const double> s) {
    if (s.size() < 2) throw UsageError("Dixmier quotients need at least two values");
    const auto sums = partial_sums(s);
    std::vector<double> d;
    d.reserve(s.size() - 1);
    for (std::size_t N = 2; N <= s.size(); ++N) d.push_back(sums[N - 1] / std::log(static_cast<double>(N)));
    return d;
}

double l1inf_norm(std::span<const double> s) {
    const auto d = dixmier_quotients(s);
    return *std::max_element(d.begin(), d.end());
}

SpectralSummary trace_estimate(std::span<const double> s, const FitOptions& opts) {
    if (!(opts.f0 >= 0.0 && opts.f0 < opts.f1 && opts.f1 <= 1.0))
        throw UsageError("fit window fractions must satisfy 0 <= f0 < f1 <= 1");
    if (!(opts.discard >= 0.0 && opts.discard < 1.0)) throw UsageError("discard fraction must lie in [0,1)");
    const auto L = static_cast<std::size_t>(std::floor((1.0 - opts.discard) * static_cast<double>(s.size())));
    if (L < 20) throw UsageError("usable spectrum length " + std::to_string(L) + " is below 20");
    const std::size_t lo = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(opts.f0 * L)));
    const std::size_t hi = static_cast<std::size_t>(std::floor(opts.f1 * L));
    if (hi < lo + 9) throw UsageError("fit window [" + std::to_string(lo) + ", " + std::to_string(hi) + "] is too small");

    SpectralSummary out;
    out.values.assign(s.begin(), s.end());
    out.partial_sums = partial_sums(s);
    out.quotients = dixmier_quotients(s);
    out.l1inf_norm = *std::max_element(out.quotients.begin(), out.quotients.end());
    out.window_begin = lo;
    out.window_end = hi;
    const LineFit f = fit_log(out.partial_sums, lo, hi);
    out.trace_estimate = f.slope;
    out.intercept = f.intercept;
    out.fit_rms = f.rms;

    // Five half-width sub-windows sliding evenly from the left edge to the right edge.
    const std::size_t width = std::max<std::size_t>(9, (hi - lo) / 2);
    double cmin = std::numeric_limits<double>::infinity();
    double cmax = -cmin;
    for (int i = 0; i < 5; ++i) {
        const std::size_t a = lo + (hi - lo - width) * static_cast<std::size_t>(i) / 4;
        const LineFit sub = fit_log(out.partial_sums, a, a + width);
        cmin = std::min(cmin, sub.slope);
        cmax = std::max(cmax, sub.slope);
    }
    out.stability_span = cmax - cmin;
    return out;
}

}  // namespace nclab
