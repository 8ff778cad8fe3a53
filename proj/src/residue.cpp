#include "nclab/residue.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nclab/errors.hpp"

namespace nclab {

namespace {

// Gauss–Legendre nodes/weights on [−1,1] by Newton iteration on P_m.
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= m; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = m * (z * p1 - p0) / (z * z - 1.0);
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = w[m - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

}  // namespace

int default_sphere_order(int n) {
    switch (n) {
        case 1: return 2;
        case 2: return 64;
        case 3: return 24;
        default: throw UsageError("sphere rules are supported for 1 <= n <= 3, got n = " + std::to_string(n));
    }
}

SphereRule sphere_rule(int n, int order) {
    if (n < 1 || n > 3) throw UsageError("sphere rules are supported for 1 <= n <= 3, got n = " + std::to_string(n));
    SphereRule r;
    r.n = n;
    if (n == 1) {
        r.order = 2;
        r.nodes = {{1.0}, {-1.0}};
        r.weights = {1.0, 1.0};
        return r;
    }
    if (order < 1) throw UsageError("sphere rule order must be >= 1");
    r.order = order;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (n == 2) {
        for (int j = 0; j < order; ++j) {
            const double a = two_pi * j / order;
            r.nodes.push_back({std::cos(a), std::sin(a)});
            r.weights.push_back(two_pi / order);
        }
        return r;
    }
    std::vector<double> gx, gw;
    gauss_legendre(order, gx, gw);
    const int az = 2 * order;
    for (int i = 0; i < order; ++i) {
        const double s = std::sqrt(std::max(0.0, 1.0 - gx[i] * gx[i]));
        for (int j = 0; j < az; ++j) {
            const double phi = two_pi * j / az;
            r.nodes.push_back({s * std::cos(phi), s * std::sin(phi), gx[i]});
            r.weights.push_back(gw[i] * two_pi / az);
        }
    }
    return r;
}

const char* to_string(Convention c) { return c == Convention::Lattice ? "lattice" : "paper"; }
const char* to_string(ComponentSource s) { return s == ComponentSource::Declared ? "declared" : "extracted"; }

ResidueReport noncommutative_residue(const Symbol& a, const ResidueOptions& opts) {
    const int n = a.dim();
    const int order = opts.sphere_order > 0 ? opts.sphere_order : default_sphere_order(n);
    const SphereRule rule = sphere_rule(n, order);
    if (opts.torus_Q < 1) throw UsageError("torus quadrature size must be >= 1");
    if (!opts.extraction.allow_extraction && !(a.classical() && a.classical()->find(-n)))
        throw UsageError("symbol has no declared degree -n component and extraction is disabled");

    const int Q = opts.torus_Q;
    std::size_t tpoints = 1;
    for (int i = 0; i < n; ++i) tpoints *= static_cast<std::size_t>(Q);

    ResidueReport rep;
    rep.convention = opts.convention;
    rep.n = n;
    rep.sphere_order = rule.order;
    rep.torus_Q = Q;

    // Fixed summation order: torus points lexicographic, sphere nodes by index.
    std::vector<double> x(n);
    Complex total = 0.0;
    bool extracted = false;
    for (std::size_t j = 0; j < tpoints; ++j) {
        std::size_t rem = j;
        for (int i = n - 1; i >= 0; --i) {
            x[i] = static_cast<double>(rem % static_cast<std::size_t>(Q)) / Q;
            rem /= static_cast<std::size_t>(Q);
        }
        Complex inner = 0.0;
        for (std::size_t s = 0; s < rule.nodes.size(); ++s) {
            const auto hv = homogeneous_component(a, -static_cast<double>(n), x, rule.nodes[s], opts.extraction);
            extracted = extracted || hv.source == ComponentSource::Extracted;
            inner += rule.weights[s] * hv.value;
        }
        total += inner;
    }
    total /= static_cast<double>(tpoints);

    double prefactor = 1.0 / n;
    if (opts.convention == Convention::Paper) prefactor /= std::pow(2.0 * std::numbers::pi, n);
    rep.value = prefactor * total;
    rep.source = extracted ? ComponentSource::Extracted : ComponentSource::Declared;
    if (!std::isfinite(rep.value.real()) || !std::isfinite(rep.value.imag()))
        throw NumericalError("residue is not finite");
    return rep;
}

ResidueReport dixmier_trace_formula(const Symbol& sigma, const ResidueOptions& opts) {
    const int n = sigma.dim();
    if (sigma.side() != Side::Discrete) throw UsageError("dixmier_trace_formula expects a DISCRETE symbol");
    if (std::abs(sigma.order() + n) > 1e-12)
        throw UsageError("residue formula requires order -n = " + std::to_string(-n) + ", symbol has order " +
                         std::to_string(sigma.order()));
    ResidueReport rep = noncommutative_residue(flip(sigma), opts);
    rep.flipped = true;
    return rep;
}

}  // namespace nclab
