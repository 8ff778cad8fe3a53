#include "nclab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "nclab/errors.hpp"
#include "nclab/residue.hpp"

namespace nclab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t ipow(std::size_t b, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// Coordinates of flat grid index j on the uniform Q-grid, last axis fastest.
void grid_coords(std::size_t j, int n, int Q, std::span<int> out) {
    for (int i = n - 1; i >= 0; --i) {
        out[i] = static_cast<int>(j % static_cast<std::size_t>(Q));
        j /= static_cast<std::size_t>(Q);
    }
}

void check_dims(const Symbol& s, std::size_t first, std::size_t x) {
    if (first != static_cast<std::size_t>(s.dim()) || x != static_cast<std::size_t>(s.dim()))
        throw UsageError("symbol argument dimension mismatch");
}

// Samples σ(first,·) on the grid, returns Fourier coefficients multiplied by (2πi p)^β,
// Nyquist modes zeroed on differentiated axes.
std::vector<Complex> differentiated_coefficients(const Symbol& sigma, const MultiIndex& beta, int Q,
                                                 std::span<const double> first) {
    const int n = sigma.dim();
    if (Q < 2 || Q % 2 != 0) throw UsageError("spectral grid size must be even and >= 2, got " + std::to_string(Q));
    if (beta.dim() != static_cast<std::size_t>(n)) throw UsageError("multi-index dimension mismatch");
    const std::size_t total = ipow(static_cast<std::size_t>(Q), n);
    std::vector<Complex> g(total);
    std::vector<int> jc(n);
    std::vector<double> x(n);
    for (std::size_t j = 0; j < total; ++j) {
        grid_coords(j, n, Q, jc);
        for (int i = 0; i < n; ++i) x[i] = static_cast<double>(jc[i]) / Q;
        g[j] = sigma(first, x);
    }
    detail::fft_cube(g, n, Q, -1);
    const double scale = 1.0 / static_cast<double>(total);
    for (std::size_t j = 0; j < total; ++j) {
        grid_coords(j, n, Q, jc);
        Complex factor = scale;
        for (int i = 0; i < n; ++i) {
            const unsigned b = beta.entries[i];
            if (b == 0) continue;
            const int p = jc[i] < Q / 2 ? jc[i] : jc[i] - Q;
            if (p == -Q / 2) {
                factor = 0.0;
                break;
            }
            factor *= std::pow(Complex(0.0, kTwoPi * p), static_cast<int>(b));
        }
        g[j] *= factor;
    }
    return g;
}

}  // namespace

const HomogeneousTerm* ClassicalStructure::find(double degree) const {
    for (const auto& t : terms)
        if (std::abs(t.degree - degree) <= 1e-12) return &t;
    return nullptr;
}

Symbol::Symbol(int n, SymbolFn eval, double order, Side side, double rho, double delta,
               std::optional<ClassicalStructure> classical)
    : n_(n), eval_(std::move(eval)), order_(order), side_(side), rho_(rho), delta_(delta),
      classical_(std::move(classical)) {
    if (n < 1) throw UsageError("symbol dimension must be >= 1");
    if (!eval_) throw UsageError("symbol evaluation map is empty");
    if (rho < 0.0 || rho > 1.0 || delta < 0.0 || delta > 1.0)
        throw UsageError("symbol type parameters rho, delta must lie in [0,1]");
    if (classical_) {
        for (std::size_t j = 0; j < classical_->terms.size(); ++j) {
            if (std::abs(classical_->terms[j].degree - (order - static_cast<double>(j))) > 1e-12)
                throw UsageError("classical degrees must be m, m-1, m-2, ...");
        }
        if (!(classical_->cutoff_radius > 0.0)) throw UsageError("classical cutoff radius must be positive");
    }
}

Complex Symbol::at(const LatticePoint& k, const TorusPoint& x) const {
    check_dims(*this, k.dim(), x.dim());
    const auto f = k.as_frequency();
    return eval_(f, x.coords);
}

Complex Symbol::at(const Frequency& xi, const TorusPoint& x) const {
    check_dims(*this, xi.dim(), x.dim());
    return eval_(xi.coords, x.coords);
}

Symbol Symbol::with_fn(SymbolFn f) const {
    Symbol s = *this;
    s.eval_ = std::move(f);
    return s;
}

Symbol Symbol::with_order(double m) const {
    Symbol s = *this;
    s.order_ = m;
    s.classical_.reset();
    return s;
}

Symbol Symbol::with_side(Side side) const {
    Symbol s = *this;
    s.side_ = side;
    return s;
}

Symbol Symbol::with_classical(std::optional<ClassicalStructure> c) const {
    return Symbol(n_, eval_, order_, side_, rho_, delta_, std::move(c));
}

namespace {

// f ↦ conj(f(−first, x)); shared by flip and its inverse.
SymbolFn reflect_conj(SymbolFn f) {
    return [f = std::move(f)](std::span<const double> first, std::span<const double> x) {
        std::vector<double> neg(first.begin(), first.end());
        for (auto& v : neg) v = -v;
        return std::conj(f(neg, x));
    };
}

Symbol reflect(const Symbol& s, Side to) {
    std::optional<ClassicalStructure> cs;
    if (s.classical()) {
        cs = ClassicalStructure{};
        cs->cutoff_radius = s.classical()->cutoff_radius;
        for (const auto& t : s.classical()->terms) cs->terms.push_back({t.degree, reflect_conj(t.angular)});
        if (s.classical()->remainder)
            cs->remainder = Remainder{s.classical()->remainder->order, reflect_conj(s.classical()->remainder->eval)};
    }
    return Symbol(s.dim(), reflect_conj(s.fn()), s.order(), to, s.rho(), s.delta(), std::move(cs));
}

}  // namespace

Symbol flip(const Symbol& sigma) {
    if (sigma.side() != Side::Discrete) throw UsageError("flip expects a DISCRETE symbol");
    return reflect(sigma, Side::Toroidal);
}

Symbol unflip(const Symbol& tau) {
    if (tau.side() != Side::Toroidal) throw UsageError("unflip expects a TOROIDAL symbol");
    return reflect(tau, Side::Discrete);
}

Symbol difference(const Symbol& sigma, const MultiIndex& alpha) {
    const int n = sigma.dim();
    if (alpha.dim() != static_cast<std::size_t>(n)) throw UsageError("multi-index dimension mismatch");
    if (alpha.order() == 0) return sigma;

    // Expand Π_j (S_j − 1)^{α_j} into shifts with binomial weights.
    struct Shift {
        std::vector<double> offset;
        double weight;
    };
    std::vector<Shift> shifts{{std::vector<double>(n, 0.0), 1.0}};
    for (int j = 0; j < n; ++j) {
        const unsigned a = alpha.entries[j];
        if (a == 0) continue;
        std::vector<Shift> next;
        double binom = 1.0;
        for (unsigned o = 0; o <= a; ++o) {
            if (o > 0) binom = binom * (a - o + 1) / o;
            const double sign = ((a - o) % 2 == 0) ? 1.0 : -1.0;
            for (const auto& s : shifts) {
                Shift t = s;
                t.offset[j] += o;
                t.weight *= sign * binom;
                next.push_back(std::move(t));
            }
        }
        shifts = std::move(next);
    }
    SymbolFn f = [base = sigma.fn(), shifts](std::span<const double> first, std::span<const double> x) {
        std::vector<double> p(first.size());
        Complex acc = 0.0;
        for (const auto& s : shifts) {
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = first[i] + s.offset[i];
            acc += s.weight * base(p, x);
        }
        return acc;
    };
    return Symbol(n, std::move(f), sigma.order() - sigma.rho() * alpha.order(), sigma.side(), sigma.rho(),
                  sigma.delta());
}

std::vector<Complex> partial_x_on_grid(const Symbol& sigma, const MultiIndex& beta, int Q,
                                       std::span<const double> first) {
    auto c = differentiated_coefficients(sigma, beta, Q, first);
    detail::fft_cube(c, sigma.dim(), Q, +1);
    return c;
}

Symbol partial_x(const Symbol& sigma, const MultiIndex& beta, int Q) {
    const int n = sigma.dim();
    if (Q < 2) throw UsageError("partial_x: grid size must be >= 2");
    if (Q % 2 != 0) throw UsageError("partial_x: grid size must be even");
    if (beta.dim() != static_cast<std::size_t>(n)) throw UsageError("multi-index dimension mismatch");
    if (beta.order() == 0) return sigma;
    SymbolFn f = [sigma, beta, Q, n](std::span<const double> first, std::span<const double> x) {
        const auto c = differentiated_coefficients(sigma, beta, Q, first);
        // Evaluate the trigonometric interpolant Σ_p c_p e^{2πi p·x}.
        std::vector<std::vector<Complex>> phase(n, std::vector<Complex>(Q));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < Q; ++j) {
                const int p = j < Q / 2 ? j : j - Q;
                phase[i][j] = std::polar(1.0, kTwoPi * p * x[i]);
            }
        std::vector<int> jc(n);
        Complex acc = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (c[j] == Complex(0.0)) continue;
            grid_coords(j, n, Q, jc);
            Complex ph = 1.0;
            for (int i = 0; i < n; ++i) ph *= phase[i][jc[i]];
            acc += c[j] * ph;
        }
        return acc;
    };
    return Symbol(n, std::move(f), sigma.order() + sigma.delta() * beta.order(), sigma.side(), sigma.rho(),
                  sigma.delta());
}

namespace {

std::int64_t isqrt_floor(std::int64_t v) {
    if (v < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

// Lattice points p with r² ≤ |p|² < (r+1)².
void shell_points(int n, std::int64_t r, std::vector<std::vector<std::int64_t>>& out) {
    out.clear();
    const std::int64_t lo2 = r * r;
    const std::int64_t hi2 = (r + 1) * (r + 1) - 1;
    std::vector<std::int64_t> p(n, 0);
    auto rec = [&](auto&& self, int axis, std::int64_t partial) -> void {
        if (axis == n - 1) {
            const std::int64_t qmax = isqrt_floor(hi2 - partial);
            if (qmax < 0) return;
            std::int64_t qmin = 0;
            if (lo2 - partial > 0) {
                qmin = isqrt_floor(lo2 - partial - 1) + 1;
            }
            for (std::int64_t q = qmin; q <= qmax; ++q) {
                p[axis] = q;
                out.push_back(p);
                if (q != 0) {
                    p[axis] = -q;
                    out.push_back(p);
                }
            }
            return;
        }
        const std::int64_t lim = isqrt_floor(hi2 - partial);
        for (std::int64_t c = -lim; c <= lim; ++c) {
            p[axis] = c;
            self(self, axis + 1, partial + c * c);
        }
    };
    rec(rec, 0, 0);
}

}  // namespace

SeminormReport seminorm_estimate(const Symbol& sigma, const MultiIndex& alpha, const MultiIndex& beta,
                                 SeminormWindow window, const SeminormOptions& opts) {
    const int n = sigma.dim();
    if (!(window.r_min >= 0.0) || !(window.r_max >= window.r_min))
        throw UsageError("seminorm window is empty");
    const auto r_lo = static_cast<std::int64_t>(std::floor(window.r_min));
    const auto r_hi = static_cast<std::int64_t>(std::floor(window.r_max));
    if (opts.torus_points < 2 || opts.torus_points % 2 != 0)
        throw UsageError("seminorm torus grid must be even and >= 2");

    const std::size_t limit = opts.max_shells ? opts.max_shells : (n == 1 ? 8192 : 128);
    std::vector<std::int64_t> radii;
    const auto count = static_cast<std::size_t>(r_hi - r_lo + 1);
    if (count <= limit) {
        for (auto r = r_lo; r <= r_hi; ++r) radii.push_back(r);
    } else {
        for (std::size_t i = 0; i < limit; ++i) {
            const auto r = r_lo + static_cast<std::int64_t>(std::llround(
                                      static_cast<double>(i) * static_cast<double>(r_hi - r_lo) / (limit - 1)));
            if (radii.empty() || radii.back() != r) radii.push_back(r);
        }
    }

    const Symbol diff = difference(sigma, alpha);
    const double weight_exp =
        sigma.order() - sigma.rho() * alpha.order() + sigma.delta() * static_cast<double>(beta.order());
    const int Q = opts.torus_points;
    const std::size_t grid = ipow(static_cast<std::size_t>(Q), n);

    SeminormReport rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.window = window;

    std::vector<double> log_r, log_sup;
    std::vector<std::vector<std::int64_t>> pts;
    std::vector<double> first(n), x(n);
    std::vector<int> jc(n);
    bool any_point = false;
    for (auto r : radii) {
        shell_points(n, r, pts);
        double shell_sup = 0.0;
        bool in_window = false;
        for (const auto& p : pts) {
            double nrm2 = 0.0;
            for (int i = 0; i < n; ++i) {
                first[i] = static_cast<double>(p[i]);
                nrm2 += first[i] * first[i];
            }
            const double nrm = std::sqrt(nrm2);
            if (nrm < window.r_min || nrm > window.r_max) continue;
            in_window = true;
            double sup = 0.0;
            if (beta.order() == 0) {
                for (std::size_t j = 0; j < grid; ++j) {
                    grid_coords(j, n, Q, jc);
                    for (int i = 0; i < n; ++i) x[i] = static_cast<double>(jc[i]) / Q;
                    sup = std::max(sup, std::abs(diff(first, x)));
                }
            } else {
                for (const auto& v : partial_x_on_grid(diff, beta, Q, first)) sup = std::max(sup, std::abs(v));
            }
            shell_sup = std::max(shell_sup, sup);
            rep.sup_ratio = std::max(rep.sup_ratio, sup * std::pow(1.0 + nrm, -weight_exp));
        }
        if (!in_window) continue;
        any_point = true;
        ++rep.shells;
        if (shell_sup > 0.0 && std::isfinite(shell_sup)) {
            log_r.push_back(std::log1p(static_cast<double>(r)));
            log_sup.push_back(std::log(shell_sup));
        }
    }
    if (!any_point) throw UsageError("seminorm window contains no lattice points");

    if (log_r.size() < 2) {
        rep.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
        rep.residual = 0.0;
        return rep;
    }
    const auto m = static_cast<double>(log_r.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < log_r.size(); ++i) mx += log_r[i], my += log_sup[i];
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < log_r.size(); ++i) {
        sxx += (log_r[i] - mx) * (log_r[i] - mx);
        sxy += (log_r[i] - mx) * (log_sup[i] - my);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < log_r.size(); ++i) {
        const double e = log_sup[i] - (my + slope * (log_r[i] - mx));
        ss += e * e;
    }
    rep.fitted_exponent = slope;
    rep.residual = std::sqrt(ss / m);
    return rep;
}

HomogeneousValue homogeneous_component(const Symbol& sigma, double degree, std::span<const double> x,
                                       std::span<const double> theta, const ExtractionOptions& opts) {
    check_dims(sigma, theta.size(), x.size());
    double nrm2 = 0.0;
    for (double t : theta) nrm2 += t * t;
    if (std::abs(std::sqrt(nrm2) - 1.0) > 1e-12) throw UsageError("homogeneous_component: theta is not a unit vector");

    if (sigma.classical()) {
        if (const auto* term = sigma.classical()->find(degree)) return {term->angular(theta, x), ComponentSource::Declared};
    }
    if (!opts.allow_extraction)
        throw UsageError("no declared component of degree " + std::to_string(degree) + " and extraction is disabled");
    if (opts.levels < 2) throw UsageError("extraction needs at least two levels");

    // Richardson table assuming an expansion in powers of 1/t, step ratio 2.
    const int L = opts.levels;
    std::vector<std::vector<Complex>> R(L);
    std::vector<double> p(theta.size());
    for (int i = 0; i < L; ++i) {
        const double t = opts.base_radius * std::ldexp(1.0, i);
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = t * theta[k];
        R[i].resize(i + 1);
        R[i][0] = std::pow(t, -degree) * sigma(p, x);
        for (int j = 1; j <= i; ++j) {
            const double f = std::ldexp(1.0, j);
            R[i][j] = (f * R[i][j - 1] - R[i - 1][j - 1]) / (f - 1.0);
        }
    }
    const Complex best = R[L - 1][L - 1];
    const Complex prev = R[L - 2][L - 2];
    const double scale = std::max(1.0, std::abs(best));
    if (!std::isfinite(best.real()) || !std::isfinite(best.imag()) ||
        std::abs(best - prev) > 10.0 * opts.tolerance * scale)
        throw NonConvergenceError("homogeneous component extraction did not converge (degree " +
                                  std::to_string(degree) + ", successive estimates differ by " +
                                  std::to_string(std::abs(best - prev)) + ")");
    return {best, ComponentSource::Extracted};
}

Symbol finite_modify(const Symbol& sigma, std::map<LatticePoint, Complex> patch) {
    if (patch.empty()) return sigma;
    for (const auto& [p, v] : patch)
        if (p.dim() != static_cast<std::size_t>(sigma.dim())) throw UsageError("patch point dimension mismatch");
    std::vector<std::pair<std::vector<double>, Complex>> entries;
    for (const auto& [p, v] : patch) entries.emplace_back(p.as_frequency(), v);
    SymbolFn f = [base = sigma.fn(), entries = std::move(entries)](std::span<const double> first,
                                                                   std::span<const double> x) {
        for (const auto& [pt, v] : entries)
            if (std::equal(pt.begin(), pt.end(), first.begin(), first.end())) return v;
        return base(first, x);
    };
    return sigma.with_fn(std::move(f));
}

Symbol regularize_origin(const Symbol& sigma) {
    const int n = sigma.dim();
    const double R = sigma.classical() ? sigma.classical()->cutoff_radius : 1.0;
    const auto reach = static_cast<std::int64_t>(std::ceil(R));
    const TruncationBox box(n, reach);

    constexpr int probe = 4;
    const std::size_t probes = ipow(probe, n);
    std::vector<int> jc(n);
    std::vector<double> x(n);
    auto evaluable = [&](std::span<const double> first) {
        try {
            for (std::size_t j = 0; j < probes; ++j) {
                grid_coords(j, n, probe, jc);
                for (int i = 0; i < n; ++i) x[i] = static_cast<double>(jc[i]) / probe;
                const Complex v = sigma(first, x);
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
            }
        } catch (const NumericalError&) {
            return false;
        }
        return true;
    };

    std::vector<LatticePoint> singular;
    for (const auto& p : box.enumerate()) {
        const double r = p.norm();
        if (r != 0.0 && r >= R) continue;
        const auto f = p.as_frequency();
        if (!evaluable(f)) singular.push_back(p);
    }
    if (singular.empty()) return sigma;

    // Angular average of the leading term over the unit sphere and the torus.
    const SymbolFn lead = (sigma.classical() && !sigma.classical()->terms.empty())
                              ? sigma.classical()->terms.front().angular
                              : sigma.fn();
    const SphereRule rule = sphere_rule(n, n == 2 ? 64 : 16);
    constexpr int tq = 8;
    const std::size_t tpoints = ipow(tq, n);
    Complex acc = 0.0;
    double total_w = 0.0;
    for (std::size_t s = 0; s < rule.nodes.size(); ++s) {
        for (std::size_t j = 0; j < tpoints; ++j) {
            grid_coords(j, n, tq, jc);
            for (int i = 0; i < n; ++i) x[i] = static_cast<double>(jc[i]) / tq;
            acc += rule.weights[s] * lead(rule.nodes[s], x);
        }
        total_w += rule.weights[s] * static_cast<double>(tpoints);
    }
    const Complex value = acc / total_w;

    std::map<LatticePoint, Complex> patch;
    for (auto& p : singular) patch.emplace(std::move(p), value);
    return finite_modify(sigma, std::move(patch));
}

bool is_x_independent(const Symbol& sigma, const TruncationBox& box, double tol) {
    const int n = sigma.dim();
    if (box.dim() != n) throw UsageError("box dimension does not match symbol");
    constexpr int probe = 5;
    const std::size_t probes = ipow(probe, n);
    const std::size_t samples = std::min<std::size_t>(box.size(), 64);
    std::vector<int> jc(n);
    std::vector<double> x(n), x0(n, 0.0);
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t idx = samples == 1 ? 0 : s * (box.size() - 1) / (samples - 1);
        const auto first = box.point(idx).as_frequency();
        const Complex v0 = sigma(first, x0);
        for (std::size_t j = 1; j < probes; ++j) {
            grid_coords(j, n, probe, jc);
            for (int i = 0; i < n; ++i) x[i] = (static_cast<double>(jc[i]) + 0.0625) / probe;
            if (std::abs(sigma(first, x) - v0) > tol * std::max(1.0, std::abs(v0))) return false;
        }
    }
    return true;
}

}  // namespace nclab
