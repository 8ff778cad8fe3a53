#include "nclab/quantize.hpp"

#include <cmath>
#include <string>

#include "fft.hpp"
#include "nclab/errors.hpp"

namespace nclab {

namespace {

void validate(const Symbol& s, const TruncationBox& box, const QuadratureGrid& grid) {
    if (s.dim() != box.dim() || grid.n != box.dim())
        throw UsageError("symbol, box and quadrature grid dimensions differ");
    if (grid.Q < 2 || grid.Q % 2 != 0)
        throw UsageError("quadrature grid size must be even and >= 2, got " + std::to_string(grid.Q));
    // Offsets span [−2M, 2M]; they must map to distinct residues mod Q.
    if (grid.Q < 4 * box.half_width() + 1)
        throw UsageError("quadrature grid size " + std::to_string(grid.Q) + " is undersized for M = " +
                         std::to_string(box.half_width()) + " (need Q >= 4M+1)");
}

struct Grid {
    int n, Q;
    std::size_t total;
    std::vector<double> coords;  // total × n

    Grid(int n_, int Q_) : n(n_), Q(Q_), total(1) {
        for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(Q);
        coords.resize(total * n);
        for (std::size_t j = 0; j < total; ++j) {
            std::size_t rem = j;
            for (int i = n - 1; i >= 0; --i) {
                coords[j * n + i] = static_cast<double>(rem % static_cast<std::size_t>(Q)) / Q;
                rem /= static_cast<std::size_t>(Q);
            }
        }
    }
    std::span<const double> point(std::size_t j) const { return {coords.data() + j * n, static_cast<std::size_t>(n)}; }

    // Flat index of the coefficient for offset vector o (reduced mod Q).
    std::size_t offset_index(std::span<const std::int64_t> a, std::span<const std::int64_t> b) const {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            std::int64_t o = (a[i] - b[i]) % Q;
            if (o < 0) o += Q;
            idx = idx * static_cast<std::size_t>(Q) + static_cast<std::size_t>(o);
        }
        return idx;
    }
};

// Fourier coefficients ĝ(p) = Q^{−n} Σ_j g(j/Q) e^{−2πi p·j/Q} of g = s(first, ·).
std::vector<Complex> coefficients(const Symbol& s, const Grid& g, std::span<const double> first) {
    std::vector<Complex> buf(g.total);
    for (std::size_t j = 0; j < g.total; ++j) buf[j] = s(first, g.point(j));
    detail::fft_cube(buf, g.n, g.Q, -1);
    const double w = 1.0 / static_cast<double>(g.total);
    for (auto& v : buf) v *= w;
    return buf;
}

void check_finite(const Eigen::MatrixXcd& m) {
    if (!m.allFinite()) throw NumericalError("assembled matrix has non-finite entries");
}

}  // namespace

const char* to_string(Basis b) { return b == Basis::LatticeDelta ? "lattice_delta" : "fourier_mode"; }

double QuadratureGrid::weight() const { return std::pow(static_cast<double>(Q), -n); }

QuadratureGrid QuadratureGrid::for_box(const TruncationBox& box) {
    const std::int64_t need = std::max<std::int64_t>(64, 4 * box.side());
    int Q = 1;
    while (Q < need) Q *= 2;
    return {box.dim(), Q};
}

OperatorMatrix assemble_discrete(const Symbol& sigma, const TruncationBox& box, const QuadratureGrid& grid) {
    if (sigma.side() != Side::Discrete) throw UsageError("assemble_discrete expects a DISCRETE symbol");
    validate(sigma, box, grid);
    const Grid g(grid.n, grid.Q);
    const auto N = static_cast<Eigen::Index>(box.size());
    OperatorMatrix out{Eigen::MatrixXcd(N, N), box, Basis::LatticeDelta};
    const auto pts = box.enumerate();
    for (Eigen::Index r = 0; r < N; ++r) {
        const auto first = pts[r].as_frequency();
        const auto c = coefficients(sigma, g, first);
        // e^{2πi(n′−k)·ξ} picks the coefficient at p = k − n′.
        for (Eigen::Index col = 0; col < N; ++col) out.entries(r, col) = c[g.offset_index(pts[col].coords, pts[r].coords)];
    }
    check_finite(out.entries);
    return out;
}

OperatorMatrix assemble_toroidal(const Symbol& tau, const TruncationBox& box, const QuadratureGrid& grid) {
    if (tau.side() != Side::Toroidal) throw UsageError("assemble_toroidal expects a TOROIDAL symbol");
    validate(tau, box, grid);
    const Grid g(grid.n, grid.Q);
    const auto N = static_cast<Eigen::Index>(box.size());
    OperatorMatrix out{Eigen::MatrixXcd(N, N), box, Basis::FourierMode};
    const auto pts = box.enumerate();
    for (Eigen::Index col = 0; col < N; ++col) {
        const auto first = pts[col].as_frequency();
        const auto c = coefficients(tau, g, first);
        for (Eigen::Index r = 0; r < N; ++r) out.entries(r, col) = c[g.offset_index(pts[r].coords, pts[col].coords)];
    }
    check_finite(out.entries);
    return out;
}

OperatorMatrix adjoint(const OperatorMatrix& a) { return {a.entries.adjoint(), a.box, a.basis}; }

OperatorMatrix conjugate_by_fourier(const OperatorMatrix& a) {
    if (a.basis != Basis::FourierMode) throw UsageError("conjugate_by_fourier expects a FOURIER_MODE matrix");
    const auto perm = a.box.negate_index_permutation();
    const auto N = a.entries.rows();
    OperatorMatrix out{Eigen::MatrixXcd(N, N), a.box, Basis::LatticeDelta};
    for (Eigen::Index c = 0; c < N; ++c)
        for (Eigen::Index r = 0; r < N; ++r) out.entries(r, c) = a.entries(perm[r], perm[c]);
    return out;
}

int matrix_bandwidth(const OperatorMatrix& a, double rel_tol) {
    const double cut = rel_tol * a.entries.cwiseAbs().maxCoeff();
    const auto N = a.entries.rows();
    std::int64_t band = 0;
    const auto pts = a.box.enumerate();
    for (Eigen::Index c = 0; c < N; ++c) {
        const auto& pc = pts[c];
        for (Eigen::Index r = 0; r < N; ++r) {
            if (std::abs(a.entries(r, c)) <= cut) continue;
            const auto& pr = pts[r];
            for (std::size_t i = 0; i < pr.coords.size(); ++i) band = std::max(band, std::abs(pr.coords[i] - pc.coords[i]));
        }
    }
    return static_cast<int>(band);
}

IdentityReport verify_identity(const Symbol& sigma, const TruncationBox& box, const QuadratureGrid& grid) {
    const OperatorMatrix D = assemble_discrete(sigma, box, grid);
    const OperatorMatrix B = conjugate_by_fourier(adjoint(assemble_toroidal(flip(sigma), box, grid)));

    IdentityReport rep;
    rep.max_entry = D.entries.cwiseAbs().maxCoeff();
    rep.full_deviation = (D.entries - B.entries).cwiseAbs().maxCoeff();
    rep.bandwidth = matrix_bandwidth(D);
    rep.interior_half_width = box.half_width() - rep.bandwidth;
    if (rep.interior_half_width < 0) {
        rep.interior_deviation = 0.0;
        return rep;
    }
    const auto N = D.entries.rows();
    std::vector<Eigen::Index> interior;
    for (Eigen::Index i = 0; i < N; ++i) {
        const auto p = box.point(i);
        bool inside = true;
        for (auto c : p.coords) inside = inside && std::abs(c) <= rep.interior_half_width;
        if (inside) interior.push_back(i);
    }
    for (auto c : interior)
        for (auto r : interior) rep.interior_deviation = std::max(rep.interior_deviation, std::abs(D.entries(r, c) - B.entries(r, c)));
    return rep;
}

}  // namespace nclab
