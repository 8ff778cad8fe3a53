#include "nclab/lattice.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nclab/errors.hpp"

namespace nclab {

double LatticePoint::norm() const {
    double s = 0.0;
    for (auto c : coords) s += static_cast<double>(c) * static_cast<double>(c);
    return std::sqrt(s);
}

TorusPoint::TorusPoint(std::vector<double> c) : coords(std::move(c)) {
    for (auto& v : coords) {
        v -= std::floor(v);
        if (v >= 1.0) v = 0.0;
    }
}

double Frequency::norm() const {
    double s = 0.0;
    for (auto c : coords) s += c * c;
    return std::sqrt(s);
}

MultiIndex MultiIndex::along(std::size_t n, std::size_t axis, unsigned k) {
    if (axis >= n) throw UsageError("multi-index axis out of range");
    MultiIndex a = zero(n);
    a.entries[axis] = k;
    return a;
}

unsigned MultiIndex::order() const {
    return std::accumulate(entries.begin(), entries.end(), 0u);
}

TruncationBox::TruncationBox(int n, std::int64_t M) : n_(n), M_(M), size_(1) {
    if (n < 1) throw UsageError("truncation box dimension must be >= 1, got " + std::to_string(n));
    if (M < 0) throw UsageError("truncation box half-width must be >= 0, got " + std::to_string(M));
    const auto s = static_cast<std::size_t>(side());
    for (int i = 0; i < n; ++i) {
        if (size_ > std::numeric_limits<std::size_t>::max() / s)
            throw UsageError("truncation box too large");
        size_ *= s;
    }
}

bool TruncationBox::contains(std::span<const std::int64_t> p) const {
    if (p.size() != static_cast<std::size_t>(n_)) return false;
    for (auto c : p)
        if (c < -M_ || c > M_) return false;
    return true;
}

LatticePoint TruncationBox::point(std::size_t index) const {
    if (index >= size_) throw std::out_of_range("box index " + std::to_string(index) + " out of range");
    LatticePoint p;
    p.coords.resize(n_);
    const auto s = static_cast<std::size_t>(side());
    for (int i = n_ - 1; i >= 0; --i) {
        p.coords[i] = static_cast<std::int64_t>(index % s) - M_;
        index /= s;
    }
    return p;
}

std::size_t TruncationBox::index(const LatticePoint& p) const {
    if (p.dim() != static_cast<std::size_t>(n_))
        throw UsageError("lattice point dimension does not match box");
    if (!contains(p.coords)) throw std::out_of_range("lattice point outside truncation box");
    std::size_t idx = 0;
    const auto s = static_cast<std::size_t>(side());
    for (auto c : p.coords) idx = idx * s + static_cast<std::size_t>(c + M_);
    return idx;
}

std::vector<LatticePoint> TruncationBox::enumerate() const {
    std::vector<LatticePoint> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) out.push_back(point(i));
    return out;
}

std::vector<std::size_t> TruncationBox::negate_index_permutation() const {
    // Negating every coordinate maps digit d to (side−1−d), i.e. index i to size−1−i.
    std::vector<std::size_t> perm(size_);
    for (std::size_t i = 0; i < size_; ++i) perm[i] = size_ - 1 - i;
    return perm;
}

}  // namespace nclab
