#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nclab {

/// Point of ℤⁿ.
struct LatticePoint {
    std::vector<std::int64_t> coords;

    std::size_t dim() const { return coords.size(); }
    std::vector<double> as_frequency() const { return {coords.begin(), coords.end()}; }
    double norm() const;
    bool operator==(const LatticePoint&) const = default;
    auto operator<=>(const LatticePoint&) const = default;
};

/// Point of the unit torus [0,1)ⁿ; components are reduced mod 1 on construction.
struct TorusPoint {
    std::vector<double> coords;

    TorusPoint() = default;
    explicit TorusPoint(std::vector<double> c);
    std::size_t dim() const { return coords.size(); }
};

/// Frequency in lattice-dual units (lattice point k is Frequency k, no 2π).
struct Frequency {
    std::vector<double> coords;

    std::size_t dim() const { return coords.size(); }
    double norm() const;
};

struct MultiIndex {
    std::vector<unsigned> entries;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<unsigned> e) : entries(std::move(e)) {}
    static MultiIndex zero(std::size_t n) { return MultiIndex(std::vector<unsigned>(n, 0)); }
    /// α = k·e_axis in dimension n.
    static MultiIndex along(std::size_t n, std::size_t axis, unsigned k);

    std::size_t dim() const { return entries.size(); }
    unsigned order() const;
};

/// Cubic window [−M,M]ⁿ of ℤⁿ, enumerated lexicographically with −M first
/// (last coordinate varies fastest).
class TruncationBox {
public:
    TruncationBox(int n, std::int64_t M);

    int dim() const { return n_; }
    std::int64_t half_width() const { return M_; }
    std::int64_t side() const { return 2 * M_ + 1; }
    std::size_t size() const { return size_; }

    bool contains(std::span<const std::int64_t> p) const;
    LatticePoint point(std::size_t index) const;
    std::size_t index(const LatticePoint& p) const;
    std::vector<LatticePoint> enumerate() const;

    /// index(p) ↦ index(−p). Involutive; fixes the origin.
    std::vector<std::size_t> negate_index_permutation() const;

private:
    int n_;
    std::int64_t M_;
    std::size_t size_;
};

inline std::vector<LatticePoint> box_enumerate(const TruncationBox& box) { return box.enumerate(); }
inline std::size_t box_index(const TruncationBox& box, const LatticePoint& p) { return box.index(p); }
inline std::vector<std::size_t> negate_index_permutation(const TruncationBox& box) {
    return box.negate_index_permutation();
}

}  // namespace nclab
