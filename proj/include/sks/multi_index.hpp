#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sks {

// Frequency / index vector in Z^d.
using MultiIndex = std::vector<std::int64_t>;

bool is_zero(const MultiIndex& l);
MultiIndex negated(const MultiIndex& l);
double linf_norm(const MultiIndex& l);
double l2_norm(const MultiIndex& l);

// Point on the d-torus; coordinates are kept canonical in [0, 2*pi).
struct TorusPoint {
    TorusPoint() = default;
    explicit TorusPoint(std::vector<double> c);

    int dim() const { return static_cast<int>(coords.size()); }
    bool is_origin() const;

    std::vector<double> coords;
};

TorusPoint operator-(const TorusPoint& a, const TorusPoint& b);
double dot(const MultiIndex& l, const TorusPoint& x);

// Knot lattice x_k = (pi k_1/n_1, ..., pi k_d/n_d) indexed by the box
// Omega_n = { k : 0 <= k_l <= 2 n_l - 1 }, of size N = 2^d n_1 ... n_d.
class GridSpec {
public:
    explicit GridSpec(std::vector<std::int64_t> degrees);

    int dim() const { return static_cast<int>(n_.size()); }
    const std::vector<std::int64_t>& degrees() const { return n_; }
    std::int64_t axis_points(int axis) const { return 2 * n_[static_cast<std::size_t>(axis)]; }
    std::int64_t size() const { return total_; }

    // All of Omega_n in lexicographic order (first component most significant).
    std::vector<MultiIndex> enumerate_omega() const;
    bool in_omega(const MultiIndex& k) const;
    std::size_t index_of(const MultiIndex& k) const;
    MultiIndex index_at(std::size_t pos) const;

    TorusPoint knot(const MultiIndex& k) const;

    // Residue of l in Omega_n, componentwise mod 2 n_l.
    MultiIndex reduce(const MultiIndex& l) const;
    bool congruent_zero(const MultiIndex& l) const;

private:
    void check_dim(const MultiIndex& k) const;

    std::vector<std::int64_t> n_;
    std::int64_t total_ = 0;
};

}  // namespace sks
