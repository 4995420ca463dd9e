#include "sks/multi_index.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sks {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

bool is_zero(const MultiIndex& l) {
    return std::all_of(l.begin(), l.end(), [](std::int64_t v) { return v == 0; });
}

MultiIndex negated(const MultiIndex& l) {
    MultiIndex out(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) out[i] = -l[i];
    return out;
}

double linf_norm(const MultiIndex& l) {
    std::int64_t m = 0;
    for (std::int64_t v : l) m = std::max(m, std::abs(v));
    return static_cast<double>(m);
}

double l2_norm(const MultiIndex& l) {
    double s = 0.0;
    for (std::int64_t v : l) {
        const double dv = static_cast<double>(v);
        s += dv * dv;
    }
    return std::sqrt(s);
}

TorusPoint::TorusPoint(std::vector<double> c) : coords(std::move(c)) {
    if (coords.empty()) throw std::invalid_argument("TorusPoint: dimension must be >= 1");
    for (double& v : coords) {
        if (!std::isfinite(v)) throw std::invalid_argument("TorusPoint: non-finite coordinate");
        v = std::fmod(v, kTwoPi);
        if (v < 0.0) v += kTwoPi;
        if (v >= kTwoPi) v = 0.0;  // fmod can land exactly on 2*pi after the shift
    }
}

bool TorusPoint::is_origin() const {
    return std::all_of(coords.begin(), coords.end(), [](double v) { return v == 0.0; });
}

TorusPoint operator-(const TorusPoint& a, const TorusPoint& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("TorusPoint: dimension mismatch");
    std::vector<double> c(a.coords.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords[i] - b.coords[i];
    return TorusPoint(std::move(c));
}

double dot(const MultiIndex& l, const TorusPoint& x) {
    if (static_cast<int>(l.size()) != x.dim()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) s += static_cast<double>(l[i]) * x.coords[i];
    return s;
}

GridSpec::GridSpec(std::vector<std::int64_t> degrees) : n_(std::move(degrees)) {
    if (n_.empty()) throw std::invalid_argument("GridSpec: dimension must be >= 1");
    total_ = 1;
    for (std::int64_t v : n_) {
        if (v < 1) throw std::invalid_argument("GridSpec: every degree n_l must be >= 1");
        total_ *= 2 * v;
        if (total_ > (std::int64_t{1} << 40)) throw std::invalid_argument("GridSpec: N too large");
    }
}

void GridSpec::check_dim(const MultiIndex& k) const {
    if (k.size() != n_.size()) throw std::invalid_argument("GridSpec: index dimension mismatch");
}

std::vector<MultiIndex> GridSpec::enumerate_omega() const {
    std::vector<MultiIndex> out;
    out.reserve(static_cast<std::size_t>(total_));
    MultiIndex cur(n_.size(), 0);
    const int d = dim();
    while (true) {
        out.push_back(cur);
        int axis = d - 1;
        while (axis >= 0) {
            if (++cur[static_cast<std::size_t>(axis)] < axis_points(axis)) break;
            cur[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    return out;
}

bool GridSpec::in_omega(const MultiIndex& k) const {
    check_dim(k);
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] < 0 || k[i] >= 2 * n_[i]) return false;
    }
    return true;
}

std::size_t GridSpec::index_of(const MultiIndex& k) const {
    if (!in_omega(k)) throw std::domain_error("GridSpec: index outside Omega_n");
    std::size_t pos = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        pos = pos * static_cast<std::size_t>(2 * n_[i]) + static_cast<std::size_t>(k[i]);
    }
    return pos;
}

MultiIndex GridSpec::index_at(std::size_t pos) const {
    if (pos >= static_cast<std::size_t>(total_)) throw std::domain_error("GridSpec: rank out of range");
    MultiIndex k(n_.size(), 0);
    for (std::size_t i = k.size(); i-- > 0;) {
        const auto m = static_cast<std::size_t>(2 * n_[i]);
        k[i] = static_cast<std::int64_t>(pos % m);
        pos /= m;
    }
    return k;
}

TorusPoint GridSpec::knot(const MultiIndex& k) const {
    if (!in_omega(k)) throw std::domain_error("GridSpec: knot index outside Omega_n");
    std::vector<double> c(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        c[i] = std::numbers::pi * static_cast<double>(k[i]) / static_cast<double>(n_[i]);
    }
    return TorusPoint(std::move(c));
}

MultiIndex GridSpec::reduce(const MultiIndex& l) const {
    check_dim(l);
    MultiIndex r(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) {
        const std::int64_t m = 2 * n_[i];
        r[i] = ((l[i] % m) + m) % m;
    }
    return r;
}

bool GridSpec::congruent_zero(const MultiIndex& l) const {
    check_dim(l);
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (l[i] % (2 * n_[i]) != 0) return false;
    }
    return true;
}

}  // namespace sks
