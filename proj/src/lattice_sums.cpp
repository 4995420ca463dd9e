#include "sks/lattice_sums.hpp"

#include <cmath>
#include <stdexcept>

namespace sks {

namespace {

MultiIndex added(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) throw std::invalid_argument("lattice sum: dimension mismatch");
    MultiIndex out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

MultiIndex subtracted(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) throw std::invalid_argument("lattice sum: dimension mismatch");
    MultiIndex out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

template <typename F>
double knot_sum(const GridSpec& grid, F&& f) {
    double s = 0.0;
    for (const MultiIndex& k : grid.enumerate_omega()) s += f(grid.knot(k));
    return s;
}

}  // namespace

std::complex<double> exp_lattice_sum(const MultiIndex& l, const GridSpec& grid) {
    const double N = static_cast<double>(grid.size());
    return grid.congruent_zero(l) ? std::complex<double>(N, 0.0) : std::complex<double>(0.0, 0.0);
}

double cos_lattice_sum(const MultiIndex& l, const GridSpec& grid) {
    return grid.congruent_zero(l) ? static_cast<double>(grid.size()) : 0.0;
}

double sin_lattice_sum(const MultiIndex& l, const GridSpec& grid) {
    grid.reduce(l);  // dimension check
    return 0.0;
}

double cos_cos_lattice_sum(const MultiIndex& j, const MultiIndex& l, const GridSpec& grid) {
    const bool plus = grid.congruent_zero(added(l, j));
    const bool minus = grid.congruent_zero(subtracted(l, j));
    const double N = static_cast<double>(grid.size());
    if (plus && minus) return N;
    if (plus || minus) return N / 2.0;
    return 0.0;
}

double sin_sin_lattice_sum(const MultiIndex& j, const MultiIndex& l, const GridSpec& grid) {
    const bool plus = grid.congruent_zero(added(l, j));
    const bool minus = grid.congruent_zero(subtracted(l, j));
    const double N = static_cast<double>(grid.size());
    if (minus && !plus) return N / 2.0;
    if (plus && !minus) return -N / 2.0;
    return 0.0;
}

double cos_sin_lattice_sum(const MultiIndex& j, const MultiIndex& l, const GridSpec& grid) {
    grid.reduce(j);
    grid.reduce(l);
    return 0.0;
}

std::complex<double> exp_lattice_sum_numeric(const MultiIndex& l, const GridSpec& grid) {
    std::complex<double> s{0.0, 0.0};
    for (const MultiIndex& k : grid.enumerate_omega()) {
        const double ph = dot(l, grid.knot(k));
        s += std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return s;
}

double cos_lattice_sum_numeric(const MultiIndex& l, const GridSpec& grid) {
    return knot_sum(grid, [&](const TorusPoint& x) { return std::cos(dot(l, x)); });
}

double sin_lattice_sum_numeric(const MultiIndex& l, const GridSpec& grid) {
    return knot_sum(grid, [&](const TorusPoint& x) { return std::sin(dot(l, x)); });
}

double cos_cos_lattice_sum_numeric(const MultiIndex& j, const MultiIndex& l, const GridSpec& grid) {
    return knot_sum(grid, [&](const TorusPoint& x) { return std::cos(dot(j, x)) * std::cos(dot(l, x)); });
}

double sin_sin_lattice_sum_numeric(const MultiIndex& j, const MultiIndex& l, const GridSpec& grid) {
    return knot_sum(grid, [&](const TorusPoint& x) { return std::sin(dot(j, x)) * std::sin(dot(l, x)); });
}

double cos_sin_lattice_sum_numeric(const MultiIndex& j, const MultiIndex& l, const GridSpec& grid) {
    return knot_sum(grid, [&](const TorusPoint& x) { return std::cos(dot(j, x)) * std::sin(dot(l, x)); });
}

}  // namespace sks
