#pragma once

#include <complex>

#include "sks/multi_index.hpp"

namespace sks {

// Closed forms of the trigonometric sums over the knot lattice Lambda_n,
// decided by the congruence of the frequency mod 2n. The *_numeric
// companions sum over all N knots and serve as debug oracles.

std::complex<double> exp_lattice_sum(const MultiIndex& l, const GridSpec& grid);
double cos_lattice_sum(const MultiIndex& l, const GridSpec& grid);
double sin_lattice_sum(const MultiIndex& l, const GridSpec& grid);
double cos_cos_lattice_sum(const MultiIndex& j, const MultiIndex& l, const GridSpec& grid);
double sin_sin_lattice_sum(const MultiIndex& j, const MultiIndex& l, const GridSpec& grid);
double cos_sin_lattice_sum(const MultiIndex& j, const MultiIndex& l, const GridSpec& grid);

std::complex<double> exp_lattice_sum_numeric(const MultiIndex& l, const GridSpec& grid);
double cos_lattice_sum_numeric(const MultiIndex& l, const GridSpec& grid);
double sin_lattice_sum_numeric(const MultiIndex& l, const GridSpec& grid);
double cos_cos_lattice_sum_numeric(const MultiIndex& j, const MultiIndex& l, const GridSpec& grid);
double sin_sin_lattice_sum_numeric(const MultiIndex& j, const MultiIndex& l, const GridSpec& grid);
double cos_sin_lattice_sum_numeric(const MultiIndex& j, const MultiIndex& l, const GridSpec& grid);

}  // namespace sks
