#pragma once

#include <functional>
#include <string_view>

#include "sks/multi_index.hpp"

namespace sks {

enum class NormKind { L2, LInf };

double index_norm(const MultiIndex& l, NormKind norm);
const char* norm_name(NormKind norm);
NormKind norm_from_name(std::string_view name);

// C_d with #{ l in Z^d : j-1 <= |l| < j } <= C_d j^{d-1} for every j >= 1;
// exhaustive shell counts near the origin, a covering-volume bound beyond.
double shell_count_constant(int dim, NormKind norm);

// Certified upper bound on sum_{|l| >= radius, l != 0} |l|^{-gamma}.
double power_law_tail_bound(int dim, double gamma, NormKind norm, double radius);

// Radial Fourier kernel K(x) = sum_l a(|l|) e^{il.x}. The power-law instance
// a(t) = t^{-gamma} (with a_0 = 0) carries its own certified tail bounds; a
// custom law must bring a tail-bound callback of its own.
class KernelSpec {
public:
    using Law = std::function<double(double)>;
    using TailBound = std::function<double(int, double)>;  // (dim, radius)

    static KernelSpec power_law(double gamma, NormKind norm = NormKind::L2,
                                double tail_tol = 1e-10);
    static KernelSpec custom(Law law, TailBound tail_bound, NormKind norm,
                             double tail_tol = 1e-10);

    double coeff(const MultiIndex& l) const;
    double law(double t) const;
    double tail_bound(int dim, double radius) const;

    bool is_power_law() const { return power_; }
    double gamma() const { return gamma_; }
    NormKind norm() const { return norm_; }
    double tail_tol() const { return tail_tol_; }

    // gamma > d is required for absolute summability of the power law.
    void require_valid_for_dim(int dim) const;

private:
    KernelSpec() = default;

    bool power_ = true;
    double gamma_ = 0.0;
    NormKind norm_ = NormKind::L2;
    double tail_tol_ = 1e-10;
    Law law_;
    TailBound tail_;
};

}  // namespace sks
