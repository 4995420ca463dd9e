#include "sks/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace sks {

double index_norm(const MultiIndex& l, NormKind norm) {
    return norm == NormKind::L2 ? l2_norm(l) : linf_norm(l);
}

const char* norm_name(NormKind norm) {
    return norm == NormKind::L2 ? "l2" : "linf";
}

NormKind norm_from_name(std::string_view name) {
    if (name == "l2" || name == "L2" || name == "2") return NormKind::L2;
    if (name == "linf" || name == "Linf" || name == "inf") return NormKind::LInf;
    throw std::invalid_argument("unknown norm '" + std::string(name) + "' (expected l2 or linf)");
}

namespace {

double unit_ball_volume_l2(int d) {
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

// Exhaustive per-shell counts of { l : j-1 <= |l| < j } up to a radius cap.
std::vector<std::int64_t> shell_counts(int d, NormKind norm, int cap) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(cap) + 2, 0);
    MultiIndex l(static_cast<std::size_t>(d), 0);
    const std::int64_t lo = -cap, hi = cap;
    // odometer over the box [-cap, cap]^d
    std::fill(l.begin(), l.end(), lo);
    while (true) {
        const double r = index_norm(l, norm);
        if (r < static_cast<double>(cap) + 1.0) {
            const auto shell = static_cast<std::size_t>(std::floor(r)) + 1;  // j with j-1 <= r < j
            if (shell < counts.size()) ++counts[shell];
        }
        int axis = d - 1;
        while (axis >= 0) {
            if (++l[static_cast<std::size_t>(axis)] <= hi) break;
            l[static_cast<std::size_t>(axis)] = lo;
            --axis;
        }
        if (axis < 0) break;
    }
    return counts;
}

double shell_constant_uncached(int d, NormKind norm) {
    const int cap = d <= 3 ? 50 : 16;
    const auto counts = shell_counts(d, norm, cap);
    double c = 1.0;
    for (int j = 1; j <= cap; ++j) {
        const double ratio = static_cast<double>(counts[static_cast<std::size_t>(j)]) /
                             std::pow(static_cast<double>(j), d - 1);
        c = std::max(c, ratio);
    }
    // beyond the exhaustive range
    if (norm == NormKind::LInf) {
        // #{|l|_inf = m} = (2m+1)^d - (2m-1)^d <= 2d (2j-1)^{d-1} for the shell j = m+1
        c = std::max(c, static_cast<double>(d) * std::pow(2.0, d));
    } else {
        // covering argument: unit cubes centred on shell points lie in an annulus
        const double rd = std::sqrt(static_cast<double>(d));
        const double j = static_cast<double>(cap) + 1.0;
        const double cover = unit_ball_volume_l2(d) * d * (1.0 + rd) *
                             std::pow((j + rd / 2.0) / j, d - 1);
        c = std::max(c, cover);
    }
    return c;
}

}  // namespace

double shell_count_constant(int dim, NormKind norm) {
    if (dim < 1 || dim > 8) throw std::invalid_argument("shell_count_constant: dimension out of range");
    static std::mutex mu;
    static std::map<std::pair<int, int>, double> cache;
    const auto key = std::make_pair(dim, static_cast<int>(norm));
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double c = shell_constant_uncached(dim, norm);
    cache.emplace(key, c);
    return c;
}

double power_law_tail_bound(int dim, double gamma, NormKind norm, double radius) {
    if (!(gamma > dim)) throw std::invalid_argument("power_law_tail_bound: gamma must exceed the dimension");
    if (!(radius > 0.0)) throw std::invalid_argument("power_law_tail_bound: radius must be positive");
    // Every l with |l| >= R sits in a shell B_j = {j-1 <= |l| < j} with j >= floor(R)+1,
    // #B_j <= C_d j^{d-1} and a(|l|) <= (j-1)^{-gamma}. Summing shells and comparing
    // with the integral of t^{d-1-gamma} gives the bound below, M = floor(R) >= 1.
    const double cd = shell_count_constant(dim, norm);
    const double m = std::max(1.0, std::floor(radius));
    const double d = static_cast<double>(dim);
    return cd * std::pow(2.0, d - 1.0) *
           (std::pow(m, d - 1.0 - gamma) + std::pow(m, d - gamma) / (gamma - d));
}

KernelSpec KernelSpec::power_law(double gamma, NormKind norm, double tail_tol) {
    if (!std::isfinite(gamma) || gamma <= 0.0) throw std::invalid_argument("KernelSpec: gamma must be positive");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("KernelSpec: tail_tol must be positive");
    KernelSpec k;
    k.power_ = true;
    k.gamma_ = gamma;
    k.norm_ = norm;
    k.tail_tol_ = tail_tol;
    return k;
}

KernelSpec KernelSpec::custom(Law law, TailBound tail_bound, NormKind norm, double tail_tol) {
    if (!law) throw std::invalid_argument("KernelSpec: coefficient law required");
    if (!tail_bound) throw std::invalid_argument("KernelSpec: custom laws require a tail-bound callback");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("KernelSpec: tail_tol must be positive");
    KernelSpec k;
    k.power_ = false;
    k.norm_ = norm;
    k.tail_tol_ = tail_tol;
    k.law_ = std::move(law);
    k.tail_ = std::move(tail_bound);
    return k;
}

double KernelSpec::coeff(const MultiIndex& l) const {
    if (power_ && is_zero(l)) return 0.0;
    return law(index_norm(l, norm_));
}

double KernelSpec::law(double t) const {
    if (power_) return t == 0.0 ? 0.0 : std::pow(t, -gamma_);
    return law_(t);
}

double KernelSpec::tail_bound(int dim, double radius) const {
    if (power_) return power_law_tail_bound(dim, gamma_, norm_, radius);
    const double b = tail_(dim, radius);
    if (!(b >= 0.0)) throw std::runtime_error("KernelSpec: tail-bound callback returned a negative value");
    return b;
}

void KernelSpec::require_valid_for_dim(int dim) const {
    if (dim < 1) throw std::invalid_argument("KernelSpec: dimension must be >= 1");
    if (power_ && !(gamma_ > static_cast<double>(dim))) {
        throw std::domain_error("KernelSpec: gamma must exceed the dimension d");
    }
}

}  // namespace sks
