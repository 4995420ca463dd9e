#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sks/kernel.hpp"

namespace sks {

struct LatticeSumValue {
    double value = 0.0;
    double tail_bound = 0.0;  // certified truncation error
};

struct CosetSumValue {
    std::complex<double> value{0.0, 0.0};
    double tail_bound = 0.0;
};

struct RhoSigmaValue {
    double rho = 0.0;
    double sigma = 0.0;
    double tail_bound = 0.0;
};

// E(c, x) = sum over m = c mod moduli, m != 0, of a(|m|) e^{i m.x}.
//
// Construction fixes the truncation against tol once; evaluations at any x
// then carry the same certified tail bound. Power-law kernels in the l2 norm
// (and any norm in d = 1, where they coincide) go through a theta-transformed
// split whose two sums converge like Gaussians, so the cost is independent of
// the moduli and of gamma. Everything else enumerates a box of lattice points
// directly, which is only practical when the law decays a few powers faster
// than the dimension.
class CosetSumEvaluator {
public:
    CosetSumEvaluator(const KernelSpec& kernel, std::vector<std::int64_t> moduli,
                      const MultiIndex& offset, double tol,
                      std::size_t max_terms = std::size_t{1} << 23);

    // Force the box backend regardless of kernel (debug / cross-validation).
    static CosetSumEvaluator direct(const KernelSpec& kernel, std::vector<std::int64_t> moduli,
                                    const MultiIndex& offset, double tol,
                                    std::size_t max_terms = std::size_t{1} << 23);

    CosetSumValue eval(const TorusPoint& x) const;

    double tail() const { return tail_; }
    int dim() const { return static_cast<int>(moduli_.size()); }
    bool theta_backend() const { return theta_; }
    std::size_t far_terms() const { return weights_.size(); }

private:
    CosetSumEvaluator() = default;
    void init(const KernelSpec& kernel, std::vector<std::int64_t> moduli,
              const MultiIndex& offset, double tol, std::size_t max_terms, bool force_direct);
    void build_theta(const KernelSpec& kernel, double tol);
    void build_direct(const KernelSpec& kernel, double tol, std::size_t max_terms);
    void collect_far_box(const KernelSpec& kernel, std::int64_t P, bool theta);

    std::vector<std::int64_t> moduli_;
    MultiIndex offset_;        // reduced to the symmetric residue
    bool offset_zero_ = false;
    bool theta_ = false;
    double tail_ = 0.0;

    // flat term table: freqs_ holds dim() doubles per term
    std::vector<double> freqs_;
    std::vector<double> weights_;

    // theta-split data
    double gamma_ = 0.0;
    double nu_ = 0.0;
    double eta_ = 0.0;
    double gscale_ = 0.0;
    double near_coeff_ = 0.0;
    double const_term_ = 0.0;
    std::int64_t near_radius_ = 0;
    std::vector<double> dual_step_;
};

// One-shot wrappers around CosetSumEvaluator.
CosetSumValue coset_fourier_sum(const KernelSpec& kernel, const std::vector<std::int64_t>& moduli,
                                const MultiIndex& offset, const TorusPoint& x, double tol);
CosetSumValue coset_fourier_sum_direct(const KernelSpec& kernel,
                                       const std::vector<std::int64_t>& moduli,
                                       const MultiIndex& offset, const TorusPoint& x, double tol,
                                       std::size_t max_terms = std::size_t{1} << 23);

// K(x) = sum_l a(|l|) e^{il.x}, certified within tol.
double kernel_eval(const KernelSpec& kernel, const TorusPoint& x, double tol);

// rho_j(0) = sum_p (a_{2np+j} + a_{2np-j}).
LatticeSumValue rho_zero(const KernelSpec& kernel, const MultiIndex& j, const GridSpec& grid,
                         double tol);

// (rho_j(x), sigma_j(x)); sigma is exactly 0 at the origin.
RhoSigmaValue rho_sigma_eval(const KernelSpec& kernel, const MultiIndex& j, const TorusPoint& x,
                             const GridSpec& grid, double tol);

}  // namespace sks
