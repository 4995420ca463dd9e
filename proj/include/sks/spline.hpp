#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "sks/fourier_rep.hpp"
#include "sks/kernel.hpp"
#include "sks/lattice_engine.hpp"

namespace sks {

// c + sum_k c_k K(x - x_k) with sum_k c_k = 0.
struct SplineCoefficients {
    double constant = 0.0;
    std::vector<double> knot_coeffs;  // indexed like Omega_n
};

// Fundamental spline: 1 at the zero knot, 0 at every other knot.
// Carries one coset evaluator per nonzero residue, the lattice sums
// rho_j(0), the explicit knot coefficients, and a truncated Fourier
// representation whose dropped mass is tracked in fourier().truncation_tail.
class FundamentalSpline {
public:
    const GridSpec& grid() const { return grid_; }
    const KernelSpec& kernel() const { return kernel_; }
    double build_tol() const { return tol_; }

    double rho0(std::size_t omega_rank) const;  // rank >= 1
    double min_rho0() const { return min_rho0_; }
    const SplineCoefficients& coefficients() const { return coeffs_; }
    const FourierRep& fourier() const { return fourier_; }

    // Fourier representation when its certified tail is within tol, the
    // rho-ratio formula otherwise.
    double eval(const TorusPoint& x) const;
    double eval_direct(const TorusPoint& x) const;
    double eval_fourier(const TorusPoint& x) const;
    // c + sum_k c_k K(x - x_k) through kernel_eval; slow, kept as a third route.
    double eval_kernel_translates(const TorusPoint& x, double tol) const;

    // Engine access for interpolants: E_r(x) over the coset of residue r.
    CosetSumValue coset_eval(std::size_t omega_rank, const TorusPoint& x) const;
    double coset_at_origin(std::size_t omega_rank) const;  // A_r = rho_r(0)/2

private:
    friend std::shared_ptr<const FundamentalSpline> build_fundamental(const KernelSpec&,
                                                                      const GridSpec&, double,
                                                                      std::size_t);
    FundamentalSpline(KernelSpec kernel, GridSpec grid, double tol, std::size_t budget);

    KernelSpec kernel_;
    GridSpec grid_;
    double tol_;
    std::vector<MultiIndex> omega_;
    std::vector<double> rho0_;  // [0] unused
    double min_rho0_ = 0.0;
    std::vector<CosetSumEvaluator> evaluators_;  // [0] placeholder for rank 0
    SplineCoefficients coeffs_;
    FourierRep fourier_;
};

std::shared_ptr<const FundamentalSpline> build_fundamental(const KernelSpec& kernel,
                                                           const GridSpec& grid, double tol,
                                                           std::size_t fourier_term_budget = 200000);

// Interpolant sum_k f(x_k) skt(x - x_k), held as the samples plus their DFT.
class Interpolant {
public:
    const std::vector<double>& samples() const { return samples_; }
    const FundamentalSpline& fundamental() const { return *fs_; }

    // default path: samples' DFT composed with the coset evaluators
    double eval(const TorusPoint& x) const;
    // oracle path: explicit sum of fundamental-spline translates
    double eval_translates(const TorusPoint& x) const;

    SplineCoefficients spline_coefficients() const;

private:
    friend Interpolant interpolate(std::shared_ptr<const FundamentalSpline>,
                                   std::vector<double>);
    Interpolant(std::shared_ptr<const FundamentalSpline> fs, std::vector<double> samples);

    std::shared_ptr<const FundamentalSpline> fs_;
    std::vector<double> samples_;
    std::vector<std::complex<double>> dft_;
    std::vector<std::size_t> active_;  // ranks with non-negligible DFT mass
};

Interpolant interpolate(std::shared_ptr<const FundamentalSpline> fs, std::vector<double> samples);

// DFT of samples over the knot lattice: D_r = sum_k s_k e^{-i r.x_k}.
std::vector<std::complex<double>> knot_dft(const GridSpec& grid,
                                           const std::vector<std::complex<double>>& samples);

// Independent oracle: dense (N+1)x(N+1) solve of the augmented kernel system.
SplineCoefficients solve_linear_system(const KernelSpec& kernel, const GridSpec& grid,
                                       const std::vector<double>& samples, double tol = 1e-12);

// c + sum_k c_k K(x - x_k).
double spline_eval(const KernelSpec& kernel, const GridSpec& grid, const SplineCoefficients& sc,
                   const TorusPoint& x, double tol = 1e-12);

}  // namespace sks
