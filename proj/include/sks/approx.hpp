#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sks/fourier_rep.hpp"
#include "sks/spline.hpp"

namespace sks {

// Lebesgue exponent in [1, inf]; infinity is a distinct state, not a large number.
class LpExponent {
public:
    static LpExponent finite(double p);
    static LpExponent inf();

    bool is_inf() const { return inf_; }
    double value() const;  // throws when infinite
    double reciprocal() const { return inf_ ? 0.0 : 1.0 / p_; }
    std::string str() const;

private:
    LpExponent(double p, bool isinf) : p_(p), inf_(isinf) {}
    double p_;
    bool inf_;
};

struct RateSpec {
    double p = 1.0;
    LpExponent q = LpExponent::finite(2.0);
    double gamma = 0.0;
    int d = 1;

    void validate() const;  // throws domain_error when a hypothesis fails
};

// Predicted log-log slope -gamma + d(1/p - 1/q).
double rate_exponent(const RateSpec& spec);

// f = K * phi: the multiplier with symbol a_l applied to a trigonometric polynomial.
class TestFunction {
public:
    TestFunction(FourierRep phi, FourierRep f, double p, double p_norm);

    const FourierRep& phi() const { return phi_; }
    const FourierRep& f() const { return f_; }
    double p() const { return p_; }
    double p_norm_of_phi() const { return p_norm_; }
    std::int64_t bandwidth() const;  // max |w_i| over phi's support

    std::complex<double> eval_f(const TorusPoint& x) const { return f_.eval(x); }

private:
    FourierRep phi_;
    FourierRep f_;
    double p_;
    double p_norm_;
};

TestFunction sobolev_instance(const KernelSpec& kernel, FourierRep phi, double p, bool normalize,
                              int grid_points_per_axis);

// Uniform-grid quadrature of |g|^p over M^d points with the normalized measure;
// grid maximum for p = inf. Spectral inputs require M >= 4 * bandwidth.
double lp_norm(const FourierRep& g, const LpExponent& p, int grid_points_per_axis);
double lp_norm_fn(const std::function<std::complex<double>(const TorusPoint&)>& g, int dim,
                  const LpExponent& p, int grid_points_per_axis);

// || f - sk_n(f, .) ||_q measured on an M^d grid; f sampled exactly from its
// coefficients at the knots. Sup-norm measurements are confirmed by one grid
// doubling (5% stability), and the doubled value is returned.
double approximation_error(const TestFunction& f, const KernelSpec& kernel, const GridSpec& grid,
                           const LpExponent& q, int grid_points_per_axis);

// ( sum_{|l| >= |n|} a_l^s )^{1/p - 1/q} with s = qp/(q-p) and s = p at q = inf.
double theoretical_bound(const KernelSpec& kernel, const GridSpec& grid, const RateSpec& spec,
                         double tol);

// theta_{n,l}(x) = e^{il.x} - sum_j e^{il.x_j} skt_n(x - x_j).
std::complex<double> theta_deviation(const KernelSpec& kernel, const GridSpec& grid,
                                     const MultiIndex& l, const TorusPoint& x, double tol);

struct StudyRow {
    std::int64_t n = 0;
    double measured_error = 0.0;
    double theoretical_bound = 0.0;
    double bound_exponent = 0.0;
};

struct StudyResult {
    std::vector<StudyRow> rows;
    double fitted_slope = 0.0;
    double predicted_exponent = 0.0;
};

// One row per n (isotropic grids), slope fitted on log(error) vs log(n) with
// the smallest n discarded. Rows may be computed in parallel; results are
// merged in n order and are deterministic.
StudyResult run_convergence_study(const KernelSpec& kernel, const RateSpec& spec,
                                  const FourierRep& phi, const std::vector<std::int64_t>& n_list,
                                  int grid_points_per_axis, int max_threads = 1);

// CSV with header n,q,p,gamma,d,measured_error,theoretical_bound,exponent.
std::string study_csv(const StudyResult& result, const RateSpec& spec);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace sks
