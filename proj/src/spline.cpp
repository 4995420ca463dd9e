#include "sks/spline.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sks {

namespace {

std::vector<std::int64_t> grid_moduli(const GridSpec& grid) {
    std::vector<std::int64_t> m(static_cast<std::size_t>(grid.dim()));
    for (int i = 0; i < grid.dim(); ++i) m[static_cast<std::size_t>(i)] = grid.axis_points(i);
    return m;
}

std::string index_to_string(const MultiIndex& j) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < j.size(); ++i) os << (i ? "," : "") << j[i];
    os << ")";
    return os.str();
}

}  // namespace

FundamentalSpline::FundamentalSpline(KernelSpec kernel, GridSpec grid, double tol,
                                     std::size_t budget)
    : kernel_(std::move(kernel)), grid_(std::move(grid)), tol_(tol), fourier_(grid_.dim()) {
    kernel_.require_valid_for_dim(grid_.dim());
    if (!(tol_ > 0.0)) throw std::invalid_argument("build_fundamental: tol must be positive");

    omega_ = grid_.enumerate_omega();
    const auto N = static_cast<std::size_t>(grid_.size());
    const auto moduli = grid_moduli(grid_);
    const TorusPoint origin(std::vector<double>(static_cast<std::size_t>(grid_.dim()), 0.0));

    const bool theta_capable =
        kernel_.is_power_law() && (kernel_.norm() == NormKind::L2 || grid_.dim() == 1);
    const double engine_tol = theta_capable ? std::min(1e-13, tol_ / 4.0) : tol_ / 4.0;

    rho0_.assign(N, 0.0);
    evaluators_.reserve(N - 1);  // evaluators_[r-1] serves omega rank r
    min_rho0_ = std::numeric_limits<double>::infinity();
    for (std::size_t r = 1; r < N; ++r) {
        evaluators_.emplace_back(kernel_, moduli, omega_[r], engine_tol);
        const double a = evaluators_.back().eval(origin).value.real();
        rho0_[r] = 2.0 * a;
        if (rho0_[r] <= tol_) {
            throw std::domain_error("build_fundamental: rho_j(0) <= tol at j=" +
                                    index_to_string(omega_[r]));
        }
        min_rho0_ = std::min(min_rho0_, rho0_[r]);
    }

    // knot coefficients c_k = (2/N^2) sum_j cos(j.x_k)/rho_j(0), constant 1/N
    const double dN = static_cast<double>(grid_.size());
    coeffs_.constant = 1.0 / dN;
    coeffs_.knot_coeffs.assign(N, 0.0);
    std::vector<TorusPoint> knots;
    knots.reserve(N);
    for (const auto& k : omega_) knots.push_back(grid_.knot(k));
    for (std::size_t k = 0; k < N; ++k) {
        double s = 0.0;
        for (std::size_t r = 1; r < N; ++r) s += std::cos(dot(omega_[r], knots[k])) / rho0_[r];
        coeffs_.knot_coeffs[k] = 2.0 / (dN * dN) * s;
    }

    // truncated Fourier representation: frequency m != 0 carries
    // a_m / (N A_{r(m)}) with A_r = rho_r(0)/2; frequencies = 0 mod 2n vanish.
    const double a_min = min_rho0_ / 2.0;
    double radius = 4.0;
    for (int i = 0; i < grid_.dim(); ++i) {
        radius = std::max(radius, 2.0 * static_cast<double>(grid_.axis_points(i)));
    }
    const auto box_count = [&](double L) {
        double c = 1.0;
        for (int i = 0; i < grid_.dim(); ++i) c *= 2.0 * std::floor(L) + 1.0;
        return c;
    };
    const auto dropped_mass = [&](double L) {
        return kernel_.tail_bound(grid_.dim(), L) / (dN * a_min);
    };
    const bool materialize = budget > 0 && box_count(radius) <= static_cast<double>(budget);
    if (materialize) {
        while (dropped_mass(radius) >= tol_ &&
               box_count(radius * 1.5) <= static_cast<double>(budget)) {
            radius *= 1.5;
        }
    }

    fourier_.add(MultiIndex(static_cast<std::size_t>(grid_.dim()), 0), {1.0 / dN, 0.0});
    if (materialize) {
        const auto Lbox = static_cast<std::int64_t>(std::floor(radius));
        MultiIndex m(static_cast<std::size_t>(grid_.dim()), -Lbox);
        while (true) {
            if (!is_zero(m) && index_norm(m, kernel_.norm()) <= radius && !grid_.congruent_zero(m)) {
                const std::size_t r = grid_.index_of(grid_.reduce(m));
                const double c = kernel_.coeff(m) / (dN * (rho0_[r] / 2.0));
                if (c != 0.0) fourier_.add(m, {c, 0.0});
            }
            int axis = grid_.dim() - 1;
            while (axis >= 0) {
                if (++m[static_cast<std::size_t>(axis)] <= Lbox) break;
                m[static_cast<std::size_t>(axis)] = -Lbox;
                --axis;
            }
            if (axis < 0) break;
        }
        fourier_.truncation_tail = dropped_mass(radius);
    } else {
        fourier_.truncation_tail = dropped_mass(1.0);
    }
    fourier_.finalize();
}

double FundamentalSpline::rho0(std::size_t omega_rank) const {
    if (omega_rank == 0 || omega_rank >= rho0_.size()) {
        throw std::out_of_range("FundamentalSpline::rho0: rank must be in [1, N)");
    }
    return rho0_[omega_rank];
}

CosetSumValue FundamentalSpline::coset_eval(std::size_t omega_rank, const TorusPoint& x) const {
    if (omega_rank == 0 || omega_rank > evaluators_.size()) {
        throw std::out_of_range("FundamentalSpline::coset_eval: rank must be in [1, N)");
    }
    return evaluators_[omega_rank - 1].eval(x);
}

double FundamentalSpline::coset_at_origin(std::size_t omega_rank) const {
    return rho0(omega_rank) / 2.0;
}

double FundamentalSpline::eval_direct(const TorusPoint& x) const {
    const auto N = static_cast<std::size_t>(grid_.size());
    double s = 1.0;
    for (std::size_t r = 1; r < N; ++r) {
        s += evaluators_[r - 1].eval(x).value.real() / (rho0_[r] / 2.0);
    }
    return s / static_cast<double>(grid_.size());
}

double FundamentalSpline::eval_fourier(const TorusPoint& x) const {
    return fourier_.eval(x).real();
}

double FundamentalSpline::eval(const TorusPoint& x) const {
    return fourier_.truncation_tail <= tol_ ? eval_fourier(x) : eval_direct(x);
}

double FundamentalSpline::eval_kernel_translates(const TorusPoint& x, double tol) const {
    const std::vector<std::int64_t> ones(static_cast<std::size_t>(grid_.dim()), 1);
    const MultiIndex zero(static_cast<std::size_t>(grid_.dim()), 0);
    CosetSumEvaluator kev(kernel_, ones, zero, tol);
    const double a0 = kernel_.law(0.0);
    double s = coeffs_.constant;
    for (std::size_t k = 0; k < omega_.size(); ++k) {
        const double kv = a0 + kev.eval(x - grid_.knot(omega_[k])).value.real();
        s += coeffs_.knot_coeffs[k] * kv;
    }
    return s;
}

std::shared_ptr<const FundamentalSpline> build_fundamental(const KernelSpec& kernel,
                                                           const GridSpec& grid, double tol,
                                                           std::size_t fourier_term_budget) {
    return std::shared_ptr<const FundamentalSpline>(
        new FundamentalSpline(kernel, grid, tol, fourier_term_budget));
}

std::vector<std::complex<double>> knot_dft(const GridSpec& grid,
                                           const std::vector<std::complex<double>>& samples) {
    const auto N = static_cast<std::size_t>(grid.size());
    if (samples.size() != N) throw std::invalid_argument("knot_dft: samples must have length N");
    const int d = grid.dim();

    std::vector<std::size_t> stride(static_cast<std::size_t>(d), 1);
    for (int i = d - 2; i >= 0; --i) {
        stride[static_cast<std::size_t>(i)] = stride[static_cast<std::size_t>(i) + 1] *
                                              static_cast<std::size_t>(grid.axis_points(i + 1));
    }

    std::vector<std::complex<double>> cur = samples;
    std::vector<std::complex<double>> next(N);
    for (int ax = 0; ax < d; ++ax) {
        const auto m = static_cast<std::size_t>(grid.axis_points(ax));
        const std::size_t st = stride[static_cast<std::size_t>(ax)];
        const double n_ax = static_cast<double>(grid.degrees()[static_cast<std::size_t>(ax)]);
        std::vector<std::complex<double>> w(m * m);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t k = 0; k < m; ++k) {
                const double ph = -std::numbers::pi * static_cast<double>(r) *
                                  static_cast<double>(k) / n_ax;
                w[r * m + k] = {std::cos(ph), std::sin(ph)};
            }
        }
        for (std::size_t pos = 0; pos < N; ++pos) {
            const std::size_t k_ax = (pos / st) % m;
            const std::size_t base = pos - k_ax * st;
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t k = 0; k < m; ++k) acc += cur[base + k * st] * w[k_ax * m + k];
            next[pos] = acc;  // k_ax now plays the role of the output frequency
        }
        std::swap(cur, next);
    }
    return cur;
}

Interpolant::Interpolant(std::shared_ptr<const FundamentalSpline> fs, std::vector<double> samples)
    : fs_(std::move(fs)), samples_(std::move(samples)) {
    const auto N = static_cast<std::size_t>(fs_->grid().size());
    if (samples_.size() != N) {
        throw std::invalid_argument("interpolate: samples must have length N = " + std::to_string(N));
    }
    std::vector<std::complex<double>> cs(N);
    double scale = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        cs[i] = samples_[i];
        scale += std::abs(samples_[i]);
    }
    dft_ = knot_dft(fs_->grid(), cs);
    const double thresh = 1e-13 * scale;
    for (std::size_t r = 1; r < N; ++r) {
        if (std::abs(dft_[r]) > thresh) active_.push_back(r);
    }
}

Interpolant interpolate(std::shared_ptr<const FundamentalSpline> fs, std::vector<double> samples) {
    if (!fs) throw std::invalid_argument("interpolate: null fundamental spline");
    return Interpolant(std::move(fs), std::move(samples));
}

double Interpolant::eval(const TorusPoint& x) const {
    const double dN = static_cast<double>(fs_->grid().size());
    std::complex<double> s = dft_[0] / dN;
    for (std::size_t r : active_) {
        s += dft_[r] / dN * fs_->coset_eval(r, x).value / fs_->coset_at_origin(r);
    }
    return s.real();
}

double Interpolant::eval_translates(const TorusPoint& x) const {
    const auto& grid = fs_->grid();
    const auto omega = grid.enumerate_omega();
    double s = 0.0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
        if (samples_[k] == 0.0) continue;
        s += samples_[k] * fs_->eval_direct(x - grid.knot(omega[k]));
    }
    return s;
}

SplineCoefficients Interpolant::spline_coefficients() const {
    const auto& grid = fs_->grid();
    const auto omega = grid.enumerate_omega();
    const auto N = omega.size();
    SplineCoefficients out;
    out.constant = 0.0;
    for (double v : samples_) out.constant += v;
    out.constant /= static_cast<double>(N);
    out.knot_coeffs.assign(N, 0.0);
    const auto& ck = fs_->coefficients().knot_coeffs;
    for (std::size_t w = 0; w < N; ++w) {
        double s = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            MultiIndex diff(omega[w].size());
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = omega[w][i] - omega[k][i];
            s += samples_[k] * ck[grid.index_of(grid.reduce(diff))];
        }
        out.knot_coeffs[w] = s;
    }
    return out;
}

SplineCoefficients solve_linear_system(const KernelSpec& kernel, const GridSpec& grid,
                                       const std::vector<double>& samples, double tol) {
    kernel.require_valid_for_dim(grid.dim());
    const std::int64_t N = grid.size();
    if (N > 4096) throw std::invalid_argument("solve_linear_system: N > 4096 (dense oracle only)");
    if (static_cast<std::int64_t>(samples.size()) != N) {
        throw std::invalid_argument("solve_linear_system: samples must have length N");
    }
    const auto omega = grid.enumerate_omega();

    // kernel values on the knot lattice; knot differences are again knots
    const std::vector<std::int64_t> ones(static_cast<std::size_t>(grid.dim()), 1);
    const MultiIndex zero(static_cast<std::size_t>(grid.dim()), 0);
    CosetSumEvaluator kev(kernel, ones, zero, tol);
    const double a0 = kernel.law(0.0);
    std::vector<double> kval(static_cast<std::size_t>(N));
    for (std::size_t k = 0; k < kval.size(); ++k) {
        kval[k] = a0 + kev.eval(grid.knot(omega[k])).value.real();
    }

    Eigen::MatrixXd A(N + 1, N + 1);
    Eigen::VectorXd b(N + 1);
    for (std::int64_t i = 0; i < N; ++i) {
        for (std::int64_t j = 0; j < N; ++j) {
            MultiIndex diff(omega[static_cast<std::size_t>(i)].size());
            for (std::size_t t = 0; t < diff.size(); ++t) {
                diff[t] = omega[static_cast<std::size_t>(i)][t] - omega[static_cast<std::size_t>(j)][t];
            }
            A(i, j) = kval[grid.index_of(grid.reduce(diff))];
        }
        A(i, N) = 1.0;
        A(N, i) = 1.0;
        b(i) = samples[static_cast<std::size_t>(i)];
    }
    A(N, N) = 0.0;
    b(N) = 0.0;

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const Eigen::VectorXd c = lu.solve(b);
    const double resid = (A * c - b).cwiseAbs().maxCoeff();
    if (!c.allFinite() || resid > 1e-7 * (1.0 + b.cwiseAbs().maxCoeff())) {
        throw std::runtime_error("solve_linear_system: numerically singular augmented system");
    }

    SplineCoefficients out;
    out.knot_coeffs.assign(static_cast<std::size_t>(N), 0.0);
    for (std::int64_t i = 0; i < N; ++i) out.knot_coeffs[static_cast<std::size_t>(i)] = c(i);
    out.constant = c(N);
    double csum = 0.0, cmax = 0.0;
    for (double v : out.knot_coeffs) {
        csum += v;
        cmax = std::max(cmax, std::abs(v));
    }
    if (std::abs(csum) > 1e-10 * std::max(1.0, cmax)) {
        throw std::runtime_error("solve_linear_system: side condition sum c_k = 0 violated");
    }
    return out;
}

double spline_eval(const KernelSpec& kernel, const GridSpec& grid, const SplineCoefficients& sc,
                   const TorusPoint& x, double tol) {
    if (sc.knot_coeffs.size() != static_cast<std::size_t>(grid.size())) {
        throw std::invalid_argument("spline_eval: coefficient length mismatch");
    }
    const std::vector<std::int64_t> ones(static_cast<std::size_t>(grid.dim()), 1);
    const MultiIndex zero(static_cast<std::size_t>(grid.dim()), 0);
    CosetSumEvaluator kev(kernel, ones, zero, tol);
    const double a0 = kernel.law(0.0);
    const auto omega = grid.enumerate_omega();
    double s = sc.constant;
    for (std::size_t k = 0; k < omega.size(); ++k) {
        if (sc.knot_coeffs[k] == 0.0) continue;
        s += sc.knot_coeffs[k] * (a0 + kev.eval(x - grid.knot(omega[k])).value.real());
    }
    return s;
}

}  // namespace sks
