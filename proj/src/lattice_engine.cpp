#include "sks/lattice_engine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sks/special_functions.hpp"

namespace sks {

namespace {

constexpr double kPi = std::numbers::pi;

// Rigorous bound on sum_{Q >= Q0} 2d (3Q)^{d-1} * C * (L(Q-1/2))^{-2} * exp(-alpha (Q-1/2)^2).
// The summand ratio is at most ((Q+1)/Q)^{d-1} exp(-2 alpha Q); once that drops
// below 1/2 the rest is closed geometrically.
double shell_series_bound(int d, double C, double L, double alpha, std::int64_t Q0) {
    double sum = 0.0;
    for (std::int64_t Q = Q0; Q < Q0 + 200000; ++Q) {
        const double qm = static_cast<double>(Q) - 0.5;
        const double u = L * qm;
        const double term = 2.0 * d * std::pow(3.0 * static_cast<double>(Q), d - 1) * C *
                            std::exp(-alpha * qm * qm) / (u * u);
        sum += term;
        const double rho = std::pow((static_cast<double>(Q) + 1.0) / static_cast<double>(Q), d - 1) *
                           std::exp(-2.0 * alpha * static_cast<double>(Q));
        if (rho < 0.5) return sum + term * rho / (1.0 - rho);
    }
    throw std::runtime_error("shell_series_bound: no geometric closure (degenerate lattice?)");
}

template <typename F>
void for_each_in_box(int d, std::int64_t radius, F&& body) {
    MultiIndex p(static_cast<std::size_t>(d), -radius);
    while (true) {
        body(p);
        int axis = d - 1;
        while (axis >= 0) {
            if (++p[static_cast<std::size_t>(axis)] <= radius) break;
            p[static_cast<std::size_t>(axis)] = -radius;
            --axis;
        }
        if (axis < 0) break;
    }
}

}  // namespace

CosetSumEvaluator::CosetSumEvaluator(const KernelSpec& kernel, std::vector<std::int64_t> moduli,
                                     const MultiIndex& offset, double tol, std::size_t max_terms) {
    init(kernel, std::move(moduli), offset, tol, max_terms, false);
}

CosetSumEvaluator CosetSumEvaluator::direct(const KernelSpec& kernel,
                                            std::vector<std::int64_t> moduli,
                                            const MultiIndex& offset, double tol,
                                            std::size_t max_terms) {
    CosetSumEvaluator ev;
    ev.init(kernel, std::move(moduli), offset, tol, max_terms, true);
    return ev;
}

void CosetSumEvaluator::init(const KernelSpec& kernel, std::vector<std::int64_t> moduli,
                             const MultiIndex& offset, double tol, std::size_t max_terms,
                             bool force_direct) {
    if (!(tol > 0.0)) throw std::invalid_argument("CosetSumEvaluator: tol must be positive");
    if (moduli.empty() || moduli.size() != offset.size()) {
        throw std::invalid_argument("CosetSumEvaluator: moduli/offset dimension mismatch");
    }
    for (std::int64_t a : moduli) {
        if (a < 1) throw std::invalid_argument("CosetSumEvaluator: moduli must be >= 1");
    }
    moduli_ = std::move(moduli);
    kernel.require_valid_for_dim(dim());

    // symmetric residue, |c_i| <= a_i/2
    offset_.resize(offset.size());
    for (std::size_t i = 0; i < offset.size(); ++i) {
        const std::int64_t a = moduli_[i];
        std::int64_t c = ((offset[i] % a) + a) % a;
        if (2 * c > a) c -= a;
        offset_[i] = c;
    }
    offset_zero_ = is_zero(offset_);

    const bool theta_capable = kernel.is_power_law() && (kernel.norm() == NormKind::L2 || dim() == 1);
    if (theta_capable && !force_direct) {
        theta_ = true;
        build_theta(kernel, tol);
    } else {
        theta_ = false;
        build_direct(kernel, tol, max_terms);
    }
}

void CosetSumEvaluator::collect_far_box(const KernelSpec& kernel, std::int64_t P, bool theta) {
    const int d = dim();
    freqs_.clear();
    weights_.clear();
    for_each_in_box(d, P, [&](const MultiIndex& p) {
        MultiIndex m(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) m[i] = moduli_[i] * p[i] + offset_[i];
        if (is_zero(m)) return;
        double w;
        if (theta) {
            const double r2 = [&] {
                double s = 0.0;
                for (std::int64_t v : m) s += static_cast<double>(v) * static_cast<double>(v);
                return s;
            }();
            w = gscale_ * std::pow(r2, -gamma_ / 2.0) *
                upper_incomplete_gamma(gamma_ / 2.0, eta_ * r2);
        } else {
            w = kernel.coeff(m);
        }
        if (w == 0.0) return;
        for (std::int64_t v : m) freqs_.push_back(static_cast<double>(v));
        weights_.push_back(w);
    });
}

void CosetSumEvaluator::build_theta(const KernelSpec& kernel, double tol) {
    const int d = dim();
    gamma_ = kernel.gamma();
    nu_ = (gamma_ - static_cast<double>(d)) / 2.0;
    std::int64_t amin = moduli_[0], amax = moduli_[0];
    double det = 1.0;
    for (std::int64_t a : moduli_) {
        amin = std::min(amin, a);
        amax = std::max(amax, a);
        det *= static_cast<double>(a);
    }
    eta_ = kPi / (static_cast<double>(amin) * static_cast<double>(amax));
    gscale_ = 1.0 / std::tgamma(gamma_ / 2.0);
    near_coeff_ = gscale_ * std::pow(kPi, d / 2.0) / det;
    const_term_ = offset_zero_ ? -gscale_ * (2.0 / gamma_) * std::pow(eta_, gamma_ / 2.0) : 0.0;
    dual_step_.resize(moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i) dual_step_[i] = 2.0 * kPi / static_cast<double>(moduli_[i]);

    const double am = static_cast<double>(amin);
    const double alpha_far = eta_ * am * am;
    // Gamma(s,z) <= 2 z^{s-1} e^{-z} once z >= max(1, gamma-2): only close the
    // shell series from a radius where that holds.
    const double z_needed = std::max(1.0, gamma_ - 2.0);
    const double b0 = gamma_ > 2.0 ? 2.0 : 1.0;
    const double c_far = gscale_ * b0 * std::pow(eta_, gamma_ / 2.0 - 1.0);

    double far_rem = 0.0;
    std::int64_t P = 1;
    for (;; ++P) {
        const double qm = static_cast<double>(P + 1) - 0.5;
        if (eta_ * am * qm * am * qm < z_needed) continue;
        far_rem = shell_series_bound(d, c_far, am, alpha_far, P + 1);
        if (far_rem < tol / 2.0) break;
        if (P > 4000) throw std::runtime_error("CosetSumEvaluator: theta far sum failed to converge");
    }
    collect_far_box(kernel, P, true);

    const double dmin = 2.0 * kPi / static_cast<double>(amax);
    const double alpha_near = dmin * dmin / (4.0 * eta_);
    const double c_near = near_coeff_ * 4.0 * std::pow(eta_, nu_ + 1.0);
    double near_rem = 0.0;
    for (near_radius_ = 1;; ++near_radius_) {
        near_rem = shell_series_bound(d, c_near, dmin, alpha_near, near_radius_ + 1);
        if (near_rem < tol / 2.0) break;
        if (near_radius_ > 4000) throw std::runtime_error("CosetSumEvaluator: theta near sum failed to converge");
    }
    tail_ = far_rem + near_rem;
}

void CosetSumEvaluator::build_direct(const KernelSpec& kernel, double tol, std::size_t max_terms) {
    const int d = dim();
    std::int64_t amin = moduli_[0];
    for (std::int64_t a : moduli_) amin = std::min(amin, a);

    std::int64_t P = 1;
    double rem = 0.0;
    for (;; P = P < 8 ? P + 1 : P + std::max<std::int64_t>(1, P / 4)) {
        rem = kernel.tail_bound(d, static_cast<double>(amin) * (static_cast<double>(P) + 0.5));
        if (rem < tol) break;
        double cnt = 1.0;
        for (int i = 0; i < d; ++i) cnt *= 2.0 * static_cast<double>(P) + 1.0;
        if (cnt > static_cast<double>(max_terms)) {
            char msg[160];
            std::snprintf(msg, sizeof(msg),
                          "CosetSumEvaluator: tolerance %.3g unattainable within the term budget "
                          "(%zu terms; slowly decaying law)",
                          tol, max_terms);
            throw std::runtime_error(msg);
        }
    }
    double cnt = 1.0;
    for (int i = 0; i < d; ++i) cnt *= 2.0 * static_cast<double>(P) + 1.0;
    if (cnt > static_cast<double>(max_terms)) {
        throw std::runtime_error("CosetSumEvaluator: term budget exceeded");
    }
    collect_far_box(kernel, P, false);
    tail_ = rem;
}

CosetSumValue CosetSumEvaluator::eval(const TorusPoint& x) const {
    const int d = dim();
    if (x.dim() != d) throw std::invalid_argument("CosetSumEvaluator: point dimension mismatch");

    double re = 0.0, im = 0.0;
    const std::size_t nterms = weights_.size();
    for (std::size_t t = 0; t < nterms; ++t) {
        double ph = 0.0;
        const double* f = &freqs_[t * static_cast<std::size_t>(d)];
        for (int i = 0; i < d; ++i) ph += f[i] * x.coords[static_cast<std::size_t>(i)];
        re += weights_[t] * std::cos(ph);
        im += weights_[t] * std::sin(ph);
    }

    if (theta_) {
        // dual sum over lattice points y_k = (2 pi k_i / a_i) near x
        MultiIndex k0(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            k0[static_cast<std::size_t>(i)] =
                std::llround(x.coords[static_cast<std::size_t>(i)] / dual_step_[static_cast<std::size_t>(i)]);
        }
        for_each_in_box(d, near_radius_, [&](const MultiIndex& q) {
            double beta = 0.0;
            double ph = 0.0;
            for (int i = 0; i < d; ++i) {
                const auto ii = static_cast<std::size_t>(i);
                const double yk = dual_step_[ii] * static_cast<double>(k0[ii] + q[ii]);
                const double w = x.coords[ii] - yk;
                beta += w * w;
                ph += static_cast<double>(offset_[ii]) * yk;
            }
            beta *= 0.25;
            const double g = truncated_theta_integral(nu_, beta, eta_);
            if (g == 0.0) return;
            re += near_coeff_ * g * std::cos(ph);
            im += near_coeff_ * g * std::sin(ph);
        });
        re += const_term_;
    }
    return CosetSumValue{std::complex<double>(re, im), tail_};
}

CosetSumValue coset_fourier_sum(const KernelSpec& kernel, const std::vector<std::int64_t>& moduli,
                                const MultiIndex& offset, const TorusPoint& x, double tol) {
    CosetSumEvaluator ev(kernel, moduli, offset, tol);
    return ev.eval(x);
}

CosetSumValue coset_fourier_sum_direct(const KernelSpec& kernel,
                                       const std::vector<std::int64_t>& moduli,
                                       const MultiIndex& offset, const TorusPoint& x, double tol,
                                       std::size_t max_terms) {
    auto ev = CosetSumEvaluator::direct(kernel, moduli, offset, tol, max_terms);
    return ev.eval(x);
}

double kernel_eval(const KernelSpec& kernel, const TorusPoint& x, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("kernel_eval: tol must be positive");
    kernel.require_valid_for_dim(x.dim());
    const std::vector<std::int64_t> ones(static_cast<std::size_t>(x.dim()), 1);
    const MultiIndex zero(static_cast<std::size_t>(x.dim()), 0);
    CosetSumEvaluator ev(kernel, ones, zero, tol);
    return kernel.law(0.0) + ev.eval(x).value.real();
}

LatticeSumValue rho_zero(const KernelSpec& kernel, const MultiIndex& j, const GridSpec& grid,
                         double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("rho_zero: tol must be positive");
    if (!grid.in_omega(j)) throw std::domain_error("rho_zero: j outside Omega_n");
    std::vector<std::int64_t> moduli(j.size());
    for (int i = 0; i < grid.dim(); ++i) moduli[static_cast<std::size_t>(i)] = grid.axis_points(i);
    CosetSumEvaluator ev(kernel, moduli, j, tol / 2.0);
    const TorusPoint origin(std::vector<double>(j.size(), 0.0));
    const CosetSumValue e = ev.eval(origin);
    // rho_j = 2 Re E_j since the two coset families are mirror images
    return LatticeSumValue{2.0 * e.value.real(), 2.0 * e.tail_bound};
}

RhoSigmaValue rho_sigma_eval(const KernelSpec& kernel, const MultiIndex& j, const TorusPoint& x,
                             const GridSpec& grid, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("rho_sigma_eval: tol must be positive");
    if (!grid.in_omega(j)) throw std::domain_error("rho_sigma_eval: j outside Omega_n");
    if (x.dim() != grid.dim()) throw std::invalid_argument("rho_sigma_eval: point dimension mismatch");
    std::vector<std::int64_t> moduli(j.size());
    for (int i = 0; i < grid.dim(); ++i) moduli[static_cast<std::size_t>(i)] = grid.axis_points(i);
    CosetSumEvaluator ev(kernel, moduli, j, tol / 2.0);
    const CosetSumValue e = ev.eval(x);
    RhoSigmaValue out;
    out.rho = 2.0 * e.value.real();
    out.sigma = x.is_origin() ? 0.0 : 2.0 * e.value.imag();
    out.tail_bound = 2.0 * e.tail_bound;
    return out;
}

}  // namespace sks
