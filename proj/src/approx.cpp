#include "sks/approx.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace sks {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

LpExponent LpExponent::finite(double p) {
    if (!std::isfinite(p) || p < 1.0) throw std::invalid_argument("LpExponent: p must lie in [1, inf]");
    return LpExponent(p, false);
}

LpExponent LpExponent::inf() { return LpExponent(0.0, true); }

double LpExponent::value() const {
    if (inf_) throw std::logic_error("LpExponent: infinite exponent has no finite value");
    return p_;
}

std::string LpExponent::str() const { return inf_ ? "inf" : format_double(p_); }

void RateSpec::validate() const {
    if (d < 1) throw std::domain_error("RateSpec: d must be >= 1");
    if (!(gamma > static_cast<double>(d))) throw std::domain_error("RateSpec: gamma > d is required");
    if (p < 1.0 || p > 2.0) throw std::domain_error("RateSpec: p must lie in [1, 2]");
    if (!q.is_inf() && (q.value() < 2.0)) throw std::domain_error("RateSpec: q must lie in [2, inf]");
    if (1.0 / p - q.reciprocal() < 0.5 - 1e-12) {
        throw std::domain_error("RateSpec: hypothesis 1/p - 1/q >= 1/2 violated");
    }
}

double rate_exponent(const RateSpec& spec) {
    spec.validate();
    return -spec.gamma + static_cast<double>(spec.d) * (1.0 / spec.p - spec.q.reciprocal());
}

TestFunction::TestFunction(FourierRep phi, FourierRep f, double p, double p_norm)
    : phi_(std::move(phi)), f_(std::move(f)), p_(p), p_norm_(p_norm) {}

std::int64_t TestFunction::bandwidth() const {
    return static_cast<std::int64_t>(phi_.max_abs_freq());
}

TestFunction sobolev_instance(const KernelSpec& kernel, FourierRep phi, double p, bool normalize,
                              int grid_points_per_axis) {
    phi.finalize();
    if (phi.empty()) throw std::invalid_argument("sobolev_instance: phi must have at least one term");
    if (p < 1.0 || p > 2.0) throw std::invalid_argument("sobolev_instance: p must lie in [1, 2]");
    kernel.require_valid_for_dim(phi.dim());

    FourierRep f(phi.dim());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const MultiIndex m = phi.freq_index(i);
        const double a = kernel.coeff(m);
        if (a != 0.0) f.add(m, a * phi.coeff(i));
    }
    f.finalize();

    double norm = lp_norm(phi, LpExponent::finite(p), grid_points_per_axis);
    if (normalize) {
        if (norm <= 0.0) throw std::invalid_argument("sobolev_instance: phi has zero norm");
        phi.scale(1.0 / norm);
        f.scale(1.0 / norm);
        norm = 1.0;
    }
    return TestFunction(std::move(phi), std::move(f), p, norm);
}

double lp_norm_fn(const std::function<std::complex<double>(const TorusPoint&)>& g, int dim,
                  const LpExponent& p, int grid_points_per_axis) {
    const int M = grid_points_per_axis;
    if (M < 1) throw std::invalid_argument("lp_norm: grid must have at least one point per axis");
    if (dim < 1) throw std::invalid_argument("lp_norm: dimension must be >= 1");

    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    std::vector<double> coords(static_cast<std::size_t>(dim), 0.0);
    double acc = 0.0;
    double count = 1.0;
    for (int i = 0; i < dim; ++i) count *= static_cast<double>(M);
    while (true) {
        for (int i = 0; i < dim; ++i) {
            coords[static_cast<std::size_t>(i)] =
                kTwoPi * static_cast<double>(idx[static_cast<std::size_t>(i)]) / static_cast<double>(M);
        }
        const double mag = std::abs(g(TorusPoint(coords)));
        if (p.is_inf()) {
            acc = std::max(acc, mag);
        } else {
            acc += std::pow(mag, p.value());
        }
        int axis = dim - 1;
        while (axis >= 0) {
            if (++idx[static_cast<std::size_t>(axis)] < M) break;
            idx[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    if (p.is_inf()) return acc;
    return std::pow(acc / count, 1.0 / p.value());
}

double lp_norm(const FourierRep& g, const LpExponent& p, int grid_points_per_axis) {
    const double bw = g.max_abs_freq();
    if (static_cast<double>(grid_points_per_axis) < 4.0 * bw) {
        throw std::invalid_argument("lp_norm: grid too small for the declared bandwidth (need M >= 4*max frequency)");
    }
    return lp_norm_fn([&](const TorusPoint& x) { return g.eval(x); }, g.dim(), p,
                      grid_points_per_axis);
}

namespace {

// sk_n(f, .) for band-limited f: active cosets from the exact identity
// D_r = N sum_{w = r mod 2n} fhat(w).
class SpectralInterpolant {
public:
    SpectralInterpolant(const TestFunction& f, std::shared_ptr<const FundamentalSpline> fs)
        : fs_(std::move(fs)) {
        const auto& grid = fs_->grid();
        const double dN = static_cast<double>(grid.size());
        std::vector<std::complex<double>> d(static_cast<std::size_t>(grid.size()), {0.0, 0.0});
        const auto& fr = f.f();
        for (std::size_t i = 0; i < fr.size(); ++i) {
            d[grid.index_of(grid.reduce(fr.freq_index(i)))] += dN * fr.coeff(i);
        }
        mean_ = d[0] / dN;
        for (std::size_t r = 1; r < d.size(); ++r) {
            if (std::abs(d[r]) > 0.0) active_.emplace_back(r, d[r] / dN);
        }
    }

    std::complex<double> eval(const TorusPoint& x) const {
        std::complex<double> s = mean_;
        for (const auto& [r, w] : active_) {
            s += w * fs_->coset_eval(r, x).value / fs_->coset_at_origin(r);
        }
        return s;
    }

private:
    std::shared_ptr<const FundamentalSpline> fs_;
    std::complex<double> mean_{0.0, 0.0};
    std::vector<std::pair<std::size_t, std::complex<double>>> active_;
};

}  // namespace

double approximation_error(const TestFunction& f, const KernelSpec& kernel, const GridSpec& grid,
                           const LpExponent& q, int grid_points_per_axis) {
    std::int64_t nmax = 0;
    for (std::int64_t v : grid.degrees()) nmax = std::max(nmax, v);
    const std::int64_t resolve = 8 * std::max(f.bandwidth(), 2 * nmax);
    if (grid_points_per_axis < resolve) {
        throw std::invalid_argument("approximation_error: grid must satisfy M >= 8*max(bandwidth, 2n)");
    }

    auto fs = build_fundamental(kernel, grid, 1e-8, /*fourier_term_budget=*/0);
    const SpectralInterpolant sk(f, fs);
    const auto err = [&](const TorusPoint& x) { return f.eval_f(x) - sk.eval(x); };

    if (!q.is_inf()) return lp_norm_fn(err, grid.dim(), q, grid_points_per_axis);

    const double v1 = lp_norm_fn(err, grid.dim(), q, grid_points_per_axis);
    const double v2 = lp_norm_fn(err, grid.dim(), q, 2 * grid_points_per_axis);
    const double scale = std::max(v2, 1e-14);
    if (std::abs(v1 - v2) > 0.05 * scale) {
        throw std::runtime_error("approximation_error: sup-norm grid maximum did not stabilize under doubling");
    }
    return v2;
}

double theoretical_bound(const KernelSpec& kernel, const GridSpec& grid, const RateSpec& spec,
                         double tol) {
    spec.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("theoretical_bound: tol must be positive");
    if (!kernel.is_power_law()) {
        throw std::invalid_argument("theoretical_bound: only the power-law kernel carries tail constants");
    }
    if (grid.dim() != spec.d) throw std::invalid_argument("theoretical_bound: dimension mismatch");

    const double p = spec.p;
    const double s = spec.q.is_inf() ? p : spec.q.value() * p / (spec.q.value() - p);
    const double sg = s * kernel.gamma();
    const MultiIndex nvec(grid.degrees().begin(), grid.degrees().end());
    const double r0 = index_norm(nvec, kernel.norm());

    double total = 0.0;
    std::int64_t B = std::max<std::int64_t>(8, static_cast<std::int64_t>(std::ceil(2.0 * r0)));
    for (;; B *= 2) {
        const double rem = power_law_tail_bound(grid.dim(), sg, kernel.norm(),
                                                static_cast<double>(B) + 1.0);
        if (rem < tol) break;
        if (B > (std::int64_t{1} << 40)) throw std::runtime_error("theoretical_bound: no convergence");
    }
    MultiIndex l(static_cast<std::size_t>(grid.dim()), -B);
    while (true) {
        const double r = index_norm(l, kernel.norm());
        if (r >= r0 && !is_zero(l)) total += std::pow(r, -sg);
        int axis = grid.dim() - 1;
        while (axis >= 0) {
            if (++l[static_cast<std::size_t>(axis)] <= B) break;
            l[static_cast<std::size_t>(axis)] = -B;
            --axis;
        }
        if (axis < 0) break;
    }
    return std::pow(total, 1.0 / p - spec.q.reciprocal());
}

std::complex<double> theta_deviation(const KernelSpec& kernel, const GridSpec& grid,
                                     const MultiIndex& l, const TorusPoint& x, double tol) {
    const std::complex<double> harmonic{std::cos(dot(l, x)), std::sin(dot(l, x))};
    if (grid.congruent_zero(l)) return harmonic - 1.0;
    std::vector<std::int64_t> moduli(l.size());
    for (int i = 0; i < grid.dim(); ++i) moduli[static_cast<std::size_t>(i)] = grid.axis_points(i);
    CosetSumEvaluator ev(kernel, moduli, l, tol);
    const TorusPoint origin(std::vector<double>(l.size(), 0.0));
    const double a = ev.eval(origin).value.real();
    return harmonic - ev.eval(x).value / a;
}

StudyResult run_convergence_study(const KernelSpec& kernel, const RateSpec& spec,
                                  const FourierRep& phi, const std::vector<std::int64_t>& n_list,
                                  int grid_points_per_axis, int max_threads) {
    spec.validate();
    if (kernel.is_power_law() && std::abs(kernel.gamma() - spec.gamma) > 1e-12) {
        throw std::invalid_argument("run_convergence_study: kernel gamma differs from the rate spec");
    }
    if (n_list.size() < 2) throw std::invalid_argument("run_convergence_study: need at least two degrees");
    for (std::size_t i = 0; i + 1 < n_list.size(); ++i) {
        if (n_list[i + 1] <= n_list[i] || n_list[i] < 1) {
            throw std::invalid_argument("run_convergence_study: n_list must be increasing and positive");
        }
    }

    const TestFunction f =
        sobolev_instance(kernel, phi, spec.p, /*normalize=*/true, grid_points_per_axis);

    StudyResult result;
    result.rows.resize(n_list.size());
    result.predicted_exponent = rate_exponent(spec);

    const auto worker = [&](std::size_t i) {
        const GridSpec grid(std::vector<std::int64_t>(static_cast<std::size_t>(spec.d), n_list[i]));
        StudyRow row;
        row.n = n_list[i];
        row.measured_error = approximation_error(f, kernel, grid, spec.q, grid_points_per_axis);
        row.theoretical_bound = theoretical_bound(kernel, grid, spec, 1e-12);
        row.bound_exponent = result.predicted_exponent;
        result.rows[i] = row;
    };

    unsigned threads = max_threads > 0 ? static_cast<unsigned>(max_threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n_list.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n_list.size(); ++i) worker(i);
    } else {
        std::size_t next = 0;
        while (next < n_list.size()) {
            std::vector<std::future<void>> batch;
            for (unsigned t = 0; t < threads && next < n_list.size(); ++t, ++next) {
                batch.push_back(std::async(std::launch::async, worker, next));
            }
            for (auto& fut : batch) fut.get();
        }
    }

    // least squares on log-log, smallest n discarded as pre-asymptotic
    // (kept when only two rows exist, otherwise no slope is defined)
    const std::size_t first = result.rows.size() >= 3 ? 1 : 0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t i = first; i < result.rows.size(); ++i) {
        const double e = result.rows[i].measured_error;
        if (!(e > 0.0)) throw std::runtime_error("run_convergence_study: nonpositive error, cannot fit slope");
        const double lx = std::log(static_cast<double>(result.rows[i].n));
        const double ly = std::log(e);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    const double dm = static_cast<double>(m);
    result.fitted_slope = (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
    return result;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string study_csv(const StudyResult& result, const RateSpec& spec) {
    std::string out = "n,q,p,gamma,d,measured_error,theoretical_bound,exponent\n";
    for (const auto& row : result.rows) {
        out += std::to_string(row.n);
        out += ',';
        out += spec.q.str();
        out += ',';
        out += format_double(spec.p);
        out += ',';
        out += format_double(spec.gamma);
        out += ',';
        out += std::to_string(spec.d);
        out += ',';
        out += format_double(row.measured_error);
        out += ',';
        out += format_double(row.theoretical_bound);
        out += ',';
        out += format_double(row.bound_exponent);
        out += '\n';
    }
    return out;
}

}  // namespace sks
