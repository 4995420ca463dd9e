#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sks/approx.hpp"
#include "sks/lattice_sums.hpp"
#include "sks/spline.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

struct CliError {
    int code;
    std::string message;
};

double parse_scalar(std::string s) {
    // plain decimal numbers plus the forms pi, -pi, <num>pi, pi/<num>
    auto strip = [](std::string& t) {
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    };
    strip(s);
    if (s.empty()) throw CliError{kExitUsage, "empty numeric token"};
    const auto to_num = [](const std::string& t) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &pos);
        } catch (const std::exception&) {
            throw CliError{kExitUsage, "cannot parse number '" + t + "'"};
        }
        if (pos != t.size()) throw CliError{kExitUsage, "cannot parse number '" + t + "'"};
        return v;
    };
    if (s == "pi" || s == "+pi") return std::numbers::pi;
    if (s == "-pi") return -std::numbers::pi;
    if (s.size() > 3 && s.rfind("pi/", 0) == 0) return std::numbers::pi / to_num(s.substr(3));
    if (s.size() > 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        return std::numbers::pi * to_num(s.substr(0, s.size() - 2));
    }
    return to_num(s);
}

std::vector<double> parse_scalar_list(const std::string& s, char sep) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        if (!tok.empty()) out.push_back(parse_scalar(tok));
    }
    return out;
}

std::vector<std::int64_t> expand_degrees(const std::vector<std::int64_t>& n, int d) {
    if (n.empty()) throw CliError{kExitUsage, "degree vector n is required"};
    if (static_cast<int>(n.size()) == 1) return std::vector<std::int64_t>(static_cast<std::size_t>(d), n[0]);
    if (static_cast<int>(n.size()) != d) {
        throw CliError{kExitUsage, "n must have 1 or d entries"};
    }
    return n;
}

void check_dim(int d) {
    if (d < 1 || d > 4) throw CliError{kExitUsage, "d must lie in [1, 4]"};
}

void check_finite(double v, const std::string& name) {
    if (!std::isfinite(v)) throw CliError{kExitUsage, name + " must be finite"};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{kExitIo, "cannot open '" + path + "' for writing"};
    out << content;
    out.flush();
    if (!out) throw CliError{kExitIo, "write to '" + path + "' failed"};
}

int thread_cap() {
    const char* env = std::getenv("SKSPLINE_THREADS");
    if (!env) return 0;  // auto
    try {
        return std::max(0, std::stoi(env));
    } catch (const std::exception&) {
        return 0;
    }
}

sks::FourierRep phi_from_json(const nlohmann::json& terms, int d) {
    sks::FourierRep phi(d);
    if (!terms.is_array() || terms.empty()) {
        throw CliError{kExitUsage, "phi must be a non-empty array of [freq..., re, im] terms"};
    }
    for (const auto& t : terms) {
        if (!t.is_array() || static_cast<int>(t.size()) != d + 2) {
            throw CliError{kExitUsage, "each phi term needs d frequency entries plus re and im"};
        }
        sks::MultiIndex m(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i)].get<std::int64_t>();
        phi.add(m, {t[static_cast<std::size_t>(d)].get<double>(), t[static_cast<std::size_t>(d) + 1].get<double>()});
    }
    phi.finalize();
    return phi;
}

// ---------------------------------------------------------------------------

int cmd_kernel(int d, double gamma, const std::string& norm, const std::string& points,
               int count, double tol, const std::string& out_path) {
    check_dim(d);
    check_finite(gamma, "gamma");
    check_finite(tol, "tol");
    if (tol <= 0.0) throw CliError{kExitUsage, "tol must be positive"};
    if (gamma <= static_cast<double>(d)) throw CliError{kExitUsage, "gamma must exceed d"};
    const auto kernel = sks::KernelSpec::power_law(gamma, sks::norm_from_name(norm));

    std::vector<double> xs;
    if (!points.empty()) {
        xs = parse_scalar_list(points, ',');
    } else {
        const int m = count > 0 ? count : 17;
        for (int i = 0; i < m; ++i) xs.push_back(2.0 * std::numbers::pi * i / m);
    }

    std::string table = "x,K\n";
    for (double x : xs) {
        std::vector<double> coords(static_cast<std::size_t>(d), 0.0);
        coords[0] = x;
        const double v = sks::kernel_eval(kernel, sks::TorusPoint(coords), tol);
        table += sks::format_double(x);
        table += ',';
        table += sks::format_double(v);
        table += '\n';
    }
    if (out_path.empty()) {
        std::cout << table;
    } else {
        write_file(out_path, table);
    }
    return 0;
}

int cmd_fundamental(int d, std::vector<std::int64_t> n, double gamma, const std::string& norm,
                    double tol, std::size_t budget, const std::string& out_path) {
    check_dim(d);
    check_finite(gamma, "gamma");
    check_finite(tol, "tol");
    if (tol <= 0.0) throw CliError{kExitUsage, "tol must be positive"};
    if (gamma <= static_cast<double>(d)) throw CliError{kExitUsage, "gamma must exceed d"};
    for (std::int64_t v : n) {
        if (v < 1) throw CliError{kExitUsage, "every degree n_l must be >= 1"};
    }
    const auto degrees = expand_degrees(n, d);
    const sks::GridSpec grid(degrees);
    const auto kernel = sks::KernelSpec::power_law(gamma, sks::norm_from_name(norm));
    const auto fs = sks::build_fundamental(kernel, grid, tol, budget);

    double dev = 0.0;
    const auto omega = grid.enumerate_omega();
    for (std::size_t k = 0; k < omega.size(); ++k) {
        const double want = k == 0 ? 1.0 : 0.0;
        dev = std::max(dev, std::abs(fs->eval_direct(grid.knot(omega[k])) - want));
    }

    sks::RepMeta meta{d, degrees, gamma, norm};
    if (!out_path.empty()) write_file(out_path, sks::rep_to_json(fs->fourier(), meta));
    std::cout << "cardinality_max_deviation=" << sks::format_double(dev) << "\n";
    std::cout << "fourier_terms=" << fs->fourier().size()
              << " truncation_tail=" << sks::format_double(fs->fourier().truncation_tail) << "\n";
    return 0;
}

int cmd_interpolate(int d, std::vector<std::int64_t> n, double gamma, const std::string& norm,
                    double tol, const std::string& samples_path, const std::string& points,
                    int grid_pts, const std::string& out_path, const std::string& dump_spline,
                    const std::string& dump_coeffs) {
    check_dim(d);
    check_finite(gamma, "gamma");
    if (tol <= 0.0 || !std::isfinite(tol)) throw CliError{kExitUsage, "tol must be positive"};
    if (gamma <= static_cast<double>(d)) throw CliError{kExitUsage, "gamma must exceed d"};
    const auto degrees = expand_degrees(n, d);
    const sks::GridSpec grid(degrees);
    const auto kernel = sks::KernelSpec::power_law(gamma, sks::norm_from_name(norm));

    std::ifstream in(samples_path);
    if (!in) throw CliError{kExitIo, "cannot read samples file '" + samples_path + "'"};
    nlohmann::json sj;
    try {
        in >> sj;
    } catch (const std::exception& e) {
        throw CliError{kExitUsage, std::string("samples file is not valid JSON: ") + e.what()};
    }
    if (!sj.is_array() || static_cast<std::int64_t>(sj.size()) != grid.size()) {
        throw CliError{kExitUsage, "samples must be a JSON array of length N = " + std::to_string(grid.size())};
    }
    std::vector<double> samples;
    samples.reserve(sj.size());
    for (const auto& v : sj) samples.push_back(v.get<double>());

    const auto fs = sks::build_fundamental(kernel, grid, tol);
    const auto ip = sks::interpolate(fs, samples);

    if (!dump_coeffs.empty()) {
        const auto sc = ip.spline_coefficients();
        nlohmann::json j;
        j["d"] = d;
        j["n"] = degrees;
        j["gamma"] = gamma;
        j["norm"] = norm;
        j["constant"] = sc.constant;
        j["knot_coeffs"] = sc.knot_coeffs;
        write_file(dump_coeffs, j.dump());
    }
    if (!dump_spline.empty()) {
        // interpolant coefficients: fundamental terms scaled by the samples' DFT
        std::vector<std::complex<double>> cs(samples.begin(), samples.end());
        const auto dft = sks::knot_dft(grid, cs);
        sks::FourierRep rep(d);
        const auto& base = fs->fourier();
        double dmax = 0.0;
        for (const auto& c : dft) dmax = std::max(dmax, std::abs(c));
        for (std::size_t i = 0; i < base.size(); ++i) {
            const auto m = base.freq_index(i);
            rep.add(m, base.coeff(i) * dft[grid.index_of(grid.reduce(m))]);
        }
        rep.finalize();
        rep.truncation_tail = base.truncation_tail * dmax;
        sks::RepMeta meta{d, degrees, gamma, norm};
        write_file(dump_spline, sks::rep_to_json(rep, meta));
    }

    std::string table = "";
    const auto emit = [&](const sks::TorusPoint& x) {
        for (int i = 0; i < d; ++i) {
            table += sks::format_double(x.coords[static_cast<std::size_t>(i)]);
            table += ',';
        }
        table += sks::format_double(ip.eval(x));
        table += '\n';
    };
    if (!points.empty()) {
        std::stringstream ss(points);
        std::string tok;
        while (std::getline(ss, tok, ';')) {
            if (tok.empty()) continue;
            const auto coords = parse_scalar_list(tok, ',');
            if (static_cast<int>(coords.size()) != d) {
                throw CliError{kExitUsage, "each point needs d coordinates"};
            }
            emit(sks::TorusPoint(coords));
        }
    } else if (grid_pts > 0) {
        std::vector<int> idx(static_cast<std::size_t>(d), 0);
        while (true) {
            std::vector<double> coords(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) {
                coords[static_cast<std::size_t>(i)] =
                    2.0 * std::numbers::pi * idx[static_cast<std::size_t>(i)] / grid_pts;
            }
            emit(sks::TorusPoint(coords));
            int axis = d - 1;
            while (axis >= 0) {
                if (++idx[static_cast<std::size_t>(axis)] < grid_pts) break;
                idx[static_cast<std::size_t>(axis)] = 0;
                --axis;
            }
            if (axis < 0) break;
        }
    }
    if (!table.empty()) {
        std::string with_header = "x";
        for (int i = 1; i < d; ++i) with_header += ",x" + std::to_string(i + 1);
        with_header += ",value\n" + table;
        if (out_path.empty()) {
            std::cout << with_header;
        } else {
            write_file(out_path, with_header);
        }
    }
    return 0;
}

struct StudyConfig {
    int d = 1;
    double gamma = 3.0;
    std::string norm = "l2";
    double p = 1.0;
    std::string q = "2";
    std::vector<std::int64_t> n_list;
    int M = 0;
    nlohmann::json phi;
    std::string output;
    double tol = 1e-8;
    int seed = 0;
};

int cmd_study(StudyConfig cfg) {
    check_dim(cfg.d);
    check_finite(cfg.gamma, "gamma");
    check_finite(cfg.p, "p");
    if (cfg.gamma <= static_cast<double>(cfg.d)) throw CliError{kExitUsage, "gamma must exceed d"};
    if (cfg.n_list.empty()) throw CliError{kExitUsage, "n_list is required"};
    if (cfg.output.empty()) throw CliError{kExitUsage, "--out is required"};

    sks::LpExponent q = sks::LpExponent::inf();
    if (cfg.q != "inf") {
        const double qv = parse_scalar(cfg.q);
        check_finite(qv, "q");
        q = sks::LpExponent::finite(qv);
    }
    sks::RateSpec spec;
    spec.p = cfg.p;
    spec.q = q;
    spec.gamma = cfg.gamma;
    spec.d = cfg.d;
    try {
        spec.validate();
    } catch (const std::domain_error& e) {
        throw CliError{kExitUsage, std::string(e.what()) +
                                       " (the rate theorem requires 1 <= p <= 2 <= q <= inf with 1/p - 1/q >= 1/2)"};
    }

    if (cfg.M <= 0) {
        std::int64_t nmax = 0;
        for (std::int64_t v : cfg.n_list) nmax = std::max(nmax, v);
        cfg.M = static_cast<int>(16 * nmax);
    }

    const auto kernel = sks::KernelSpec::power_law(cfg.gamma, sks::norm_from_name(cfg.norm));
    const auto phi = phi_from_json(cfg.phi, cfg.d);
    const auto result =
        sks::run_convergence_study(kernel, spec, phi, cfg.n_list, cfg.M, thread_cap());

    write_file(cfg.output, sks::study_csv(result, spec));
    std::cout << "fitted_slope=" << sks::format_double(result.fitted_slope)
              << " predicted_exponent=" << sks::format_double(result.predicted_exponent) << "\n";
    return 0;
}

int cmd_selfcheck(unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
    int failures = 0;
    const auto report = [&](const std::string& name, bool ok, double detail) {
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << " (" << sks::format_double(detail)
                  << ")\n";
        if (!ok) ++failures;
    };
    const auto rand_point = [&](int d) {
        std::vector<double> c(static_cast<std::size_t>(d));
        for (double& v : c) v = unif(rng);
        return sks::TorusPoint(c);
    };

    {
        double worst = 0.0;
        const sks::GridSpec g({2, 1});
        std::uniform_int_distribution<std::int64_t> li(-8, 8);
        for (int t = 0; t < 50; ++t) {
            const sks::MultiIndex l{li(rng), li(rng)};
            worst = std::max(worst, std::abs(sks::exp_lattice_sum(l, g) -
                                             sks::exp_lattice_sum_numeric(l, g)));
        }
        report("lattice-sums closed vs numeric", worst < 1e-9 * static_cast<double>(g.size()), worst);
    }
    {
        const auto k1 = sks::KernelSpec::power_law(2.5);
        const auto x = rand_point(1);
        const auto a = sks::coset_fourier_sum(k1, {4}, {1}, x, 1e-12);
        const auto b = sks::coset_fourier_sum_direct(k1, {4}, {1}, x, 1e-9);
        const double d1 = std::abs(a.value - b.value);
        const auto k2 = sks::KernelSpec::power_law(4.5);
        const auto x2 = rand_point(2);
        const auto a2 = sks::coset_fourier_sum(k2, {4, 6}, {1, 2}, x2, 1e-12);
        const auto b2 = sks::coset_fourier_sum_direct(k2, {4, 6}, {1, 2}, x2, 1e-8);
        const double d2 = std::abs(a2.value - b2.value);
        report("theta split vs direct box sums", d1 < 1e-8 && d2 < 1e-7, std::max(d1, d2));
    }
    {
        const auto k = sks::KernelSpec::power_law(2.0);
        const sks::GridSpec g({2});
        const double pi2 = std::numbers::pi * std::numbers::pi;
        const double r1 = sks::rho_zero(k, {1}, g, 1e-12).value;
        const double r2 = sks::rho_zero(k, {2}, g, 1e-12).value;
        const double err = std::max(std::abs(r1 - pi2 / 4.0), std::abs(r2 - pi2 / 8.0));
        report("rho_j(0) closed forms", err < 1e-10, err);
    }
    {
        double dev = 0.0;
        for (const auto& [deg, gamma] :
             std::vector<std::pair<std::vector<std::int64_t>, double>>{{{3}, 2.5}, {{2, 2}, 3.0}}) {
            const sks::GridSpec g(deg);
            const auto fs = sks::build_fundamental(sks::KernelSpec::power_law(gamma), g, 1e-9, 0);
            const auto omega = g.enumerate_omega();
            for (std::size_t i = 0; i < omega.size(); ++i) {
                const double want = i == 0 ? 1.0 : 0.0;
                dev = std::max(dev, std::abs(fs->eval_direct(g.knot(omega[i])) - want));
            }
        }
        report("fundamental spline cardinality", dev < 1e-8, dev);
    }
    {
        const sks::GridSpec g({2, 2});
        const auto fs = sks::build_fundamental(sks::KernelSpec::power_law(3.0), g, 1e-9, 0);
        const auto ones = std::vector<double>(static_cast<std::size_t>(g.size()), 1.0);
        const auto ip = sks::interpolate(fs, ones);
        double dev = 0.0;
        for (int t = 0; t < 20; ++t) dev = std::max(dev, std::abs(ip.eval(rand_point(2)) - 1.0));
        report("partition of unity", dev < 1e-8, dev);
    }
    {
        const sks::GridSpec g({2});
        const auto kernel = sks::KernelSpec::power_law(3.0);
        const auto fs = sks::build_fundamental(kernel, g, 1e-10);
        std::vector<double> samples(static_cast<std::size_t>(g.size()));
        for (double& v : samples) v = unif(rng) - std::numbers::pi;
        const auto ip = sks::interpolate(fs, samples);
        const auto sc = sks::solve_linear_system(kernel, g, samples);
        double dev = 0.0;
        for (int t = 0; t < 10; ++t) {
            const auto x = rand_point(1);
            dev = std::max(dev, std::abs(ip.eval_translates(x) - sks::spline_eval(kernel, g, sc, x)));
        }
        report("translate sum vs dense solve", dev < 1e-7, dev);
    }
    {
        const sks::GridSpec g({2});
        const auto kernel = sks::KernelSpec::power_law(3.0);
        double worst = 0.0;
        for (std::int64_t l = -8; l <= 8; ++l) {
            for (int t = 0; t < 10; ++t) {
                worst = std::max(worst,
                                 std::abs(sks::theta_deviation(kernel, g, {l}, rand_point(1), 1e-10)));
            }
        }
        report("harmonic deviation bound", worst <= 4.0 + 1e-6, worst);
    }

    if (failures > 0) {
        std::cout << failures << " check(s) failed\n";
        return kExitNumerical;
    }
    std::cout << "all checks passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sk-spline interpolation on the d-torus"};
    app.require_subcommand(1);

    // kernel
    auto* sk = app.add_subcommand("kernel", "evaluate the kernel on a 1-D slice");
    int k_d = 1;
    double k_gamma = 2.0, k_tol = 1e-10;
    std::string k_norm = "l2", k_points, k_out;
    int k_count = 0;
    sk->add_option("--d", k_d, "torus dimension");
    sk->add_option("--gamma", k_gamma, "decay exponent (> d)");
    sk->add_option("--norm", k_norm, "frequency norm: l2 or linf");
    sk->add_option("--points", k_points, "comma-separated positions (pi literals allowed)");
    sk->add_option("--count", k_count, "number of equispaced slice points");
    sk->add_option("--tol", k_tol, "certified evaluation tolerance");
    sk->add_option("--out", k_out, "output CSV path (stdout when omitted)");

    // fundamental
    auto* sf = app.add_subcommand("fundamental", "build the fundamental spline, dump JSON");
    int f_d = 1;
    double f_gamma = 3.0, f_tol = 1e-8;
    std::string f_norm = "l2", f_out;
    std::vector<std::int64_t> f_n;
    std::size_t f_budget = 200000;
    sf->add_option("--d", f_d, "torus dimension");
    sf->add_option("--n", f_n, "degree vector (1 or d entries)")->delimiter(',');
    sf->add_option("--gamma", f_gamma, "decay exponent (> d)");
    sf->add_option("--norm", f_norm, "frequency norm: l2 or linf");
    sf->add_option("--tol", f_tol, "build tolerance");
    sf->add_option("--budget", f_budget, "Fourier term budget");
    sf->add_option("--out", f_out, "spline JSON path");

    // interpolate
    auto* si = app.add_subcommand("interpolate", "interpolate samples given on the knot lattice");
    int i_d = 1, i_grid = 0;
    double i_gamma = 3.0, i_tol = 1e-8;
    std::string i_norm = "l2", i_samples, i_points, i_out, i_dump_spline, i_dump_coeffs;
    std::vector<std::int64_t> i_n;
    si->add_option("--d", i_d, "torus dimension");
    si->add_option("--n", i_n, "degree vector (1 or d entries)")->delimiter(',');
    si->add_option("--gamma", i_gamma, "decay exponent (> d)");
    si->add_option("--norm", i_norm, "frequency norm: l2 or linf");
    si->add_option("--tol", i_tol, "build tolerance");
    si->add_option("--samples", i_samples, "JSON array of N samples in Omega order")->required();
    si->add_option("--points", i_points, "evaluation points 'x1,..,xd;y1,..'");
    si->add_option("--grid", i_grid, "evaluate on an M^d grid");
    si->add_option("--out", i_out, "output CSV path (stdout when omitted)");
    si->add_option("--dump-spline", i_dump_spline, "write the interpolant's Fourier JSON here");
    si->add_option("--dump-coeffs", i_dump_coeffs, "write constant + knot coefficients JSON here");

    // study
    auto* ss = app.add_subcommand("study", "run a convergence study, emit CSV");
    std::string s_config, s_q, s_norm, s_phi, s_out;
    int s_d = 0, s_M = 0, s_seed = -1;
    double s_gamma = 0.0, s_p = 0.0, s_tol = 0.0;
    std::vector<std::int64_t> s_nlist;
    ss->add_option("--config", s_config, "JSON config file");
    ss->add_option("--d", s_d, "torus dimension");
    ss->add_option("--gamma", s_gamma, "decay exponent (> d)");
    ss->add_option("--norm", s_norm, "frequency norm: l2 or linf");
    ss->add_option("--p", s_p, "source Lebesgue exponent in [1,2]");
    ss->add_option("--q", s_q, "target Lebesgue exponent in [2,inf], 'inf' allowed");
    ss->add_option("--n-list", s_nlist, "increasing degrees")->delimiter(',');
    ss->add_option("--M", s_M, "quadrature points per axis");
    ss->add_option("--phi", s_phi, "phi terms as JSON [[freq...,re,im],...]");
    ss->add_option("--out", s_out, "output CSV path");
    ss->add_option("--seed", s_seed, "random seed (reserved for self-checks)");
    ss->add_option("--tol", s_tol, "build tolerance");

    // selfcheck
    auto* sc = app.add_subcommand("selfcheck", "run the invariant suite");
    unsigned c_seed = 0;
    sc->add_option("--seed", c_seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (sk->parsed()) return cmd_kernel(k_d, k_gamma, k_norm, k_points, k_count, k_tol, k_out);
        if (sf->parsed()) return cmd_fundamental(f_d, f_n, f_gamma, f_norm, f_tol, f_budget, f_out);
        if (si->parsed()) {
            return cmd_interpolate(i_d, i_n, i_gamma, i_norm, i_tol, i_samples, i_points, i_grid,
                                   i_out, i_dump_spline, i_dump_coeffs);
        }
        if (ss->parsed()) {
            StudyConfig cfg;
            if (!s_config.empty()) {
                std::ifstream in(s_config);
                if (!in) throw CliError{kExitIo, "cannot read config '" + s_config + "'"};
                nlohmann::json j;
                try {
                    in >> j;
                } catch (const std::exception& e) {
                    throw CliError{kExitUsage, std::string("config is not valid JSON: ") + e.what()};
                }
                cfg.d = j.value("d", cfg.d);
                cfg.gamma = j.value("gamma", cfg.gamma);
                cfg.norm = j.value("norm", cfg.norm);
                cfg.p = j.value("p", cfg.p);
                if (j.contains("q")) {
                    cfg.q = j["q"].is_string() ? j["q"].get<std::string>()
                                               : sks::format_double(j["q"].get<double>());
                }
                cfg.n_list = j.value("n_list", cfg.n_list);
                cfg.M = j.value("M", cfg.M);
                if (j.contains("phi")) cfg.phi = j["phi"];
                cfg.output = j.value("output", cfg.output);
                cfg.tol = j.value("tol", cfg.tol);
                cfg.seed = j.value("seed", cfg.seed);
            }
            // flags override file values
            if (s_d > 0) cfg.d = s_d;
            if (s_gamma > 0.0) cfg.gamma = s_gamma;
            if (!s_norm.empty()) cfg.norm = s_norm;
            if (s_p > 0.0) cfg.p = s_p;
            if (!s_q.empty()) cfg.q = s_q;
            if (!s_nlist.empty()) cfg.n_list = s_nlist;
            if (s_M > 0) cfg.M = s_M;
            if (!s_phi.empty()) {
                try {
                    cfg.phi = nlohmann::json::parse(s_phi);
                } catch (const std::exception& e) {
                    throw CliError{kExitUsage, std::string("--phi is not valid JSON: ") + e.what()};
                }
            }
            if (!s_out.empty()) cfg.output = s_out;
            if (s_tol > 0.0) cfg.tol = s_tol;
            if (s_seed >= 0) cfg.seed = s_seed;
            return cmd_study(std::move(cfg));
        }
        if (sc->parsed()) return cmd_selfcheck(c_seed);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
