#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "sks/spline.hpp"

using namespace sks;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> knot_samples(const GridSpec& g, const std::function<double(const TorusPoint&)>& f) {
    std::vector<double> s;
    s.reserve(static_cast<std::size_t>(g.size()));
    for (const auto& k : g.enumerate_omega()) s.push_back(f(g.knot(k)));
    return s;
}
}  // namespace

TEST_CASE("fundamental spline Fourier coefficients, d=1 n=2 gamma=2") {
    const auto fs = build_fundamental(KernelSpec::power_law(2.0), GridSpec({2}), 1e-8);
    const auto& rep = fs->fourier();

    CHECK(rep.coeff_at({0}).real() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(rep.coeff_at({0}).imag() == 0.0);

    // coefficient at m is a_m / (N A_{r(m)}) with A_r the one-sided coset sum:
    // A_1 = sum over m = 1 mod 4 of |m|^{-2} = pi^2/8, so c(1) = 2/pi^2, and
    // A_2 = pi^2/16 gives c(2) = 1/pi^2.
    const double a1 = oracle::coset_abs_sum_1d(4, 1, 2.0);
    const double a2 = oracle::coset_abs_sum_1d(4, 2, 2.0);
    CHECK(a1 == doctest::Approx(kPi * kPi / 8.0).epsilon(1e-10));
    CHECK(a2 == doctest::Approx(kPi * kPi / 16.0).epsilon(1e-10));
    CHECK(rep.coeff_at({1}).real() == doctest::Approx(1.0 / (4.0 * a1)).epsilon(1e-10));
    CHECK(rep.coeff_at({1}).real() == doctest::Approx(2.0 / (kPi * kPi)).epsilon(1e-10));
    CHECK(rep.coeff_at({2}).real() == doctest::Approx(1.0 / (kPi * kPi)).epsilon(1e-10));
    // frequencies congruent to 0 mod 2n carry nothing
    CHECK(rep.coeff_at({4}) == std::complex<double>(0.0, 0.0));
    CHECK(rep.is_hermitian(1e-14));
}

TEST_CASE("fundamental spline knot coefficients") {
    for (const auto& [deg, gamma] :
         std::vector<std::pair<std::vector<std::int64_t>, double>>{{{2}, 2.0}, {{3}, 3.0}, {{2, 2}, 3.0}}) {
        const GridSpec g(deg);
        const auto fs = build_fundamental(KernelSpec::power_law(gamma), g, 1e-8);
        const auto& c = fs->coefficients();
        CHECK(c.constant == doctest::Approx(1.0 / static_cast<double>(g.size())).epsilon(1e-15));
        double sum = 0.0;
        for (double v : c.knot_coeffs) sum += v;
        CHECK(std::abs(sum) < 1e-12);
    }
}

TEST_CASE("cardinality at knots") {
    for (const auto& [deg, gamma] : std::vector<std::pair<std::vector<std::int64_t>, double>>{
             {{2}, 2.0}, {{4}, 2.5}, {{1}, 3.0}, {{2, 2}, 2.5}, {{3, 2}, 3.0}}) {
        const GridSpec g(deg);
        const auto fs = build_fundamental(KernelSpec::power_law(gamma), g, 1e-9, 0);
        const auto omega = g.enumerate_omega();
        for (std::size_t i = 0; i < omega.size(); ++i) {
            const double want = i == 0 ? 1.0 : 0.0;
            CHECK(std::abs(fs->eval_direct(g.knot(omega[i])) - want) < 1e-8);
        }
    }
}

TEST_CASE("evaluation is 2pi periodic") {
    const auto fs = build_fundamental(KernelSpec::power_law(3.0), GridSpec({2}), 1e-8);
    const double x = 1.2345;
    CHECK(fs->eval(TorusPoint({x})) ==
          doctest::Approx(fs->eval(TorusPoint({x + 2.0 * kPi}))).epsilon(1e-14));
}

TEST_CASE("fourier path agrees with the direct path") {
    std::mt19937_64 rng(13);
    // d=1, gamma=3: the representation reaches the requested tolerance
    {
        const auto fs = build_fundamental(KernelSpec::power_law(3.0), GridSpec({4}), 1e-8);
        REQUIRE(fs->fourier().truncation_tail <= 1e-8);
        for (int t = 0; t < 100; ++t) {
            const auto x = oracle::random_point(rng, 1);
            CHECK(std::abs(fs->eval_fourier(x) - fs->eval_direct(x)) < 1e-7);
        }
    }
    // d=2 needs fast decay for a materializable representation
    {
        const auto fs = build_fundamental(KernelSpec::power_law(6.0), GridSpec({2, 2}), 1e-8, 1000000);
        REQUIRE(fs->fourier().truncation_tail <= 1e-8);
        for (int t = 0; t < 20; ++t) {
            const auto x = oracle::random_point(rng, 2);
            CHECK(std::abs(fs->eval_fourier(x) - fs->eval_direct(x)) < 1e-7);
        }
    }
}

TEST_CASE("slow decay exhausts the term budget but keeps the direct path exact") {
    const auto fs = build_fundamental(KernelSpec::power_law(2.5), GridSpec({2, 2}), 1e-8, 20000);
    CHECK(fs->fourier().truncation_tail > 1e-8);  // honestly recorded
    const auto omega = fs->grid().enumerate_omega();
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const double want = i == 0 ? 1.0 : 0.0;
        CHECK(std::abs(fs->eval(fs->grid().knot(omega[i])) - want) < 1e-8);
    }
}

TEST_CASE("kernel-translate route matches the rho route") {
    std::mt19937_64 rng(17);
    const auto fs = build_fundamental(KernelSpec::power_law(3.0), GridSpec({2}), 1e-9);
    for (int t = 0; t < 10; ++t) {
        const auto x = oracle::random_point(rng, 1);
        CHECK(fs->eval_kernel_translates(x, 1e-12) ==
              doctest::Approx(fs->eval_direct(x)).epsilon(1e-9));
    }
}

TEST_CASE("singular kernel is reported with the offending index") {
    // compactly supported law that vanishes on every nonzero frequency
    const auto law = [](double t) { return t < 0.5 ? 1.0 : 0.0; };
    const auto tail = [](int, double r) { return r >= 0.5 ? 0.0 : 1.0; };
    const auto k = KernelSpec::custom(law, tail, NormKind::L2);
    CHECK_THROWS_WITH_AS(build_fundamental(k, GridSpec({2}), 1e-8),
                         doctest::Contains("rho_j(0) <= tol"), std::domain_error);
}

TEST_CASE("interpolation reproduces samples at knots") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const auto& [deg, gamma] :
         std::vector<std::pair<std::vector<std::int64_t>, double>>{{{4}, 3.0}, {{2, 2}, 3.0}}) {
        const GridSpec g(deg);
        const auto fs = build_fundamental(KernelSpec::power_law(gamma), g, 1e-9, 0);
        std::vector<double> s(static_cast<std::size_t>(g.size()));
        for (double& v : s) v = u(rng);
        const auto ip = interpolate(fs, s);
        const auto omega = g.enumerate_omega();
        for (std::size_t i = 0; i < omega.size(); ++i) {
            CHECK(std::abs(ip.eval(g.knot(omega[i])) - s[i]) < 1e-8);
        }
    }
}

TEST_CASE("constant samples reproduce the constant everywhere") {
    std::mt19937_64 rng(23);
    const GridSpec g({2, 2});
    const auto fs = build_fundamental(KernelSpec::power_law(3.0), g, 1e-9, 0);
    const auto ip = interpolate(fs, std::vector<double>(static_cast<std::size_t>(g.size()), 1.0));
    for (int t = 0; t < 100; ++t) {
        CHECK(std::abs(ip.eval(oracle::random_point(rng, 2)) - 1.0) < 1e-8);
    }
    // partition of unity through the translate route as well
    const auto fs1 = build_fundamental(KernelSpec::power_law(2.5), GridSpec({2}), 1e-10, 0);
    const auto omega = fs1->grid().enumerate_omega();
    for (int t = 0; t < 10; ++t) {
        const auto x = oracle::random_point(rng, 1);
        double s = 0.0;
        for (const auto& k : omega) s += fs1->eval_direct(x - fs1->grid().knot(k));
        CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("interpolation is linear and zero maps to zero") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const GridSpec g({3});
    const auto fs = build_fundamental(KernelSpec::power_law(3.0), g, 1e-9, 0);
    std::vector<double> s(static_cast<std::size_t>(g.size()));
    for (double& v : s) v = u(rng);
    std::vector<double> s3(s);
    for (double& v : s3) v *= 3.0;
    const auto ip = interpolate(fs, s);
    const auto ip3 = interpolate(fs, s3);
    const auto ip0 = interpolate(fs, std::vector<double>(s.size(), 0.0));
    for (int t = 0; t < 20; ++t) {
        const auto x = oracle::random_point(rng, 1);
        CHECK(ip3.eval(x) == doctest::Approx(3.0 * ip.eval(x)).epsilon(1e-12));
        CHECK(ip0.eval(x) == 0.0);
    }
    CHECK_THROWS_AS(interpolate(fs, std::vector<double>(3, 1.0)), std::invalid_argument);
}

TEST_CASE("single-harmonic samples reproduce the normalized coset sums") {
    // samples cos(l.x_k) -> rho_l(x)/rho_l(0), samples sin(l.x_k) -> sigma_l(x)/rho_l(0)
    std::mt19937_64 rng(31);
    const GridSpec g({4});
    const auto kern = KernelSpec::power_law(3.0);
    const auto fs = build_fundamental(kern, g, 1e-9, 0);
    const MultiIndex l{3};
    const auto cosji = interpolate(fs, knot_samples(g, [&](const TorusPoint& x) {
        return std::cos(dot(l, x));
    }));
    const auto sinji = interpolate(fs, knot_samples(g, [&](const TorusPoint& x) {
        return std::sin(dot(l, x));
    }));
    const double r0 = rho_zero(kern, l, g, 1e-12).value;
    for (int t = 0; t < 64; ++t) {
        const TorusPoint x({2.0 * kPi * t / 64.0});
        const auto rs = rho_sigma_eval(kern, l, x, g, 1e-12);
        CHECK(std::abs(cosji.eval(x) - rs.rho / r0) < 1e-7);
        CHECK(std::abs(sinji.eval(x) - rs.sigma / r0) < 1e-7);
    }
}

TEST_CASE("re-interpolating an interpolant reproduces it") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const GridSpec g({2, 2});
    const auto fs = build_fundamental(KernelSpec::power_law(3.0), g, 1e-9, 0);
    std::vector<double> s(static_cast<std::size_t>(g.size()));
    for (double& v : s) v = u(rng);
    const auto ip = interpolate(fs, s);
    const auto resampled = knot_samples(g, [&](const TorusPoint& x) { return ip.eval(x); });
    const auto ip2 = interpolate(fs, resampled);
    for (int t = 0; t < 50; ++t) {
        const auto x = oracle::random_point(rng, 2);
        CHECK(std::abs(ip2.eval(x) - ip.eval(x)) < 1e-8);
    }
}

TEST_CASE("translate-sum path agrees with the coset path") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const GridSpec g({4});
    const auto fs = build_fundamental(KernelSpec::power_law(3.0), g, 1e-10, 0);
    std::vector<double> s(static_cast<std::size_t>(g.size()));
    for (double& v : s) v = u(rng);
    const auto ip = interpolate(fs, s);
    for (int t = 0; t < 25; ++t) {
        const auto x = oracle::random_point(rng, 1);
        CHECK(ip.eval_translates(x) == doctest::Approx(ip.eval(x)).epsilon(1e-9));
    }
}

TEST_CASE("dense solve: constants and zeros") {
    const GridSpec g({2});
    const auto k = KernelSpec::power_law(3.0);
    const auto ones = solve_linear_system(k, g, std::vector<double>(4, 1.0));
    CHECK(ones.constant == doctest::Approx(1.0).epsilon(1e-10));
    for (double v : ones.knot_coeffs) CHECK(std::abs(v) < 1e-10);
    const auto zero = solve_linear_system(k, g, std::vector<double>(4, 0.0));
    CHECK(std::abs(zero.constant) < 1e-12);
    for (double v : zero.knot_coeffs) CHECK(std::abs(v) < 1e-12);
    CHECK_THROWS_AS(solve_linear_system(k, g, std::vector<double>(3, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(solve_linear_system(k, GridSpec({4096}), std::vector<double>(8192, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("dense solve agrees with the fundamental-spline construction") {
    const GridSpec g({2});
    const auto k = KernelSpec::power_law(3.0);
    const std::vector<double> samples{0.0, 1.0, 0.0, -1.0};
    const auto sc = solve_linear_system(k, g, samples);
    const auto fs = build_fundamental(k, g, 1e-10);
    const auto ip = interpolate(fs, samples);
    std::mt19937_64 rng(43);
    for (int t = 0; t < 20; ++t) {
        const auto x = oracle::random_point(rng, 1);
        CHECK(std::abs(spline_eval(k, g, sc, x) - ip.eval(x)) < 1e-7);
    }
    // and the two coefficient vectors coincide (uniqueness)
    const auto sc2 = ip.spline_coefficients();
    CHECK(sc.constant == doctest::Approx(sc2.constant).epsilon(1e-9));
    for (std::size_t i = 0; i < sc.knot_coeffs.size(); ++i) {
        CHECK(sc.knot_coeffs[i] == doctest::Approx(sc2.knot_coeffs[i]).epsilon(1e-8));
    }
}

TEST_CASE("fourier rep JSON round trip") {
    FourierRep rep(2);
    rep.add({0, 0}, {0.25, 0.0});
    rep.add({1, -2}, {0.125, 0.5});
    rep.add({-1, 2}, {0.125, -0.5});
    rep.finalize();
    rep.truncation_tail = 1.25e-9;
    const RepMeta meta{2, {2, 2}, 3.0, "l2"};
    const auto text = rep_to_json(rep, meta);
    RepMeta back;
    const auto rep2 = rep_from_json(text, &back);
    CHECK(back.d == 2);
    CHECK(back.n == std::vector<std::int64_t>{2, 2});
    CHECK(back.gamma == 3.0);
    CHECK(back.norm == "l2");
    CHECK(rep2.truncation_tail == rep.truncation_tail);
    REQUIRE(rep2.size() == rep.size());
    for (std::size_t i = 0; i < rep.size(); ++i) {
        CHECK(rep2.freq_index(i) == rep.freq_index(i));
        CHECK(rep2.coeff(i) == rep.coeff(i));  // bit-exact round trip
    }
    CHECK(rep2.is_hermitian(1e-15));
}
