#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "sks/lattice_engine.hpp"

using namespace sks;

namespace {
constexpr double kPi = std::numbers::pi;

double bernoulli_cos_series_g2(double x) {
    // sum_{l>=1} cos(lx)/l^2 on [0, 2pi]
    return kPi * kPi / 6.0 - kPi * x / 2.0 + x * x / 4.0;
}
}  // namespace

TEST_CASE("coefficient law") {
    const auto k2 = KernelSpec::power_law(2.0);
    CHECK(k2.coeff({0}) == 0.0);
    CHECK(k2.coeff({1}) == doctest::Approx(1.0));
    CHECK(k2.coeff({3, 4}) == doctest::Approx(1.0 / 25.0));
    const auto kinf = KernelSpec::power_law(2.0, NormKind::LInf);
    CHECK(kinf.coeff({3, 4}) == doctest::Approx(1.0 / 16.0));
    CHECK(kinf.coeff({0, 0}) == 0.0);
}

TEST_CASE("kernel spec validation") {
    CHECK_THROWS_AS(KernelSpec::power_law(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::power_law(2.0, NormKind::L2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::custom([](double) { return 1.0; }, nullptr, NormKind::L2),
                    std::invalid_argument);
    const auto k = KernelSpec::power_law(2.0);
    CHECK_THROWS_AS(k.require_valid_for_dim(2), std::domain_error);  // gamma = d
    CHECK_NOTHROW(k.require_valid_for_dim(1));
}

TEST_CASE("kernel closed forms, d=1 gamma=2") {
    const auto k = KernelSpec::power_law(2.0);
    CHECK(kernel_eval(k, TorusPoint({0.0}), 1e-10) == doctest::Approx(kPi * kPi / 3.0).epsilon(1e-12));
    CHECK(kernel_eval(k, TorusPoint({kPi}), 1e-10) == doctest::Approx(-kPi * kPi / 6.0).epsilon(1e-12));
    CHECK(kernel_eval(k, TorusPoint({kPi / 2.0}), 1e-10) ==
          doctest::Approx(-kPi * kPi / 24.0).epsilon(1e-12));
    for (double x : {0.3, 1.7, 4.4}) {
        CHECK(kernel_eval(k, TorusPoint({x}), 1e-11) ==
              doctest::Approx(2.0 * bernoulli_cos_series_g2(x)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(kernel_eval(k, TorusPoint({0.0}), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel_eval(k, TorusPoint({0.0}), -1.0), std::invalid_argument);
}

TEST_CASE("kernel rejects gamma <= d") {
    CHECK_THROWS_AS(kernel_eval(KernelSpec::power_law(0.5), TorusPoint({0.0}), 1e-8),
                    std::domain_error);
    CHECK_THROWS_AS(kernel_eval(KernelSpec::power_law(2.0), TorusPoint({0.0, 0.0}), 1e-8),
                    std::domain_error);
}

TEST_CASE("theta split agrees with direct box sums") {
    std::mt19937_64 rng(7);
    const auto k1 = KernelSpec::power_law(2.5);
    for (int t = 0; t < 5; ++t) {
        const auto x = oracle::random_point(rng, 1);
        const auto a = coset_fourier_sum(k1, {6}, {2}, x, 1e-13);
        const auto b = coset_fourier_sum_direct(k1, {6}, {2}, x, 1e-9);
        CHECK(std::abs(a.value - b.value) < 1e-8);
    }
    const auto k2 = KernelSpec::power_law(4.5);
    for (int t = 0; t < 3; ++t) {
        const auto x = oracle::random_point(rng, 2);
        const auto a = coset_fourier_sum(k2, {4, 6}, {1, 2}, x, 1e-13);
        const auto b = coset_fourier_sum_direct(k2, {4, 6}, {1, 2}, x, 1e-7);
        CHECK(std::abs(a.value - b.value) < 1e-6);
    }
    // raw (unreduced) offset against a plain partial sum from the test side
    const TorusPoint x({1.234});
    const auto via_engine = coset_fourier_sum(k1, {6}, {2 + 6 * 5}, x, 1e-13);
    const auto brute = oracle::coset_partial_sum({6}, {2 + 6 * 5}, x, 2.5, false, 300000);
    CHECK(std::abs(via_engine.value - brute) < 2e-7);
}

TEST_CASE("certified tail bound dominates partial sums") {
    std::vector<std::int64_t> one{1};
    for (int d : {1, 2, 3}) {
        for (double gamma : {static_cast<double>(d) + 1.01, static_cast<double>(d) + 2.5}) {
            for (NormKind norm : {NormKind::L2, NormKind::LInf}) {
                for (double radius : {1.5, 3.0, 7.2}) {
                    const double bound = power_law_tail_bound(d, gamma, norm, radius);
                    // partial sum over the box; a lower bound on the true tail
                    double partial = 0.0;
                    const std::int64_t B = 40;
                    MultiIndex l(static_cast<std::size_t>(d), -B);
                    while (true) {
                        const double r = index_norm(l, norm);
                        if (r >= radius && r > 0.0) partial += std::pow(r, -gamma);
                        int axis = d - 1;
                        while (axis >= 0) {
                            if (++l[static_cast<std::size_t>(axis)] <= B) break;
                            l[static_cast<std::size_t>(axis)] = -B;
                            --axis;
                        }
                        if (axis < 0) break;
                    }
                    CHECK(bound >= partial);
                }
            }
        }
    }
}

TEST_CASE("rho_zero closed forms, d=1 n=2 gamma=2") {
    const auto k = KernelSpec::power_law(2.0);
    const GridSpec g({2});
    const auto r1 = rho_zero(k, {1}, g, 1e-11);
    CHECK(r1.value == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-12));
    CHECK(r1.tail_bound <= 1e-11);

    // Both congruence families meet at the half frequency j = n, so the sum
    // counts the coset m = 2 mod 4 twice: rho_2(0) = 2 sum_{m = 2 mod 4} m^{-2}
    // = pi^2/8. The independent oracle (1/2)[K(0) + K(pi) - 2K(pi/2)] agrees.
    const auto r2 = rho_zero(k, {2}, g, 1e-11);
    CHECK(r2.value == doctest::Approx(kPi * kPi / 8.0).epsilon(1e-12));
    const double by_definition =
        0.5 * (kernel_eval(k, TorusPoint({0.0}), 1e-12) + kernel_eval(k, TorusPoint({kPi}), 1e-12) -
               2.0 * kernel_eval(k, TorusPoint({kPi / 2.0}), 1e-12));
    CHECK(r2.value == doctest::Approx(by_definition).epsilon(1e-12));

    const auto r3 = rho_zero(k, {3}, g, 1e-11);
    CHECK(r3.value == doctest::Approx(r1.value).epsilon(1e-13));

    // Euler-Maclaurin oracle route
    CHECK(r1.value == doctest::Approx(oracle::rho_zero_1d(4, 1, 2.0)).epsilon(1e-10));
    CHECK(r2.value == doctest::Approx(oracle::rho_zero_1d(4, 2, 2.0)).epsilon(1e-10));

    CHECK_THROWS_AS(rho_zero(k, {4}, g, 1e-10), std::domain_error);  // outside Omega
    CHECK_THROWS_AS(rho_zero(k, {1}, g, 0.0), std::invalid_argument);
}

TEST_CASE("rho_zero positivity") {
    for (const auto& [deg, gamma] : std::vector<std::pair<std::vector<std::int64_t>, double>>{
             {{2}, 2.0}, {{4}, 2.5}, {{2, 2}, 2.5}, {{3, 2}, 3.0}}) {
        const GridSpec g(deg);
        const auto k = KernelSpec::power_law(gamma);
        const auto omega = g.enumerate_omega();
        for (std::size_t i = 1; i < omega.size(); ++i) {
            CHECK(rho_zero(k, omega[i], g, 1e-10).value > 0.0);
        }
    }
}

TEST_CASE("rho/sigma at the origin and on knots") {
    const auto k = KernelSpec::power_law(2.0);
    const GridSpec g({2});
    const auto rs0 = rho_sigma_eval(k, {1}, TorusPoint({0.0}), g, 1e-11);
    CHECK(rs0.sigma == 0.0);
    CHECK(rs0.rho == doctest::Approx(rho_zero(k, {1}, g, 1e-11).value).epsilon(1e-13));

    // rho_j(x_l) = cos(j.x_l) rho_j(0) over all of Omega
    for (const auto& [deg, gamma] :
         std::vector<std::pair<std::vector<std::int64_t>, double>>{{{3}, 2.5}, {{2, 2}, 3.0}}) {
        const GridSpec grid(deg);
        const auto kern = KernelSpec::power_law(gamma);
        const auto omega = grid.enumerate_omega();
        for (std::size_t j = 1; j < omega.size(); ++j) {
            const double r0 = rho_zero(kern, omega[j], grid, 1e-11).value;
            for (const auto& l : omega) {
                const auto x = grid.knot(l);
                const auto rs = rho_sigma_eval(kern, omega[j], x, grid, 1e-11);
                CHECK(rs.rho == doctest::Approx(std::cos(dot(omega[j], x)) * r0).epsilon(1e-10));
            }
        }
    }

    // rho_1(pi/2) = cos(pi/2) rho_1(0) = 0 for d=1, n=2
    const auto rs = rho_sigma_eval(k, {1}, TorusPoint({kPi / 2.0}), g, 1e-11);
    CHECK(std::abs(rs.rho) < 1e-11);
}

TEST_CASE("rho/sigma congruence and sign symmetries") {
    std::mt19937_64 rng(21);
    const auto k = KernelSpec::power_law(2.5);
    const GridSpec g({3});
    const MultiIndex j{2};
    for (int t = 0; t < 50; ++t) {
        const auto x = oracle::random_point(rng, 1);
        const auto base = rho_sigma_eval(k, j, x, g, 1e-11);
        // rho_{2np+j} = rho_j, sigma_{2np+j} = sigma_j
        const auto shifted = rho_sigma_eval(k, g.reduce({2 + 6 * 4}), x, g, 1e-11);
        CHECK(shifted.rho == doctest::Approx(base.rho).epsilon(1e-10));
        CHECK(shifted.sigma == doctest::Approx(base.sigma).epsilon(1e-10));
        // rho_{-j} = rho_j, sigma_{-j} = -sigma_j (residue of -2 is 4)
        const auto negated_idx = rho_sigma_eval(k, g.reduce({-2}), x, g, 1e-11);
        CHECK(negated_idx.rho == doctest::Approx(base.rho).epsilon(1e-10));
        CHECK(negated_idx.sigma == doctest::Approx(-base.sigma).epsilon(1e-10));
    }
    // d=2 case: sigma_{2np-j} = -sigma_j
    const auto k2 = KernelSpec::power_law(3.0);
    const GridSpec g2({2, 2});
    const MultiIndex j2{1, 3};
    for (int t = 0; t < 20; ++t) {
        const auto x = oracle::random_point(rng, 2);
        const auto base = rho_sigma_eval(k2, j2, x, g2, 1e-11);
        const auto mirror = rho_sigma_eval(k2, g2.reduce({4 - 1, 8 - 3}), x, g2, 1e-11);
        CHECK(mirror.rho == doctest::Approx(base.rho).epsilon(1e-10));
        CHECK(mirror.sigma == doctest::Approx(-base.sigma).epsilon(1e-10));
    }
}

TEST_CASE("translation identity rho_l(x - x_j) = rho_l(x) cos(l.x_j) + sigma_l(x) sin(l.x_j)") {
    std::mt19937_64 rng(5);
    const auto k = KernelSpec::power_law(3.0);
    const GridSpec g({2, 2});
    const MultiIndex l{1, 2};
    for (const auto& kj : g.enumerate_omega()) {
        const auto xj = g.knot(kj);
        for (int t = 0; t < 5; ++t) {
            const auto x = oracle::random_point(rng, 2);
            const auto at_shift = rho_sigma_eval(k, l, x - xj, g, 1e-11);
            const auto at_x = rho_sigma_eval(k, l, x, g, 1e-11);
            const double want = at_x.rho * std::cos(dot(l, xj)) + at_x.sigma * std::sin(dot(l, xj));
            CHECK(at_shift.rho == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("definition equivalence: expansion vs (2/N) sum_k cos(j.x_k) K(x - x_k)") {
    std::mt19937_64 rng(3);
    for (const auto& [deg, gamma] : std::vector<std::pair<std::vector<std::int64_t>, double>>{
             {{2}, 2.0}, {{4}, 3.0}, {{2, 2}, 3.5}}) {
        const GridSpec g(deg);
        const auto k = KernelSpec::power_law(gamma);
        const auto omega = g.enumerate_omega();
        const double N = static_cast<double>(g.size());
        const MultiIndex j = omega[1];
        for (int t = 0; t < 3; ++t) {
            const auto x = oracle::random_point(rng, g.dim());
            double srho = 0.0, ssig = 0.0;
            for (const auto& kk : omega) {
                const auto xk = g.knot(kk);
                const double kv = kernel_eval(k, x - xk, 1e-12);
                srho += std::cos(dot(j, xk)) * kv;
                ssig += std::sin(dot(j, xk)) * kv;
            }
            const auto rs = rho_sigma_eval(k, j, x, g, 1e-10);
            CHECK(rs.rho == doctest::Approx(2.0 / N * srho).epsilon(1e-9));
            CHECK(rs.sigma == doctest::Approx(2.0 / N * ssig).epsilon(1e-9));
        }
    }
}

TEST_CASE("monotone-tail hypothesis with the explicit constant") {
    // sum_p a_{2np} <= (2^gamma C_d |1|^gamma / (gamma - d)) a_{2n}
    for (const auto& [deg, gamma] : std::vector<std::pair<std::vector<std::int64_t>, double>>{
             {{2}, 2.0}, {{4}, 2.5}, {{2, 2}, 3.0}, {{3, 3}, 2.5}}) {
        const GridSpec g(deg);
        const int d = g.dim();
        const auto k = KernelSpec::power_law(gamma);
        std::vector<std::int64_t> moduli;
        MultiIndex two_n;
        for (int i = 0; i < d; ++i) {
            moduli.push_back(g.axis_points(i));
            two_n.push_back(g.axis_points(i));
        }
        const MultiIndex zero(static_cast<std::size_t>(d), 0);
        const TorusPoint origin(std::vector<double>(static_cast<std::size_t>(d), 0.0));
        const double lhs = coset_fourier_sum(k, moduli, zero, origin, 1e-12).value.real();
        const double ones_norm = index_norm(MultiIndex(static_cast<std::size_t>(d), 1), k.norm());
        const double c_chain = std::pow(2.0, gamma) * shell_count_constant(d, k.norm()) *
                               std::pow(ones_norm, gamma) / (gamma - static_cast<double>(d));
        CHECK(lhs <= c_chain * k.coeff(two_n));
    }
}

TEST_CASE("custom law with a tail callback") {
    // truncated law: a(t) = e^{-t} below 20, zero beyond; tail bound from the
    // 1-D geometric series per shell
    const auto law = [](double t) { return t < 20.0 ? std::exp(-t) : 0.0; };
    const auto tail = [](int d, double r) {
        if (r >= 20.0) return 0.0;
        const double cd = shell_count_constant(d, NormKind::L2) * std::pow(2.0, d - 1);
        double s = 0.0;
        for (double m = std::max(1.0, std::floor(r)); m < 21.0; ++m) {
            s += cd * std::pow(m, d - 1.0) * std::exp(-(m - 1.0));
        }
        return s;
    };
    const auto k = KernelSpec::custom(law, tail, NormKind::L2, 1e-10);
    // d=1 exact value: 2 sum_{1<=m<20} e^{-m} e^{imx}|cos part
    const double x = 0.9;
    double want = 0.0;
    for (int m = 1; m < 20; ++m) want += 2.0 * std::exp(-m) * std::cos(m * x);
    const double got = kernel_eval(k, TorusPoint({x}), 1e-9) - law(0.0);
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("direct backend reports budget exhaustion") {
    const auto k = KernelSpec::power_law(2.5, NormKind::LInf);  // no theta path in d=2
    const GridSpec g({2, 2});
    CHECK_THROWS_AS(rho_zero(k, {1, 0}, g, 1e-12), std::runtime_error);
}

TEST_CASE("linf norm in d=2 through the direct backend") {
    const auto k = KernelSpec::power_law(5.0, NormKind::LInf);
    const GridSpec g({2, 2});
    const auto r = rho_zero(k, {1, 2}, g, 1e-8);
    CHECK(r.tail_bound <= 1e-8);
    // oracle: brute partial sum of both families
    const TorusPoint origin({0.0, 0.0});
    const auto a = oracle::coset_partial_sum({4, 4}, {1, 2}, origin, 5.0, true, 400);
    const auto b = oracle::coset_partial_sum({4, 4}, {-1, -2}, origin, 5.0, true, 400);
    CHECK(r.value == doctest::Approx(a.real() + b.real()).epsilon(1e-8));
}
