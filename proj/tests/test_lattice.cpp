#include <complex>
#include <numbers>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "sks/lattice_sums.hpp"
#include "sks/multi_index.hpp"

using namespace sks;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("omega enumeration") {
    const GridSpec g1({1});
    const auto o1 = g1.enumerate_omega();
    REQUIRE(o1.size() == 2);
    CHECK(o1[0] == MultiIndex{0});
    CHECK(o1[1] == MultiIndex{1});
    CHECK(g1.size() == 2);

    const GridSpec g2({2, 1});
    const auto o2 = g2.enumerate_omega();
    REQUIRE(o2.size() == 8);
    CHECK(g2.size() == 8);
    CHECK(o2.front() == MultiIndex{0, 0});
    CHECK(o2[1] == MultiIndex{0, 1});  // last axis fastest = lexicographic
    CHECK(o2.back() == MultiIndex{3, 1});
    for (std::size_t i = 0; i < o2.size(); ++i) CHECK(g2.index_of(o2[i]) == i);

    const GridSpec g3({2, 2, 2});
    CHECK(g3.size() == 64);
    CHECK(g3.enumerate_omega().size() == 64);
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(GridSpec({0}), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec({2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec({}), std::invalid_argument);
    CHECK_NOTHROW(GridSpec({1}));  // degenerate n_l = 1 is allowed
}

TEST_CASE("knots") {
    const GridSpec g({2});
    CHECK(g.knot({0}).coords[0] == doctest::Approx(0.0));
    CHECK(g.knot({1}).coords[0] == doctest::Approx(kPi / 2.0));
    CHECK_THROWS_AS(g.knot({4}), std::domain_error);
    CHECK_THROWS_AS(g.knot({-1}), std::domain_error);

    const GridSpec g22({2, 2});
    const auto p = g22.knot({3, 1});
    CHECK(p.coords[0] == doctest::Approx(3.0 * kPi / 2.0));
    CHECK(p.coords[1] == doctest::Approx(kPi / 2.0));
}

TEST_CASE("knots are pairwise distinct") {
    for (const auto& deg : std::vector<std::vector<std::int64_t>>{{3}, {2, 2}, {2, 1}}) {
        const GridSpec g(deg);
        std::set<std::vector<double>> seen;
        for (const auto& k : g.enumerate_omega()) seen.insert(g.knot(k).coords);
        CHECK(seen.size() == static_cast<std::size_t>(g.size()));
    }
}

TEST_CASE("residue reduction") {
    const GridSpec g({2});
    CHECK(g.reduce({5}) == MultiIndex{1});
    CHECK(g.reduce({-1}) == MultiIndex{3});
    CHECK(g.congruent_zero({8}));
    CHECK(g.congruent_zero({0}));
    CHECK(!g.congruent_zero({2}));
}

TEST_CASE("exponential lattice sum examples") {
    const GridSpec g({2});
    CHECK(exp_lattice_sum({0}, g) == std::complex<double>(4.0, 0.0));
    CHECK(exp_lattice_sum({4}, g) == std::complex<double>(4.0, 0.0));
    CHECK(exp_lattice_sum({1}, g) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("product sum examples") {
    const GridSpec g({2});
    CHECK(cos_cos_lattice_sum({1}, {1}, g) == doctest::Approx(2.0));  // N/2
    CHECK(cos_cos_lattice_sum({2}, {2}, g) == doctest::Approx(4.0));  // both congruences
    CHECK(cos_cos_lattice_sum({1}, {2}, g) == doctest::Approx(0.0));
}

TEST_CASE("closed forms match brute force over a frequency box") {
    for (const auto& deg : std::vector<std::vector<std::int64_t>>{{1}, {2}, {3}, {2, 1}, {2, 3}}) {
        const GridSpec g(deg);
        const double N = static_cast<double>(g.size());
        const std::int64_t B = 4 * *std::max_element(deg.begin(), deg.end());
        MultiIndex l(deg.size(), -B), j(deg.size(), 0);
        std::mt19937_64 rng(11);
        std::uniform_int_distribution<std::int64_t> pick(-B, B);
        // exhaustive in l, randomized in j
        while (true) {
            for (auto& v : j) v = pick(rng);
            CHECK(std::abs(exp_lattice_sum(l, g) - exp_lattice_sum_numeric(l, g)) <= 1e-9 * N);
            CHECK(std::abs(cos_lattice_sum(l, g) - cos_lattice_sum_numeric(l, g)) <= 1e-9 * N);
            CHECK(std::abs(sin_lattice_sum_numeric(l, g)) <= 1e-9 * N);
            CHECK(std::abs(cos_cos_lattice_sum(j, l, g) - cos_cos_lattice_sum_numeric(j, l, g)) <=
                  1e-9 * N);
            CHECK(std::abs(sin_sin_lattice_sum(j, l, g) - sin_sin_lattice_sum_numeric(j, l, g)) <=
                  1e-9 * N);
            CHECK(std::abs(cos_sin_lattice_sum_numeric(j, l, g)) <= 1e-9 * N);
            int axis = static_cast<int>(deg.size()) - 1;
            while (axis >= 0) {
                if (++l[static_cast<std::size_t>(axis)] <= B) break;
                l[static_cast<std::size_t>(axis)] = -B;
                --axis;
            }
            if (axis < 0) break;
        }
    }
}

TEST_CASE("torus point canonicalization") {
    const TorusPoint p({-kPi / 2.0, 5.0 * kPi});
    CHECK(p.coords[0] == doctest::Approx(3.0 * kPi / 2.0));
    CHECK(p.coords[1] == doctest::Approx(kPi));
    CHECK(TorusPoint({0.0, 0.0}).is_origin());
    CHECK_THROWS_AS(TorusPoint(std::vector<double>{}), std::invalid_argument);

    // subtraction wraps
    const TorusPoint a({0.5}), b({1.0});
    CHECK((a - b).coords[0] == doctest::Approx(2.0 * kPi - 0.5));
}
