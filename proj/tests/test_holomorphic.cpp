#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "exvort/holomorphic.hpp"

using namespace exvort;
using Catch::Approx;

namespace {
Poly random_poly(std::mt19937& rng, int max_deg) {
    std::uniform_int_distribution<int> deg(1, max_deg);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::vector<Complex> c(deg(rng) + 1);
    for (auto& x : c) x = Complex(coef(rng), coef(rng));
    if (std::abs(c.back()) < 0.1) c.back() += Complex(1.0);
    return Poly(std::move(c));
}
}  // namespace

TEST_CASE("evaluation of z^beta P/Q", "[holomorphic]") {
    const HoloMap sq = HoloMap::polynomial({0.0, 0.0, 1.0});  // z^2
    CHECK(std::abs(sq.eval({3.0, 0.0}) - Complex(9.0)) < 1e-14);

    const HoloMap pow2(Poly::one(), Poly::one(), 2.0);  // z^2 via prefactor
    CHECK(std::abs(pow2.eval({0.5, 0.0}) - Complex(0.25)) < 1e-15);

    const HoloMap half(Poly::one(), Poly::one(), 0.5);
    CHECK(std::abs(half.eval({0.25, 0.0}) - Complex(0.5)) < 1e-15);
}

TEST_CASE("Blaschke products are unimodular on the circle", "[holomorphic]") {
    const HoloMap b = HoloMap::blaschke({{0.0, 0.0}, {0.5, 0.0}});
    for (int k = 0; k < 32; ++k) {
        const Complex z = std::polar(1.0, 0.19 + k * 0.196);
        CHECK(std::abs(b.eval(z)) == Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(HoloMap::blaschke({{1.5, 0.0}}), InvalidInputError);
}

TEST_CASE("Blaschke products close under multiplication", "[holomorphic]") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> in_disk(-0.6, 0.6);
    const BlaschkeProduct a(std::vector<Complex>{
        {in_disk(rng), in_disk(rng)}, {in_disk(rng), in_disk(rng)}});
    const BlaschkeProduct b(std::vector<Complex>{{in_disk(rng), in_disk(rng)}});
    const BlaschkeProduct ab = a * b;
    const HoloMap fa = a.map(), fb = b.map(), fab = ab.map();
    for (int i = 0; i < 40; ++i) {
        const Complex z{in_disk(rng), in_disk(rng)};
        CHECK(std::abs(fab.eval(z) - fa.eval(z) * fb.eval(z)) < 1e-12);
    }
}

TEST_CASE("exact derivatives", "[holomorphic]") {
    const HoloMap sq = HoloMap::polynomial({0.0, 0.0, 1.0});
    CHECK(std::abs(sq.derivative({3.0, 0.0}) - Complex(6.0)) < 1e-13);

    const HoloMap pow2(Poly::one(), Poly::one(), 2.0);
    CHECK(std::abs(pow2.derivative({0.5, 0.0}) - Complex(1.0)) < 1e-14);

    const HoloMap cubic = HoloMap::polynomial({0.0, 1.0, 0.0, 1.0});  // z + z^3
    CHECK(std::abs(cubic.derivative({0.0, 1.0}) - Complex(-2.0)) < 1e-13);
}

TEST_CASE("derivative agrees with central differences", "[holomorphic]") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> pt(-0.8, 0.8);
    const double step = 1e-5;
    for (int trial = 0; trial < 10; ++trial) {
        const HoloMap f(random_poly(rng, 5), Poly::one(), 0.0);
        for (int i = 0; i < 10; ++i) {
            const Complex z{pt(rng), pt(rng)};
            const Complex fd =
                (f.eval(z + step) - f.eval(z - step)) / (2.0 * step);
            CHECK(std::abs(f.derivative(z) - fd) <
                  1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("rational maps and poles", "[holomorphic]") {
    const HoloMap f(Poly::one(), Poly({-0.5, 1.0}));  // 1/(z - 0.5)
    CHECK_THROWS_AS(f.eval({0.5, 0.0}), PoleError);
    CHECK_THROWS_AS(f.derivative({0.5, 0.0}), PoleError);
    CHECK_THROWS_AS(f.validate_no_poles_within(0.95), InvalidInputError);
    CHECK_NOTHROW(f.validate_no_poles_within(0.3));
}

TEST_CASE("ramification divisors", "[holomorphic]") {
    const auto d1 = HoloMap::polynomial({0.0, 0.0, 1.0}).ramification_divisor(0.95);
    REQUIRE(d1.size() == 1);
    CHECK(std::abs(d1[0].first) < 1e-10);
    CHECK(d1[0].second == 1);

    CHECK(HoloMap::polynomial({0.0, 1.0}).ramification_divisor(0.95).empty());

    // f = z^3/3 - a^2 z, a = 0.4: ramification at +-0.4.
    const double a = 0.4;
    const auto d3 = HoloMap::polynomial({0.0, -a * a, 0.0, 1.0 / 3.0})
                        .ramification_divisor(0.95);
    REQUIRE(d3.size() == 2);
    CHECK(std::abs(d3[0].first - Complex(-0.4)) < 1e-10);
    CHECK(std::abs(d3[1].first - Complex(0.4)) < 1e-10);
    CHECK(d3[0].second == 1);
    CHECK(d3[1].second == 1);

    // z^2 * (z - 0.5): f' = 3z^2 - z, zeros at 0 and 1/3.
    const auto dm = HoloMap(Poly({0.0, 0.0, -0.5, 1.0})).ramification_divisor(0.95);
    REQUIRE(dm.size() == 2);

    // Integer prefactor: f = z^3 via beta = 3 has f' = 3 z^2.
    const auto dp = HoloMap(Poly::one(), Poly::one(), 3.0)
                        .ramification_divisor(0.95);
    REQUIRE(dp.size() == 1);
    CHECK(dp[0].second == 2);

    CHECK_THROWS_AS(HoloMap(Poly::one(), Poly::one(), 1.5)
                        .ramification_divisor(0.95),
                    UnsupportedInputError);

    // Total count matches the numerator degree inside a wide radius.
    const HoloMap f(Poly({1.0, 0.5, 0.0, 2.0, 1.0}));
    int total = 0;
    for (auto& [pos, mult] : f.ramification_divisor(1e9)) total += mult;
    CHECK(total == 3);
}
