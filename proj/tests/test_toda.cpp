#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "exvort/laplace_probe.hpp"
#include "exvort/toda.hpp"

using namespace exvort;
using Catch::Approx;

namespace {
const HoloMap kF1 = HoloMap::polynomial({0.0, 1.0});        // z
const HoloMap kF2 = HoloMap::polynomial({0.0, 0.0, 0.5});   // z^2/2
const HoloMap kG1 = HoloMap::polynomial({0.0, 0.0, 1.0});        // z^2
const HoloMap kG2 = HoloMap::polynomial({0.0, 0.0, 0.0, 1.0 / 3.0});  // z^3/3

// Max Toda residual 4 d dbar g_A - lambda sum_B K_AB exp(2 g_B) over an
// annulus, measured with the probe Laplacian on log|exp(2 g_A)|/2.
double toda_residual(const TodaSolution& sol, double r_lo, double r_hi) {
    const Eigen::Matrix2d K = cartan_su3();
    double worst = 0.0;
    for (int A = 0; A < 2; ++A) {
        auto gA = [&](Complex z) {
            const auto e = sol.eval(z);
            return 0.5 * std::log(std::abs(A == 0 ? e.first : e.second));
        };
        for (int ir = 0; ir < 8; ++ir) {
            const double r = r_lo + (r_hi - r_lo) * ir / 7.0;
            for (int k = 0; k < 16; ++k) {
                const Complex z = std::polar(r, 0.07 + 0.3926990816987241 * k);
                const auto [d1, d2] = sol.dets(z);
                if (std::abs(d1) < 0.1 || std::abs(d2) < 0.1) continue;
                const auto e = sol.eval(z);
                const double rhs =
                    sol.lambda() * (K(A, 0) * e.first + K(A, 1) * e.second);
                worst =
                    std::max(worst, std::abs(laplacian_probe(gA, z) - rhs));
            }
        }
    }
    return worst;
}
}  // namespace

TEST_CASE("classical-sign values", "[toda]") {
    const TodaSolution sol(kF1, kF2, -1);
    const auto at0 = sol.eval({0.0, 0.0});
    CHECK(at0.first == Approx(2.0).margin(1e-10));
    CHECK(at0.second == Approx(2.0).margin(1e-10));
    const auto at1 = sol.eval({1.0, 0.0});
    CHECK(at1.first == Approx(8.0 / 9.0).epsilon(1e-12));
    CHECK(at1.second == Approx(8.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("opposite-sign values and determinant domain", "[toda]") {
    const TodaSolution sol(kF1, kF2, +1);
    // det(M_1^dag W_1) = 1 - |z|^2 - |z|^4/4,
    // det(M_2^dag W_2) = -(1 + |z|^2 - |z|^4/4).
    const auto d0 = sol.dets({0.0, 0.0});
    CHECK(d0.first == Approx(1.0).margin(1e-14));
    CHECK(d0.second == Approx(-1.0).margin(1e-14));
    const auto dh = sol.dets({0.5, 0.0});
    CHECK(dh.first == Approx(1.0 - 0.25 - 0.015625).margin(1e-14));
    CHECK(dh.second == Approx(-(1.0 + 0.25 - 0.015625)).margin(1e-14));

    // The second flavor's value is negative at the origin: the flavor-1
    // equation pins exp(2g_2)(0) = 2*exp(2g_1)(0) - 4 d dbar g_1(0) = -2.
    const auto at0 = sol.eval({0.0, 0.0});
    CHECK(at0.first == Approx(2.0).margin(1e-10));
    CHECK(at0.second == Approx(-2.0).margin(1e-10));

    auto g1 = [&](Complex z) {
        return 0.5 * std::log(std::abs(sol.eval(z).first));
    };
    const double lap = laplacian_probe(g1, {0.0, 0.0});
    CHECK(2.0 * at0.first - lap == Approx(-2.0).margin(1e-6));
}

TEST_CASE("generalized formula reduces to classical KLS", "[toda]") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> pt(-0.8, 0.8);
    const KlsClassical smooth(Poly({0.0, 1.0}), Poly({0.0, 0.0, 0.5}));
    const KlsClassical ramified(Poly({0.0, 0.0, 1.0}),
                                Poly({0.0, 0.0, 0.0, 1.0 / 3.0}));
    const TodaSolution gen_smooth(kF1, kF2, -1);
    const TodaSolution gen_ramified(kG1, kG2, -1);
    for (int i = 0; i < 60; ++i) {
        const Complex z{pt(rng), pt(rng)};
        const auto a = gen_smooth.eval(z), b = smooth.eval(z);
        CHECK(a.first == Approx(b.first).margin(1e-12));
        CHECK(a.second == Approx(b.second).margin(1e-12));
        if (std::abs(z) < 0.05) continue;  // ramified pair is singular at 0
        const auto c = gen_ramified.eval(z), d = ramified.eval(z);
        CHECK(c.first == Approx(d.first).margin(1e-12));
        CHECK(c.second == Approx(d.second).margin(1e-12));
    }
}

TEST_CASE("Toda system residual for both signs", "[toda]") {
    CHECK(toda_residual(TodaSolution(kF1, kF2, -1), 0.25, 0.7) < 1e-6);
    CHECK(toda_residual(TodaSolution(kF1, kF2, +1), 0.25, 0.7) < 1e-6);
    CHECK(toda_residual(TodaSolution(kG1, kG2, -1), 0.3, 0.7) < 1e-6);
    CHECK(toda_residual(TodaSolution(kG1, kG2, +1), 0.3, 0.7) < 1e-6);
}

TEST_CASE("degenerate and singular data", "[toda]") {
    CHECK_THROWS_AS(TodaSolution(kF1, HoloMap::polynomial({0.0}), -1),
                    DegenerateDataError);
    // Ramified pair: det(M_2^dag W_2) vanishes exactly at the origin.
    const TodaSolution sol(kG1, kG2, -1);
    CHECK_THROWS_AS(sol.eval({0.0, 0.0}), SurfaceSingularityError);
    CHECK_THROWS_AS(TodaSolution(kF1, kF2, 0), InvalidInputError);
    CHECK_THROWS_AS(
        TodaSolution(HoloMap(Poly::one(), Poly::one(), 1.0), kF2, -1),
        InvalidInputError);
}
