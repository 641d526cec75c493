#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "exvort/laplace_probe.hpp"
#include "exvort/surface.hpp"

using namespace exvort;
using Catch::Approx;

TEST_CASE("conformal factor closed form", "[surface]") {
    CHECK(Surface(1).conformal_factor({0.0, 0.0}) == Approx(4.0));
    CHECK(Surface(0).conformal_factor({7.0, 2.0}) == Approx(4.0));
    CHECK(Surface(1).conformal_factor({0.5, 0.0}) ==
          Approx(4.0 / 0.5625).epsilon(1e-14));
    CHECK(Surface(-1).conformal_factor({1.0, 0.0}) == Approx(1.0));
    CHECK_THROWS_AS(Surface(1).conformal_factor({1.5, 0.0}), InvalidInputError);
}

TEST_CASE("conformal factor is rotation invariant", "[surface]") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> rad(0.0, 0.9), ang(0.0, 6.28);
    for (const Surface s : {Surface(1), Surface(0), Surface(-1)}) {
        for (int i = 0; i < 50; ++i) {
            const double r = rad(rng), th = ang(rng);
            const Complex z = std::polar(r, th);
            CHECK(s.conformal_factor(z) ==
                  Approx(s.conformal_factor({r, 0.0})).epsilon(1e-13));
        }
    }
}

TEST_CASE("surface construction guards", "[surface]") {
    CHECK_THROWS_AS(Surface(2), InvalidInputError);
    CHECK_THROWS_AS(Surface(1, 1.2), InvalidInputError);
    CHECK(Surface(1).radius_cutoff == Approx(0.95));
    CHECK(Surface(0).radius_cutoff == Approx(4.0));
}

TEST_CASE("build_grid basics", "[surface]") {
    const Grid g = build_grid(Surface(1, 0.95), 16);
    CHECK(g.spacing() == Approx(0.95 / 16));
    const Grid g2 = build_grid(Surface(0, 4.0), 64);
    CHECK(g2.spacing() == Approx(0.0625));
    CHECK_THROWS_AS(build_grid(Surface(1), 15), InvalidInputError);
}

TEST_CASE("grid classification invariants", "[surface]") {
    const Grid g = build_grid(Surface(1, 0.95), 24);
    const double R = g.cutoff(), h = g.spacing();
    g.for_each_node([&](int ix, int iy, NodeClass c) {
        const double r = std::abs(g.point(ix, iy));
        CHECK(r <= R * (1.0 + 1e-12));
        if (c == NodeClass::Interior) {
            CHECK(g.is_retained(ix + 1, iy));
            CHECK(g.is_retained(ix - 1, iy));
            CHECK(g.is_retained(ix, iy + 1));
            CHECK(g.is_retained(ix, iy - 1));
        } else {
            CHECK(R - r < h * (1.0 + 1e-12));
        }
    });
}

TEST_CASE("grid is deterministic", "[surface]") {
    const Grid a = build_grid(Surface(1), 32);
    const Grid b = build_grid(Surface(1), 32);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i)
        same = a.node_class(i) == b.node_class(i);
    CHECK(same);
}

// The substitution h = g + log((1-lambda0|z|^2)/2) relies on
// 4 d dbar log((1-lambda0|z|^2)/2) = -lambda0 Omega0; check the discrete
// version converges at second order.
TEST_CASE("background log satisfies the curvature identity", "[surface]") {
    for (int lambda0 : {-1, 0, 1}) {
        const Surface s(lambda0, lambda0 == 1 ? 0.95 : 4.0);
        auto background = [&](Complex z) {
            return std::log(0.5 * (1.0 - lambda0 * std::norm(z)));
        };
        const Complex z0{0.31, 0.17};
        const double target = -lambda0 * s.conformal_factor(z0);
        const double e1 = std::abs(laplacian_stencil(background, z0, 2e-2) - target);
        const double e2 = std::abs(laplacian_stencil(background, z0, 1e-2) - target);
        if (lambda0 == 0) {
            CHECK(e2 < 1e-12);
        } else {
            CHECK(e2 < 1e-3);
            CHECK(e1 / e2 == Approx(4.0).margin(1.0));
        }
    }
}
