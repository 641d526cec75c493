#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "exvort/io.hpp"

using namespace exvort;
using Catch::Approx;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("complex round trip", "[io]") {
    for (Complex z : {Complex(-0.5, 0.0), Complex(1.25, -3.5),
                      Complex(1e-5, 2.5e3), Complex(0.0, 0.0),
                      Complex(0.1234567890123456, -9.87e-12)}) {
        const Complex back = parse_complex(fmt_complex(z));
        CHECK(back.real() == z.real());
        CHECK(back.imag() == z.imag());
    }
    CHECK(parse_complex("-0.5+0i") == Complex(-0.5, 0.0));
    CHECK(parse_complex("1.25-3.5i") == Complex(1.25, -3.5));
    CHECK_THROWS_AS(parse_complex("1.25"), ConfigError);
    CHECK_THROWS_AS(parse_complex("foo+1i"), ConfigError);
}

TEST_CASE("config round trip", "[io]") {
    RunConfig c;
    c.family = "solve";
    c.lambda0 = 1;
    c.lambda = 1;
    c.cutoff = 0.95;
    c.q_rows = {{1.0, -1.0}, {0.0, 1.0}};
    c.r = {1.0, 1.0};
    c.vortices = {{Complex(-0.5, 0.0)}, {Complex(0.0, 0.0)}};
    c.impurity = "none";
    c.boundary = "vacuum";
    c.n = 256;
    c.tol = 1e-10;
    c.max_iter = 60;
    c.damping = 1.0;

    const RunConfig back = parse_config_text(serialize_config(c));
    CHECK(back == c);
    CHECK(serialize_config(back) == serialize_config(c));

    RunConfig a;
    a.family = "impurity";
    a.alpha = 0.75;
    a.impurity = "delta";
    a.impurity_deltas = {{Complex(0.1, -0.2), 1.5}};
    a.f_num = {Complex(1.0, 0.0), Complex(0.5, 0.25)};
    a.boundary = "explicit";
    a.boundary_values = {0.0};
    a.vortices = {{Complex(0.3, 0.0), Complex(0.3, 0.0)}};
    CHECK(parse_config_text(serialize_config(a)) == a);
}

TEST_CASE("config errors carry line context", "[io]") {
    try {
        parse_config_text("[problem]\nfamily = solve\nnonsense\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("mystery_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("lambda0 = abc\n"), ConfigError);
}

TEST_CASE("field CSV round trip and determinism", "[io]") {
    const Grid grid = build_grid(Surface(1, 0.95), 20);
    GridField h1(grid, 0.0), h2(grid, 0.0);
    grid.for_each_node([&](int ix, int iy, NodeClass) {
        const Complex z = grid.point(ix, iy);
        h1.at(ix, iy) = std::sin(3.0 * z.real()) + z.imag();
        h2.at(ix, iy) = std::cos(2.0 * z.imag()) * z.real();
    });
    h1.at(0, 0) = -std::numeric_limits<double>::infinity();  // vortex node

    const auto dir = std::filesystem::temp_directory_path() / "exvort_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "fields.csv").string();
    write_fields_csv(path, grid, {h1, h2});
    const std::string first = slurp(path);
    CHECK(first.rfind("x,y,h1,h2,phi1_sq,phi2_sq", 0) == 0);

    write_fields_csv(path, grid, {h1, h2});
    CHECK(slurp(path) == first);

    const std::vector<GridField> back = read_fields_csv(path, grid);
    REQUIRE(back.size() == 2);
    bool exact = true;
    grid.for_each_node([&](int ix, int iy, NodeClass) {
        if (std::isinf(h1.at(ix, iy)))
            exact = exact && std::isinf(back[0].at(ix, iy));
        else
            exact = exact && back[0].at(ix, iy) == h1.at(ix, iy) &&
                    back[1].at(ix, iy) == h2.at(ix, iy);
    });
    CHECK(exact);

    CHECK_THROWS_AS(read_fields_csv(path, build_grid(Surface(1), 24)),
                    ConfigError);
    CHECK_THROWS_AS(read_fields_csv((dir / "missing.csv").string(), grid),
                    ConfigError);
}
