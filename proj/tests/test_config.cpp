#include "config.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace nslab;

namespace {

const char* kMinimal =
    "# minimal solve\n"
    "experiment = solve\n"
    "grid.L = 1\n"
    "grid.N = 32\n"
    "data.kind = shear\n"
    "solver.dt = 1e-3\n"
    "T = 1\n";

std::string error_of(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("minimal solve config parses") {
    const auto c = parse_config_text(kMinimal);
    CHECK(c.experiment == "solve");
    CHECK(c.grid.L == 1.0);
    CHECK(c.grid.N == 32);
    CHECK(c.data.kind == "shear");
    CHECK(c.solver.dt == 1e-3);
    CHECK(c.data.T == 1.0);
    REQUIRE(c.entries.size() == 6);
    CHECK(c.entries[0].key == "experiment");
    CHECK(c.entries[0].line == 2);
}

TEST_CASE("duplicate key names both lines") {
    const auto msg = error_of(std::string(kMinimal) + "grid.N = 64\n");
    CHECK(msg.find("grid.N") != std::string::npos);
    CHECK(msg.find("line 4") != std::string::npos);
    CHECK(msg.find("8") != std::string::npos);
}

TEST_CASE("unknown, missing and malformed entries") {
    const auto unknown = error_of(std::string(kMinimal) + "grid.M = 3\n");
    CHECK(unknown.find("grid.M") != std::string::npos);
    CHECK(unknown.find("8") != std::string::npos);
    CHECK(error_of("grid.N = 32\n").find("experiment") != std::string::npos);
    CHECK(error_of("experiment = solve\nT = 1\n").find("data.kind") != std::string::npos);
    CHECK(!error_of(std::string(kMinimal) + "just words\n").empty());
    CHECK(!error_of(std::string(kMinimal) + "threads = many\n").empty());
    CHECK(!error_of("experiment = launch\n").empty());
}

TEST_CASE("values are validated before any compute") {
    CHECK(error_of("experiment = solve\ngrid.N = 31\ndata.kind = shear\n").find("grid.N") != std::string::npos);
    CHECK(error_of("experiment = solve\ndata.kind = vortex\n").find("data.kind") != std::string::npos);
    CHECK(error_of("experiment = solve\ndata.kind = shear\nsolver.dt = 2\nT = 1\n").find("solver.dt") != std::string::npos);
    CHECK(error_of("experiment = enstrophy-loc\ndata.kind = shear\nharness.R = 0.2\nharness.r = 0.3\n").find("harness.R") !=
          std::string::npos);
    CHECK(error_of("experiment = energy-budget\ndata.kind = shear\nharness.R = 0.4\nharness.r = 0.3\n").find("harness.r") !=
          std::string::npos);
    CHECK(error_of("experiment = solve\ndata.kind = random-band\ndata.kmax = 20\n").find("data.kmax") != std::string::npos);
    CHECK(error_of("experiment = homogenize\nhomogenize.lambda = 100\n").find("homogenize.lambda") != std::string::npos);
    CHECK(error_of("experiment = counterexample\ncounterexample.distance = 0.5\n").find("distance") != std::string::npos);
    CHECK_NOTHROW(parse_config_text("experiment = localize\n"));
}

TEST_CASE("lists, vectors, fractions and comments") {
    const auto c = parse_config_text(
        "experiment = enstrophy-loc  # trailing comment\n"
        "data.kind = composite\n"
        "grid.dealias = 2/3\n"
        "harness.x0 = 0.5, 0.25, 1\n"
        "harness.R = 0.8\n"
        "harness.eps = 1e-3, 1e-4\n"
        "data.slope = -5/3\n");
    CHECK(c.grid.dealias == doctest::Approx(2.0 / 3.0));
    CHECK(c.data.slope == doctest::Approx(-5.0 / 3.0));
    CHECK(c.harness.x0 == Vec3{0.5, 0.25, 1.0});
    REQUIRE(c.harness.eps.size() == 2);
    CHECK(c.harness.eps[1] == 1e-4);
    const auto n = parse_config_text("experiment = counterexample\ncounterexample.n = 4, 8\n");
    CHECK(n.counterexample.n == std::vector<int>{4, 8});
}

TEST_CASE("overrides replace or append and revalidate") {
    const auto c = parse_config_text(kMinimal);
    const auto o = with_override(c, "grid.N", "16");
    CHECK(o.grid.N == 16);
    CHECK(o.entries.size() == c.entries.size());
    const auto s = with_override(c, "data.seed", "18446744073709551615");
    CHECK(s.data.seed == 18446744073709551615ULL);
    CHECK(s.entries.back().line == 0);
    CHECK_THROWS_AS(with_override(c, "grid.N", "7"), ConfigError);
    CHECK_THROWS_AS(with_override(c, "data.seed", "-1"), ConfigError);
}

TEST_CASE("parse_config reads files and reports missing ones") {
    const auto dir = std::filesystem::temp_directory_path() / "nslab_test_config";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "solve.cfg").string();
    std::ofstream(path) << kMinimal;
    CHECK(parse_config(path).grid.N == 32);
    CHECK_THROWS_AS(parse_config((dir / "absent.cfg").string()), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("every documented key is accepted by the parser") {
    for (const auto& k : config_keys()) CHECK(!k.empty());
    CHECK(experiment_names().size() == 8);
}
