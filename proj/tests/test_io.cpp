#include "experiments.hpp"
#include "function_spaces.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nslab;
using namespace nslab::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& f) const { return (path / f).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("field dump round trip") {
    TempDir t("nslab_test_field");
    SpectralGrid g{2.5, 12};
    const auto u = random_vector(g, 4, 3, true);
    write_field(t / "u.field", u);
    const auto v = read_field(t / "u.field");
    CHECK(v.grid() == g);
    const auto a = u.to_physical(), b = v.to_physical();
    for (int i = 0; i < 3; ++i) {
        double scale = 0.0;
        for (double x : a[i]) scale = std::max(scale, std::abs(x));
        CHECK(max_abs_diff(a[i], b[i]) < 1e-14 * scale);
    }
    CHECK(fs::file_size(t / "u.field") == 3 * g.physical_size() * sizeof(double) + std::string("nslab-field 12 2.5 3\n").size());
    std::ofstream(t / "bad.field") << "not a field\n";
    CHECK_THROWS(read_field(t / "bad.field"));
    std::ofstream(t / "short.field") << "nslab-field 12 2.5 3\n0123";
    CHECK_THROWS(read_field(t / "short.field"));
}

TEST_CASE("CSV cells round-trip doubles and rows must match the header") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(csv_cell(v)) == v);
    TempDir t("nslab_test_csv");
    write_csv(t / "a.csv", {"x", "y"}, std::vector<std::vector<double>>{{1.0, 0.5}, {2.0, 0.25}});
    CHECK(slurp(t / "a.csv") == "x,y\n1,0.5\n2,0.25\n");
    CHECK_THROWS_AS(write_csv(t / "b.csv", {"x", "y"}, std::vector<std::vector<double>>{{1.0}}), std::invalid_argument);
}

TEST_CASE("verdict lines") {
    CHECK(format_verdict({"delta-4", false, 2.0, 1.0, ""}) == "FAIL delta-4 value=2 bound=1");
    CHECK(format_verdict({"l1x", true, 0.5, 1.0, "ensemble"}) == "PASS l1x value=0.5 bound=1 ensemble");
}

TEST_CASE("baselines file parsing") {
    TempDir t("nslab_test_baselines");
    std::ofstream(t / "baselines.txt") << "# header\nfoo.bar = 1.5  # note\n\nbaz = 2e-3\n";
    const auto b = Baselines::load(t.path.string());
    CHECK(b.get("foo.bar") == 1.5);
    CHECK(b.get("baz") == 2e-3);
    CHECK(!b.has("qux"));
    CHECK_THROWS_AS(b.get("qux"), ConfigError);
    std::ofstream(t / "baselines.txt") << "foo 1.5\n";
    CHECK_THROWS_AS(Baselines::load(t.path.string()), ConfigError);
    CHECK_THROWS_AS(Baselines::load((t.path / "absent").string()), ConfigError);
}

TEST_CASE("solve run writes a manifest whose files exist with their sizes") {
    TempDir t("nslab_test_run");
    auto cfg = parse_config_text("experiment = solve\ngrid.N = 16\ndata.kind = shear\nsolver.dt = 1e-3\nT = 0.02\n");
    cfg = with_override(cfg, "output.dir", t.path.string());
    const auto m = run(cfg);
    CHECK(m.exit_code == kExitPass);
    CHECK(m.error.empty());
    REQUIRE(!m.verdicts.empty());
    CHECK(std::any_of(m.verdicts.begin(), m.verdicts.end(), [](const Verdict& v) { return v.label == "residual" && v.pass; }));
    for (const auto& f : m.files) {
        CAPTURE(f.path);
        REQUIRE(fs::exists(t.path / f.path));
        CHECK(fs::file_size(t.path / f.path) == f.bytes);
    }
    CHECK(fs::exists(t / "manifest.json"));
    CHECK(slurp(t / "manifest.json").find("\"passed\": true") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical CSVs") {
    TempDir a("nslab_test_det_a"), b("nslab_test_det_b");
    const auto base = parse_config_text(
        "experiment = total-speed\ngrid.N = 16\ndata.kind = random-band\ndata.kmax = 3\ndata.seed = 5\n"
        "solver.dt = 2e-3\nT = 0.04\nharness.ensemble = 3\nthreads = 2\n");
    run(with_override(base, "output.dir", a.path.string()));
    run(with_override(base, "output.dir", b.path.string()));
    const auto x = slurp(a / "total_speed.csv");
    CHECK(!x.empty());
    CHECK(x == slurp(b / "total_speed.csv"));
    const auto serial = with_override(with_override(base, "threads", "1"), "output.dir", b.path.string());
    run(serial);
    CHECK(x == slurp(b / "total_speed.csv"));
}

TEST_CASE("violated hypothesis exits 1 and names the label") {
    TempDir t("nslab_test_violation");
    auto cfg = parse_config_text(
        "experiment = enstrophy-loc\ngrid.L = 2\ngrid.N = 16\ndata.kind = wave-packet\ndata.packet.centre = 1.5, 1.5, 1.5\n"
        "data.packet.amplitude = 0.3\nharness.x0 = 0.5, 0.5, 0.5\nharness.R = 0.8\nharness.r = 0.35\n"
        "harness.delta = 30\nsolver.dt = 1e-3\nT = 0.005\n");
    cfg = with_override(cfg, "output.dir", t.path.string());
    const auto m = run(cfg);
    CHECK(m.exit_code == kExitVerdictFail);
    CHECK(std::any_of(m.verdicts.begin(), m.verdicts.end(), [](const Verdict& v) { return v.label == "delta-4" && !v.pass; }));
    CHECK(slurp(t / "verdicts.txt").find("FAIL delta-4") != std::string::npos);
}

TEST_CASE("module errors land in the manifest with an exit code") {
    TempDir t("nslab_test_errors");
    auto cfg = parse_config_text(
        "experiment = total-speed\ngrid.N = 16\ndata.kind = shear\nsolver.dt = 1e-2\nT = 1.5\n");
    cfg = with_override(cfg, "output.dir", t.path.string());
    const auto m = run(cfg);
    CHECK(m.exit_code != kExitPass);
    CHECK(fs::exists(t / "manifest.json"));
    CHECK(std::any_of(m.verdicts.begin(), m.verdicts.end(), [](const Verdict& v) { return v.label == "lota" && !v.pass; }));
}

TEST_CASE("error tags and the worker pool") {
    CHECK(error_tag("total speed needs T <= L^2 (lota)") == "lota");
    CHECK(error_tag("smallness condition violated") == "d4");
    CHECK(error_tag("something else") == "precondition");
    std::vector<int> hit(37, 0);
    parallel_for(37, 4, [&](int i) { hit[std::size_t(i)] += i; });
    for (int i = 0; i < 37; ++i) CHECK(hit[std::size_t(i)] == i);
}
