#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "covdesign/io.hpp"
#include "covdesign/workspace.hpp"

using namespace covdesign;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    auto dir = fs::temp_directory_path() / "covdesign-io-test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("point csv round trip preserves every bit") {
    auto dir = temp_dir();
    PointSet points;
    points.n = 5;
    points.d = 3;
    Rng rng(2);
    points.coords.resize(15);
    for (auto& c : points.coords) c = rng.uniform();

    const auto path = dir / "points.csv";
    io::write_points_csv(path, points);
    const auto loaded = io::read_points_csv(path);
    REQUIRE(loaded.n == 5);
    REQUIRE(loaded.d == 3);
    CHECK(loaded.coords == points.coords);
}

TEST_CASE("coverage report round trip") {
    auto dir = temp_dir();
    CoverageReport report;
    report.params.family = PcfFamily::kProposed;
    report.params.r_min = 0.02473;
    report.params.r_1 = 0.029641;
    report.params.p0 = 2.2;
    report.params.amplitude = 0.0317;
    report.rho = 1.4553;
    report.feasible = true;
    report.min_power = 2.7e-5;
    DesignSpec spec{1000, 2};

    const auto path = dir / "report.params";
    io::write_coverage_report(path, report, spec);
    const auto stored = io::read_design_params(path);
    CHECK(stored.spec.n == 1000);
    CHECK(stored.spec.d == 2);
    CHECK(stored.params.family == PcfFamily::kProposed);
    CHECK(stored.params.r_min == report.params.r_min);
    CHECK(stored.params.r_1 == report.params.r_1);
    CHECK(stored.params.p0 == report.params.p0);
    CHECK(stored.params.amplitude == report.params.amplitude);
}

TEST_CASE("run config rejects unknown keys and honors overrides") {
    io::RunConfig config;
    CHECK(config.integer("synth.t_max") == 1000);
    CHECK(config.number("gp.length_scale") == doctest::Approx(0.2));
    CHECK_THROWS_AS(config.set("noSuchKey", "1"), std::invalid_argument);

    auto dir = temp_dir();
    const auto path = dir / "run.cfg";
    io::write_text(path, "# comment\nsynth.t_max = 250\neval.trials = 7\n");
    config.load(path);
    CHECK(config.integer("synth.t_max") == 250);
    CHECK(config.integer("eval.trials") == 7);

    io::write_text(path, "bogus.key = 1\n");
    io::RunConfig fresh;
    CHECK_THROWS_AS(fresh.load(path), std::invalid_argument);

    CHECK(config.p0_grid().size() == 31);
}

TEST_CASE("workspace manifest is append-only") {
    auto dir = temp_dir();
    io::Workspace workspace(dir / "ws");
    workspace.log("first command", 1, {dir / "a.csv"});
    workspace.log("second command", 2, {dir / "b.csv", dir / "c.csv"});
    const auto manifest = io::read_text(dir / "ws" / "manifest.log");
    CHECK(manifest.find("first command") != std::string::npos);
    CHECK(manifest.find("second command") != std::string::npos);
    CHECK(manifest.find("seed=2") != std::string::npos);
    CHECK(manifest.find("first command") < manifest.find("second command"));
    CHECK(fs::exists(workspace.designs()));
    CHECK(fs::exists(workspace.profiles()));
    CHECK(fs::exists(workspace.reports()));
}

TEST_CASE("profile and spectrum csv headers") {
    auto dir = temp_dir();
    auto grid = make_radial_grid(1.0, 3);
    RadialProfile profile;
    profile.grid = grid;
    profile.values = {0.0, 1.5, 1.0};
    io::write_profile_csv(dir / "pcf.csv", profile);
    const auto pcf_text = io::read_text(dir / "pcf.csv");
    CHECK(pcf_text.rfind("r,G\n", 0) == 0);

    SpectrumProfile spectrum;
    spectrum.grid = make_spectral_grid(1.0, 2.0, 2);
    spectrum.values = {0.5, 1.25};
    io::write_spectrum_csv(dir / "psd.csv", spectrum);
    const auto psd_text = io::read_text(dir / "psd.csv");
    CHECK(psd_text.rfind("k,P\n", 0) == 0);
    CHECK(psd_text.find("1.25") != std::string::npos);
}
