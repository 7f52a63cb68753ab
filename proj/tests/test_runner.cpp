#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wigsim/runner.hpp"

using namespace wigsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// a fast, fully featured run on a small grid
const char* kTinyConfig = R"(
grid {
  layout = square
  n = 64
  hbar = 1.0
}
state {
  type = gaussian
  x0 = 1.0
  p0 = 0.0
  sigma_x = 0.7071067811865476
  sigma_p = 0.7071067811865476
}
potential {
  coefficients = 0, 0, 0.5
}
environment {
  gamma = 0.0
  temperature = 1.0
  mass = 1.0
  diffusion = 0.05
}
evolution {
  dt = 0.02
  t_max = 2.0
  diagnostics_stride = 10
}
diagnostics {
  von_neumann = on
  lyapunov_reference = 0.0
}
output {
  directory = test_runs/tiny
}
)";

}  // namespace

TEST_CASE("cmd_run writes the artifact set and is deterministic") {
    fs::remove_all("test_runs/tiny");
    auto cfg = parse_config(kTinyConfig);
    CHECK(cmd_run(cfg) == kOk);
    CHECK(fs::exists("test_runs/tiny/manifest.json"));
    CHECK(fs::exists("test_runs/tiny/series.csv"));
    CHECK(fs::exists("test_runs/tiny/verdict.json"));
    CHECK(fs::exists("test_runs/tiny/report.txt"));
    CHECK(fs::exists("test_runs/tiny/marginal_x.csv"));

    const std::string series1 = slurp("test_runs/tiny/series.csv");
    const std::string verdict1 = slurp("test_runs/tiny/verdict.json");

    // rerun into a second directory: bit-identical outputs
    auto cfg2 = cfg;
    cfg2.output.directory = "test_runs/tiny2";
    fs::remove_all("test_runs/tiny2");
    CHECK(cmd_run(cfg2) == kOk);
    CHECK(slurp("test_runs/tiny2/series.csv") == series1);
    CHECK(slurp("test_runs/tiny2/verdict.json") == verdict1);
}

TEST_CASE("cmd_report reproduces the stored verdict exactly") {
    fs::remove_all("test_runs/tiny3");
    auto cfg = parse_config(kTinyConfig);
    cfg.output.directory = "test_runs/tiny3";
    REQUIRE(cmd_run(cfg) == kOk);
    const std::string verdict1 = slurp("test_runs/tiny3/verdict.json");
    const std::string report1 = slurp("test_runs/tiny3/report.txt");
    REQUIRE(cmd_report("test_runs/tiny3") == kOk);
    CHECK(slurp("test_runs/tiny3/verdict.json") == verdict1);
    CHECK(slurp("test_runs/tiny3/report.txt") == report1);
}

TEST_CASE("run_simulation: entropy series is monotone for the open system") {
    auto cfg = parse_config(kTinyConfig);
    const auto out = run_simulation(cfg);
    REQUIRE(out.series.times.size() > 3);
    // von Neumann dominates linear entropy on every sample
    for (std::size_t i = 0; i < out.series.times.size(); ++i)
        CHECK(out.series.von_neumann[i] >= out.series.linear[i] - 1e-6);
    // entropy grows under decoherence
    CHECK(out.series.von_neumann.back() > out.series.von_neumann.front());
    CHECK(out.record.rows.back().purity < out.record.rows.front().purity);
}

TEST_CASE("cmd_sweep writes per-value runs and the aggregate csv") {
    fs::remove_all("test_runs/sweep");
    auto cfg = parse_config(kTinyConfig);
    cfg.output.directory = "test_runs/sweep";
    CHECK(cmd_sweep(cfg, SweepAxis::diffusion, {0.02, 0.08}, 2) == kOk);
    CHECK(fs::exists("test_runs/sweep/sweep.csv"));
    CHECK(fs::exists("test_runs/sweep/D=0.02/series.csv"));
    CHECK(fs::exists("test_runs/sweep/D=0.08/series.csv"));
    const std::string agg = slurp("test_runs/sweep/sweep.csv");
    CHECK(agg.find("0.02") != std::string::npos);
    CHECK(agg.find("0.08") != std::string::npos);
}

TEST_CASE("integrity abort surfaces as exit code 3") {
    auto cfg = parse_config(kTinyConfig);
    cfg.output.directory = "test_runs/abort";
    // a state parked on the grid edge violates the constructor check
    cfg.state.gaussian.x0 = 11.0;
    fs::remove_all("test_runs/abort");
    CHECK_THROWS_AS(cmd_run(cfg), InvalidArgument);
}
