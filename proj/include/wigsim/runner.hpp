#pragma once

#include <string>
#include <vector>

#include "wigsim/config.hpp"
#include "wigsim/diagnostics.hpp"

namespace wigsim {

inline constexpr const char* kVersion = "wigsim 0.1.0";

/// Exit codes shared by the CLI surface.
enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kIntegrityAbort = 3,
    kInconclusive = 4,
};

struct RunOutputs {
    RunRecord record;
    EntropySeries series;
    ChaosVerdict verdict;
    TimescaleReport timescales;
    Moments initial_moments;
};

/// Evolves the configured state and assembles diagnostics; no files
/// touched. Throws IntegrityError when the run aborts mid-flight.
RunOutputs run_simulation(const RunConfig& config);

/// run_simulation plus artifacts on disk (manifest.json, series.csv,
/// verdict.json, marginal CSVs, optional WIG1 snapshots) in
/// config.output.directory. Returns kOk, kIntegrityAbort, or
/// kInconclusive (the latter only when require_verdict is set).
int cmd_run(const RunConfig& config, bool require_verdict = false);

enum class SweepAxis { diffusion, hbar, drive_amplitude };

SweepAxis sweep_axis_from_string(const std::string& s);

/// Runs one independent simulation per axis value (concurrently up to
/// `jobs`), each in its own subdirectory, and writes the aggregated
/// sweep.csv mapping value -> plateau rate, verdict, decay exponent and
/// breakdown-time proxy.
int cmd_sweep(const RunConfig& base, SweepAxis axis,
              const std::vector<double>& values, std::size_t jobs,
              bool require_verdict = false);

/// Benettin spectrum of the configured potential; JSON on stdout and in
/// <output.directory>/lyapunov.json.
int cmd_lyapunov(const RunConfig& config);

/// Regenerates the timescale report and verdict from a stored run
/// directory without re-simulation; writes report.txt and verdict.json
/// (bitwise identical to the original for an untouched directory).
int cmd_report(const std::string& run_dir, bool require_verdict = false);

}  // namespace wigsim
