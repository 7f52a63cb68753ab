#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wigsim/runner.hpp"

namespace {

wigsim::RunConfig load_config(const std::string& config_path,
                              const std::string& preset,
                              const std::string& output_override) {
    using namespace wigsim;
    if (config_path.empty() == preset.empty())
        throw ConfigError("give exactly one of --config or --preset");
    RunConfig cfg;
    if (!preset.empty()) {
        cfg = load_preset(preset);
    } else {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file " + config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = parse_config(ss.str());
    }
    if (!output_override.empty()) cfg.output.directory = output_override;
    if (const char* root = std::getenv("WIGSIM_OUTPUT_ROOT"); root && *root)
        cfg.output.directory = std::string(root) + "/" + cfg.output.directory;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wigsim: Wigner-function simulator and entropy-production "
                 "diagnostics for open quantum systems"};
    app.require_subcommand(1);

    std::string config_path, preset, output_dir, axis_name, values_csv, run_dir;
    bool require_verdict = false;
    std::size_t jobs = 1;

    auto add_source = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "run config file");
        cmd->add_option("--preset", preset,
                        "named preset (harmonic, inverted_oscillator, "
                        "double_well_driven, cat_decoherence)");
        cmd->add_option("--output", output_dir, "override output directory");
    };

    auto* c_run = app.add_subcommand("run", "evolve one configuration and "
                                            "write its artifacts");
    add_source(c_run);
    c_run->add_flag("--require-verdict", require_verdict,
                    "exit 4 when the classifier is inconclusive");

    auto* c_sweep = app.add_subcommand(
        "sweep", "run one simulation per axis value and aggregate");
    add_source(c_sweep);
    c_sweep->add_option("--axis", axis_name, "D | hbar | drive_amplitude")
        ->required();
    c_sweep->add_option("--values", values_csv, "comma-separated axis values")
        ->required();
    c_sweep->add_option("--jobs", jobs, "concurrent runs");
    c_sweep->add_flag("--require-verdict", require_verdict);

    auto* c_lyap = app.add_subcommand(
        "lyapunov", "Benettin spectrum of the configured potential (JSON)");
    add_source(c_lyap);

    auto* c_report = app.add_subcommand(
        "report", "regenerate verdict and report from a stored run directory");
    c_report->add_option("run_dir", run_dir, "run directory")->required();
    c_report->add_flag("--require-verdict", require_verdict);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c_run))
            return wigsim::cmd_run(load_config(config_path, preset, output_dir),
                                   require_verdict);
        if (app.got_subcommand(c_sweep)) {
            std::vector<double> values;
            std::stringstream ss(values_csv);
            std::string item;
            while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
            return wigsim::cmd_sweep(
                load_config(config_path, preset, output_dir),
                wigsim::sweep_axis_from_string(axis_name), values, jobs,
                require_verdict);
        }
        if (app.got_subcommand(c_lyap))
            return wigsim::cmd_lyapunov(
                load_config(config_path, preset, output_dir));
        if (app.got_subcommand(c_report))
            return wigsim::cmd_report(run_dir, require_verdict);
    } catch (const wigsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return wigsim::kConfigError;
    } catch (const wigsim::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return wigsim::kConfigError;
    } catch (const wigsim::IntegrityError& e) {
        std::cerr << "integrity abort: " << e.what() << '\n';
        return wigsim::kIntegrityAbort;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
