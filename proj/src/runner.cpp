#include "wigsim/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace wigsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json to_json(const Moments& m) {
    return {{"mean_x", m.mean_x}, {"mean_p", m.mean_p}, {"var_x", m.var_x},
            {"var_p", m.var_p},   {"cov_xp", m.cov_xp}};
}

json to_json(const TimescaleReport& r) {
    json j{{"tau_D", r.tau_D},
           {"delta_x_reference", r.delta_x_reference},
           {"tau_R", r.tau_R},
           {"lambda_dB", r.lambda_dB},
           {"coherence_length", r.coherence_len},
           {"chi_1", r.chi_1},
           {"chi_reference_x", r.chi_reference_x},
           {"H_eq", r.H_eq},
           {"H_0", r.H_0},
           {"t_eq_literal", r.t_eq.literal},
           {"t_eq_difference", r.t_eq.difference},
           {"chi_over_l", r.chi_over_l},
           {"hbar_over_chi_sigma_c", r.hbar_over_chi_sigma_c},
           {"quantum_regime", r.quantum_regime},
           {"classical_regime", r.classical_regime}};
    j["sigma_c"] = r.sigma_c ? json(*r.sigma_c) : json();
    j["chi_1_min"] = r.chi_1_min ? json(*r.chi_1_min) : json();
    j["t_chi"] = r.t_chi ? json(*r.t_chi) : json();
    return j;
}

json to_json(const ChaosVerdict& v) {
    return {{"classification", to_string(v.classification)},
            {"plateau_rate", v.plateau_rate},
            {"plateau_residual", v.plateau_residual},
            {"decay_exponent", v.decay_exponent},
            {"decay_amplitude", v.decay_amplitude},
            {"power_residual", v.power_residual},
            {"plateau_ratio", v.plateau_ratio},
            {"lambda_reference", v.lambda_reference},
            {"window_t_min", v.window_t_min},
            {"window_t_max", v.window_t_max},
            {"H_eq", v.H_eq},
            {"saturation_time", v.saturation_time},
            {"note", v.note}};
}

json classifier_json(const ChaosVerdictConfig& c) {
    return {{"ratio_min", c.ratio_min},
            {"ratio_max", c.ratio_max},
            {"alpha_target", c.alpha_target},
            {"alpha_band", c.alpha_band},
            {"residual_margin", c.residual_margin},
            {"saturation_fraction", c.saturation_fraction},
            {"rate_window", c.smoothing_window},
            {"fit_t_min", c.window_t_min},
            {"fit_t_max", c.window_t_max}};
}

void write_series_csv(const std::string& path, const RunRecord& rec) {
    std::ofstream out(path);
    out << "t,norm,purity,linear_entropy,von_neumann,mean_x,mean_p,var_x,"
           "var_p,cov_xp,cond_p_width\n";
    for (const auto& r : rec.rows) {
        out << fmt(r.t) << ',' << fmt(r.norm) << ',' << fmt(r.purity) << ','
            << fmt(-std::log(r.purity)) << ',';
        if (r.von_neumann) out << fmt(*r.von_neumann);
        out << ',' << fmt(r.moments.mean_x) << ',' << fmt(r.moments.mean_p)
            << ',' << fmt(r.moments.var_x) << ',' << fmt(r.moments.var_p) << ','
            << fmt(r.moments.cov_xp) << ','
            << fmt(r.moments.conditional_p_width()) << '\n';
    }
}

void write_marginals(const std::string& dir, const WignerField& w) {
    {
        std::ofstream out(dir + "/marginal_x.csv");
        out << "x,density\n";
        const auto mx = marginal_x(w);
        for (std::size_t i = 0; i < mx.size(); ++i)
            out << fmt(w.grid().x(i)) << ',' << fmt(mx[i]) << '\n';
    }
    {
        std::ofstream out(dir + "/marginal_p.csv");
        out << "p,density\n";
        const auto mp = marginal_p(w);
        for (std::size_t k = 0; k < mp.size(); ++k)
            out << fmt(w.grid().p(k)) << ',' << fmt(mp[k]) << '\n';
    }
}

EntropySeries series_from_record(const RunRecord& rec) {
    EntropySeries s;
    for (const auto& r : rec.rows) {
        if (!r.von_neumann) continue;
        s.times.push_back(r.t);
        s.linear.push_back(-std::log(r.purity));
        s.von_neumann.push_back(*r.von_neumann);
    }
    return s;
}

LyapunovSpectrum reference_spectrum(const RunConfig& cfg) {
    LyapunovSpectrum sp;
    sp.lambda_plus = cfg.diagnostics.lyapunov_reference;
    sp.lambda_minus = -cfg.diagnostics.lyapunov_reference;
    return sp;
}

struct StoredRun {
    RunConfig config;
    EntropySeries series;
    std::vector<SampleRow> rows;
};

StoredRun read_run_dir(const std::string& dir) {
    std::ifstream mf(dir + "/manifest.json");
    if (!mf) throw ConfigError("report: cannot open " + dir + "/manifest.json");
    json manifest = json::parse(mf);
    StoredRun sr;
    sr.config = parse_config(manifest.at("config_echo").get<std::string>());
    sr.config.preset_name = manifest.value("preset", "");

    std::ifstream cf(dir + "/series.csv");
    if (!cf) throw ConfigError("report: cannot open " + dir + "/series.csv");
    std::string line;
    std::getline(cf, line);  // header
    while (std::getline(cf, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 11)
            throw ConfigError("report: malformed series row '" + line + "'");
        SampleRow row;
        row.t = std::stod(cells[0]);
        row.norm = std::stod(cells[1]);
        row.purity = std::stod(cells[2]);
        if (!cells[4].empty()) row.von_neumann = std::stod(cells[4]);
        row.moments.mean_x = std::stod(cells[5]);
        row.moments.mean_p = std::stod(cells[6]);
        row.moments.var_x = std::stod(cells[7]);
        row.moments.var_p = std::stod(cells[8]);
        row.moments.cov_xp = std::stod(cells[9]);
        sr.rows.push_back(row);
        if (row.von_neumann) {
            sr.series.times.push_back(row.t);
            sr.series.linear.push_back(-std::log(row.purity));
            sr.series.von_neumann.push_back(*row.von_neumann);
        }
    }
    return sr;
}

ChaosVerdict classify_run(const RunConfig& cfg, const EntropySeries& series) {
    if (series.times.size() < 2) return {};
    return classify(series, reference_spectrum(cfg), cfg.diagnostics.classifier);
}

TimescaleReport timescales_for(const RunConfig& cfg, const Moments& initial,
                               const ChaosVerdict& verdict,
                               const EntropySeries& series) {
    const auto env = cfg.environment.build(cfg.grid.hbar);
    const double lam = cfg.diagnostics.lyapunov_reference;
    const double H0 = series.von_neumann.empty() ? 0.0 : series.von_neumann.front();
    return build_timescale_report(env, cfg.potential, initial, lam, -lam,
                                  verdict.H_eq, H0, verdict.plateau_rate);
}

void write_verdict_and_report(const std::string& dir, const RunConfig& cfg,
                              const ChaosVerdict& verdict,
                              const TimescaleReport& ts) {
    {
        std::ofstream out(dir + "/verdict.json");
        json j = to_json(verdict);
        j["classifier_config"] = classifier_json(cfg.diagnostics.classifier);
        out << j.dump(2) << '\n';
    }
    std::ofstream out(dir + "/report.txt");
    out << "classification: " << to_string(verdict.classification) << '\n'
        << "plateau_rate:   " << fmt(verdict.plateau_rate) << "  (lambda_ref "
        << fmt(verdict.lambda_reference) << ", ratio "
        << fmt(verdict.plateau_ratio) << ")\n"
        << "decay_exponent: " << fmt(verdict.decay_exponent) << '\n'
        << "fit window:     [" << fmt(verdict.window_t_min) << ", "
        << fmt(verdict.window_t_max) << "]\n"
        << "H_eq:           " << fmt(verdict.H_eq) << "  (saturation at t ~ "
        << fmt(verdict.saturation_time) << ")\n"
        << "tau_D:          " << fmt(ts.tau_D) << " at delta_x "
        << fmt(ts.delta_x_reference) << '\n'
        << "tau_R:          " << fmt(ts.tau_R) << '\n'
        << "lambda_dB:      " << fmt(ts.lambda_dB) << '\n'
        << "sigma_c:        " << (ts.sigma_c ? fmt(*ts.sigma_c) : "n/a") << '\n'
        << "coherence len:  " << fmt(ts.coherence_len) << '\n'
        << "chi_1:          " << fmt(ts.chi_1) << " at x "
        << fmt(ts.chi_reference_x) << '\n'
        << "t_chi:          " << (ts.t_chi ? fmt(*ts.t_chi) : "n/a") << '\n'
        << "t_eq:           " << fmt(ts.t_eq.literal) << " (literal), "
        << fmt(ts.t_eq.difference) << " (difference)\n";
    if (!verdict.note.empty()) out << "note:           " << verdict.note << '\n';
}

}  // namespace

RunOutputs run_simulation(const RunConfig& config) {
    config.validate();
    const PhaseSpaceGrid grid = config.grid.build();
    const EnvironmentParams env = config.environment.build(config.grid.hbar);
    WignerField state = config.state.build(grid);

    RunOutputs out;
    out.initial_moments = moments(state);

    std::vector<Observer> observers;
    if (config.diagnostics.von_neumann)
        observers.push_back([](const WignerField& w, SampleRow& row) {
            row.von_neumann = von_neumann_entropy(w);
        });

    out.record = run(std::move(state), config.potential, env, config.evolution,
                     observers, "");
    out.series = series_from_record(out.record);
    out.verdict = classify_run(config, out.series);
    out.timescales = timescales_for(config, out.initial_moments, out.verdict,
                                    out.series);
    return out;
}

int cmd_run(const RunConfig& config, bool require_verdict) {
    const std::string dir = config.output.directory;
    fs::create_directories(dir);

    const PhaseSpaceGrid grid = config.grid.build();
    const EnvironmentParams env = config.environment.build(config.grid.hbar);
    WignerField state = config.state.build(grid);
    const Moments initial = moments(state);

    std::vector<Observer> observers;
    if (config.diagnostics.von_neumann)
        observers.push_back([](const WignerField& w, SampleRow& row) {
            row.von_neumann = von_neumann_entropy(w);
        });

    const std::string snapdir =
        config.evolution.snapshot_stride > 0 ? dir + "/snapshots" : "";
    RunRecord rec;
    std::string integrity_failure;
    try {
        rec = run(state, config.potential, env, config.evolution, observers,
                  snapdir);
    } catch (const IntegrityError& e) {
        integrity_failure = e.what();
    }
    if (rec.aborted) integrity_failure = rec.abort_reason;

    const EntropySeries series = series_from_record(rec);
    const ChaosVerdict verdict = classify_run(config, series);
    const TimescaleReport ts = timescales_for(config, initial, verdict, series);

    json manifest{{"version", kVersion},
                  {"preset", config.preset_name},
                  {"config_echo", config.echo},
                  {"grid", {{"nx", grid.nx()}, {"np", grid.np()},
                            {"x_min", grid.x_min()}, {"x_max", grid.x_max()},
                            {"p_min", grid.p_min()}, {"p_max", grid.p_max()},
                            {"hbar", grid.hbar()},
                            {"fourier_complete", grid.fourier_complete()}}},
                  {"environment", {{"gamma", env.gamma()},
                                   {"temperature", env.temperature()},
                                   {"mass", env.mass()},
                                   {"diffusion", env.diffusion()},
                                   {"tau_R", env.relaxation_time()},
                                   {"lambda_dB", env.de_broglie_wavelength()}}},
                  {"initial_moments", to_json(initial)},
                  {"timescales", to_json(ts)},
                  {"steps", rec.steps},
                  {"samples", rec.rows.size()},
                  {"aborted", !integrity_failure.empty()},
                  {"abort_reason", integrity_failure}};
    {
        std::ofstream out(dir + "/manifest.json");
        out << manifest.dump(2) << '\n';
    }
    write_series_csv(dir + "/series.csv", rec);
    write_verdict_and_report(dir, config, verdict, ts);
    if (config.output.marginals && rec.final_state)
        write_marginals(dir, *rec.final_state);

    if (!integrity_failure.empty()) {
        std::cerr << "integrity abort: " << integrity_failure << '\n';
        return kIntegrityAbort;
    }
    if (require_verdict &&
        verdict.classification == ChaosVerdict::Class::inconclusive)
        return kInconclusive;
    return kOk;
}

SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "D" || s == "diffusion") return SweepAxis::diffusion;
    if (s == "hbar") return SweepAxis::hbar;
    if (s == "drive_amplitude" || s == "A") return SweepAxis::drive_amplitude;
    throw ConfigError("sweep axis must be D, hbar, or drive_amplitude");
}

namespace {

RunConfig apply_axis(const RunConfig& base, SweepAxis axis, double value) {
    RunConfig cfg = base;
    switch (axis) {
        case SweepAxis::diffusion:
            if (cfg.environment.gamma != 0.0)
                throw ConfigError("sweep D: base config must use the "
                                  "reversible classical limit (gamma = 0)");
            cfg.environment.diffusion = value;
            break;
        case SweepAxis::hbar: {
            // preserve purity of a pure base state at fixed delta_p by
            // rescaling sigma_x with hbar
            const bool was_pure = cfg.state.gaussian.pure(cfg.grid.hbar);
            cfg.grid.hbar = value;
            if (was_pure && cfg.state.kind == StateConfig::Kind::gaussian)
                cfg.state.gaussian.sigma_x =
                    value / (2.0 * cfg.state.gaussian.sigma_p);
            break;
        }
        case SweepAxis::drive_amplitude:
            cfg.potential.drive_amplitude = value;
            break;
    }
    return cfg;
}

const char* axis_slug(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::diffusion: return "D";
        case SweepAxis::hbar: return "hbar";
        case SweepAxis::drive_amplitude: return "A";
    }
    return "axis";
}

}  // namespace

int cmd_sweep(const RunConfig& base, SweepAxis axis,
              const std::vector<double>& values, std::size_t jobs,
              bool require_verdict) {
    if (values.empty()) throw ConfigError("sweep: no axis values given");
    if (jobs == 0) jobs = 1;
    const std::string root = base.output.directory;
    fs::create_directories(root);

    struct Slot {
        RunConfig cfg;
        double value = 0.0;
        int status = kOk;
        ChaosVerdict verdict;
        TimescaleReport ts;
        std::string error;
    };
    std::vector<Slot> slots(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::ostringstream sub;
        sub << root << '/' << axis_slug(axis) << '=' << values[i];
        slots[i].value = values[i];
        slots[i].cfg = apply_axis(base, axis, values[i]);
        slots[i].cfg.output.directory = sub.str();
    }

    std::mutex next_mutex;
    std::size_t next = 0;
    auto worker = [&]() {
        while (true) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(next_mutex);
                if (next >= slots.size()) return;
                i = next++;
            }
            auto& slot = slots[i];
            try {
                slot.status = cmd_run(slot.cfg, require_verdict);
                StoredRun sr = read_run_dir(slot.cfg.output.directory);
                slot.verdict = classify_run(slot.cfg, sr.series);
                const Moments init =
                    sr.rows.empty() ? Moments{} : sr.rows.front().moments;
                slot.ts = timescales_for(slot.cfg, init, slot.verdict, sr.series);
            } catch (const std::exception& e) {
                slot.status = kIntegrityAbort;
                slot.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < std::min(jobs, slots.size()); ++j)
        pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::ofstream out(root + "/sweep.csv");
    out << "value,classification,plateau_rate,plateau_ratio,decay_exponent,"
           "t_chi,sigma_c,tau_D,status\n";
    int status = kOk;
    for (const auto& s : slots) {
        out << fmt(s.value) << ',' << to_string(s.verdict.classification) << ','
            << fmt(s.verdict.plateau_rate) << ',' << fmt(s.verdict.plateau_ratio)
            << ',' << fmt(s.verdict.decay_exponent) << ','
            << (s.ts.t_chi ? fmt(*s.ts.t_chi) : "") << ','
            << (s.ts.sigma_c ? fmt(*s.ts.sigma_c) : "") << ',' << fmt(s.ts.tau_D)
            << ',' << s.status << '\n';
        if (s.status != kOk && status == kOk) status = s.status;
        if (!s.error.empty())
            std::cerr << axis_slug(axis) << "=" << s.value << ": " << s.error
                      << '\n';
    }
    return status;
}

int cmd_lyapunov(const RunConfig& config) {
    TrajectoryState ic{config.lyapunov.x0, config.lyapunov.p0, 0.0};
    const LyapunovSpectrum sp =
        benettin_spectrum(ic, config.potential, config.lyapunov.dt,
                          config.lyapunov.t_total, config.lyapunov.renorm_stride);
    json j{{"version", kVersion},
           {"lambda_plus", sp.lambda_plus},
           {"lambda_minus", sp.lambda_minus},
           {"sum", sp.lambda_plus + sp.lambda_minus},
           {"converged", sp.converged},
           {"averaging_time", sp.averaging_time},
           {"dt", config.lyapunov.dt},
           {"t_total", config.lyapunov.t_total},
           {"renorm_stride", config.lyapunov.renorm_stride},
           {"initial", {{"x0", config.lyapunov.x0}, {"p0", config.lyapunov.p0}}}};
    json hist = json::array();
    const std::size_t stride = std::max<std::size_t>(1, sp.history.size() / 200);
    for (std::size_t i = 0; i < sp.history.size(); i += stride)
        hist.push_back({sp.history[i][0], sp.history[i][1], sp.history[i][2]});
    j["history"] = hist;
    std::cout << j.dump(2) << '\n';
    fs::create_directories(config.output.directory);
    std::ofstream out(config.output.directory + "/lyapunov.json");
    out << j.dump(2) << '\n';
    return sp.converged ? kOk : kInconclusive;
}

int cmd_report(const std::string& run_dir, bool require_verdict) {
    StoredRun sr = read_run_dir(run_dir);
    const ChaosVerdict verdict = classify_run(sr.config, sr.series);
    const Moments init = sr.rows.empty() ? Moments{} : sr.rows.front().moments;
    const TimescaleReport ts = timescales_for(sr.config, init, verdict, sr.series);
    write_verdict_and_report(run_dir, sr.config, verdict, ts);
    std::ifstream rep(run_dir + "/report.txt");
    std::cout << rep.rdbuf();
    if (require_verdict &&
        verdict.classification == ChaosVerdict::Class::inconclusive)
        return kInconclusive;
    return kOk;
}

}  // namespace wigsim
