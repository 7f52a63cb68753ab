#include "wigsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

namespace wigsim {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

struct Field {
    std::string value;
    std::size_t line = 0;
};
using Section = std::map<std::string, Field>;

double parse_double(const std::string& sec, const std::string& key,
                    const Field& f) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(f.value, &pos);
        if (pos != f.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail(f.line, "field '" + sec + "." + key + "': expected a number, got '" +
                         f.value + "'");
    }
}

std::size_t parse_count(const std::string& sec, const std::string& key,
                        const Field& f) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(f.value, &pos);
        if (pos != f.value.size() || v < 0) throw std::invalid_argument("");
        return static_cast<std::size_t>(v);
    } catch (...) {
        fail(f.line, "field '" + sec + "." + key +
                         "': expected a non-negative integer, got '" + f.value + "'");
    }
}

bool parse_flag(const std::string& sec, const std::string& key, const Field& f) {
    if (f.value == "on" || f.value == "true") return true;
    if (f.value == "off" || f.value == "false") return false;
    fail(f.line, "field '" + sec + "." + key + "': expected on/off, got '" +
                     f.value + "'");
}

std::vector<double> parse_list(const std::string& sec, const std::string& key,
                               const Field& f) {
    std::vector<double> out;
    std::stringstream ss(f.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(f.line, "field '" + sec + "." + key + "': empty list entry");
        Field g{item, f.line};
        out.push_back(parse_double(sec, key, g));
    }
    if (out.empty()) fail(f.line, "field '" + sec + "." + key + "': empty list");
    return out;
}

/// Pulls `key` out of the section map, erasing it so leftovers can be
/// reported as unknown keys.
std::optional<Field> take(Section& s, const std::string& key) {
    auto it = s.find(key);
    if (it == s.end()) return std::nullopt;
    Field f = it->second;
    s.erase(it);
    return f;
}

void reject_leftovers(const std::string& sec, const Section& s) {
    if (s.empty()) return;
    const auto& [key, field] = *s.begin();
    fail(field.line, "unknown key '" + key + "' in section '" + sec + "'");
}

std::map<std::string, Section> tokenize(const std::string& text) {
    std::map<std::string, Section> sections;
    std::istringstream in(text);
    std::string raw, current;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.back() == '{') {
            if (!current.empty()) fail(lineno, "nested sections are not supported");
            current = trim(line.substr(0, line.size() - 1));
            if (current.empty()) fail(lineno, "section name missing before '{'");
            sections[current];  // empty sections still get name-checked
            continue;
        }
        if (line == "}") {
            if (current.empty()) fail(lineno, "'}' outside a section");
            current.clear();
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(lineno, "expected 'key = value', got '" + line + "'");
        if (current.empty())
            fail(lineno, "key outside any section: '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            fail(lineno, "expected 'key = value', got '" + line + "'");
        auto [it, inserted] = sections[current].insert({key, Field{value, lineno}});
        if (!inserted)
            fail(lineno, "duplicate key '" + key + "' in section '" + current + "'");
    }
    if (!current.empty())
        fail(lineno, "section '" + current + "' not closed");
    return sections;
}

const std::vector<std::string> kKnownSections = {
    "grid", "state", "potential", "environment", "evolution",
    "diagnostics", "lyapunov", "output"};

}  // namespace

PhaseSpaceGrid GridConfig::build() const {
    if (square) {
        if (nx != np)
            throw ConfigError("grid: square layout requires nx == np");
        return PhaseSpaceGrid::square(nx, hbar, x_center, p_center);
    }
    return PhaseSpaceGrid(nx, np, x_min, x_max, p_min, p_max, hbar);
}

WignerField StateConfig::build(const PhaseSpaceGrid& grid) const {
    if (kind == Kind::cat) return make_cat(x_sep, gaussian, grid);
    return make_gaussian(gaussian, grid);
}

EnvironmentParams EnvironmentConfig::build(double hbar) const {
    return EnvironmentParams(gamma, temperature, mass, hbar, diffusion);
}

void RunConfig::validate() const {
    potential.validate();
    evolution.validate();
    const PhaseSpaceGrid g = grid.build();       // throws on bad geometry
    (void)environment.build(grid.hbar);          // throws on bad coupling
    if (diagnostics.von_neumann && !g.fourier_complete())
        throw ConfigError(
            "diagnostics: von_neumann entropy needs a Fourier-complete grid "
            "(layout = square, or extents with Lx*Lp = 2 pi hbar nx); "
            "disable it for free-form grids");
}

RunConfig parse_config(const std::string& text) {
    auto sections = tokenize(text);
    for (const auto& [name, _] : sections)
        if (std::find(kKnownSections.begin(), kKnownSections.end(), name) ==
            kKnownSections.end())
            throw ConfigError("config: unknown section '" + name + "'");

    RunConfig cfg;
    cfg.echo = text;

    if (auto s = sections.find("grid"); s != sections.end()) {
        auto& sec = s->second;
        if (auto f = take(sec, "layout")) {
            if (f->value == "square") cfg.grid.square = true;
            else if (f->value == "explicit") cfg.grid.square = false;
            else fail(f->line, "grid.layout must be 'square' or 'explicit'");
        }
        if (auto f = take(sec, "n")) cfg.grid.nx = cfg.grid.np = parse_count("grid", "n", *f);
        if (auto f = take(sec, "nx")) cfg.grid.nx = parse_count("grid", "nx", *f);
        if (auto f = take(sec, "np")) cfg.grid.np = parse_count("grid", "np", *f);
        if (auto f = take(sec, "hbar")) cfg.grid.hbar = parse_double("grid", "hbar", *f);
        if (auto f = take(sec, "x_center")) cfg.grid.x_center = parse_double("grid", "x_center", *f);
        if (auto f = take(sec, "p_center")) cfg.grid.p_center = parse_double("grid", "p_center", *f);
        if (auto f = take(sec, "x_min")) cfg.grid.x_min = parse_double("grid", "x_min", *f);
        if (auto f = take(sec, "x_max")) cfg.grid.x_max = parse_double("grid", "x_max", *f);
        if (auto f = take(sec, "p_min")) cfg.grid.p_min = parse_double("grid", "p_min", *f);
        if (auto f = take(sec, "p_max")) cfg.grid.p_max = parse_double("grid", "p_max", *f);
        reject_leftovers("grid", sec);
    }

    if (auto s = sections.find("state"); s != sections.end()) {
        auto& sec = s->second;
        if (auto f = take(sec, "type")) {
            if (f->value == "gaussian") cfg.state.kind = StateConfig::Kind::gaussian;
            else if (f->value == "cat") cfg.state.kind = StateConfig::Kind::cat;
            else fail(f->line, "state.type must be 'gaussian' or 'cat'");
        }
        if (auto f = take(sec, "x0")) cfg.state.gaussian.x0 = parse_double("state", "x0", *f);
        if (auto f = take(sec, "p0")) cfg.state.gaussian.p0 = parse_double("state", "p0", *f);
        if (auto f = take(sec, "sigma_x")) cfg.state.gaussian.sigma_x = parse_double("state", "sigma_x", *f);
        if (auto f = take(sec, "sigma_p")) cfg.state.gaussian.sigma_p = parse_double("state", "sigma_p", *f);
        if (auto f = take(sec, "correlation")) cfg.state.gaussian.correlation = parse_double("state", "correlation", *f);
        if (auto f = take(sec, "x_sep")) cfg.state.x_sep = parse_double("state", "x_sep", *f);
        reject_leftovers("state", sec);
    }

    if (auto s = sections.find("potential"); s != sections.end()) {
        auto& sec = s->second;
        if (auto f = take(sec, "coefficients"))
            cfg.potential.coefficients = parse_list("potential", "coefficients", *f);
        if (auto f = take(sec, "drive_amplitude"))
            cfg.potential.drive_amplitude = parse_double("potential", "drive_amplitude", *f);
        if (auto f = take(sec, "drive_frequency"))
            cfg.potential.drive_frequency = parse_double("potential", "drive_frequency", *f);
        reject_leftovers("potential", sec);
    } else {
        cfg.potential.coefficients = {0.0, 0.0, 0.5};  // default: unit harmonic
    }

    if (auto s = sections.find("environment"); s != sections.end()) {
        auto& sec = s->second;
        if (auto f = take(sec, "gamma")) cfg.environment.gamma = parse_double("environment", "gamma", *f);
        if (auto f = take(sec, "temperature")) cfg.environment.temperature = parse_double("environment", "temperature", *f);
        if (auto f = take(sec, "mass")) cfg.environment.mass = parse_double("environment", "mass", *f);
        if (auto f = take(sec, "diffusion")) {
            const double d = parse_double("environment", "diffusion", *f);
            if (cfg.environment.gamma != 0.0)
                fail(f->line,
                     "environment.diffusion is a direct-D override for the "
                     "reversible classical limit and requires gamma = 0; with "
                     "gamma > 0, D = 2 m gamma k_B T already fixes it");
            cfg.environment.diffusion = d;
        }
        reject_leftovers("environment", sec);
    }
    cfg.potential.mass = cfg.environment.mass;

    if (auto s = sections.find("evolution"); s != sections.end()) {
        auto& sec = s->second;
        if (auto f = take(sec, "dt")) cfg.evolution.dt = parse_double("evolution", "dt", *f);
        if (auto f = take(sec, "t_max")) cfg.evolution.t_max = parse_double("evolution", "t_max", *f);
        if (auto f = take(sec, "bracket")) {
            if (f->value == "moyal_exact") cfg.evolution.bracket = BracketMode::moyal_exact;
            else if (f->value == "poisson") cfg.evolution.bracket = BracketMode::poisson;
            else if (f->value.rfind("truncated", 0) == 0) {
                cfg.evolution.bracket = BracketMode::truncated;
                const auto colon = f->value.find(':');
                if (colon == std::string::npos)
                    fail(f->line, "evolution.bracket: use truncated:<n_max>");
                Field g{trim(f->value.substr(colon + 1)), f->line};
                cfg.evolution.truncation_order = parse_count("evolution", "bracket", g);
            } else
                fail(f->line, "evolution.bracket must be moyal_exact, poisson, "
                              "or truncated:<n_max>");
        }
        if (auto f = take(sec, "friction")) cfg.evolution.friction_enabled = parse_flag("evolution", "friction", *f);
        if (auto f = take(sec, "snapshot_stride")) cfg.evolution.snapshot_stride = parse_count("evolution", "snapshot_stride", *f);
        if (auto f = take(sec, "diagnostics_stride")) cfg.evolution.diagnostics_stride = parse_count("evolution", "diagnostics_stride", *f);
        reject_leftovers("evolution", sec);
    }

    if (auto s = sections.find("diagnostics"); s != sections.end()) {
        auto& sec = s->second;
        if (auto f = take(sec, "von_neumann")) cfg.diagnostics.von_neumann = parse_flag("diagnostics", "von_neumann", *f);
        if (auto f = take(sec, "lyapunov_reference")) cfg.diagnostics.lyapunov_reference = parse_double("diagnostics", "lyapunov_reference", *f);
        auto& cls = cfg.diagnostics.classifier;
        if (auto f = take(sec, "ratio_min")) cls.ratio_min = parse_double("diagnostics", "ratio_min", *f);
        if (auto f = take(sec, "ratio_max")) cls.ratio_max = parse_double("diagnostics", "ratio_max", *f);
        if (auto f = take(sec, "alpha_target")) cls.alpha_target = parse_double("diagnostics", "alpha_target", *f);
        if (auto f = take(sec, "alpha_band")) cls.alpha_band = parse_double("diagnostics", "alpha_band", *f);
        if (auto f = take(sec, "residual_margin")) cls.residual_margin = parse_double("diagnostics", "residual_margin", *f);
        if (auto f = take(sec, "saturation_fraction")) cls.saturation_fraction = parse_double("diagnostics", "saturation_fraction", *f);
        if (auto f = take(sec, "rate_window")) cls.smoothing_window = parse_double("diagnostics", "rate_window", *f);
        if (auto f = take(sec, "fit_t_min")) cls.window_t_min = parse_double("diagnostics", "fit_t_min", *f);
        if (auto f = take(sec, "fit_t_max")) cls.window_t_max = parse_double("diagnostics", "fit_t_max", *f);
        reject_leftovers("diagnostics", sec);
    }

    if (auto s = sections.find("lyapunov"); s != sections.end()) {
        auto& sec = s->second;
        if (auto f = take(sec, "x0")) cfg.lyapunov.x0 = parse_double("lyapunov", "x0", *f);
        if (auto f = take(sec, "p0")) cfg.lyapunov.p0 = parse_double("lyapunov", "p0", *f);
        if (auto f = take(sec, "dt")) cfg.lyapunov.dt = parse_double("lyapunov", "dt", *f);
        if (auto f = take(sec, "t_total")) cfg.lyapunov.t_total = parse_double("lyapunov", "t_total", *f);
        if (auto f = take(sec, "renorm_stride")) cfg.lyapunov.renorm_stride = parse_count("lyapunov", "renorm_stride", *f);
        reject_leftovers("lyapunov", sec);
    }

    if (auto s = sections.find("output"); s != sections.end()) {
        auto& sec = s->second;
        if (auto f = take(sec, "directory")) cfg.output.directory = f->value;
        if (auto f = take(sec, "marginals")) cfg.output.marginals = parse_flag("output", "marginals", *f);
        reject_leftovers("output", sec);
    }

    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------------------
// Presets. The files under presets/ carry the same text; a test keeps the
// two in sync.

namespace presets {

const std::string harmonic = R"(# Integrable reference: unit harmonic oscillator in the reversible
# classical limit (gamma = 0, momentum diffusion only). Entropy grows
# logarithmically; the production rate falls off as 1/t.
grid {
  layout = square
  n = 256
  hbar = 1.0
}
state {
  type = gaussian
  x0 = 3.0
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
  t_max = 200.0
  bracket = moyal_exact
  diagnostics_stride = 50
}
diagnostics {
  von_neumann = on
  lyapunov_reference = 0.0
  rate_window = 6.283185307179586
  fit_t_min = 30.0
  fit_t_max = 200.0
}
output {
  directory = runs/harmonic
}
)";

const std::string inverted_oscillator = R"(# Linear unstable flow V = -x^2/2 (stretching rate 1), reversible
# classical limit. The transient entropy rate follows the closed form
# lambda / (1 + (sigma_p(0)^2/sigma_c^2 - 1) e^{-2 lambda t}) while the
# state fits the grid; the stable-direction momentum profile contracts
# toward the critical width sqrt(2 D / lambda).
grid {
  layout = square
  n = 512
  hbar = 1.0
}
state {
  type = gaussian
  x0 = 0.0
  p0 = 0.0
  sigma_x = 1.5811388300841898
  sigma_p = 1.5811388300841898
}
potential {
  coefficients = 0, 0, -0.5
}
environment {
  gamma = 0.0
  temperature = 1.0
  mass = 1.0
  diffusion = 0.05
}
evolution {
  dt = 0.005
  t_max = 8.0
  bracket = moyal_exact
  diagnostics_stride = 20
}
diagnostics {
  von_neumann = on
  lyapunov_reference = 1.0
  rate_window = 0.5
  fit_t_min = 4.0
  fit_t_max = 8.0
}
output {
  directory = runs/inverted_oscillator
}
)";

const std::string double_well_driven = R"(# Canonical chaotic scenario: driven double well
# V = x^4/4 - x^2/2 + 0.3 x cos(t). lyapunov_reference carries the
# Benettin fixture (share/fixtures/double_well_driven_lyapunov.json).
# The state starts inside the chaotic sea, away from the saddle, at the
# critical momentum width sigma_c(D) so the squeeze transient is absent.
grid {
  layout = square
  n = 512
  hbar = 0.02
}
state {
  type = gaussian
  x0 = 0.5
  p0 = -0.7
  sigma_x = 0.1792
  sigma_p = 0.1792
}
potential {
  coefficients = 0, 0, -0.5, 0, 0.25
  drive_amplitude = 0.3
  drive_frequency = 1.0
}
environment {
  gamma = 0.0
  temperature = 1.0
  mass = 1.0
  diffusion = 0.002
}
evolution {
  dt = 0.0035
  t_max = 60.0
  bracket = moyal_exact
  diagnostics_stride = 72
}
diagnostics {
  von_neumann = on
  lyapunov_reference = 0.1246
  rate_window = 8.0
  fit_t_min = 8.0
  fit_t_max = 30.0
}
lyapunov {
  x0 = 1.4142135623730951
  p0 = 0.0
  dt = 0.002
  t_total = 40000.0
  renorm_stride = 10
}
output {
  directory = runs/double_well_driven
}
)";

const std::string cat_decoherence = R"(# Superposition of two coherent states 8 apart in a unit harmonic
# well. Momentum diffusion kills the interference fringe on the
# decoherence timescale hbar^2/(D x_sep^2) ~ 0.16, far below the
# oscillation period; purity drops to 1/2 while the norm is conserved.
grid {
  layout = square
  n = 256
  hbar = 1.0
}
state {
  type = cat
  x0 = 0.0
  p0 = 0.0
  sigma_x = 0.7071067811865476
  sigma_p = 0.7071067811865476
  x_sep = 8.0
}
potential {
  coefficients = 0, 0, 0.5
}
environment {
  gamma = 0.0
  temperature = 1.0
  mass = 1.0
  diffusion = 0.1
}
evolution {
  dt = 0.005
  t_max = 12.0
  bracket = moyal_exact
  diagnostics_stride = 20
}
diagnostics {
  von_neumann = on
  lyapunov_reference = 0.0
}
output {
  directory = runs/cat_decoherence
}
)";

}  // namespace presets

std::vector<std::string> preset_names() {
    return {"harmonic", "inverted_oscillator", "double_well_driven",
            "cat_decoherence"};
}

const std::string& preset_text(const std::string& name) {
    if (name == "harmonic") return presets::harmonic;
    if (name == "inverted_oscillator") return presets::inverted_oscillator;
    if (name == "double_well_driven") return presets::double_well_driven;
    if (name == "cat_decoherence") return presets::cat_decoherence;
    throw ConfigError("unknown preset '" + name + "'; available: harmonic, "
                      "inverted_oscillator, double_well_driven, cat_decoherence");
}

RunConfig load_preset(const std::string& name) {
    RunConfig cfg = parse_config(preset_text(name));
    cfg.preset_name = name;
    return cfg;
}

}  // namespace wigsim
