#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wigsim/environment.hpp"
#include "wigsim/potential.hpp"
#include "wigsim/wigner_field.hpp"

namespace wigsim {

/// How the potential part of the quantum Liouville generator is applied
/// in chord space:
///   moyal_exact   e^{-i [V(x+y/2) - V(x-y/2)] dt / hbar}, the exact kernel
///   poisson       e^{-i V'(x) y dt / hbar}, pure Liouville force
///   truncated(n)  the chord series through order hbar^(2n)
enum class BracketMode { moyal_exact, poisson, truncated };

struct EvolutionConfig {
    double dt = 1e-3;
    double t_max = 1.0;
    BracketMode bracket = BracketMode::moyal_exact;
    std::size_t truncation_order = 1;  // n_max for BracketMode::truncated
    bool friction_enabled = false;
    std::size_t snapshot_stride = 0;     // steps; 0 disables snapshots
    std::size_t diagnostics_stride = 1;  // steps between observer calls

    void validate() const;
};

/// One diagnostics sample of a run.
struct SampleRow {
    double t = 0.0;
    double norm = 0.0;
    double purity = 0.0;
    Moments moments;
    std::optional<double> von_neumann;  // filled by an observer when enabled
};

struct RunRecord {
    std::vector<SampleRow> rows;
    std::vector<std::string> snapshot_paths;
    std::size_t steps = 0;
    bool aborted = false;
    std::string abort_reason;
    std::optional<WignerField> final_state;
};

using Observer = std::function<void(const WignerField&, SampleRow&)>;

/// Exact free-streaming shear x -> x + (p/m) dt, applied in the
/// x-spectrum.
WignerField kinetic_step(const WignerField& w, const PotentialSpec& spec,
                         double dt);

/// Chord-space potential kernel at time t (drive evaluated at t itself;
/// callers supply midpoint times). Throws IntegrityError when the kernel
/// phase changes by more than pi across one chord sample (timestep too
/// large: the kick would alias).
WignerField potential_step(const WignerField& w, const PotentialSpec& spec,
                           double dt, BracketMode mode, double t,
                           std::size_t truncation_order = 1);

/// Exact solution of dW/dt = D d^2W/dp^2 via the chord-space factor
/// e^{-D y^2 dt / hbar^2}.
WignerField diffusion_step(const WignerField& w, const EnvironmentParams& env,
                           double dt);

/// Exact characteristics solution of dW/dt = 2 gamma d_p(p W):
/// W <- e^{2 gamma dt} W(x, p e^{2 gamma dt}), evaluated with spectral
/// interpolation along p. Throws when the rescaling pushes visible
/// support off the grid (norm change above 1e-8).
WignerField friction_step(const WignerField& w, const EnvironmentParams& env,
                          double dt);

/// Strang-split step over [t, t+dt]: half-kinetic, half-potential,
/// full diffusion (+friction), half-potential, half-kinetic, with the
/// drive evaluated at each sub-interval midpoint. Holds cached kernels
/// and FFT plans; one Propagator per run.
class Propagator {
  public:
    Propagator(PhaseSpaceGrid grid, PotentialSpec spec, EnvironmentParams env,
               EvolutionConfig config);
    ~Propagator();
    Propagator(const Propagator&) = delete;
    Propagator& operator=(const Propagator&) = delete;

    /// Advances the state by one step of config.dt.
    void step(WignerField& w) const;

    const EvolutionConfig& config() const { return config_; }

    /// Largest dt for which the potential-kernel aliasing bound holds on
    /// this grid at time t (with the state anywhere on the grid).
    double max_stable_dt(double t = 0.0) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    EvolutionConfig config_;
};

/// Iterates Propagator::step from the initial state, sampling
/// norm/purity/moments (and invoking observers) every
/// diagnostics_stride steps and writing WIG1 snapshots every
/// snapshot_stride steps into snapshot_dir. Aborts with IntegrityError
/// when the norm drifts by more than 1e-4 or the field turns non-finite.
RunRecord run(WignerField state, const PotentialSpec& spec,
              const EnvironmentParams& env, const EvolutionConfig& config,
              const std::vector<Observer>& observers = {},
              const std::string& snapshot_dir = "");

}  // namespace wigsim
