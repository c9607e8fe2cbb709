#pragma once

#include <functional>
#include <string>

#include "lcd/dynamics.hpp"

namespace lcd {

enum class Scheme { IfRk2, IfEuler };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme scheme);

struct StepperConfig {
  double dt_init = 0.01;
  double cfl_number = 0.4;
  double dt_max = 0.05;
  double t_end = 1.0;
  Scheme scheme = Scheme::IfRk2;

  void validate() const;
};

/// Lower bound on the speed used in the CFL denominator.
inline constexpr double kSpeedFloor = 1e-6;

/// Advance by dt, treating nu*Laplacian(u) and Laplacian(d) exactly through
/// per-mode factors exp(-nu|k|^2 dt) and exp(-|k|^2 dt). The velocity is
/// re-projected and its mean mode zeroed afterwards. Throws BlowUpError if
/// any coefficient becomes non-finite.
State step(const State& state, const PhysicsParams& params, double dt,
           Scheme scheme = Scheme::IfRk2);

/// min(dt_max, cfl * dx / max(|u|_inf, floor)).
double adaptive_dt(const State& state, const StepperConfig& config);
/// Same rule from a known maximum speed.
double adaptive_dt(double max_speed, double dx, const StepperConfig& config);

/// Callbacks driven by integrate(). Sample and checkpoint times are exact
/// multiples of their intervals; steps are shortened to land on them.
struct Hooks {
  double sample_interval = 0.0;  ///< 0 disables sampling.
  std::function<void(const State&)> on_sample;
  /// Emit a sample for the initial state if it lies on the cadence.
  bool sample_initial = true;

  double checkpoint_interval = 0.0;  ///< 0 disables checkpoints.
  std::function<void(const State&)> on_checkpoint;

  std::function<void(const State&, double dt)> on_step;
  /// Receives the last finite state before a BlowUpError propagates.
  std::function<void(const State&)> on_blowup;
};

/// Step from state.t to config.t_end. Deterministic for identical inputs.
/// A run starting at t = 0 takes its first step no longer than dt_init.
State integrate(State state, const PhysicsParams& params, const StepperConfig& config,
                const Hooks& hooks = {});

}  // namespace lcd
