#include "lcd/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lcd {

namespace {

bool all_finite(const SpectralField& F) { return F.coeffs().allFinite(); }

// factor * (a + h * b), column by column.
Eigen::ArrayXXcd damped(const Eigen::ArrayXXcd& a, double h, const Eigen::ArrayXXcd& b,
                        const Eigen::ArrayXd& factor) {
  Eigen::ArrayXXcd out(a.rows(), a.cols());
  for (Eigen::Index c = 0; c < a.cols(); ++c) out.col(c) = (a.col(c) + h * b.col(c)) * factor;
  return out;
}

void finalize_velocity(SpectralField& u_hat) {
  u_hat = leray_project(u_hat);
  u_hat.coeffs().row(0).setZero();
}

// Index of the first cadence point strictly after t.
long next_event_index(double t, double interval) {
  long n = static_cast<long>(std::floor(t / interval));
  while (static_cast<double>(n) * interval <= t) ++n;
  while (n > 0 && static_cast<double>(n - 1) * interval > t) --n;
  return n;
}

bool on_cadence(double t, double interval) {
  const double n = std::round(t / interval);
  return static_cast<double>(static_cast<long>(n)) * interval == t;
}

}  // namespace

Scheme parse_scheme(const std::string& name) {
  if (name == "IF-RK2" || name == "if-rk2" || name == "rk2") return Scheme::IfRk2;
  if (name == "IF-Euler" || name == "if-euler" || name == "euler") return Scheme::IfEuler;
  throw ParameterError("unknown scheme '" + name + "' (expected IF-RK2 or IF-Euler)");
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::IfRk2 ? "IF-RK2" : "IF-Euler";
}

void StepperConfig::validate() const {
  if (!(dt_init > 0.0)) throw ParameterError("dt_init must be positive");
  if (!(cfl_number > 0.0 && cfl_number <= 1.0)) throw ParameterError("cfl_number must be in (0, 1]");
  if (!(dt_max > 0.0)) throw ParameterError("dt_max must be positive");
  if (!(t_end >= 0.0)) throw ParameterError("t_end must be non-negative");
}

State step(const State& state, const PhysicsParams& params, double dt, Scheme scheme) {
  if (!(dt > 0.0)) throw ParameterError("step needs dt > 0");
  const Grid& g = state.grid();
  const Eigen::ArrayXd decay_u = (-params.nu * dt * g.k_squared()).exp();
  const Eigen::ArrayXd decay_d = (-dt * g.k_squared()).exp();

  const Tendency n0 = nonlinear_tendency(state, params);

  State predicted = state;
  predicted.u_hat.coeffs() = damped(state.u_hat.coeffs(), dt, n0.du_hat.coeffs(), decay_u);
  predicted.d_hat.coeffs() = damped(state.d_hat.coeffs(), dt, n0.dd_hat.coeffs(), decay_d);
  predicted.t = state.t + dt;

  State next = predicted;
  if (scheme == Scheme::IfRk2) {
    const Tendency n1 = nonlinear_tendency(predicted, params);
    next.u_hat.coeffs() = damped(state.u_hat.coeffs(), 0.5 * dt, n0.du_hat.coeffs(), decay_u) +
                          0.5 * dt * n1.du_hat.coeffs();
    next.d_hat.coeffs() = damped(state.d_hat.coeffs(), 0.5 * dt, n0.dd_hat.coeffs(), decay_d) +
                          0.5 * dt * n1.dd_hat.coeffs();
  }
  finalize_velocity(next.u_hat);

  if (!all_finite(next.u_hat) || !all_finite(next.d_hat))
    throw BlowUpError("non-finite coefficient after step at t=" + std::to_string(state.t) +
                          " with dt=" + std::to_string(dt),
                      state.t);
  return next;
}

double adaptive_dt(double max_speed, double dx, const StepperConfig& config) {
  const double speed = std::max(max_speed, kSpeedFloor);
  const double dt = std::min(config.dt_max, config.cfl_number * dx / speed);
  return dt > 0.0 ? dt : std::numeric_limits<double>::min();
}

double adaptive_dt(const State& state, const StepperConfig& config) {
  const double speed = lp_norm(state.velocity(), kInfinity);
  return adaptive_dt(speed, state.grid().spacing(), config);
}

State integrate(State state, const PhysicsParams& params, const StepperConfig& config,
                const Hooks& hooks) {
  params.validate();
  config.validate();
  const bool sampling = hooks.sample_interval > 0.0 && hooks.on_sample;
  const bool checkpointing = hooks.checkpoint_interval > 0.0 && hooks.on_checkpoint;

  if (sampling && hooks.sample_initial && on_cadence(state.t, hooks.sample_interval))
    hooks.on_sample(state);

  long next_sample = sampling ? next_event_index(state.t, hooks.sample_interval) : 0;
  long next_checkpoint =
      checkpointing ? next_event_index(state.t, hooks.checkpoint_interval) : 0;

  while (state.t < config.t_end) {
    double target = config.t_end;
    if (sampling)
      target = std::min(target, static_cast<double>(next_sample) * hooks.sample_interval);
    if (checkpointing)
      target = std::min(target, static_cast<double>(next_checkpoint) * hooks.checkpoint_interval);

    double dt = adaptive_dt(state, config);
    if (state.t == 0.0) dt = std::min(dt, config.dt_init);
    const bool lands = state.t + dt >= target;
    if (lands) dt = target - state.t;

    State next;
    try {
      next = step(state, params, dt, config.scheme);
    } catch (const BlowUpError&) {
      if (hooks.on_blowup) hooks.on_blowup(state);
      throw;
    }
    next.t = lands ? target : state.t + dt;
    state = std::move(next);
    if (hooks.on_step) hooks.on_step(state, dt);

    if (sampling && state.t == static_cast<double>(next_sample) * hooks.sample_interval) {
      hooks.on_sample(state);
      ++next_sample;
    }
    if (checkpointing &&
        state.t == static_cast<double>(next_checkpoint) * hooks.checkpoint_interval) {
      hooks.on_checkpoint(state);
      ++next_checkpoint;
    }
  }
  return state;
}

}  // namespace lcd
