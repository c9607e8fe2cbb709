#pragma once

#include <Eigen/Dense>

#include "lcd/spectral.hpp"

namespace lcd {

struct PhysicsParams {
  double eta = 1.0;  ///< Ginzburg-Landau length scale.
  double nu = 1.0;   ///< Viscosity.
  /// When false every nonlinear term (advection, Ericksen stress, penalty
  /// force) is dropped and only the heat semigroup remains.
  bool nonlinear = true;

  void validate() const;
};

/// Complete evolving unknown. The director is stored as its deviation from
/// the far-field direction w0, so d = w0 + inverse_transform(d_hat).
struct State {
  SpectralField u_hat;
  SpectralField d_hat;
  Eigen::Vector3d w0 = Eigen::Vector3d::UnitZ();
  double t = 0.0;

  const Grid& grid() const { return u_hat.grid(); }

  /// Zero velocity and d identically w0.
  static State rest(const GridPtr& grid, const Eigen::Vector3d& w0 = Eigen::Vector3d::UnitZ());

  /// Point values of d (not the deviation).
  RealField director() const;
  RealField velocity() const { return inverse_transform(u_hat); }
};

struct Tendency {
  SpectralField du_hat;
  SpectralField dd_hat;
};

/// Pointwise f(d) = (|d|^2 - 1) d / eta^2 for an N x 3 array of vectors.
template <typename Derived>
Eigen::ArrayXXd penalty_force(const Eigen::ArrayBase<Derived>& d, double eta) {
  const Eigen::ArrayXd excess = d.square().rowwise().sum() - 1.0;
  return (d.colwise() * excess) / (eta * eta);
}

/// Pointwise F(d) = (|d|^2 - 1)^2 / (4 eta^2).
template <typename Derived>
Eigen::ArrayXd penalty_density(const Eigen::ArrayBase<Derived>& d, double eta) {
  const Eigen::ArrayXd excess = d.square().rowwise().sum() - 1.0;
  return excess.square() / (4.0 * eta * eta);
}

RealField penalty_force(const RealField& d, double eta);

/// Box quadrature of F(d).
double penalty_energy(const RealField& d, double eta);

/// Spectral coefficients of div(grad d (x) grad d), component i being
/// sum_j d_j (grad_i d . grad_j d). Only gradients of d_hat enter, so the
/// constant w0 is irrelevant.
SpectralField ericksen_stress_divergence(const SpectralField& d_hat);

/// P[-(u.grad)u - div(grad d (x) grad d)] with the viscous term excluded.
SpectralField momentum_rhs(const State& state, const PhysicsParams& params);

/// -(u.grad)d - f(d) with the Laplacian excluded.
SpectralField director_rhs(const State& state, const PhysicsParams& params);

/// Both nonlinear tendencies, sharing one set of transforms. du_hat is
/// solenoidal and dealiased; dd_hat is dealiased.
Tendency nonlinear_tendency(const State& state, const PhysicsParams& params);

/// Time derivative of 1/2|u|^2 + 1/2|grad d|^2 + int F(d) under the full
/// semi-discrete system (dissipation included), from inner products of the
/// state with its tendency.
double energy_rate(const State& state, const PhysicsParams& params);

}  // namespace lcd
