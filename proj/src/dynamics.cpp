#include "lcd/dynamics.hpp"

#include <string>

namespace lcd {

namespace {

// Symmetric index pairs (i, j), i <= j, of the stress tensor.
constexpr int kPairs[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};

int pair_slot(int i, int j) {
  if (i > j) std::swap(i, j);
  for (int s = 0; s < 6; ++s)
    if (kPairs[s][0] == i && kPairs[s][1] == j) return s;
  return -1;
}

// Real-space columns 3c + j of a gradient block hold d_j of component c.
Eigen::ArrayXXd stress_tensor(const Eigen::Ref<const Eigen::ArrayXXd>& grad_d) {
  Eigen::ArrayXXd T(grad_d.rows(), 6);
  for (int s = 0; s < 6; ++s) {
    const int i = kPairs[s][0];
    const int j = kPairs[s][1];
    T.col(s) = grad_d.col(i) * grad_d.col(j) + grad_d.col(3 + i) * grad_d.col(3 + j) +
               grad_d.col(6 + i) * grad_d.col(6 + j);
  }
  return T;
}

Eigen::ArrayXXcd stress_divergence(const Grid& g, const Eigen::ArrayXXcd& T_hat) {
  Eigen::ArrayXXcd out = Eigen::ArrayXXcd::Zero(g.size(), 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.col(i) += T_hat.col(pair_slot(i, j)) * g.ik(j);
  return out;
}

// Convective derivative sum_j u_j d_j q_c for each of three components.
Eigen::ArrayXXd convect(const Eigen::Ref<const Eigen::ArrayXXd>& u,
                        const Eigen::Ref<const Eigen::ArrayXXd>& grad_q) {
  Eigen::ArrayXXd out(u.rows(), 3);
  for (int c = 0; c < 3; ++c)
    out.col(c) = u.col(0) * grad_q.col(3 * c) + u.col(1) * grad_q.col(3 * c + 1) +
                 u.col(2) * grad_q.col(3 * c + 2);
  return out;
}

Eigen::ArrayXXd add_far_field(const Eigen::ArrayXXd& deviation, const Eigen::Vector3d& w0) {
  Eigen::ArrayXXd d = deviation;
  for (int c = 0; c < 3; ++c) d.col(c) += w0(c);
  return d;
}

}  // namespace

void PhysicsParams::validate() const {
  if (!(eta > 0.0)) throw ParameterError("eta must be positive, got " + std::to_string(eta));
  if (!(nu > 0.0)) throw ParameterError("nu must be positive, got " + std::to_string(nu));
}

State State::rest(const GridPtr& grid, const Eigen::Vector3d& w0) {
  State s;
  s.u_hat = SpectralField(grid, 3);
  s.d_hat = SpectralField(grid, 3);
  s.w0 = w0;
  s.t = 0.0;
  return s;
}

RealField State::director() const {
  RealField dev = inverse_transform(d_hat);
  return RealField(dev.grid_ptr(), add_far_field(dev.values(), w0));
}

RealField penalty_force(const RealField& d, double eta) {
  if (d.components() != 3) throw StructuralError("penalty force needs a 3-component director");
  return RealField(d.grid_ptr(), penalty_force(d.values(), eta));
}

double penalty_energy(const RealField& d, double eta) {
  if (d.components() != 3) throw StructuralError("penalty energy needs a 3-component director");
  const Grid& g = d.grid();
  return g.volume() / static_cast<double>(g.size()) * penalty_density(d.values(), eta).sum();
}

SpectralField ericksen_stress_divergence(const SpectralField& d_hat) {
  if (d_hat.components() != 3) throw StructuralError("director must have 3 components");
  const Grid& g = d_hat.grid();
  const Eigen::ArrayXXd grad_d = detail::inverse_columns(g, gradient(d_hat).coeffs());
  const Eigen::ArrayXXcd T_hat = detail::forward_columns(g, stress_tensor(grad_d));
  return SpectralField(d_hat.grid_ptr(), stress_divergence(g, T_hat));
}

Tendency nonlinear_tendency(const State& state, const PhysicsParams& params) {
  const Grid& g = state.grid();
  const GridPtr& grid = state.u_hat.grid_ptr();
  if (!params.nonlinear) return {SpectralField(grid, 3), SpectralField(grid, 3)};

  // Columns: u (0..2), grad u (3..11), grad d (12..20), d - w0 (21..23).
  Eigen::ArrayXXcd spectra(g.size(), 24);
  spectra.leftCols(3) = state.u_hat.coeffs();
  spectra.middleCols(3, 9) = gradient(state.u_hat).coeffs();
  spectra.middleCols(12, 9) = gradient(state.d_hat).coeffs();
  spectra.rightCols(3) = state.d_hat.coeffs();
  const Eigen::ArrayXXd phys = detail::inverse_columns(g, spectra);

  const auto u = phys.leftCols(3);
  const auto grad_u = phys.middleCols(3, 9);
  const auto grad_d = phys.middleCols(12, 9);

  // Columns: (u.grad)u (0..2), stress (3..8), (u.grad)d (9..11), f(d) (12..14).
  Eigen::ArrayXXd products(g.size(), 15);
  products.leftCols(3) = convect(u, grad_u);
  products.middleCols(3, 6) = stress_tensor(grad_d);
  products.middleCols(9, 3) = convect(u, grad_d);
  products.rightCols(3) = penalty_force(add_far_field(phys.rightCols(3), state.w0), params.eta);
  const Eigen::ArrayXXcd prod_hat = detail::forward_columns(g, products);

  SpectralField momentum(grid, Eigen::ArrayXXcd(
                                   -prod_hat.leftCols(3) -
                                   stress_divergence(g, prod_hat.middleCols(3, 6))));
  Tendency out;
  out.du_hat = leray_project(momentum);
  out.dd_hat = SpectralField(grid, Eigen::ArrayXXcd(-prod_hat.middleCols(9, 3) -
                                                    prod_hat.rightCols(3)));
  return out;
}

SpectralField momentum_rhs(const State& state, const PhysicsParams& params) {
  return nonlinear_tendency(state, params).du_hat;
}

SpectralField director_rhs(const State& state, const PhysicsParams& params) {
  return nonlinear_tendency(state, params).dd_hat;
}

double energy_rate(const State& state, const PhysicsParams& params) {
  const Grid& g = state.grid();
  const Tendency nl = nonlinear_tendency(state, params);
  const auto& k2 = g.k_squared();

  Eigen::ArrayXXcd u_t = nl.du_hat.coeffs();
  Eigen::ArrayXXcd d_t = nl.dd_hat.coeffs();
  for (int c = 0; c < 3; ++c) {
    u_t.col(c) -= params.nu * k2 * state.u_hat.coeffs().col(c);
    d_t.col(c) -= k2 * state.d_hat.coeffs().col(c);
  }

  const double kinetic = g.volume() * (state.u_hat.coeffs().conjugate() * u_t).real().sum();
  double elastic = 0.0;
  for (int c = 0; c < 3; ++c)
    elastic += (k2 * (state.d_hat.coeffs().col(c).conjugate() * d_t.col(c)).real()).sum();
  elastic *= g.volume();

  double penalty = 0.0;
  if (params.nonlinear) {
    const RealField d = state.director();
    const Eigen::ArrayXXd f = penalty_force(d.values(), params.eta);
    const Eigen::ArrayXXd d_t_phys = detail::inverse_columns(g, d_t);
    penalty = g.volume() / static_cast<double>(g.size()) * (f * d_t_phys).sum();
  }
  return kinetic + elastic + penalty;
}

}  // namespace lcd
