#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lcd/dynamics.hpp"

namespace lcd {

/// Highest ladder order the diagnostics accept.
inline constexpr int kMaxLadderOrder = 4;

struct DiagnosticsConfig {
  int m_max = 2;
  std::vector<double> p_list{2.0, 4.0, 7.0};
  double split_k_const = 4.0;

  void validate() const;
};

/// One timestamped sample of every measured quantity.
struct DiagnosticsRecord {
  double t = 0.0;
  double l2_u_sq = 0.0;
  double linf_u = 0.0;
  double linf_grad_u = 0.0;
  std::vector<double> phi_k_sq;     ///< k = 0..m_max
  std::vector<double> psi_m_sq;     ///< m = 0..m_max
  std::vector<double> l2_Dk_u_sq;   ///< ||D^k u||^2, k = 0..m_max
  std::vector<double> l2_Dk_dev_sq; ///< ||D^k (d - w0)||^2, k = 0..m_max+1
  double l2_grad_d_sq = 0.0;
  double l2_dev_d_sq = 0.0;
  std::vector<double> lp_dev_d;     ///< one per configured p
  double linf_dev_d = 0.0;
  double linf_grad_d = 0.0;
  double linf_d2_d = 0.0;
  double energy_kinetic = 0.0;
  double energy_elastic = 0.0;
  double energy_penalty = 0.0;
  double energy_total = 0.0;
  /// int |u|^2 + |grad d|^2 + 2 F(d), i.e. twice energy_total.
  double energy_doubled = 0.0;
  double split_low_energy_u = 0.0;
  double split_high_energy_u = 0.0;
  double split_radius = 0.0;
  double split_max_uhat_low = 0.0;
  double min_dir_alignment = 0.0;
  double div_defect = 0.0;

  /// Column names in output order, for a given configuration.
  static std::vector<std::string> column_names(const DiagnosticsConfig& config);
  /// Values in the same order as column_names.
  std::vector<double> column_values() const;
};

struct SobolevLadder {
  std::vector<double> phi_sq;  ///< ||D^k u||^2 + ||D^{k+1} d||^2
  std::vector<double> psi_sq;  ///< partial sums of phi_sq
};

SobolevLadder sobolev_ladder(const State& state, int m_max);

struct EnergyBreakdown {
  double kinetic = 0.0;  ///< 1/2 ||u||^2
  double elastic = 0.0;  ///< 1/2 ||grad d||^2
  double penalty = 0.0;  ///< int F(d)
  double total = 0.0;
};

EnergyBreakdown total_energy(const State& state, const PhysicsParams& params);

struct FourierSplit {
  double low_energy = 0.0;   ///< L^3 sum over |k| <= r of |u_hat|^2
  double high_energy = 0.0;  ///< remainder
  double radius = 0.0;       ///< (k_const / (1 + t))^{1/2}
  double max_uhat_low = 0.0; ///< max over the ball of L^3 |u_hat(m)|
};

FourierSplit fourier_split(const State& state, double k_const);

struct DirectorGeometry {
  double min_alignment = 0.0;  ///< min over grid of (d + w0) . d
  double max_dev_inf = 0.0;    ///< max over grid of |d - w0|
};

DirectorGeometry director_geometry(const State& state);

/// Pointwise magnitude of the full k-th derivative tensor of F.
RealField derivative_tensor_magnitude(const SpectralField& F, int order);

/// Interpolation exponent a solving 1/r = k/n + a(1/p - m/n) + (1-a)/q.
/// r, p or q may be kInfinity. Throws ParameterError when the tuple is not
/// admissible.
double gn_exponent(int k, int m, double r, double p, double q, int n = 3);

/// ||D^k w||_r / (||D^m w||_p^a ||w||_q^{1-a}).
double gn_ratio(const SpectralField& w, int k, int m, double r, double p, double q);

/// Full record for one state.
DiagnosticsRecord measure(const State& state, const PhysicsParams& params,
                          const DiagnosticsConfig& config);

}  // namespace lcd
