#include "lcd/diagnostics.hpp"

#include <cmath>
#include <string>

namespace lcd {

namespace {

double reciprocal(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

std::string format_p(double p) {
  if (std::isinf(p)) return "inf";
  std::string s = std::to_string(p);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

struct WeightedIndex {
  MultiIndex alpha;
  double weight;
};

// Multi-indices of the given order, weighted by the number of ordered index
// tuples they represent, so that sum weight * |d^alpha f|^2 is the full tensor norm.
std::vector<WeightedIndex> multi_indices(int order) {
  std::vector<WeightedIndex> out;
  auto factorial = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  for (int a = order; a >= 0; --a)
    for (int b = order - a; b >= 0; --b) {
      const int c = order - a - b;
      out.push_back({{a, b, c}, factorial(order) / (factorial(a) * factorial(b) * factorial(c))});
    }
  return out;
}

}  // namespace

void DiagnosticsConfig::validate() const {
  if (m_max < 0 || m_max > kMaxLadderOrder)
    throw ParameterError("m_max must lie in [0, " + std::to_string(kMaxLadderOrder) + "], got " +
                         std::to_string(m_max));
  for (double p : p_list)
    if (!(p >= 1.0)) throw ParameterError("p_list entries must be >= 1");
  if (!(split_k_const > 0.0)) throw ParameterError("split_k_const must be positive");
}

std::vector<std::string> DiagnosticsRecord::column_names(const DiagnosticsConfig& config) {
  std::vector<std::string> names{"t", "l2_u_sq", "linf_u", "linf_grad_u"};
  for (int k = 0; k <= config.m_max; ++k) names.push_back("phi" + std::to_string(k) + "_sq");
  for (int m = 0; m <= config.m_max; ++m) names.push_back("psi" + std::to_string(m) + "_sq");
  for (int k = 0; k <= config.m_max; ++k) names.push_back("l2_D" + std::to_string(k) + "u_sq");
  for (int k = 0; k <= config.m_max + 1; ++k)
    names.push_back("l2_D" + std::to_string(k) + "dev_d_sq");
  names.insert(names.end(), {"l2_grad_d_sq", "l2_dev_d_sq"});
  for (double p : config.p_list) names.push_back("lp_dev_d_p" + format_p(p));
  names.insert(names.end(),
               {"linf_dev_d", "linf_grad_d", "linf_d2_d", "energy_total", "energy_kinetic",
                "energy_elastic", "energy_penalty", "energy_doubled", "split_low_energy_u",
                "split_high_energy_u", "split_radius", "split_max_uhat_low", "min_dir_alignment",
                "div_defect"});
  return names;
}

std::vector<double> DiagnosticsRecord::column_values() const {
  std::vector<double> v{t, l2_u_sq, linf_u, linf_grad_u};
  v.insert(v.end(), phi_k_sq.begin(), phi_k_sq.end());
  v.insert(v.end(), psi_m_sq.begin(), psi_m_sq.end());
  v.insert(v.end(), l2_Dk_u_sq.begin(), l2_Dk_u_sq.end());
  v.insert(v.end(), l2_Dk_dev_sq.begin(), l2_Dk_dev_sq.end());
  v.insert(v.end(), {l2_grad_d_sq, l2_dev_d_sq});
  v.insert(v.end(), lp_dev_d.begin(), lp_dev_d.end());
  v.insert(v.end(), {linf_dev_d, linf_grad_d, linf_d2_d, energy_total, energy_kinetic,
                     energy_elastic, energy_penalty, energy_doubled, split_low_energy_u,
                     split_high_energy_u, split_radius, split_max_uhat_low, min_dir_alignment,
                     div_defect});
  return v;
}

SobolevLadder sobolev_ladder(const State& state, int m_max) {
  if (m_max < 0 || m_max > kMaxLadderOrder)
    throw ParameterError("ladder order " + std::to_string(m_max) + " outside [0, " +
                         std::to_string(kMaxLadderOrder) + "]");
  SobolevLadder ladder;
  double running = 0.0;
  for (int k = 0; k <= m_max; ++k) {
    const double phi =
        derivative_norm_sq(state.u_hat, k) + derivative_norm_sq(state.d_hat, k + 1);
    running += phi;
    ladder.phi_sq.push_back(phi);
    ladder.psi_sq.push_back(running);
  }
  return ladder;
}

EnergyBreakdown total_energy(const State& state, const PhysicsParams& params) {
  EnergyBreakdown e;
  e.kinetic = 0.5 * derivative_norm_sq(state.u_hat, 0);
  e.elastic = 0.5 * derivative_norm_sq(state.d_hat, 1);
  e.penalty = penalty_energy(state.director(), params.eta);
  e.total = e.kinetic + e.elastic + e.penalty;
  return e;
}

FourierSplit fourier_split(const State& state, double k_const) {
  if (!(k_const > 0.0)) throw ParameterError("splitting constant must be positive");
  const Grid& g = state.grid();
  FourierSplit s;
  s.radius = std::sqrt(k_const / (1.0 + state.t));
  const Eigen::ArrayXd mode_energy = state.u_hat.coeffs().abs2().rowwise().sum();
  const Eigen::ArrayXd inside = (g.k_squared() <= s.radius * s.radius).cast<double>();
  s.low_energy = g.volume() * (mode_energy * inside).sum();
  s.high_energy = g.volume() * (mode_energy * (1.0 - inside)).sum();
  s.max_uhat_low = g.volume() * (mode_energy * inside).sqrt().maxCoeff();
  return s;
}

DirectorGeometry director_geometry(const State& state) {
  const RealField d = state.director();
  const auto& v = d.values();
  Eigen::ArrayXd alignment = Eigen::ArrayXd::Zero(v.rows());
  Eigen::ArrayXd dev_sq = Eigen::ArrayXd::Zero(v.rows());
  for (int c = 0; c < 3; ++c) {
    alignment += (v.col(c) + state.w0(c)) * v.col(c);
    dev_sq += (v.col(c) - state.w0(c)).square();
  }
  return {alignment.minCoeff(), std::sqrt(dev_sq.maxCoeff())};
}

RealField derivative_tensor_magnitude(const SpectralField& F, int order) {
  if (order < 0) throw ParameterError("derivative order must be non-negative");
  const Grid& g = F.grid();
  const auto indices = multi_indices(order);
  const int n_alpha = static_cast<int>(indices.size());
  Eigen::ArrayXXcd spectra(g.size(), F.components() * n_alpha);
  for (int c = 0; c < F.components(); ++c) {
    const SpectralField single(F.grid_ptr(), Eigen::ArrayXXcd(F.coeffs().col(c)));
    for (int a = 0; a < n_alpha; ++a)
      spectra.col(c * n_alpha + a) = spectral_derivative(single, indices[a].alpha).coeffs().col(0);
  }
  const Eigen::ArrayXXd phys = detail::inverse_columns(g, spectra);
  Eigen::ArrayXd sum_sq = Eigen::ArrayXd::Zero(g.size());
  for (int c = 0; c < F.components(); ++c)
    for (int a = 0; a < n_alpha; ++a)
      sum_sq += indices[a].weight * phys.col(c * n_alpha + a).square();
  Eigen::ArrayXXd out(g.size(), 1);
  out.col(0) = sum_sq.sqrt();
  return RealField(F.grid_ptr(), std::move(out));
}

double gn_exponent(int k, int m, double r, double p, double q, int n) {
  if (k < 0 || m <= k)
    throw ParameterError("need 0 <= k < m, got k=" + std::to_string(k) + " m=" + std::to_string(m));
  if (!(r >= 1.0) || !(p >= 1.0) || !(q >= 1.0))
    throw ParameterError("Lebesgue exponents must be >= 1");
  const double denom = reciprocal(p) - static_cast<double>(m) / n - reciprocal(q);
  if (denom == 0.0) throw ParameterError("interpolation exponent is undetermined for this tuple");
  const double a = (reciprocal(r) - static_cast<double>(k) / n - reciprocal(q)) / denom;

  const double lower = static_cast<double>(k) / m;
  const double gap = m - k - n * reciprocal(p);
  const bool integral_gap = p > 1.0 && gap >= 0.0 && std::abs(gap - std::round(gap)) < 1e-12;
  const double tol = 1e-12;
  const bool ok = a >= lower - tol && (integral_gap ? a < 1.0 - tol : a <= 1.0 + tol);
  if (!ok)
    throw ParameterError("inadmissible tuple: a=" + std::to_string(a) + " outside " +
                         (integral_gap ? "[k/m, 1)" : "[k/m, 1]"));
  return a;
}

double gn_ratio(const SpectralField& w, int k, int m, double r, double p, double q) {
  const double a = gn_exponent(k, m, r, p, q);
  const double top = lp_norm(derivative_tensor_magnitude(w, k), r);
  const double high = lp_norm(derivative_tensor_magnitude(w, m), p);
  const double low = lp_norm(inverse_transform(w), q);
  if (high == 0.0 || low == 0.0) throw DegenerateInputError("gn_ratio denominator vanishes");
  return top / (std::pow(high, a) * std::pow(low, 1.0 - a));
}

DiagnosticsRecord measure(const State& state, const PhysicsParams& params,
                          const DiagnosticsConfig& config) {
  config.validate();
  DiagnosticsRecord rec;
  rec.t = state.t;

  const RealField u = state.velocity();
  rec.l2_u_sq = derivative_norm_sq(state.u_hat, 0);
  rec.linf_u = lp_norm(u, kInfinity);
  rec.linf_grad_u = lp_norm(derivative_tensor_magnitude(state.u_hat, 1), kInfinity);

  const SobolevLadder ladder = sobolev_ladder(state, config.m_max);
  rec.phi_k_sq = ladder.phi_sq;
  rec.psi_m_sq = ladder.psi_sq;
  for (int k = 0; k <= config.m_max; ++k)
    rec.l2_Dk_u_sq.push_back(derivative_norm_sq(state.u_hat, k));
  for (int k = 0; k <= config.m_max + 1; ++k)
    rec.l2_Dk_dev_sq.push_back(derivative_norm_sq(state.d_hat, k));
  rec.l2_grad_d_sq = rec.l2_Dk_dev_sq[1];
  rec.l2_dev_d_sq = rec.l2_Dk_dev_sq[0];

  const RealField deviation = inverse_transform(state.d_hat);
  for (double p : config.p_list) rec.lp_dev_d.push_back(lp_norm(deviation, p));
  rec.linf_dev_d = lp_norm(deviation, kInfinity);
  rec.linf_grad_d = lp_norm(derivative_tensor_magnitude(state.d_hat, 1), kInfinity);
  rec.linf_d2_d = lp_norm(derivative_tensor_magnitude(state.d_hat, 2), kInfinity);

  const EnergyBreakdown e = total_energy(state, params);
  rec.energy_kinetic = e.kinetic;
  rec.energy_elastic = e.elastic;
  rec.energy_penalty = e.penalty;
  rec.energy_total = e.total;
  rec.energy_doubled = 2.0 * e.total;

  const FourierSplit split = fourier_split(state, config.split_k_const);
  rec.split_low_energy_u = split.low_energy;
  rec.split_high_energy_u = split.high_energy;
  rec.split_radius = split.radius;
  rec.split_max_uhat_low = split.max_uhat_low;

  rec.min_dir_alignment = director_geometry(state).min_alignment;
  rec.div_defect = divergence_defect(state.u_hat);
  return rec;
}

}  // namespace lcd
