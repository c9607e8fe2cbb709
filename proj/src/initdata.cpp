#include "lcd/initdata.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace lcd {

namespace {

constexpr Complex kI{0.0, 1.0};

double profile_value(SpectrumProfile profile, double k, double width) {
  return profile == SpectrumProfile::Flat ? 1.0 : std::exp(-(k * k) / (width * width));
}

Eigen::Vector3d random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
  } while (v.norm() < 1e-8);
  return v.normalized();
}

Eigen::Vector3d random_point(std::mt19937_64& rng, double L) {
  std::uniform_real_distribution<double> uniform(0.0, L);
  const double x = uniform(rng);
  const double y = uniform(rng);
  const double z = uniform(rng);
  return {x, y, z};
}

void check_band(double k_lo, double k_hi, const Grid& grid, const std::string& what) {
  if (!(k_lo >= 0.0) || !(k_hi > k_lo))
    throw ParameterError(what + " band needs 0 <= k_lo < k_hi");
  const double k_max = grid.dk() * grid.max_retained_mode();
  if (k_hi > k_max * (1.0 + 1e-12))
    throw ParameterError(what + " band upper edge " + std::to_string(k_hi) +
                         " exceeds the dealiased limit " + std::to_string(k_max));
}

bool in_band(double k, double k_lo, double k_hi) { return k > k_lo && k <= k_hi; }

// Visits each conjugate pair of retained in-band modes once, as (p, -p).
template <typename Fn>
int for_each_band_pair(const Grid& g, double k_lo, double k_hi, Fn&& fn) {
  const auto& neg = g.negated_index();
  const auto& mask = g.dealias_mask();
  int count = 0;
  for (Eigen::Index p = 0; p < g.size(); ++p) {
    const Eigen::Index q = neg(p);
    if (q <= p || mask(p) == 0.0) continue;
    const double k = std::sqrt(g.k_squared()(p));
    if (!in_band(k, k_lo, k_hi)) continue;
    fn(p, q, k);
    ++count;
  }
  return count;
}

Eigen::Vector3d wavevector(const Grid& g, Eigen::Index p) {
  return {g.k(0)(p), g.k(1)(p), g.k(2)(p)};
}

Eigen::Vector3d transverse(const Eigen::Vector3d& a, const Eigen::Vector3d& k) {
  return a - k * (k.dot(a) / k.squaredNorm());
}

}  // namespace

SpectrumProfile parse_profile(const std::string& name) {
  if (name == "flat") return SpectrumProfile::Flat;
  if (name == "gaussian") return SpectrumProfile::Gaussian;
  throw ParameterError("unknown spectrum profile '" + name + "' (expected flat or gaussian)");
}

PhaseMode parse_phase_mode(const std::string& name) {
  if (name == "coherent") return PhaseMode::Coherent;
  if (name == "random") return PhaseMode::Random;
  throw ParameterError("unknown phase mode '" + name + "' (expected coherent or random)");
}

std::string to_string(SpectrumProfile p) { return p == SpectrumProfile::Flat ? "flat" : "gaussian"; }
std::string to_string(PhaseMode p) { return p == PhaseMode::Coherent ? "coherent" : "random"; }

void InitConfig::validate(const Grid& grid) const {
  if (!(u_amplitude >= 0.0)) throw ParameterError("u_amplitude must be >= 0");
  if (!(d_perturb_amplitude >= 0.0)) throw ParameterError("d_perturb_amplitude must be >= 0");
  if (!(u_gauss_width > 0.0) || !(d_gauss_width > 0.0))
    throw ParameterError("gaussian widths must be positive");
  if (std::abs(w0.norm() - 1.0) > 1e-12) throw ParameterError("w0 must be a unit vector");
  if (!(eta > 0.0)) throw ParameterError("eta must be positive");
  check_band(u_k_lo, u_k_hi, grid, "velocity");
  check_band(d_k_lo, d_k_hi, grid, "director");
}

VelocityInit make_velocity(const InitConfig& config, const GridPtr& grid) {
  const Grid& g = *grid;
  config.validate(g);
  std::mt19937_64 rng(config.seed);
  const Eigen::Vector3d centre = random_point(rng, g.box_length());
  const Eigen::Vector3d polar = random_unit_vector(rng);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  // Unitary-transform amplitude c maps to series coefficient c (2 pi)^{3/2} / L^3.
  const double scale = config.u_amplitude * std::pow(2.0 * std::numbers::pi, 1.5) / g.volume();

  SpectralField u(grid, 3);
  auto& c = u.coeffs();
  const int pairs = for_each_band_pair(g, config.u_k_lo, config.u_k_hi,
                                       [&](Eigen::Index p, Eigen::Index q, double k) {
    const Eigen::Vector3d kv = wavevector(g, p);
    Eigen::Vector3d e;
    Complex phase;
    if (config.u_phases == PhaseMode::Coherent) {
      e = transverse(polar, kv);
      phase = std::exp(-kI * kv.dot(centre));
    } else {
      e = transverse(random_unit_vector(rng), kv);
      phase = std::exp(kI * angle(rng));
    }
    const double en = e.norm();
    if (en < 1e-12) return;
    const double amp = scale * profile_value(config.u_profile, k, config.u_gauss_width) / en;
    for (int a = 0; a < 3; ++a) {
      c(p, a) = amp * e(a) * phase;
      c(q, a) = std::conj(c(p, a));
    }
  });
  if (pairs == 0) throw ParameterError("velocity shell contains no resolved modes");

  u = leray_project(u);
  c.row(0).setZero();
  return {u, derivative_norm_sq(u, 0) + derivative_norm_sq(u, 1)};
}

DirectorInit make_director(const InitConfig& config, const GridPtr& grid) {
  const Grid& g = *grid;
  config.validate(g);
  // Offset keeps the director stream independent of the velocity stream.
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  const Eigen::Vector3d centre = random_point(rng, g.box_length());
  const Eigen::Vector3d direction = random_unit_vector(rng);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

  SpectralField phi_hat(grid, 3);
  auto& c = phi_hat.coeffs();
  const int pairs = for_each_band_pair(g, config.d_k_lo, config.d_k_hi,
                                       [&](Eigen::Index p, Eigen::Index q, double k) {
    const Eigen::Vector3d kv = wavevector(g, p);
    Eigen::Vector3d e;
    Complex phase;
    if (config.d_phases == PhaseMode::Coherent) {
      e = direction;
      phase = std::exp(-kI * kv.dot(centre));
    } else {
      e = random_unit_vector(rng);
      phase = std::exp(kI * angle(rng));
    }
    const double amp = profile_value(config.d_profile, k, config.d_gauss_width);
    for (int a = 0; a < 3; ++a) {
      c(p, a) = amp * e(a) * phase;
      c(q, a) = std::conj(c(p, a));
    }
  });
  if (pairs == 0) throw ParameterError("director band contains no resolved modes");

  RealField phi = inverse_transform(phi_hat);
  const double peak = lp_norm(phi, kInfinity);
  phi.values() /= peak;

  const double eps = config.d_perturb_amplitude;
  Eigen::ArrayXXd d = eps * phi.values();
  for (int a = 0; a < 3; ++a) d.col(a) += config.w0(a);
  if (config.normalize_d) {
    const Eigen::ArrayXd magnitude = d.square().rowwise().sum().sqrt();
    if (magnitude.minCoeff() < 0.1)
      throw AmplitudeError("|w0 + eps phi| drops to " + std::to_string(magnitude.minCoeff()) +
                           "; normalization is near-singular");
    d.colwise() /= magnitude;
  }

  DirectorInit out;
  out.d0 = RealField(grid, d);
  out.perturbation = phi;
  Eigen::ArrayXXd deviation = d;
  for (int a = 0; a < 3; ++a) deviation.col(a) -= config.w0(a);
  out.deviation_hat = forward_transform(RealField(grid, deviation));
  out.unit_defect = (d.square().rowwise().sum().sqrt() - 1.0).abs().maxCoeff();

  Eigen::ArrayXXd dealiased = inverse_transform(out.deviation_hat).values();
  for (int a = 0; a < 3; ++a) dealiased.col(a) += config.w0(a);
  out.unit_defect_dealiased = (dealiased.square().rowwise().sum().sqrt() - 1.0).abs().maxCoeff();
  for (int k = 0; k <= 2; ++k) out.h2_sq += derivative_norm_sq(out.deviation_hat, k);
  return out;
}

double smallness_report(const SpectralField& u0, const SpectralField& d0_dev) {
  return derivative_norm_sq(u0, 0) + derivative_norm_sq(u0, 1) + derivative_norm_sq(d0_dev, 0) +
         derivative_norm_sq(d0_dev, 1) + derivative_norm_sq(d0_dev, 2);
}

State make_initial_state(const InitConfig& config, const GridPtr& grid) {
  State s = State::rest(grid, config.w0);
  s.u_hat = make_velocity(config, grid).u_hat;
  s.d_hat = make_director(config, grid).deviation_hat;
  return s;
}

}  // namespace lcd
