#include "lcd/decay.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "lcd/errors.hpp"

namespace lcd {

FitResult fit_power_law(const NormSeries& series, double t_lo, double t_hi) {
  if (!(t_lo < t_hi)) throw FitError("empty window [" + std::to_string(t_lo) + ", " +
                                     std::to_string(t_hi) + "] for " + series.name);
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [t, v] : series.samples) {
    if (t < t_lo || t > t_hi) continue;
    if (!(v > 0.0) || !std::isfinite(v))
      throw DataError("series " + series.name + " has nonpositive value " + std::to_string(v) +
                      " at t=" + std::to_string(t));
    xs.push_back(std::log1p(t));
    ys.push_back(std::log(v));
  }
  const auto n = static_cast<Eigen::Index>(xs.size());
  if (n < kMinFitPoints)
    throw FitError("series " + series.name + " has " + std::to_string(n) +
                   " samples in window, need " + std::to_string(kMinFitPoints));

  // Centered normal equations keep the slope well conditioned.
  const Eigen::Map<const Eigen::ArrayXd> x(xs.data(), n);
  const Eigen::Map<const Eigen::ArrayXd> y(ys.data(), n);
  const double x_mean = x.mean();
  const double y_mean = y.mean();
  const Eigen::ArrayXd dx = x - x_mean;
  const Eigen::ArrayXd dy = y - y_mean;
  const double sxx = dx.square().sum();
  if (!(sxx > 0.0)) throw FitError("series " + series.name + " has no spread in time");
  const double slope = (dx * dy).sum() / sxx;
  const double intercept = y_mean - slope * x_mean;
  const Eigen::ArrayXd residual = y - (intercept + slope * x);

  FitResult fit;
  fit.name = series.name;
  fit.alpha = -slope;
  fit.amplitude = std::exp(intercept);
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.residual_rms = std::sqrt(residual.square().mean());
  fit.n_points = static_cast<int>(n);
  return fit;
}

RadialProfile RadialProfile::flat(double level, double cutoff) {
  RadialProfile p;
  p.amplitude = [level, cutoff](double rho) { return rho <= cutoff ? level : 0.0; };
  p.cutoff = cutoff;
  p.is_flat = true;
  p.flat_level = level;
  return p;
}

RadialProfile RadialProfile::gaussian(double level, double width) {
  RadialProfile p;
  p.amplitude = [level, width](double rho) { return level * std::exp(-(rho * rho) / (width * width)); };
  return p;
}

double heat_oracle_flat_sq(double level, double cutoff, double t) {
  if (t < 0.0) throw ParameterError("heat oracle needs t >= 0");
  const double c2 = level * level;
  if (t == 0.0) return c2 * 4.0 * std::numbers::pi * cutoff * cutoff * cutoff / 3.0;
  const double a = 2.0 * t;
  const double sa = std::sqrt(a);
  const double radial = std::sqrt(std::numbers::pi) / (4.0 * a * sa) * std::erf(sa * cutoff) -
                        cutoff * std::exp(-a * cutoff * cutoff) / (2.0 * a);
  return c2 * 4.0 * std::numbers::pi * radial;
}

namespace {

void check_profile(const RadialProfile& profile) {
  if (!profile.amplitude) throw ParameterError("profile has no amplitude function");
  if (!(profile.cutoff > 0.0)) throw ParameterError("profile cutoff must be positive");
  for (double rho : {0.0, 1e-12, 1e-8, 1e-4, 1e-2}) {
    if (rho > profile.cutoff) break;
    if (!std::isfinite(profile.amplitude(rho)))
      throw ParameterError("profile is unbounded near the origin");
  }
}

}  // namespace

double heat_oracle_l2_quadrature(const RadialProfile& profile, double t) {
  check_profile(profile);
  if (t < 0.0) throw ParameterError("heat oracle needs t >= 0");
  auto integrand = [&](double rho) {
    const double a = profile.amplitude(rho);
    return 4.0 * std::numbers::pi * rho * rho * a * a * std::exp(-2.0 * rho * rho * t);
  };
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  const double upper = profile.cutoff;
  const double value = gauss_kronrod<double, 61>::integrate(integrand, 0.0, upper, 15, 1e-13, &error);
  if (!std::isfinite(value)) throw ParameterError("profile is not square integrable");
  return std::sqrt(value);
}

double heat_oracle_l2(const RadialProfile& profile, double t) {
  check_profile(profile);
  if (profile.is_flat) return std::sqrt(heat_oracle_flat_sq(profile.flat_level, profile.cutoff, t));
  return heat_oracle_l2_quadrature(profile, t);
}

ExpectationTable default_expectations(int m_max, const std::vector<double>& p_list) {
  ExpectationTable table;
  table["l2_u_sq"] = {1.5, NormKind::SquaredL2, "optimal L2 rate of the velocity"};
  table["l2_dev_d_sq"] = {1.5, NormKind::SquaredL2, "L2 rate of d - w0 (p = 2)"};
  table["l2_grad_d_sq"] = {2.5, NormKind::SquaredL2, "gradient of the director, squared norm"};
  for (int m = 0; m <= m_max; ++m) {
    const double rate = m + 1.5;
    table["l2_D" + std::to_string(m) + "u_sq"] = {rate, NormKind::SquaredL2,
                                                  "top derivative D^m u, squared norm"};
    table["l2_D" + std::to_string(m) + "dev_d_sq"] = {rate, NormKind::SquaredL2,
                                                      "top derivative D^m (d - w0), squared norm"};
  }
  table["l2_D" + std::to_string(m_max + 1) + "dev_d_sq"] = {m_max + 2.5, NormKind::SquaredL2,
                                                            "top derivative D^m (d - w0), squared norm"};
  table["linf_u"] = {1.5, NormKind::Sup, "sup norm of u (m = 0), plain norm"};
  table["linf_grad_u"] = {2.0, NormKind::Sup, "sup norm of Du (m = 1), plain norm"};
  table["linf_dev_d"] = {1.5, NormKind::Sup, "sup norm of d - w0 (m = 0), plain norm"};
  table["linf_grad_d"] = {2.0, NormKind::Sup, "sup norm of Dd (m = 1), plain norm"};
  table["linf_d2_d"] = {2.5, NormKind::Sup, "sup norm of D^2 d (m = 2), plain norm"};
  for (double p : p_list) {
    std::string key = "lp_dev_d_p" + std::to_string(p);
    key.erase(key.find_last_not_of('0') + 1);
    if (key.back() == '.') key.pop_back();
    table[key] = {1.5 * (1.0 - 1.0 / p), NormKind::Lp, "L^p rate of d - w0, plain norm"};
  }
  return table;
}

nlohmann::json to_json(const FitResult& fit) {
  return {{"series", fit.name},        {"alpha", fit.alpha},
          {"amplitude", fit.amplitude}, {"window", {fit.t_lo, fit.t_hi}},
          {"residual", fit.residual_rms}, {"n_points", fit.n_points}};
}

nlohmann::json TheoryReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& v : verdicts) {
    rows.push_back({{"series", v.fit.name},
                    {"alpha", v.fit.alpha},
                    {"predicted", v.predicted},
                    {"window", {v.fit.t_lo, v.fit.t_hi}},
                    {"residual", v.fit.residual_rms},
                    {"tolerance", v.tolerance},
                    {"deficit", v.deficit},
                    {"verdict", v.pass ? "pass" : "fail"}});
  }
  return {{"verdicts", rows}, {"pass", pass}};
}

TheoryReport compare_to_theory(const std::vector<FitResult>& fits, const ExpectationTable& table,
                               double tol_l2, double tol_linf) {
  if (fits.empty()) throw DegenerateInputError("no fits to compare");
  TheoryReport report;
  report.pass = true;
  for (const auto& fit : fits) {
    const auto it = table.find(fit.name);
    if (it == table.end()) throw MappingError("no predicted exponent for series '" + fit.name + "'");
    Verdict v;
    v.fit = fit;
    v.predicted = it->second.alpha;
    v.tolerance = it->second.tolerance >= 0.0 ? it->second.tolerance
                  : it->second.kind == NormKind::SquaredL2 ? tol_l2
                                                            : tol_linf;
    v.deficit = v.predicted - fit.alpha;
    v.pass = std::abs(v.deficit) <= v.tolerance;
    report.pass = report.pass && v.pass;
    report.verdicts.push_back(v);
  }
  return report;
}

TheoryReport compare_to_theory(const std::vector<FitResult>& fits, const ExpectationTable& table,
                               double tol) {
  return compare_to_theory(fits, table, tol, tol);
}

}  // namespace lcd
