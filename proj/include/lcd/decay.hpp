#pragma once

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace lcd {

/// A positive time series, e.g. ||u(t)||^2 sampled along a run.
struct NormSeries {
  std::string name;
  std::vector<std::pair<double, double>> samples;  ///< (t, value), t increasing
  std::string run_id;
};

/// value ~ amplitude * (1 + t)^{-alpha} over [t_lo, t_hi].
struct FitResult {
  std::string name;
  double alpha = 0.0;
  double amplitude = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double residual_rms = 0.0;  ///< in log-log space
  int n_points = 0;
};

inline constexpr int kMinFitPoints = 8;

/// Least-squares line through (log(1+t), log value) on samples with
/// t_lo <= t <= t_hi; alpha is minus the slope.
FitResult fit_power_law(const NormSeries& series, double t_lo, double t_hi);

/// Radially symmetric initial spectrum |u0_hat|(|xi|), zero beyond cutoff.
struct RadialProfile {
  std::function<double(double)> amplitude;
  double cutoff = std::numeric_limits<double>::infinity();
  /// Set for flat profiles so the closed form can be used.
  bool is_flat = false;
  double flat_level = 0.0;

  static RadialProfile flat(double level, double cutoff);
  /// level * exp(-(rho / width)^2).
  static RadialProfile gaussian(double level, double width);
};

/// (int_{R^3} |u0_hat(xi)|^2 exp(-2|xi|^2 t) dxi)^{1/2}. Flat profiles use
/// the closed form; others use adaptive Gauss-Kronrod quadrature in rho.
double heat_oracle_l2(const RadialProfile& profile, double t);

/// Adaptive quadrature regardless of profile kind.
double heat_oracle_l2_quadrature(const RadialProfile& profile, double t);

/// Closed form of the squared flat-profile norm, c^2 4 pi int_0^K exp(-2 rho^2 t) rho^2 drho.
double heat_oracle_flat_sq(double level, double cutoff, double t);

enum class NormKind { SquaredL2, Sup, Lp };

struct Expectation {
  double alpha = 0.0;
  NormKind kind = NormKind::SquaredL2;
  std::string source;
  /// Negative means the per-kind tolerance passed to compare_to_theory applies.
  double tolerance = -1.0;
};

/// Predicted exponents keyed by diagnostic column name.
using ExpectationTable = std::map<std::string, Expectation>;

/// Table covering every diagnostic column with a predicted rate.
ExpectationTable default_expectations(int m_max = 2, const std::vector<double>& p_list = {2, 4, 7});

struct Verdict {
  FitResult fit;
  double predicted = 0.0;
  double tolerance = 0.0;
  double deficit = 0.0;  ///< predicted - measured; positive when decay is slower than predicted
  bool pass = false;
};

struct TheoryReport {
  std::vector<Verdict> verdicts;
  bool pass = false;

  nlohmann::json to_json() const;
};

/// Verdict |alpha - predicted| <= tol per fit. Throws MappingError for an
/// unknown series and DegenerateInputError for an empty fit list.
TheoryReport compare_to_theory(const std::vector<FitResult>& fits, const ExpectationTable& table,
                               double tol);

/// As above with separate tolerances for squared-L2 series and sup/L^p series.
TheoryReport compare_to_theory(const std::vector<FitResult>& fits, const ExpectationTable& table,
                               double tol_l2, double tol_linf);

nlohmann::json to_json(const FitResult& fit);

}  // namespace lcd
