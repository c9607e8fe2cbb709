#pragma once

#include <boost/property_tree/ptree.hpp>
#include <map>
#include <string>
#include <vector>

#include "lcd/diagnostics.hpp"
#include "lcd/initdata.hpp"
#include "lcd/stepper.hpp"

namespace lcd {

struct GridConfig {
  double L = 0.0;
  int N = 0;
};

struct SamplingConfig {
  double sample_interval = 1.0;
  DiagnosticsConfig diagnostics;
};

struct FitConfig {
  double t_lo = 5.0;
  /// Negative means min(t_end, 0.1 (L / 2 pi)^2).
  double t_hi = -1.0;
  double tol_l2 = 0.2;
  double tol_linf = 0.3;
  /// Series that receive a verdict; every other fitted series is reported only.
  std::vector<std::string> judged{"l2_u_sq", "l2_dev_d_sq", "l2_grad_d_sq", "l2_D1u_sq",
                                  "l2_D2u_sq", "linf_u", "linf_dev_d"};
  /// Per-series tolerance overrides.
  std::map<std::string, double> tolerance;
};

struct OutputConfig {
  std::string directory = "run";
  double checkpoint_interval = 0.0;
};

struct RunConfig {
  GridConfig grid;
  PhysicsParams physics;
  InitConfig init;
  StepperConfig stepper;
  SamplingConfig sampling;
  FitConfig fit;
  OutputConfig output;
  double smallness_budget = 1e-2;
  std::string run_id = "run";

  /// Fit window upper edge after resolving the default.
  double fit_t_hi() const;
};

/// Parse the sectioned key = value format. Unknown sections or keys and
/// malformed values raise ConfigError naming the offending field.
RunConfig parse_config(const boost::property_tree::ptree& tree);
RunConfig load_config(const std::string& path);
boost::property_tree::ptree read_config_tree(const std::string& path);
void write_config_tree(const boost::property_tree::ptree& tree, const std::string& path);

/// Parse a real, accepting a trailing "pi" factor ("64pi", "64*pi", "pi").
double parse_real(const std::string& text, const std::string& field);

}  // namespace lcd
