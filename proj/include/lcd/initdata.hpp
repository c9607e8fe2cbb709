#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "lcd/dynamics.hpp"

namespace lcd {

enum class SpectrumProfile { Flat, Gaussian };

/// How mode phases are drawn. Coherent phases put every mode in phase at a
/// seeded random centre, giving a spatially localized (L1-like) field;
/// Random draws an independent phase per mode.
enum class PhaseMode { Coherent, Random };

SpectrumProfile parse_profile(const std::string& name);
PhaseMode parse_phase_mode(const std::string& name);
std::string to_string(SpectrumProfile p);
std::string to_string(PhaseMode p);

struct InitConfig {
  std::uint64_t seed = 1;
  /// Continuum (unitary transform) amplitude |u0_hat| on the shell.
  double u_amplitude = 1e-3;
  double u_k_lo = 0.0;
  double u_k_hi = 0.5;
  SpectrumProfile u_profile = SpectrumProfile::Flat;
  double u_gauss_width = 1.0;
  PhaseMode u_phases = PhaseMode::Coherent;

  /// Pointwise amplitude eps of the director perturbation (max |phi| = 1).
  double d_perturb_amplitude = 1e-2;
  double d_k_lo = 0.0;
  double d_k_hi = 0.5;
  SpectrumProfile d_profile = SpectrumProfile::Flat;
  double d_gauss_width = 1.0;
  PhaseMode d_phases = PhaseMode::Coherent;

  Eigen::Vector3d w0 = Eigen::Vector3d::UnitZ();
  bool normalize_d = true;
  double eta = 1.0;

  void validate(const Grid& grid) const;
};

struct VelocityInit {
  SpectralField u_hat;
  double h1_sq = 0.0;  ///< ||u0||^2 + ||D u0||^2
};

struct DirectorInit {
  SpectralField deviation_hat;  ///< F(d0 - w0), dealiased
  RealField d0;                 ///< point values before dealiasing
  RealField perturbation;       ///< phi, scaled to max |phi| = 1
  double h2_sq = 0.0;           ///< sum_{k<=2} ||D^k (d0 - w0)||^2 of the dealiased deviation
  double unit_defect = 0.0;     ///< max ||d0| - 1| over grid points of d0
  double unit_defect_dealiased = 0.0;  ///< same after dealiasing the deviation
};

/// Seeded solenoidal, mean-free, Hermitian velocity on the shell k_lo < |k| <= k_hi.
VelocityInit make_velocity(const InitConfig& config, const GridPtr& grid);

/// Director d0 = (w0 + eps phi)/|w0 + eps phi| (or w0 + eps phi without normalization).
DirectorInit make_director(const InitConfig& config, const GridPtr& grid);

/// ||u0||_{H^1}^2 + ||d0 - w0||_{H^2}^2.
double smallness_report(const SpectralField& u0, const SpectralField& d0_dev);

/// Both generators combined into a state at t = 0.
State make_initial_state(const InitConfig& config, const GridPtr& grid);

}  // namespace lcd
