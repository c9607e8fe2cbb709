#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "lcd/dynamics.hpp"
#include "lcd/grid.hpp"
#include "lcd/spectral.hpp"

namespace lcd::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Band-limited random field: transform of white noise, dealiased, then
/// restricted to |m_j| <= band.
inline SpectralField random_field(const GridPtr& grid, int components, std::uint64_t seed,
                                  int band = 1 << 20) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  RealField noise(grid, components);
  for (Eigen::Index i = 0; i < noise.values().size(); ++i) noise.values().data()[i] = gauss(rng);
  SpectralField F = forward_transform(noise);
  const Grid& g = *grid;
  for (Eigen::Index p = 0; p < g.size(); ++p) {
    const int n = g.resolution();
    const int i1 = static_cast<int>(p / (n * n));
    const int i2 = static_cast<int>((p / n) % n);
    const int i3 = static_cast<int>(p % n);
    if (std::abs(g.mode_of(i1)) > band || std::abs(g.mode_of(i2)) > band ||
        std::abs(g.mode_of(i3)) > band)
      F.coeffs().row(p).setZero();
  }
  return F;
}

/// Random solenoidal, mean-free velocity.
inline SpectralField random_velocity(const GridPtr& grid, std::uint64_t seed, double scale,
                                     int band = 1 << 20) {
  SpectralField u = leray_project(random_field(grid, 3, seed, band));
  u.coeffs().row(0).setZero();
  u *= scale / std::max(l2_norm_spectral(u), 1e-300);
  return u;
}

/// Real field from a callable returning an Eigen vector.
template <typename Fn>
RealField sample(const GridPtr& grid, int components, Fn&& f) {
  return RealField::sample(grid, components, std::forward<Fn>(f));
}

template <typename Derived>
double max_abs(const Eigen::ArrayBase<Derived>& a) {
  return a.abs().maxCoeff();
}

}  // namespace lcd::test
