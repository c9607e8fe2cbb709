#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <limits>

#include "lcd/errors.hpp"
#include "lcd/grid.hpp"

namespace lcd {

using Complex = std::complex<double>;

/// Fourier coefficients of a real field with `components` components.
///
/// Column c of coeffs() holds component c over all N^3 modes in grid order,
/// so the storage is component-major with m3 fastest. Coefficients follow
/// coeff(m) = N^-3 sum_x f(x) exp(-i k.x).
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(GridPtr grid, int components);
  SpectralField(GridPtr grid, Eigen::ArrayXXcd coeffs);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int components() const { return static_cast<int>(coeffs_.cols()); }

  Eigen::ArrayXXcd& coeffs() { return coeffs_; }
  const Eigen::ArrayXXcd& coeffs() const { return coeffs_; }

  Complex& at(int component, int m1, int m2, int m3) {
    return coeffs_(grid_->flat_of_mode(m1, m2, m3), component);
  }
  Complex at(int component, int m1, int m2, int m3) const {
    return coeffs_(grid_->flat_of_mode(m1, m2, m3), component);
  }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s) {
    coeffs_ *= s;
    return *this;
  }

 private:
  GridPtr grid_;
  Eigen::ArrayXXcd coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Point values of a real field, one column per component.
class RealField {
 public:
  RealField() = default;
  RealField(GridPtr grid, int components);
  RealField(GridPtr grid, Eigen::ArrayXXd values);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int components() const { return static_cast<int>(values_.cols()); }

  Eigen::ArrayXXd& values() { return values_; }
  const Eigen::ArrayXXd& values() const { return values_; }

  /// Fill every component from f(x1, x2, x3) returning an Eigen::Vector of
  /// size components().
  template <typename Fn>
  static RealField sample(GridPtr grid, int components, Fn&& f) {
    RealField out(grid, components);
    const Grid& g = *grid;
    for (Eigen::Index p = 0; p < g.size(); ++p) {
      const auto v = f(g.coordinate(p, 0), g.coordinate(p, 1), g.coordinate(p, 2));
      for (int c = 0; c < components; ++c) out.values_(p, c) = v[c];
    }
    return out;
  }

 private:
  GridPtr grid_;
  Eigen::ArrayXXd values_;
};

using MultiIndex = std::array<int, 3>;

/// Transform to spectral space; the result is dealiased.
SpectralField forward_transform(const RealField& f);

/// Transform back to point values. Throws SymmetryError when the spectrum
/// is not Hermitian to 1e-12 of its largest coefficient.
RealField inverse_transform(const SpectralField& F);

/// Multiply by prod_j (i k_j)^{a_j}. Nyquist planes are zeroed for odd total order.
SpectralField spectral_derivative(const SpectralField& F, const MultiIndex& order);

/// Remove the gradient part of a 3-component field mode by mode.
SpectralField leray_project(const SpectralField& F);

/// (L^3 sum_m |coeff(m)|^2)^{1/2}.
double l2_norm_spectral(const SpectralField& F);

/// Squared L2 norm of the full k-th derivative tensor, L^3 sum_m |k|^{2k}|coeff(m)|^2.
double derivative_norm_sq(const SpectralField& F, int order);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Quadrature L^p norm of the pointwise vector magnitude; p == kInfinity gives the max.
double lp_norm(const RealField& f, double p);

/// Largest |coeff(m) - conj(coeff(-m))| over modes and components.
double hermitian_defect(const SpectralField& F);

/// Largest |k . coeff(m)| over nonzero modes, divided by the coefficient 2-norm.
double divergence_defect(const SpectralField& F);

/// Gradient of each component: output column 3 * c + j is d_j of component c.
SpectralField gradient(const SpectralField& F);

namespace detail {

/// Inverse transforms of every column, paired two per complex FFT.
/// Assumes Hermitian input.
Eigen::ArrayXXd inverse_columns(const Grid& grid, const Eigen::ArrayXXcd& spectra);

/// Forward transforms of every column, paired two per complex FFT, then masked.
Eigen::ArrayXXcd forward_columns(const Grid& grid, const Eigen::ArrayXXd& values);

}  // namespace detail

}  // namespace lcd
