#include "lcd/spectral.hpp"

#include <cmath>
#include <string>

namespace lcd {

namespace {

void require_same_grid(const GridPtr& a, const GridPtr& b) {
  if (a.get() != b.get()) throw StructuralError("fields live on different grids");
}

constexpr Complex kI{0.0, 1.0};

}  // namespace

SpectralField::SpectralField(GridPtr grid, int components)
    : grid_(std::move(grid)), coeffs_(Eigen::ArrayXXcd::Zero(grid_->size(), components)) {}

SpectralField::SpectralField(GridPtr grid, Eigen::ArrayXXcd coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.rows() != grid_->size())
    throw StructuralError("coefficient count " + std::to_string(coeffs_.rows()) +
                          " does not match grid size " + std::to_string(grid_->size()));
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  if (other.components() != components()) throw StructuralError("component count mismatch");
  coeffs_ += other.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  if (other.components() != components()) throw StructuralError("component count mismatch");
  coeffs_ -= other.coeffs_;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

RealField::RealField(GridPtr grid, int components)
    : grid_(std::move(grid)), values_(Eigen::ArrayXXd::Zero(grid_->size(), components)) {}

RealField::RealField(GridPtr grid, Eigen::ArrayXXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.rows() != grid_->size())
    throw StructuralError("point count " + std::to_string(values_.rows()) +
                          " does not match grid size " + std::to_string(grid_->size()));
}

namespace detail {

Eigen::ArrayXXd inverse_columns(const Grid& grid, const Eigen::ArrayXXcd& spectra) {
  const Eigen::Index n = grid.size();
  const Eigen::Index cols = spectra.cols();
  Eigen::ArrayXXd out(n, cols);
  Eigen::ArrayXcd packed(n);
  Eigen::ArrayXcd result(n);
  for (Eigen::Index c = 0; c < cols; c += 2) {
    if (c + 1 < cols) {
      packed = spectra.col(c) + kI * spectra.col(c + 1);
      grid.fft().backward(packed.data(), result.data());
      out.col(c) = result.real();
      out.col(c + 1) = result.imag();
    } else {
      packed = spectra.col(c);
      grid.fft().backward(packed.data(), result.data());
      out.col(c) = result.real();
    }
  }
  return out;
}

Eigen::ArrayXXcd forward_columns(const Grid& grid, const Eigen::ArrayXXd& values) {
  const Eigen::Index n = grid.size();
  const Eigen::Index cols = values.cols();
  const double scale = 1.0 / static_cast<double>(n);
  const auto& neg = grid.negated_index();
  const Eigen::ArrayXd half_mask = (0.5 * scale) * grid.dealias_mask();
  Eigen::ArrayXXcd out(n, cols);
  Eigen::ArrayXcd packed(n);
  Eigen::ArrayXcd z(n);
  for (Eigen::Index c = 0; c < cols; c += 2) {
    if (c + 1 < cols) {
      packed.real() = values.col(c);
      packed.imag() = values.col(c + 1);
      grid.fft().forward(packed.data(), z.data());
      const Eigen::ArrayXcd zneg = z(neg).conjugate();
      out.col(c) = (z + zneg) * half_mask;
      out.col(c + 1) = (-kI) * (z - zneg) * half_mask;
    } else {
      packed.real() = values.col(c);
      packed.imag().setZero();
      grid.fft().forward(packed.data(), z.data());
      out.col(c) = z * (2.0 * half_mask);
    }
  }
  return out;
}

}  // namespace detail

SpectralField forward_transform(const RealField& f) {
  if (f.values().rows() != f.grid().size()) throw StructuralError("field/grid size mismatch");
  return SpectralField(f.grid_ptr(), detail::forward_columns(f.grid(), f.values()));
}

double hermitian_defect(const SpectralField& F) {
  const auto& neg = F.grid().negated_index();
  double worst = 0.0;
  for (int c = 0; c < F.components(); ++c) {
    const auto col = F.coeffs().col(c);
    const Eigen::ArrayXcd mirrored = col(neg).conjugate();
    worst = std::max(worst, (col - mirrored).abs().maxCoeff());
  }
  return worst;
}

RealField inverse_transform(const SpectralField& F) {
  if (F.coeffs().rows() != F.grid().size()) throw StructuralError("field/grid size mismatch");
  if (F.coeffs().size() > 0) {
    const double scale = F.coeffs().abs().maxCoeff();
    const double defect = hermitian_defect(F);
    if (defect > 1e-12 * scale)
      throw SymmetryError("Hermitian defect " + std::to_string(defect) + " relative to max " +
                          std::to_string(scale));
  }
  return RealField(F.grid_ptr(), detail::inverse_columns(F.grid(), F.coeffs()));
}

SpectralField spectral_derivative(const SpectralField& F, const MultiIndex& order) {
  const Grid& g = F.grid();
  int total = 0;
  for (int a : order) {
    if (a < 0) throw ParameterError("derivative order must be non-negative");
    total += a;
  }
  Eigen::ArrayXd magnitude = Eigen::ArrayXd::Ones(g.size());
  for (int axis = 0; axis < 3; ++axis)
    for (int r = 0; r < order[axis]; ++r) magnitude *= g.k(axis);
  if (total % 2 == 1) magnitude *= g.nyquist_free_mask();
  // i^total
  static const Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex phase = kPowers[total % 4];

  SpectralField out(F.grid_ptr(), F.components());
  for (int c = 0; c < F.components(); ++c)
    out.coeffs().col(c) = F.coeffs().col(c) * (phase * magnitude);
  return out;
}

namespace {

constexpr double kIdempotenceUlps = 8.0;

}  // namespace

SpectralField leray_project(const SpectralField& F) {
  if (F.components() != 3) throw StructuralError("Leray projection needs 3 components");
  const Grid& g = F.grid();
  const auto& c = F.coeffs();
  const Eigen::ArrayXcd div = c.col(0) * g.k(0) + c.col(1) * g.k(1) + c.col(2) * g.k(2);
  // Modes whose divergence is already at rounding level are left as they
  // are, which makes the projection exactly idempotent.
  const Eigen::ArrayXd floor =
      kIdempotenceUlps * std::numeric_limits<double>::epsilon() * (g.k_squared() * c.abs2().rowwise().sum()).sqrt();
  const Eigen::ArrayXcd k_dot = (div.abs() > floor).select(div * g.inv_k_squared(), Complex(0.0));
  SpectralField out(F.grid_ptr(), 3);
  for (int a = 0; a < 3; ++a) out.coeffs().col(a) = c.col(a) - g.k(a) * k_dot;
  return out;
}

double l2_norm_spectral(const SpectralField& F) {
  return std::sqrt(F.grid().volume() * F.coeffs().abs2().sum());
}

double derivative_norm_sq(const SpectralField& F, int order) {
  if (order < 0) throw ParameterError("derivative order must be non-negative");
  const Grid& g = F.grid();
  Eigen::ArrayXd weight = Eigen::ArrayXd::Ones(g.size());
  for (int r = 0; r < order; ++r) weight *= g.k_squared();
  if (order % 2 == 1) weight *= g.nyquist_free_mask();
  double sum = 0.0;
  for (int c = 0; c < F.components(); ++c) sum += (F.coeffs().col(c).abs2() * weight).sum();
  return g.volume() * sum;
}

double lp_norm(const RealField& f, double p) {
  if (!(p >= 1.0)) throw ParameterError("L^p norm needs p >= 1, got " + std::to_string(p));
  const Grid& g = f.grid();
  const Eigen::ArrayXd magnitude = f.values().square().rowwise().sum().sqrt();
  if (std::isinf(p)) return magnitude.size() ? magnitude.maxCoeff() : 0.0;
  const double cell = g.volume() / static_cast<double>(g.size());
  if (p == 2.0) return std::sqrt(cell * magnitude.square().sum());
  return std::pow(cell * magnitude.pow(p).sum(), 1.0 / p);
}

double divergence_defect(const SpectralField& F) {
  if (F.components() != 3) throw StructuralError("divergence needs 3 components");
  const Grid& g = F.grid();
  const auto& c = F.coeffs();
  const double norm = std::sqrt(c.abs2().sum());
  if (norm == 0.0) return 0.0;
  const Eigen::ArrayXd div =
      (c.col(0) * g.k(0) + c.col(1) * g.k(1) + c.col(2) * g.k(2)).abs();
  return div.maxCoeff() / norm;
}

SpectralField gradient(const SpectralField& F) {
  const Grid& g = F.grid();
  SpectralField out(F.grid_ptr(), 3 * F.components());
  for (int c = 0; c < F.components(); ++c)
    for (int j = 0; j < 3; ++j)
      out.coeffs().col(3 * c + j) = F.coeffs().col(c) * g.ik(j);
  return out;
}

}  // namespace lcd
