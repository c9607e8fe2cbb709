#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>

namespace lcd {

class FftEngine;

/// Cubic periodic box [0, L)^3 sampled at N^3 points.
///
/// Modes are stored in FFT order: flat index (i1 * N + i2) * N + i3 with the
/// third axis fastest, and array index i maps to mode m = i for i <= N/2 and
/// m = i - N otherwise, so m ranges over {-N/2+1, ..., N/2}. The wavenumber
/// tables are physical, k_j = (2 pi / L) m_j.
///
/// A Grid owns its FFT plans and is shared by every field defined on it, so
/// it is only ever handled through std::shared_ptr<const Grid>.
class Grid {
 public:
  static std::shared_ptr<const Grid> create(double box_length, int resolution);

  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  double box_length() const { return L_; }
  int resolution() const { return N_; }
  Eigen::Index size() const { return size_; }
  double volume() const { return L_ * L_ * L_; }
  double spacing() const { return L_ / N_; }
  /// Fundamental wavenumber 2 pi / L.
  double dk() const { return dk_; }

  /// Mode index m for array index i along one axis.
  int mode_of(int i) const { return i <= N_ / 2 ? i : i - N_; }
  Eigen::Index flat(int i1, int i2, int i3) const {
    return (static_cast<Eigen::Index>(i1) * N_ + i2) * N_ + i3;
  }
  /// Flat index of the mode (m1, m2, m3); modes are taken modulo N.
  Eigen::Index flat_of_mode(int m1, int m2, int m3) const;

  const Eigen::ArrayXd& k(int axis) const { return k_[axis]; }
  const Eigen::ArrayXd& k_squared() const { return k2_; }
  /// 1/|k|^2, with 0 at the mean mode.
  const Eigen::ArrayXd& inv_k_squared() const { return inv_k2_; }
  /// 1.0 where a mode survives two-thirds truncation and is not Nyquist, else 0.0.
  const Eigen::ArrayXd& dealias_mask() const { return mask_; }
  /// 1.0 off the Nyquist planes; used for odd-order derivatives.
  const Eigen::ArrayXd& nyquist_free_mask() const { return odd_mask_; }
  /// i k_axis with the Nyquist planes zeroed: the spectral first derivative.
  const Eigen::ArrayXcd& ik(int axis) const { return ik_[axis]; }
  /// Flat index of the mode -m for every flat index m.
  const Eigen::ArrayXi& negated_index() const { return neg_; }
  /// Largest retained |m_j| along an axis.
  int max_retained_mode() const { return N_ / 3; }

  /// Grid coordinate x_axis at flat point index p.
  double coordinate(Eigen::Index p, int axis) const;

  const FftEngine& fft() const { return *fft_; }

 private:
  Grid(double box_length, int resolution);

  double L_;
  int N_;
  Eigen::Index size_;
  double dk_;
  Eigen::ArrayXd k_[3];
  Eigen::ArrayXd k2_;
  Eigen::ArrayXd inv_k2_;
  Eigen::ArrayXd mask_;
  Eigen::ArrayXd odd_mask_;
  Eigen::ArrayXi neg_;
  Eigen::ArrayXcd ik_[3];
  std::unique_ptr<FftEngine> fft_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Thin wrapper over FFTW complex-to-complex 3-D plans.
///
/// forward computes sum_x f(x) exp(-i k.x) without normalization; backward
/// computes sum_m c(m) exp(+i k.x). Both are safe to call concurrently.
class FftEngine {
 public:
  explicit FftEngine(int resolution);
  ~FftEngine();
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  void forward(const std::complex<double>* in, std::complex<double>* out) const;
  void backward(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  void* forward_plan_;
  void* backward_plan_;
  void* forward_unaligned_;
  void* backward_unaligned_;
};

/// Thread count requested through LCD_SPECTRA_THREADS (at least 1).
int configured_threads();

}  // namespace lcd
