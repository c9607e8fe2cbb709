#include "lcd/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <string>

#include "lcd/errors.hpp"

namespace lcd {

namespace {

// The FFTW planner is not reentrant; execution with fftw_execute_dft is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_fftw_threads() {
  static std::once_flag once;
  std::call_once(once, [] {
    fftw_init_threads();
  });
}

}  // namespace

int configured_threads() {
  const char* env = std::getenv("LCD_SPECTRA_THREADS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || n < 1) return 1;
  return static_cast<int>(n);
}

FftEngine::FftEngine(int n) {
  std::lock_guard lock(planner_mutex());
  init_fftw_threads();
  fftw_plan_with_nthreads(configured_threads());
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  auto* a = fftw_alloc_complex(total);
  auto* b = fftw_alloc_complex(total);
  forward_plan_ = fftw_plan_dft_3d(n, n, n, a, b, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_3d(n, n, n, a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
  const unsigned loose = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_unaligned_ = fftw_plan_dft_3d(n, n, n, a, b, FFTW_FORWARD, loose);
  backward_unaligned_ = fftw_plan_dft_3d(n, n, n, a, b, FFTW_BACKWARD, loose);
  fftw_free(a);
  fftw_free(b);
  if (forward_plan_ == nullptr || backward_plan_ == nullptr || forward_unaligned_ == nullptr ||
      backward_unaligned_ == nullptr)
    throw StructuralError("FFTW failed to create plans for N=" + std::to_string(n));
}

FftEngine::~FftEngine() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(forward_unaligned_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_unaligned_));
}

namespace {

// Plans made on fftw_alloc buffers require the same alignment at execution.
bool fftw_aligned(const std::complex<double>* in, std::complex<double>* out) {
  return fftw_alignment_of(reinterpret_cast<double*>(const_cast<std::complex<double>*>(in))) == 0 &&
         fftw_alignment_of(reinterpret_cast<double*>(out)) == 0;
}

}  // namespace

void FftEngine::forward(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(fftw_aligned(in, out) ? forward_plan_ : forward_unaligned_),
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void FftEngine::backward(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(fftw_aligned(in, out) ? backward_plan_ : backward_unaligned_),
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

std::shared_ptr<const Grid> Grid::create(double box_length, int resolution) {
  return std::shared_ptr<const Grid>(new Grid(box_length, resolution));
}

Grid::Grid(double box_length, int resolution)
    : L_(box_length), N_(resolution) {
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw ParameterError("box length must be positive, got " + std::to_string(box_length));
  if (resolution < 8 || resolution % 2 != 0)
    throw ParameterError("resolution must be even and >= 8, got " + std::to_string(resolution));

  size_ = static_cast<Eigen::Index>(N_) * N_ * N_;
  dk_ = 2.0 * std::numbers::pi / L_;
  for (auto& k : k_) k.resize(size_);
  k2_.resize(size_);
  inv_k2_.resize(size_);
  mask_.resize(size_);
  odd_mask_.resize(size_);
  neg_.resize(size_);

  const int cut = N_ / 3;
  const int nyq = N_ / 2;
  for (int i1 = 0; i1 < N_; ++i1) {
    for (int i2 = 0; i2 < N_; ++i2) {
      for (int i3 = 0; i3 < N_; ++i3) {
        const Eigen::Index p = flat(i1, i2, i3);
        const int m[3] = {mode_of(i1), mode_of(i2), mode_of(i3)};
        double k2 = 0.0;
        bool keep = true;
        bool on_nyquist = false;
        for (int a = 0; a < 3; ++a) {
          const double k = dk_ * m[a];
          k_[a](p) = k;
          k2 += k * k;
          if (std::abs(m[a]) > cut) keep = false;
          if (m[a] == nyq) on_nyquist = true;
        }
        k2_(p) = k2;
        inv_k2_(p) = k2 > 0.0 ? 1.0 / k2 : 0.0;
        mask_(p) = (keep && !on_nyquist) ? 1.0 : 0.0;
        odd_mask_(p) = on_nyquist ? 0.0 : 1.0;
        neg_(p) = static_cast<int>(flat_of_mode(-m[0], -m[1], -m[2]));
      }
    }
  }
  for (int a = 0; a < 3; ++a)
    ik_[a] = (k_[a] * odd_mask_).cast<std::complex<double>>() * std::complex<double>(0.0, 1.0);
  fft_ = std::make_unique<FftEngine>(N_);
}

Grid::~Grid() = default;

Eigen::Index Grid::flat_of_mode(int m1, int m2, int m3) const {
  auto wrap = [this](int m) { return ((m % N_) + N_) % N_; };
  return flat(wrap(m1), wrap(m2), wrap(m3));
}

double Grid::coordinate(Eigen::Index p, int axis) const {
  Eigen::Index idx = p;
  for (int a = 2; a > axis; --a) idx /= N_;
  return spacing() * static_cast<double>(idx % N_);
}

}  // namespace lcd
