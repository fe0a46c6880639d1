#include "fft_correlator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <new>

namespace nlfv {

namespace {

// Planner calls are not reentrant in FFTW.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <typename T>
T* fft_alloc(std::size_t n) {
  void* p = fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1));
  if (p == nullptr) throw std::bad_alloc();
  return static_cast<T*>(p);
}

int wrap(long v, int period) {
  long r = v % period;
  return static_cast<int>(r < 0 ? r + period : r);
}

}  // namespace

int smooth_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

FftCorrelator1D::FftCorrelator1D(const Vector& weights, int first_offset, int n_in,
                                 int n_out, bool cyclic)
    : n_in_(n_in), n_out_(n_out) {
  const int k = static_cast<int>(weights.size());
  const int last = first_offset + k - 1;
  if (cyclic) {
    size_ = n_in;
  } else {
    size_ = smooth_size(std::max({n_in - first_offset, n_out + last, n_out, k, 1}));
  }
  spectrum_size_ = size_ / 2 + 1;
  real_buf_ = fft_alloc<double>(size_);
  spec_buf_ = fft_alloc<std::complex<double>>(spectrum_size_);
  kernel_spec_ = fft_alloc<std::complex<double>>(spectrum_size_);
  {
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(size_, real_buf_,
                                    reinterpret_cast<fftw_complex*>(spec_buf_),
                                    FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(size_, reinterpret_cast<fftw_complex*>(spec_buf_),
                                     real_buf_, FFTW_ESTIMATE);
  }
  std::fill(real_buf_, real_buf_ + size_, 0.0);
  for (int q = 0; q < k; ++q) real_buf_[wrap(first_offset + q, size_)] += weights[q];
  fftw_execute(static_cast<fftw_plan>(forward_));
  const double scale = 1.0 / size_;
  for (int f = 0; f < spectrum_size_; ++f) kernel_spec_[f] = std::conj(spec_buf_[f]) * scale;
}

FftCorrelator1D::~FftCorrelator1D() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_));
  }
  fftw_free(real_buf_);
  fftw_free(spec_buf_);
  fftw_free(kernel_spec_);
}

Vector FftCorrelator1D::apply(const Vector& g) const {
  std::fill(real_buf_, real_buf_ + size_, 0.0);
  std::copy(g.data(), g.data() + std::min<Eigen::Index>(g.size(), n_in_), real_buf_);
  fftw_execute(static_cast<fftw_plan>(forward_));
  for (int f = 0; f < spectrum_size_; ++f) spec_buf_[f] *= kernel_spec_[f];
  fftw_execute(static_cast<fftw_plan>(backward_));
  Vector out(n_out_);
  for (int i = 0; i < n_out_; ++i) out[i] = real_buf_[i % size_];
  return out;
}

FftCorrelator2D::FftCorrelator2D(const Array2& weights, int first_x, int first_y,
                                 int in_x, int in_y, int out_x, int out_y, bool cyclic)
    : in_x_(in_x), in_y_(in_y), out_x_(out_x), out_y_(out_y) {
  const int kx = static_cast<int>(weights.rows());
  const int ky = static_cast<int>(weights.cols());
  if (cyclic) {
    size_x_ = in_x;
    size_y_ = in_y;
  } else {
    size_x_ = smooth_size(std::max({in_x - first_x, out_x + first_x + kx - 1, out_x, kx, 1}));
    size_y_ = smooth_size(std::max({in_y - first_y, out_y + first_y + ky - 1, out_y, ky, 1}));
  }
  const std::size_t n_real = static_cast<std::size_t>(size_x_) * size_y_;
  spectrum_size_ = static_cast<std::size_t>(size_x_ / 2 + 1) * size_y_;
  real_buf_ = fft_alloc<double>(n_real);
  spec_buf_ = fft_alloc<std::complex<double>>(spectrum_size_);
  kernel_spec_ = fft_alloc<std::complex<double>>(spectrum_size_);
  {
    std::lock_guard lock(planner_mutex());
    // Row-major (y, x) with x fastest matches Eigen's column-major (x, y).
    forward_ = fftw_plan_dft_r2c_2d(size_y_, size_x_, real_buf_,
                                    reinterpret_cast<fftw_complex*>(spec_buf_),
                                    FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_2d(size_y_, size_x_,
                                     reinterpret_cast<fftw_complex*>(spec_buf_), real_buf_,
                                     FFTW_ESTIMATE);
  }
  std::fill(real_buf_, real_buf_ + n_real, 0.0);
  for (int b = 0; b < ky; ++b)
    for (int a = 0; a < kx; ++a)
      real_buf_[static_cast<std::size_t>(wrap(first_y + b, size_y_)) * size_x_ +
                wrap(first_x + a, size_x_)] += weights(a, b);
  fftw_execute(static_cast<fftw_plan>(forward_));
  const double scale = 1.0 / static_cast<double>(n_real);
  for (std::size_t f = 0; f < spectrum_size_; ++f)
    kernel_spec_[f] = std::conj(spec_buf_[f]) * scale;
}

FftCorrelator2D::~FftCorrelator2D() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_));
  }
  fftw_free(real_buf_);
  fftw_free(spec_buf_);
  fftw_free(kernel_spec_);
}

Array2 FftCorrelator2D::apply(const Array2& g) const {
  const std::size_t n_real = static_cast<std::size_t>(size_x_) * size_y_;
  std::fill(real_buf_, real_buf_ + n_real, 0.0);
  const int gx = std::min<int>(static_cast<int>(g.rows()), in_x_);
  const int gy = std::min<int>(static_cast<int>(g.cols()), in_y_);
  for (int y = 0; y < gy; ++y)
    std::copy(g.col(y).data(), g.col(y).data() + gx,
              real_buf_ + static_cast<std::size_t>(y) * size_x_);
  fftw_execute(static_cast<fftw_plan>(forward_));
  for (std::size_t f = 0; f < spectrum_size_; ++f) spec_buf_[f] *= kernel_spec_[f];
  fftw_execute(static_cast<fftw_plan>(backward_));
  Array2 out(out_x_, out_y_);
  for (int y = 0; y < out_y_; ++y)
    for (int x = 0; x < out_x_; ++x)
      out(x, y) = real_buf_[static_cast<std::size_t>(y % size_y_) * size_x_ + x % size_x_];
  return out;
}

}  // namespace nlfv
