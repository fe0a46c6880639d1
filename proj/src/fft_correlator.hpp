#pragma once

// FFTW-backed correlation out[k] = sum_d w[d] g[k + d]. Internal to the
// library; the Convolver classes own one instance per configured kernel.

#include "nlfv/types.hpp"

#include <complex>
#include <cstddef>

namespace nlfv {

/// Smallest n' >= n whose prime factors are all in {2, 3, 5, 7}.
int smooth_size(int n);

class FftCorrelator1D {
 public:
  /// `cyclic`: g has period n_in and n_out == n_in. Otherwise g is zero
  /// outside [0, n_in) and the transform is padded to avoid wraparound.
  FftCorrelator1D(const Vector& weights, int first_offset, int n_in, int n_out,
                  bool cyclic);
  ~FftCorrelator1D();
  FftCorrelator1D(const FftCorrelator1D&) = delete;
  FftCorrelator1D& operator=(const FftCorrelator1D&) = delete;

  Vector apply(const Vector& g) const;
  int transform_size() const { return size_; }

 private:
  int n_in_;
  int n_out_;
  int size_;
  int spectrum_size_;
  double* real_buf_;
  std::complex<double>* spec_buf_;
  std::complex<double>* kernel_spec_;
  void* forward_;
  void* backward_;
};

class FftCorrelator2D {
 public:
  FftCorrelator2D(const Array2& weights, int first_x, int first_y, int in_x, int in_y,
                  int out_x, int out_y, bool cyclic);
  ~FftCorrelator2D();
  FftCorrelator2D(const FftCorrelator2D&) = delete;
  FftCorrelator2D& operator=(const FftCorrelator2D&) = delete;

  Array2 apply(const Array2& g) const;
  int transform_size_x() const { return size_x_; }
  int transform_size_y() const { return size_y_; }

 private:
  int in_x_, in_y_, out_x_, out_y_;
  int size_x_, size_y_;
  std::size_t spectrum_size_;
  double* real_buf_;
  std::complex<double>* spec_buf_;
  std::complex<double>* kernel_spec_;
  void* forward_;
  void* backward_;
};

}  // namespace nlfv
