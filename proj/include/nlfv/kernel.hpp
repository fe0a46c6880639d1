#pragma once

#include "nlfv/grid.hpp"
#include "nlfv/model.hpp"
#include "nlfv/types.hpp"

#include <memory>
#include <string>

namespace nlfv {

/// Continuous, compactly supported convolution kernel mu.
struct KernelSpec {
  enum class Kind {
    LwrQuadratic1d,  ///< mu(x) = 3/eta^3 (eta - x)^2 on (0, eta)
    CrowdBump2d,     ///< mu ~ (R^2 - x^2 - y^2)^3 on the disk of radius R, unit mass
    CustomSampled,   ///< samples of mu at the interface-aligned points of one mesh
  };

  Kind kind = Kind::LwrQuadratic1d;
  double eta = 0.0625;
  double radius = 0.4;
  // CustomSampled: samples[q] = mu((1/2 - (first_offset + q)) * sample_dx).
  Vector samples;
  int first_offset = 0;
  double sample_dx = 0.0;

  static KernelSpec lwr_quadratic(double eta);
  static KernelSpec crowd_bump(double radius = 0.4);
  static KernelSpec custom(Vector mu_samples, int first_offset, double sample_dx);

  int dimension() const;
  double operator()(double x) const;
  double operator()(double x, double y) const;
  std::string describe() const;
};

/// Interface-aligned samples of a 1D kernel, premultiplied by dx.
/// weights[q] belongs to offset d = first_offset + q, equals dx mu((1/2 - d) dx)
/// and multiplies beta(u_{i-d+1/2}) in the value at interface x_{i+1/2}.
struct DiscreteKernel1D {
  Vector weights;
  int first_offset = 0;
  double dx = 0.0;
  std::string warning;  ///< non-empty when the kernel is under-resolved

  int size() const { return static_cast<int>(weights.size()); }
  int last_offset() const { return first_offset + size() - 1; }
  double at(int offset) const;
};

/// 2D analogue: weights(a, b) belongs to the offset pair
/// (l, p) = (first_x + a, first_y + b) and is premultiplied by dx*dy. For
/// Axis::X the sample is mu((1/2 - l) dx, -p dy) and multiplies the interface
/// value beta(u_{i-l+1/2, j-p}); for Axis::Y it is mu(-l dx, (1/2 - p) dy).
struct DiscreteKernel2D {
  Array2 weights;
  int first_x = 0;
  int first_y = 0;
  double dx = 0.0;
  double dy = 0.0;
  Axis axis = Axis::X;
  std::string warning;

  int last_x() const { return first_x + static_cast<int>(weights.rows()) - 1; }
  int last_y() const { return first_y + static_cast<int>(weights.cols()) - 1; }
  double at(int ox, int oy) const;
};

DiscreteKernel1D sample_kernel_1d(const KernelSpec& spec, double dx);
DiscreteKernel2D sample_kernel_2d(const KernelSpec& spec, double dx, double dy,
                                  Axis axis = Axis::X);

double kernel_mass(const DiscreteKernel1D& k);
double kernel_mass(const DiscreteKernel2D& k);

/// Interface values u_{k-1/2} between cells k-1 and k. Zero extension yields
/// n+1 values (ghost cells are 0); periodic grids yield n values.
Vector interface_values(const Vector& u, Boundary b, InterfaceRule rule);

/// Interface values along one axis of a 2D field: (nx+1, ny) for Axis::X on a
/// zero-extension grid, (nx, ny) when periodic; similarly for Axis::Y.
Array2 interface_values(const Array2& u, Axis axis, Boundary b, InterfaceRule rule);

class FftCorrelator1D;
class FftCorrelator2D;

/// Evaluates c at every interface for a fixed kernel and grid size; keeps the
/// kernel spectrum when running in FFT mode. Not safe for concurrent use of
/// one instance.
class Convolver1D {
 public:
  Convolver1D(DiscreteKernel1D kernel, int n_cells, Boundary boundary,
              ConvolutionMode mode);
  ~Convolver1D();
  Convolver1D(Convolver1D&&) noexcept;
  Convolver1D& operator=(Convolver1D&&) noexcept;

  /// beta_at_interfaces holds beta(u_{k-1/2}) for every stored interface;
  /// beta_ghost = beta(0) stands for all interfaces beyond a zero-extension
  /// boundary. Returns n_cells + 1 values (periodic: last equals first).
  Vector apply(const Vector& beta_at_interfaces, double beta_ghost) const;

  ConvolutionMode mode() const { return mode_; }
  const DiscreteKernel1D& kernel() const { return kernel_; }

 private:
  DiscreteKernel1D kernel_;
  DiscreteKernel1D stencil_;  ///< kernel_ mirrored to correlation order
  int n_cells_;
  Boundary boundary_;
  ConvolutionMode mode_;
  double mass_;
  std::unique_ptr<FftCorrelator1D> fft_;
};

class Convolver2D {
 public:
  Convolver2D(DiscreteKernel2D kernel, int nx, int ny, Boundary boundary,
              ConvolutionMode mode);
  ~Convolver2D();
  Convolver2D(Convolver2D&&) noexcept;
  Convolver2D& operator=(Convolver2D&&) noexcept;

  /// Input shaped like interface_values(u, kernel.axis, ...); output has shape
  /// (nx+1, ny) for Axis::X and (nx, ny+1) for Axis::Y.
  Array2 apply(const Array2& beta_at_interfaces, double beta_ghost) const;

  ConvolutionMode mode() const { return mode_; }
  const DiscreteKernel2D& kernel() const { return kernel_; }

 private:
  DiscreteKernel2D kernel_;
  DiscreteKernel2D stencil_;
  int nx_;
  int ny_;
  Boundary boundary_;
  ConvolutionMode mode_;
  double mass_;
  std::unique_ptr<FftCorrelator2D> fft_;
};

/// Auto resolves to FFT when the kernel has more than 32 offsets (per axis).
ConvolutionMode resolve_mode(ConvolutionMode mode, const DiscreteKernel1D& k);
ConvolutionMode resolve_mode(ConvolutionMode mode, const DiscreteKernel2D& k);

/// One-shot evaluation of c_{i+1/2} = dx sum_p mu_{i+1/2-p} beta(u_{p+1/2}) at
/// the n_cells + 1 interfaces. Throws PreconditionError when the kernel was
/// sampled at a different dx.
Vector convolve_1d(const Field1D& field, const Grid1D& grid,
                   const DiscreteKernel1D& kernel, const Model& m, InterfaceRule recon,
                   ConvolutionMode mode);

/// c^x at the x-interfaces or c^y at the y-interfaces of a 2D field. The
/// kernel's axis must match `which`.
Array2 convolve_2d(const Field2D& field, const Grid2D& grid,
                   const DiscreteKernel2D& kernel, const Model& m, Axis which,
                   InterfaceRule recon, ConvolutionMode mode);

}  // namespace nlfv
