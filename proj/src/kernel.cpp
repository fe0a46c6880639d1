#include "nlfv/kernel.hpp"

#include "fft_correlator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nlfv {

KernelSpec KernelSpec::lwr_quadratic(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw ConfigError("kernel eta must be positive and finite");
  KernelSpec k;
  k.kind = Kind::LwrQuadratic1d;
  k.eta = eta;
  return k;
}

KernelSpec KernelSpec::crowd_bump(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw ConfigError("kernel radius must be positive and finite");
  KernelSpec k;
  k.kind = Kind::CrowdBump2d;
  k.radius = radius;
  return k;
}

KernelSpec KernelSpec::custom(Vector mu_samples, int first_offset, double sample_dx) {
  if (!(sample_dx > 0.0)) throw ConfigError("custom kernel needs a positive sample dx");
  if (!mu_samples.allFinite()) throw ConfigError("custom kernel samples must be finite");
  KernelSpec k;
  k.kind = Kind::CustomSampled;
  k.samples = std::move(mu_samples);
  k.first_offset = first_offset;
  k.sample_dx = sample_dx;
  return k;
}

int KernelSpec::dimension() const { return kind == Kind::CrowdBump2d ? 2 : 1; }

double KernelSpec::operator()(double x) const {
  switch (kind) {
    case Kind::LwrQuadratic1d:
      if (x > 0.0 && x < eta) return 3.0 / (eta * eta * eta) * (eta - x) * (eta - x);
      return 0.0;
    case Kind::CustomSampled: {
      // Nearest stored sample; the samples sit at (1/2 - p) * sample_dx.
      const long p = std::lround(0.5 - x / sample_dx);
      const long q = p - first_offset;
      if (q < 0 || q >= samples.size()) return 0.0;
      return samples[q];
    }
    case Kind::CrowdBump2d:
      break;
  }
  throw PreconditionError("1D evaluation of a 2D kernel");
}

double KernelSpec::operator()(double x, double y) const {
  if (kind != Kind::CrowdBump2d) throw PreconditionError("2D evaluation of a 1D kernel");
  const double r2 = radius * radius;
  const double s = r2 - x * x - y * y;
  if (s <= 0.0) return 0.0;
  // Integral of (R^2 - r^2)^3 over the disk is pi R^8 / 4.
  const double norm = std::numbers::pi * r2 * r2 * r2 * r2 / 4.0;
  return s * s * s / norm;
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::LwrQuadratic1d:
      os << "lwr-quadratic-1d(eta=" << eta << ")";
      break;
    case Kind::CrowdBump2d:
      os << "crowd-bump-2d(radius=" << radius << ")";
      break;
    case Kind::CustomSampled:
      os << "custom-sampled(" << samples.size() << " samples)";
      break;
  }
  return os.str();
}

double DiscreteKernel1D::at(int offset) const {
  const int q = offset - first_offset;
  return (q >= 0 && q < size()) ? weights[q] : 0.0;
}

double DiscreteKernel2D::at(int ox, int oy) const {
  const int a = ox - first_x;
  const int b = oy - first_y;
  if (a < 0 || b < 0 || a >= weights.rows() || b >= weights.cols()) return 0.0;
  return weights(a, b);
}

namespace {

std::string resolution_warning(long nonzero, const std::string& what) {
  if (nonzero >= 2) return {};
  std::ostringstream os;
  os << what << " is resolved by " << nonzero << " sample(s); refine the mesh";
  return os.str();
}

}  // namespace

DiscreteKernel1D sample_kernel_1d(const KernelSpec& spec, double dx) {
  if (!(dx > 0.0)) throw PreconditionError("sample_kernel_1d: dx must be positive");
  if (spec.dimension() != 1) throw PreconditionError("sample_kernel_1d: kernel is 2D");

  DiscreteKernel1D out;
  out.dx = dx;
  if (spec.kind == KernelSpec::Kind::CustomSampled) {
    if (std::abs(dx - spec.sample_dx) > 1e-12 * dx)
      throw PreconditionError("custom kernel was sampled at a different dx");
    out.weights = dx * spec.samples;
    out.first_offset = spec.first_offset;
    out.warning = resolution_warning((spec.samples != 0.0).count(), spec.describe());
    return out;
  }

  // Argument (1/2 - p) dx must fall in (0, eta).
  const int p_lo = static_cast<int>(std::floor(0.5 - spec.eta / dx)) - 1;
  const int p_hi = 1;
  int first = p_hi + 1;
  int last = p_lo - 1;
  for (int p = p_lo; p <= p_hi; ++p) {
    if (spec((0.5 - p) * dx) != 0.0) {
      first = std::min(first, p);
      last = std::max(last, p);
    }
  }
  if (last < first) {
    out.weights = Vector();
    out.first_offset = 0;
  } else {
    out.first_offset = first;
    out.weights.resize(last - first + 1);
    for (int p = first; p <= last; ++p) out.weights[p - first] = dx * spec((0.5 - p) * dx);
  }
  out.warning = resolution_warning((out.weights != 0.0).count(), spec.describe());
  return out;
}

DiscreteKernel2D sample_kernel_2d(const KernelSpec& spec, double dx, double dy,
                                  Axis axis) {
  if (!(dx > 0.0) || !(dy > 0.0))
    throw PreconditionError("sample_kernel_2d: dx and dy must be positive");
  if (spec.dimension() != 2) throw PreconditionError("sample_kernel_2d: kernel is 1D");

  // x-axis kernel: mu((1/2 - l) dx, -p dy); y-axis: mu(-l dx, (1/2 - p) dy).
  const double sx = axis == Axis::X ? 0.5 : 0.0;
  const double sy = axis == Axis::Y ? 0.5 : 0.0;
  auto sample = [&](int l, int p) { return spec((sx - l) * dx, (sy - p) * dy); };

  const int lx = static_cast<int>(std::ceil(spec.radius / dx)) + 2;
  const int ly = static_cast<int>(std::ceil(spec.radius / dy)) + 2;
  int fx = lx + 1, tx = -lx - 1, fy = ly + 1, ty = -ly - 1;
  for (int p = -ly; p <= ly; ++p)
    for (int l = -lx; l <= lx; ++l)
      if (sample(l, p) != 0.0) {
        fx = std::min(fx, l);
        tx = std::max(tx, l);
        fy = std::min(fy, p);
        ty = std::max(ty, p);
      }

  DiscreteKernel2D out;
  out.dx = dx;
  out.dy = dy;
  out.axis = axis;
  if (tx < fx) {
    out.weights = Array2();
  } else {
    out.first_x = fx;
    out.first_y = fy;
    out.weights.resize(tx - fx + 1, ty - fy + 1);
    for (int p = fy; p <= ty; ++p)
      for (int l = fx; l <= tx; ++l) out.weights(l - fx, p - fy) = dx * dy * sample(l, p);
  }
  out.warning = resolution_warning((out.weights != 0.0).count(), spec.describe());
  return out;
}

double kernel_mass(const DiscreteKernel1D& k) { return k.weights.sum(); }
double kernel_mass(const DiscreteKernel2D& k) { return k.weights.sum(); }

Vector interface_values(const Vector& u, Boundary b, InterfaceRule rule) {
  const Eigen::Index n = u.size();
  if (b == Boundary::Periodic) {
    Vector out(n);
    for (Eigen::Index k = 0; k < n; ++k) out[k] = reconstruct(rule, u[(k + n - 1) % n], u[k]);
    return out;
  }
  Vector out(n + 1);
  for (Eigen::Index k = 0; k <= n; ++k) {
    const double left = k > 0 ? u[k - 1] : 0.0;
    const double right = k < n ? u[k] : 0.0;
    out[k] = reconstruct(rule, left, right);
  }
  return out;
}

Array2 interface_values(const Array2& u, Axis axis, Boundary b, InterfaceRule rule) {
  const Eigen::Index nx = u.rows();
  const Eigen::Index ny = u.cols();
  const bool periodic = b == Boundary::Periodic;
  if (axis == Axis::X) {
    Array2 out(periodic ? nx : nx + 1, ny);
    for (Eigen::Index j = 0; j < ny; ++j)
      for (Eigen::Index k = 0; k < out.rows(); ++k) {
        double left, right;
        if (periodic) {
          left = u((k + nx - 1) % nx, j);
          right = u(k, j);
        } else {
          left = k > 0 ? u(k - 1, j) : 0.0;
          right = k < nx ? u(k, j) : 0.0;
        }
        out(k, j) = reconstruct(rule, left, right);
      }
    return out;
  }
  Array2 out(nx, periodic ? ny : ny + 1);
  for (Eigen::Index k = 0; k < out.cols(); ++k)
    for (Eigen::Index i = 0; i < nx; ++i) {
      double left, right;
      if (periodic) {
        left = u(i, (k + ny - 1) % ny);
        right = u(i, k);
      } else {
        left = k > 0 ? u(i, k - 1) : 0.0;
        right = k < ny ? u(i, k) : 0.0;
      }
      out(i, k) = reconstruct(rule, left, right);
    }
  return out;
}

ConvolutionMode resolve_mode(ConvolutionMode mode, const DiscreteKernel1D& k) {
  if (mode != ConvolutionMode::Auto) return mode;
  return k.size() > 32 ? ConvolutionMode::Fft : ConvolutionMode::Direct;
}

ConvolutionMode resolve_mode(ConvolutionMode mode, const DiscreteKernel2D& k) {
  if (mode != ConvolutionMode::Auto) return mode;
  return std::max(k.weights.rows(), k.weights.cols()) > 32 ? ConvolutionMode::Fft
                                                           : ConvolutionMode::Direct;
}

// ---------------------------------------------------------------------------
// Convolver1D

namespace {

DiscreteKernel1D mirrored(const DiscreteKernel1D& k) {
  DiscreteKernel1D m = k;
  m.weights = k.weights.reverse();
  m.first_offset = k.size() ? -k.last_offset() : 0;
  return m;
}

DiscreteKernel2D mirrored(const DiscreteKernel2D& k) {
  DiscreteKernel2D m = k;
  m.weights = k.weights.reverse();
  if (k.weights.size()) {
    m.first_x = -k.last_x();
    m.first_y = -k.last_y();
  }
  return m;
}

}  // namespace

Convolver1D::Convolver1D(DiscreteKernel1D kernel, int n_cells, Boundary boundary,
                         ConvolutionMode mode)
    : kernel_(std::move(kernel)),
      stencil_(mirrored(kernel_)),
      n_cells_(n_cells),
      boundary_(boundary),
      mode_(resolve_mode(mode, kernel_)),
      mass_(kernel_mass(kernel_)) {
  if (mode_ == ConvolutionMode::Fft && kernel_.size() > 0) {
    const bool cyclic = boundary_ == Boundary::Periodic;
    const int n_in = cyclic ? n_cells_ : n_cells_ + 1;
    fft_ = std::make_unique<FftCorrelator1D>(stencil_.weights, stencil_.first_offset, n_in,
                                             n_cells_ + 1, cyclic);
  }
}

Convolver1D::~Convolver1D() = default;
Convolver1D::Convolver1D(Convolver1D&&) noexcept = default;
Convolver1D& Convolver1D::operator=(Convolver1D&&) noexcept = default;

Vector Convolver1D::apply(const Vector& beta, double beta_ghost) const {
  const bool periodic = boundary_ == Boundary::Periodic;
  const int n_in = periodic ? n_cells_ : n_cells_ + 1;
  const int n_out = n_cells_ + 1;
  if (beta.size() != n_in)
    throw PreconditionError("Convolver1D: interface array has the wrong length");
  if (kernel_.size() == 0) return Vector::Zero(n_out);

  if (mode_ == ConvolutionMode::Fft) {
    if (periodic) return fft_->apply(beta);
    Vector shifted = beta - beta_ghost;
    Vector out = fft_->apply(shifted);
    out += beta_ghost * mass_;
    return out;
  }

  // Direct: pad with ghost (or wrapped) values, then sum in ascending offset.
  const int first = stencil_.first_offset;
  const int last = stencil_.last_offset();
  const int pad_lo = std::max(0, -first);
  const int pad_hi = std::max(0, last + (n_out - n_in));
  Vector padded(n_in + pad_lo + pad_hi);
  for (int m = -pad_lo; m < n_in + pad_hi; ++m) {
    double v;
    if (m >= 0 && m < n_in)
      v = beta[m];
    else if (periodic)
      v = beta[((m % n_in) + n_in) % n_in];
    else
      v = beta_ghost;
    padded[m + pad_lo] = v;
  }
  const double* w = stencil_.weights.data();
  const int kw = stencil_.size();
  Vector out(n_out);
  for (int k = 0; k < n_out; ++k) {
    const double* g = padded.data() + k + first + pad_lo;
    double acc = 0.0;
    for (int q = 0; q < kw; ++q) acc += w[q] * g[q];
    out[k] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Convolver2D

namespace {

struct Shape2D {
  int in_x, in_y, out_x, out_y;
};

Shape2D shapes(Axis axis, int nx, int ny, bool periodic) {
  if (axis == Axis::X) return {periodic ? nx : nx + 1, ny, nx + 1, ny};
  return {nx, periodic ? ny : ny + 1, nx, ny + 1};
}

}  // namespace

Convolver2D::Convolver2D(DiscreteKernel2D kernel, int nx, int ny, Boundary boundary,
                         ConvolutionMode mode)
    : kernel_(std::move(kernel)),
      stencil_(mirrored(kernel_)),
      nx_(nx),
      ny_(ny),
      boundary_(boundary),
      mode_(resolve_mode(mode, kernel_)),
      mass_(kernel_mass(kernel_)) {
  if (mode_ == ConvolutionMode::Fft && kernel_.weights.size() > 0) {
    const bool cyclic = boundary_ == Boundary::Periodic;
    const Shape2D s = shapes(kernel_.axis, nx_, ny_, cyclic);
    fft_ = std::make_unique<FftCorrelator2D>(stencil_.weights, stencil_.first_x,
                                             stencil_.first_y, s.in_x, s.in_y, s.out_x,
                                             s.out_y, cyclic);
  }
}

Convolver2D::~Convolver2D() = default;
Convolver2D::Convolver2D(Convolver2D&&) noexcept = default;
Convolver2D& Convolver2D::operator=(Convolver2D&&) noexcept = default;

Array2 Convolver2D::apply(const Array2& beta, double beta_ghost) const {
  const bool periodic = boundary_ == Boundary::Periodic;
  const Shape2D s = shapes(kernel_.axis, nx_, ny_, periodic);
  if (beta.rows() != s.in_x || beta.cols() != s.in_y)
    throw PreconditionError("Convolver2D: interface array has the wrong shape");
  if (kernel_.weights.size() == 0) return Array2::Zero(s.out_x, s.out_y);

  if (mode_ == ConvolutionMode::Fft) {
    if (periodic) return fft_->apply(beta);
    Array2 shifted = beta - beta_ghost;
    Array2 out = fft_->apply(shifted);
    out += beta_ghost * mass_;
    return out;
  }

  const int fx = stencil_.first_x, fy = stencil_.first_y;
  const int kx = static_cast<int>(stencil_.weights.rows());
  const int ky = static_cast<int>(stencil_.weights.cols());
  const int plx = std::max(0, -fx), ply = std::max(0, -fy);
  const int phx = std::max(0, stencil_.last_x() + (s.out_x - s.in_x));
  const int phy = std::max(0, stencil_.last_y() + (s.out_y - s.in_y));
  Array2 padded(s.in_x + plx + phx, s.in_y + ply + phy);
  for (int y = -ply; y < s.in_y + phy; ++y)
    for (int x = -plx; x < s.in_x + phx; ++x) {
      double v;
      const bool inside = x >= 0 && x < s.in_x && y >= 0 && y < s.in_y;
      if (inside)
        v = beta(x, y);
      else if (periodic)
        v = beta(((x % s.in_x) + s.in_x) % s.in_x, ((y % s.in_y) + s.in_y) % s.in_y);
      else
        v = beta_ghost;
      padded(x + plx, y + ply) = v;
    }

  Array2 out(s.out_x, s.out_y);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < s.out_y; ++j)
    for (int k = 0; k < s.out_x; ++k) {
      double acc = 0.0;
      for (int b = 0; b < ky; ++b) {
        const double* g = &padded(k + fx + plx, j + fy + b + ply);
        const double* w = &stencil_.weights(0, b);
        for (int a = 0; a < kx; ++a) acc += w[a] * g[a];
      }
      out(k, j) = acc;
    }
  return out;
}

// ---------------------------------------------------------------------------

Vector convolve_1d(const Field1D& field, const Grid1D& grid,
                   const DiscreteKernel1D& kernel, const Model& m, InterfaceRule recon,
                   ConvolutionMode mode) {
  if (std::abs(kernel.dx - grid.dx()) > 1e-12 * grid.dx())
    throw PreconditionError("convolve_1d: kernel sampled at a different dx than the grid");
  if (field.values.size() != grid.n_cells)
    throw PreconditionError("convolve_1d: field length does not match the grid");
  const Vector iv = interface_values(field.values, grid.boundary, recon);
  const Vector beta = iv.unaryExpr([&](double u) { return m.beta(u); });
  Convolver1D conv(kernel, grid.n_cells, grid.boundary, mode);
  return conv.apply(beta, m.beta(0.0));
}

Array2 convolve_2d(const Field2D& field, const Grid2D& grid,
                   const DiscreteKernel2D& kernel, const Model& m, Axis which,
                   InterfaceRule recon, ConvolutionMode mode) {
  if (std::abs(kernel.dx - grid.dx()) > 1e-12 * grid.dx() ||
      std::abs(kernel.dy - grid.dy()) > 1e-12 * grid.dy())
    throw PreconditionError("convolve_2d: kernel sampled at a different mesh than the grid");
  if (kernel.axis != which)
    throw PreconditionError("convolve_2d: kernel axis does not match the requested axis");
  if (field.values.rows() != grid.nx || field.values.cols() != grid.ny)
    throw PreconditionError("convolve_2d: field shape does not match the grid");
  const Array2 iv = interface_values(field.values, which, grid.boundary, recon);
  const Array2 beta = iv.unaryExpr([&](double u) { return m.beta(u); });
  Convolver2D conv(kernel, grid.nx, grid.ny, grid.boundary, mode);
  return conv.apply(beta, m.beta(0.0));
}

}  // namespace nlfv
