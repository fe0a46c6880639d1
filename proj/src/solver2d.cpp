#include "nlfv/solver2d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlfv {

void Grid2D::validate() const {
  if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw ConfigError("grid: x_min must be smaller than x_max");
  if (!(y_min < y_max) || !std::isfinite(y_min) || !std::isfinite(y_max))
    throw ConfigError("grid: y_min must be smaller than y_max");
  if (nx <= 0 || ny <= 0) throw ConfigError("grid: nx and ny must be positive");
}

Grid2D Grid2D::refined() const {
  Grid2D g = *this;
  g.nx *= 2;
  g.ny *= 2;
  return g;
}

SchemeConfig RunConfig2D::default_scheme_2d() {
  SchemeConfig s;
  s.lambda = 0.2857;
  s.lambda_y = 0.2857;
  s.cfl = CflEnforcement::Warn;
  return s;
}

void RunConfig2D::validate() const {
  grid.validate();
  scheme.validate(2);
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("time.t_end must be positive");
  if (kernel.dimension() != 2) throw ConfigError("2D run needs a 2D kernel");
  if (initial_values &&
      (initial_values->rows() != grid.nx || initial_values->cols() != grid.ny))
    throw ConfigError("initial values do not match grid.nx x grid.ny");
  const double tx = scheme.lambda * grid.dx();
  const double ty = scheme.lambda_y * grid.dy();
  if (std::abs(tx - ty) > 1e-12 * std::max(tx, ty)) {
    std::ostringstream os;
    os << "scheme: lambda_x * dx = " << tx << " differs from lambda_y * dy = " << ty;
    throw ConfigError(os.str());
  }
}

Stepper2D::Stepper2D(const Grid2D& grid, const Model& model_x, const Model& model_y,
                     const KernelSpec& kernel, const SchemeConfig& scheme,
                     ConvolutionMode mode, bool reconvolve)
    : grid_(grid),
      mx_(model_x),
      my_(model_y),
      scheme_(scheme),
      reconvolve_(reconvolve),
      cx_(sample_kernel_2d(kernel, grid.dx(), grid.dy(), Axis::X), grid.nx, grid.ny,
          grid.boundary, mode),
      cy_(sample_kernel_2d(kernel, grid.dx(), grid.dy(), Axis::Y), grid.nx, grid.ny,
          grid.boundary, mode) {
  if (!cx_.kernel().warning.empty()) warning_ = cx_.kernel().warning;
}

Array2 Stepper2D::convolution(const Array2& u, Axis axis) const {
  const Model& m = axis == Axis::X ? mx_ : my_;
  const Array2 iv = interface_values(u, axis, grid_.boundary, scheme_.recon);
  const Array2 beta = iv.unaryExpr([&](double v) { return m.beta(v); });
  return (axis == Axis::X ? cx_ : cy_).apply(beta, m.beta(0.0));
}

Array2 Stepper2D::sweep(const Array2& u, const Array2& c, Axis axis, double* outflow) const {
  const Model& m = axis == Axis::X ? mx_ : my_;
  const SchemeConfig cfg = scheme_.along(axis);
  const int nx = grid_.nx, ny = grid_.ny;
  const bool periodic = grid_.boundary == Boundary::Periodic;
  Array2 next(nx, ny);
  Vector lost = Vector::Zero(axis == Axis::X ? ny : nx);
  if (axis == Axis::X) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j) {
      Vector flux(nx + 1);
      for (int k = 0; k <= nx; ++k) {
        const double left = k > 0 ? u(k - 1, j) : (periodic ? u(nx - 1, j) : 0.0);
        const double right = k < nx ? u(k, j) : (periodic ? u(0, j) : 0.0);
        flux[k] = numerical_flux(cfg, m.nu(c(k, j)), left, right, m);
      }
      for (int i = 0; i < nx; ++i) next(i, j) = u(i, j) - cfg.lambda * (flux[i + 1] - flux[i]);
      lost[j] = flux[nx] - flux[0];
    }
  } else {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nx; ++i) {
      Vector flux(ny + 1);
      for (int k = 0; k <= ny; ++k) {
        const double left = k > 0 ? u(i, k - 1) : (periodic ? u(i, ny - 1) : 0.0);
        const double right = k < ny ? u(i, k) : (periodic ? u(i, 0) : 0.0);
        flux[k] = numerical_flux(cfg, m.nu(c(i, k)), left, right, m);
      }
      for (int j = 0; j < ny; ++j) next(i, j) = u(i, j) - cfg.lambda * (flux[j + 1] - flux[j]);
      lost[i] = flux[ny] - flux[0];
    }
  }
  if (outflow) {
    const double face = axis == Axis::X ? grid_.dy() : grid_.dx();
    *outflow = periodic ? 0.0 : dt() * face * lost.sum();
  }
  return next;
}

Field2D Stepper2D::step(const Field2D& state, StepTrace2D* trace) const {
  const Array2& u = state.values;
  if (u.rows() != grid_.nx || u.cols() != grid_.ny)
    throw PreconditionError("Stepper2D::step: state shape does not match the grid");
  Array2 cx = convolution(u, Axis::X);
  Array2 cy = reconvolve_ ? Array2() : convolution(u, Axis::Y);
  double out_x = 0.0, out_y = 0.0;
  Array2 half = sweep(u, cx, Axis::X, &out_x);
  if (reconvolve_) cy = convolution(half, Axis::Y);
  Field2D next;
  next.values = sweep(half, cy, Axis::Y, &out_y);
  next.time = state.time + dt();
  next.step_index = state.step_index + 1;

  const Eigen::Index n = next.values.size();
  for (Eigen::Index q = 0; q < n; ++q)
    if (!std::isfinite(next.values.data()[q])) {
      std::ostringstream os;
      os << "non-finite value at cell (" << q % grid_.nx << ", " << q / grid_.nx
         << ") in step " << next.step_index << " (CFL violation or invalid model)";
      throw NumericalError(os.str(), next.step_index, static_cast<long>(q));
    }
  if (trace) {
    trace->cx = std::move(cx);
    trace->cy = std::move(cy);
    trace->half = std::move(half);
    trace->outflow = out_x + out_y;
  }
  return next;
}

Field2D split_step_2d(const Field2D& state, const RunConfig2D& cfg) {
  Stepper2D stepper(cfg.grid, cfg.model_along(Axis::X), cfg.model_along(Axis::Y), cfg.kernel,
                    cfg.scheme, cfg.mode, cfg.reconvolve);
  return stepper.step(state);
}

Field2D initial_field(const RunConfig2D& cfg) {
  if (cfg.initial_values) {
    Field2D f;
    f.values = *cfg.initial_values;
    return f;
  }
  return project_initial_data_2d(cfg.initial, cfg.grid);
}

RunResult2D run_2d(const RunConfig2D& cfg, const std::vector<double>& snapshot_times,
                   const DiagnosticsThresholds* thresholds) {
  cfg.validate();
  RunResult2D result;
  const double dx = cfg.grid.dx(), dy = cfg.grid.dy();
  const TimeGrid tg = time_grid(cfg.t_end, cfg.scheme.lambda * dx);
  result.dt = tg.dt;
  result.steps = tg.steps;
  result.lambda_x = tg.dt / dx;
  result.lambda_y = tg.dt / dy;

  const Model& mx = cfg.model_along(Axis::X);
  const Model& my = cfg.model_along(Axis::Y);
  const double limit = std::min(max_mesh_ratio(cfg.scheme, mx, 2),
                                max_mesh_ratio(cfg.scheme.along(Axis::Y), my, 2));
  const double ratio = std::max(cfg.scheme.lambda, cfg.scheme.lambda_y);
  if (ratio > limit) {
    std::ostringstream os;
    os << "mesh ratio " << ratio << " exceeds the CFL bound " << limit;
    if (cfg.scheme.cfl == CflEnforcement::Strict) throw ConfigError(os.str());
    result.warnings.push_back(os.str());
  }

  SchemeConfig scheme = cfg.scheme;
  scheme.lambda = result.lambda_x;
  scheme.lambda_y = result.lambda_y;
  Stepper2D stepper(cfg.grid, mx, my, cfg.kernel, scheme, cfg.mode, cfg.reconvolve);
  if (!stepper.warning().empty()) result.warnings.push_back(stepper.warning());
  result.mode = stepper.mode();

  Field2D state = initial_field(cfg);
  const DiagnosticsThresholds thr =
      thresholds ? *thresholds
                 : default_thresholds(mx, state.values.minCoeff(), state.values.maxCoeff());
  DiagnosticsRecorder recorder(cfg.diagnostics, thr, tg.dt);
  recorder.report().lambda = result.lambda_x;
  recorder.report().cfl_limit = limit;
  recorder.report().warnings = result.warnings;

  std::vector<long> snap_steps;
  for (double t : snapshot_times)
    snap_steps.push_back(std::clamp(std::lround(t / tg.dt), 0L, tg.steps));
  result.snapshot_times = snapshot_times;
  result.snapshots.resize(snapshot_times.size());
  auto take_snapshots = [&](const Field2D& f) {
    for (std::size_t s = 0; s < snap_steps.size(); ++s)
      if (snap_steps[s] == f.step_index) result.snapshots[s] = f;
  };

  const bool diag = cfg.diagnostics != DiagnosticsLevel::Off;
  const bool full = cfg.diagnostics == DiagnosticsLevel::Full;
  if (diag) recorder.record(0, measure(state, cfg.grid, nullptr));
  take_snapshots(state);

  StepTrace2D trace;
  for (long n = 0; n < tg.steps; ++n) {
    Field2D next = stepper.step(state, diag ? &trace : nullptr);
    if (n + 1 == tg.steps) next.time = cfg.t_end;
    if (diag) {
      auto sample = measure(next, cfg.grid, &state);
      sample.outflow = trace.outflow;
      const Eigen::Map<const Vector> flat(trace.half.data(), trace.half.size());
      Eigen::Index imin, imax;
      const double hmin = flat.minCoeff(&imin);
      const double hmax = flat.maxCoeff(&imax);
      recorder.audit_bounds(n + 1, hmin, static_cast<long>(imin), hmax,
                            static_cast<long>(imax));
      if (full) {
        Vector a = Eigen::Map<const Vector>(state.values.data(), state.values.size());
        Vector b = Eigen::Map<const Vector>(next.values.data(), next.values.size());
        const auto ks = default_k_set(a, b);
        EntropyResidual ex = entropy_residual_sweep(state.values, trace.half, trace.cx,
                                                    scheme.along(Axis::X), mx, Axis::X,
                                                    cfg.grid.boundary, ks);
        EntropyResidual ey = entropy_residual_sweep(trace.half, next.values, trace.cy,
                                                    scheme.along(Axis::Y), my, Axis::Y,
                                                    cfg.grid.boundary, ks);
        sample.entropy = ex.max >= ey.max ? ex : ey;
      }
      recorder.record(n + 1, sample);
    }
    state = std::move(next);
    take_snapshots(state);
  }
  result.final_state = std::move(state);
  result.diagnostics = std::move(recorder).finish();
  return result;
}

}  // namespace nlfv
