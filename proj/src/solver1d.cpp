#include "nlfv/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlfv {

void Grid1D::validate() const {
  if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw ConfigError("grid: x_min must be smaller than x_max");
  if (n_cells <= 0) throw ConfigError("grid: n_cells must be positive");
}

Grid1D Grid1D::refined() const {
  Grid1D g = *this;
  g.n_cells *= 2;
  return g;
}

void RunConfig1D::validate() const {
  grid.validate();
  scheme.validate(1);
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("time.t_end must be positive");
  if (kernel.dimension() != 1) throw ConfigError("1D run needs a 1D kernel");
  if (initial_values && initial_values->size() != grid.n_cells)
    throw ConfigError("initial values do not match grid.n_cells");
}

double marching_update(const SchemeConfig& cfg, const Model& m, double nu_left,
                       double nu_right, double u_left, double u, double u_right) {
  return u - cfg.lambda * (numerical_flux(cfg, nu_right, u, u_right, m) -
                           numerical_flux(cfg, nu_left, u_left, u, m));
}

Stepper1D::Stepper1D(const Grid1D& grid, const Model& model, const DiscreteKernel1D& kernel,
                     const SchemeConfig& scheme, ConvolutionMode mode)
    : grid_(grid),
      model_(model),
      scheme_(scheme),
      convolver_(kernel, grid.n_cells, grid.boundary, mode) {
  if (std::abs(kernel.dx - grid.dx()) > 1e-12 * grid.dx())
    throw PreconditionError("Stepper1D: kernel sampled at a different dx than the grid");
}

Vector Stepper1D::convolution(const Field1D& state) const {
  const Model& m = model_;
  const Vector iv = interface_values(state.values, grid_.boundary, scheme_.recon);
  const Vector beta = iv.unaryExpr([&](double u) { return m.beta(u); });
  return convolver_.apply(beta, m.beta(0.0));
}

Field1D Stepper1D::step(const Field1D& state, StepTrace1D* trace) const {
  const Model& m = model_;
  const int n = grid_.n_cells;
  if (state.values.size() != n)
    throw PreconditionError("Stepper1D::step: state length does not match the grid");
  const bool periodic = grid_.boundary == Boundary::Periodic;
  const Vector& u = state.values;

  Vector c = convolution(state);
  Vector nu_c(n + 1);
  Vector flux(n + 1);
#pragma omp parallel for schedule(static)
  for (int k = 0; k <= n; ++k) {
    nu_c[k] = m.nu(c[k]);
    const double left = k > 0 ? u[k - 1] : (periodic ? u[n - 1] : 0.0);
    const double right = k < n ? u[k] : (periodic ? u[0] : 0.0);
    flux[k] = numerical_flux(scheme_, nu_c[k], left, right, m);
  }

  Field1D next;
  next.values.resize(n);
  const double lambda = scheme_.lambda;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) next.values[i] = u[i] - lambda * (flux[i + 1] - flux[i]);
  next.time = state.time + dt();
  next.step_index = state.step_index + 1;

  for (int i = 0; i < n; ++i)
    if (!std::isfinite(next.values[i])) {
      std::ostringstream os;
      os << "non-finite value at cell " << i << " in step " << next.step_index
         << " (CFL violation or invalid model)";
      throw NumericalError(os.str(), next.step_index, i);
    }
  if (trace) {
    trace->c = std::move(c);
    trace->nu_c = std::move(nu_c);
    trace->outflow = periodic ? 0.0 : dt() * (flux[n] - flux[0]);
  }
  return next;
}

Field1D step_1d(const Field1D& state, const RunConfig1D& cfg, const DiscreteKernel1D& kernel) {
  Stepper1D stepper(cfg.grid, cfg.model, kernel, cfg.scheme, cfg.mode);
  return stepper.step(state);
}

TimeGrid time_grid(double t_end, double max_dt) {
  const double ratio = t_end / max_dt;
  long steps = static_cast<long>(std::ceil(ratio * (1.0 - 1e-12)));
  steps = std::max(steps, 1L);
  return {steps, t_end / steps};
}

Field1D initial_field(const RunConfig1D& cfg) {
  if (cfg.initial_values) {
    Field1D f;
    f.values = *cfg.initial_values;
    return f;
  }
  return project_initial_data(cfg.initial, cfg.grid);
}

DiagnosticsThresholds default_thresholds(const Model& m, double initial_min,
                                         double initial_max) {
  DiagnosticsThresholds t;
  if (initial_min >= m.value_min && initial_max <= m.value_max)
    t.max_ceiling = m.value_max + 1e-12;
  return t;
}

RunResult1D run_1d(const RunConfig1D& cfg, const std::vector<double>& snapshot_times,
                   const DiagnosticsThresholds* thresholds) {
  cfg.validate();
  RunResult1D result;
  const double dx = cfg.grid.dx();
  const TimeGrid tg = time_grid(cfg.t_end, cfg.scheme.lambda * dx);
  result.dt = tg.dt;
  result.steps = tg.steps;
  result.lambda = tg.dt / dx;

  const double limit = max_mesh_ratio(cfg.scheme, cfg.model, 1);
  if (cfg.scheme.lambda > limit) {
    std::ostringstream os;
    os << "mesh ratio " << cfg.scheme.lambda << " exceeds the CFL bound " << limit;
    if (cfg.scheme.cfl == CflEnforcement::Strict) throw ConfigError(os.str());
    result.warnings.push_back(os.str());
  }

  SchemeConfig scheme = cfg.scheme;
  scheme.lambda = result.lambda;
  const DiscreteKernel1D kernel = sample_kernel_1d(cfg.kernel, dx);
  if (!kernel.warning.empty()) result.warnings.push_back(kernel.warning);
  Stepper1D stepper(cfg.grid, cfg.model, kernel, scheme, cfg.mode);
  result.mode = stepper.mode();

  Field1D state = initial_field(cfg);
  const DiagnosticsThresholds thr =
      thresholds ? *thresholds
                 : default_thresholds(cfg.model, state.values.minCoeff(),
                                      state.values.maxCoeff());
  DiagnosticsRecorder recorder(cfg.diagnostics, thr, tg.dt);
  recorder.report().lambda = result.lambda;
  recorder.report().cfl_limit = limit;
  recorder.report().warnings = result.warnings;

  std::vector<long> snap_steps;
  for (double t : snapshot_times)
    snap_steps.push_back(std::clamp(std::lround(t / tg.dt), 0L, tg.steps));
  result.snapshot_times = snapshot_times;
  result.snapshots.resize(snapshot_times.size());
  auto take_snapshots = [&](const Field1D& f) {
    for (std::size_t s = 0; s < snap_steps.size(); ++s)
      if (snap_steps[s] == f.step_index) result.snapshots[s] = f;
  };

  const bool diag = cfg.diagnostics != DiagnosticsLevel::Off;
  const bool full = cfg.diagnostics == DiagnosticsLevel::Full;
  if (diag) recorder.record(0, measure(state, cfg.grid, nullptr));
  take_snapshots(state);

  StepTrace1D trace;
  for (long n = 0; n < tg.steps; ++n) {
    Field1D next = stepper.step(state, diag ? &trace : nullptr);
    if (n + 1 == tg.steps) next.time = cfg.t_end;
    if (diag) {
      auto sample = measure(next, cfg.grid, &state);
      sample.outflow = trace.outflow;
      if (full) {
        const auto ks = default_k_set(state.values, next.values);
        sample.entropy =
            entropy_residual(state, next, trace.c, scheme, cfg.model, cfg.grid.boundary, ks);
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
