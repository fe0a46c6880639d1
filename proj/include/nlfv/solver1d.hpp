#pragma once

#include "nlfv/diagnostics.hpp"
#include "nlfv/flux.hpp"
#include "nlfv/grid.hpp"
#include "nlfv/initial_data.hpp"
#include "nlfv/kernel.hpp"
#include "nlfv/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlfv {

struct RunConfig1D {
  Grid1D grid;
  Model model;
  KernelSpec kernel;
  SchemeConfig scheme;
  ConvolutionMode mode = ConvolutionMode::Auto;
  double t_end = 0.5;
  InitialDatum1D initial = riemann_ex1();
  std::optional<Vector> initial_values;  ///< explicit cell averages, overrides `initial`
  DiagnosticsLevel diagnostics = DiagnosticsLevel::Basic;

  void validate() const;
};

/// Interface data of one step: c_{i+1/2} and nu(c_{i+1/2}) at n_cells + 1 interfaces.
struct StepTrace1D {
  Vector c;
  Vector nu_c;
  double outflow = 0.0;  ///< dt (F_{N+1/2} - F_{1/2}) on zero-extension grids
};

/// The monotone update H(nu_left, nu_right, u_{i-1}, u_i, u_{i+1}) of one cell.
double marching_update(const SchemeConfig& cfg, const Model& m, double nu_left,
                       double nu_right, double u_left, double u, double u_right);

/// Single-step machinery bound to a grid and kernel. `scheme.lambda` is used
/// as dt/dx verbatim.
class Stepper1D {
 public:
  Stepper1D(const Grid1D& grid, const Model& model, const DiscreteKernel1D& kernel,
            const SchemeConfig& scheme, ConvolutionMode mode);

  /// c at every interface from the current state.
  Vector convolution(const Field1D& state) const;
  /// Advances one step; throws NumericalError on non-finite output.
  Field1D step(const Field1D& state, StepTrace1D* trace = nullptr) const;

  double dt() const { return scheme_.lambda * grid_.dx(); }
  const SchemeConfig& scheme() const { return scheme_; }
  ConvolutionMode mode() const { return convolver_.mode(); }

 private:
  Grid1D grid_;
  Model model_;
  SchemeConfig scheme_;
  Convolver1D convolver_;
};

/// One application of the marching formula with dt = cfg.scheme.lambda * dx.
Field1D step_1d(const Field1D& state, const RunConfig1D& cfg, const DiscreteKernel1D& kernel);

/// Number of steps and step size that land exactly on t_end with
/// dt <= lambda * dx.
struct TimeGrid {
  long steps;
  double dt;
};
TimeGrid time_grid(double t_end, double max_dt);

struct RunResult1D {
  Field1D final_state;
  std::vector<double> snapshot_times;  ///< requested times
  std::vector<Field1D> snapshots;      ///< same order as snapshot_times
  DiagnosticsReport diagnostics;
  double dt = 0.0;
  double lambda = 0.0;  ///< effective dt/dx
  long steps = 0;
  ConvolutionMode mode = ConvolutionMode::Direct;
  std::vector<std::string> warnings;
};

/// Initial cell averages for a run (explicit values or projected datum).
Field1D initial_field(const RunConfig1D& cfg);

/// Runs to t_end. Snapshot times are rounded to the nearest step.
RunResult1D run_1d(const RunConfig1D& cfg, const std::vector<double>& snapshot_times = {},
                   const DiagnosticsThresholds* thresholds = nullptr);

/// Default thresholds for a run: the max ceiling is set when the initial data
/// lie in the model's declared value range.
DiagnosticsThresholds default_thresholds(const Model& m, double initial_min,
                                         double initial_max);

}  // namespace nlfv
