#pragma once

#include "nlfv/diagnostics.hpp"
#include "nlfv/flux.hpp"
#include "nlfv/grid.hpp"
#include "nlfv/initial_data.hpp"
#include "nlfv/kernel.hpp"
#include "nlfv/model.hpp"
#include "nlfv/solver1d.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlfv {

/// Run configuration on a rectangle. The same model and kernel act along both
/// axes unless `model_y` is given.
struct RunConfig2D {
  Grid2D grid;
  Model model;
  std::optional<Model> model_y;
  KernelSpec kernel = KernelSpec::crowd_bump();
  SchemeConfig scheme = default_scheme_2d();
  ConvolutionMode mode = ConvolutionMode::Auto;
  double t_end = 0.5;
  InitialDatum2D initial = annular_datum();
  std::optional<Array2> initial_values;
  bool reconvolve = false;  ///< recompute c^y from the half step
  DiagnosticsLevel diagnostics = DiagnosticsLevel::Basic;

  static SchemeConfig default_scheme_2d();
  const Model& model_along(Axis a) const {
    return a == Axis::Y && model_y ? *model_y : model;
  }
  void validate() const;
};

struct StepTrace2D {
  Array2 cx;  ///< (nx+1, ny)
  Array2 cy;  ///< (nx, ny+1)
  Array2 half;
  double outflow = 0.0;  ///< mass through the boundary over both sweeps
};

/// One dimensional-splitting step: x sweep with c^x(u^n), then y sweep with
/// c^y(u^n) (or c^y(u^{n+1/2}) when reconvolve is set).
class Stepper2D {
 public:
  Stepper2D(const Grid2D& grid, const Model& model_x, const Model& model_y,
            const KernelSpec& kernel, const SchemeConfig& scheme, ConvolutionMode mode,
            bool reconvolve = false);

  Array2 convolution(const Array2& u, Axis axis) const;
  /// Conservative update of u along one axis with the given interface values;
  /// `outflow` receives the mass leaving through the boundary.
  Array2 sweep(const Array2& u, const Array2& c, Axis axis, double* outflow = nullptr) const;
  Field2D step(const Field2D& state, StepTrace2D* trace = nullptr) const;

  double dt() const { return scheme_.lambda * grid_.dx(); }
  ConvolutionMode mode() const { return cx_.mode(); }
  const std::string& warning() const { return warning_; }

 private:
  Grid2D grid_;
  Model mx_;
  Model my_;
  SchemeConfig scheme_;
  bool reconvolve_;
  Convolver2D cx_;
  Convolver2D cy_;
  std::string warning_;
};

Field2D split_step_2d(const Field2D& state, const RunConfig2D& cfg);

struct RunResult2D {
  Field2D final_state;
  std::vector<double> snapshot_times;
  std::vector<Field2D> snapshots;
  DiagnosticsReport diagnostics;
  double dt = 0.0;
  double lambda_x = 0.0;
  double lambda_y = 0.0;
  long steps = 0;
  ConvolutionMode mode = ConvolutionMode::Direct;
  std::vector<std::string> warnings;
};

Field2D initial_field(const RunConfig2D& cfg);

/// Runs to t_end with a single dt; throws ConfigError when
/// lambda_x dx and lambda_y dy disagree beyond 1e-12 relative.
RunResult2D run_2d(const RunConfig2D& cfg, const std::vector<double>& snapshot_times = {},
                   const DiagnosticsThresholds* thresholds = nullptr);

}  // namespace nlfv
