#pragma once

#include "nlfv/flux.hpp"
#include "nlfv/grid.hpp"
#include "nlfv/model.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace nlfv {

enum class DiagnosticsLevel { Off, Basic, Full };

std::string to_string(DiagnosticsLevel d);
DiagnosticsLevel parse_diagnostics_level(const std::string& s);

double total_variation(const Field1D& field, Boundary b = Boundary::ZeroExtension);
/// Sum of the variations along x (over every row) and along y (over every column).
double total_variation(const Field2D& field, Boundary b = Boundary::ZeroExtension);

double l1_norm(const Field1D& field, const Grid1D& grid);
double l1_norm(const Field2D& field, const Grid2D& grid);
double linf_norm(const Field1D& field);
double linf_norm(const Field2D& field);

/// max over adjacent pairs of ||u^m - u^{m-1}||_{L1} / dt.
double time_modulus(const std::vector<Field1D>& trajectory, const Grid1D& grid, double dt);

struct EntropyResidual {
  double max = -std::numeric_limits<double>::infinity();
  long cell = -1;  ///< flattened index (i + nx * j in 2D)
  double k = 0.0;
};

/// 21 equispaced values over [min - 0.1, max + 0.1] of both states, plus 0.
std::vector<double> default_k_set(const Vector& prev, const Vector& next);

/// Largest residual of the discrete entropy inequality
///   |u^{n+1}_i - k| - |u^n_i - k| + lambda (G_{i+1/2} - G_{i-1/2})
///   + lambda sgn(u^{n+1}_i - k) f(k) (nu(c_{i+1/2}) - nu(c_{i-1/2}))
/// over all cells and all k (the inequality requires R <= 0). `c_values`
/// are the n_cells + 1 interface values used by the step that produced next.
EntropyResidual entropy_residual(const Field1D& prev, const Field1D& next,
                                 const Vector& c_values, const SchemeConfig& cfg,
                                 const Model& m, Boundary boundary,
                                 const std::vector<double>& k_set);

/// Same for one sweep of a split 2D step, applied line by line along `axis`;
/// c_values has the interface shape of that axis and cfg.lambda must be the
/// axis ratio.
EntropyResidual entropy_residual_sweep(const Array2& prev, const Array2& next,
                                       const Array2& c_values, const SchemeConfig& cfg,
                                       const Model& m, Axis axis, Boundary boundary,
                                       const std::vector<double>& k_set);

struct Violation {
  std::string kind;  ///< "mass", "min", "max", "entropy", "non-finite"
  long step;
  long cell;
  double value;
};

struct DiagnosticsThresholds {
  double mass_relative = 1e-12;
  double min_floor = -1e-14;
  std::optional<double> max_ceiling;  ///< checked only when set
  double entropy = 1e-12;
};

/// Per-step series; every series has step count + 1 entries.
struct DiagnosticsReport {
  DiagnosticsLevel level = DiagnosticsLevel::Off;
  std::vector<double> time;
  std::vector<double> mass;
  std::vector<double> min;
  std::vector<double> max;
  std::vector<double> total_variation;
  std::vector<double> l1_rate;           ///< ||u^n - u^{n-1}||_{L1} / dt (0 at n = 0)
  std::vector<double> entropy_residual;  ///< Full only; NaN at n = 0
  std::vector<double> outflow;  ///< mass that left through the boundary up to step n
  double time_modulus = 0.0;
  double lambda = 0.0;     ///< mesh ratio used (x axis in 2D)
  double cfl_limit = 0.0;  ///< max_mesh_ratio for the configured scheme
  double max_mass_drift = 0.0;
  double max_balance_drift = 0.0;  ///< |mass + outflow - mass_0| / mass_0
  double max_entropy_residual = -std::numeric_limits<double>::infinity();
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
  double cfl_margin() const { return cfl_limit - lambda; }
  std::size_t steps() const { return time.empty() ? 0 : time.size() - 1; }
};

/// Accumulates a DiagnosticsReport while a time loop runs.
class DiagnosticsRecorder {
 public:
  DiagnosticsRecorder(DiagnosticsLevel level, DiagnosticsThresholds thresholds, double dt);

  struct Sample {
    double time;
    double mass;
    double min;
    long argmin;
    double max;
    long argmax;
    double tv;
    double l1_change;  ///< ||u^n - u^{n-1}||_{L1}; ignored at step 0
    double outflow = 0.0;  ///< mass leaving through the boundary during this step
    std::optional<EntropyResidual> entropy;
  };

  void record(long step, const Sample& s);
  /// Extra min/max audit for intermediate states (split half steps).
  void audit_bounds(long step, double min, long argmin, double max, long argmax);
  DiagnosticsReport& report() { return report_; }
  DiagnosticsReport finish() &&;

 private:
  DiagnosticsThresholds thresholds_;
  double dt_;
  DiagnosticsReport report_;
};

/// Flattened argmin/argmax helpers used by the solvers.
DiagnosticsRecorder::Sample measure(const Field1D& u, const Grid1D& grid,
                                    const Field1D* prev);
DiagnosticsRecorder::Sample measure(const Field2D& u, const Grid2D& grid,
                                    const Field2D* prev);

/// CSV with one row per step:
/// step,time,mass,min,max,tv,l1_rate,entropy_residual,outflow.
std::string report_csv(const DiagnosticsReport& r);
/// JSON summary block with final verdicts.
std::string report_summary_json(const DiagnosticsReport& r);

}  // namespace nlfv
