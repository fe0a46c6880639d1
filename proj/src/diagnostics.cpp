#include "nlfv/diagnostics.hpp"

#include "nlfv/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlfv {

std::string to_string(DiagnosticsLevel d) {
  switch (d) {
    case DiagnosticsLevel::Off:
      return "off";
    case DiagnosticsLevel::Basic:
      return "basic";
    case DiagnosticsLevel::Full:
      break;
  }
  return "full";
}

DiagnosticsLevel parse_diagnostics_level(const std::string& s) {
  if (s == "off") return DiagnosticsLevel::Off;
  if (s == "basic") return DiagnosticsLevel::Basic;
  if (s == "full") return DiagnosticsLevel::Full;
  throw ConfigError("unknown diagnostics level '" + s + "'; valid choices: full basic off");
}

double total_variation(const Field1D& field, Boundary b) {
  const Vector& u = field.values;
  const Eigen::Index n = u.size();
  if (n < 2) return 0.0;
  double tv = (u.tail(n - 1) - u.head(n - 1)).abs().sum();
  if (b == Boundary::Periodic) tv += std::abs(u[0] - u[n - 1]);
  return tv;
}

double total_variation(const Field2D& field, Boundary b) {
  const Array2& u = field.values;
  const Eigen::Index nx = u.rows(), ny = u.cols();
  double tv = 0.0;
  if (nx >= 2) tv += (u.bottomRows(nx - 1) - u.topRows(nx - 1)).abs().sum();
  if (ny >= 2) tv += (u.rightCols(ny - 1) - u.leftCols(ny - 1)).abs().sum();
  if (b == Boundary::Periodic) {
    if (nx >= 2) tv += (u.row(0) - u.row(nx - 1)).abs().sum();
    if (ny >= 2) tv += (u.col(0) - u.col(ny - 1)).abs().sum();
  }
  return tv;
}

double l1_norm(const Field1D& field, const Grid1D& grid) {
  return grid.dx() * field.values.abs().sum();
}

double l1_norm(const Field2D& field, const Grid2D& grid) {
  return grid.dx() * grid.dy() * field.values.abs().sum();
}

double linf_norm(const Field1D& field) {
  return field.values.size() ? field.values.abs().maxCoeff() : 0.0;
}

double linf_norm(const Field2D& field) {
  return field.values.size() ? field.values.abs().maxCoeff() : 0.0;
}

double time_modulus(const std::vector<Field1D>& trajectory, const Grid1D& grid, double dt) {
  double best = 0.0;
  for (std::size_t m = 1; m < trajectory.size(); ++m) {
    const double d = grid.dx() * (trajectory[m].values - trajectory[m - 1].values).abs().sum();
    best = std::max(best, d / dt);
  }
  return best;
}

std::vector<double> default_k_set(const Vector& prev, const Vector& next) {
  const double lo = std::min(prev.minCoeff(), next.minCoeff()) - 0.1;
  const double hi = std::max(prev.maxCoeff(), next.maxCoeff()) + 0.1;
  std::vector<double> ks;
  ks.reserve(22);
  for (int s = 0; s <= 20; ++s) ks.push_back(lo + (hi - lo) * s / 20.0);
  ks.push_back(0.0);
  return ks;
}

namespace {

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

// One line of cells with n+1 interface speeds nu[0..n].
void residual_line(const Vector& prev, const Vector& next, const Vector& nu,
                   const SchemeConfig& cfg, const Model& m, bool periodic,
                   const std::vector<double>& ks, long cell_base, long cell_stride,
                   EntropyResidual& best) {
  const Eigen::Index n = prev.size();
  const double lambda = cfg.lambda;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double um = i > 0 ? prev[i - 1] : (periodic ? prev[n - 1] : 0.0);
    const double up = i + 1 < n ? prev[i + 1] : (periodic ? prev[0] : 0.0);
    const double u = prev[i];
    const double nu_l = nu[i];
    const double nu_r = nu[i + 1];
    for (double k : ks) {
      const double r = std::abs(next[i] - k) - std::abs(u - k) +
                       lambda * (entropy_flux(cfg, nu_r, u, up, k, m) -
                                 entropy_flux(cfg, nu_l, um, u, k, m)) +
                       lambda * sgn(next[i] - k) * m.f(k) * (nu_r - nu_l);
      if (r > best.max) {
        best.max = r;
        best.cell = cell_base + static_cast<long>(i) * cell_stride;
        best.k = k;
      }
    }
  }
}

}  // namespace

EntropyResidual entropy_residual(const Field1D& prev, const Field1D& next,
                                 const Vector& c_values, const SchemeConfig& cfg,
                                 const Model& m, Boundary boundary,
                                 const std::vector<double>& k_set) {
  if (c_values.size() != prev.values.size() + 1 || next.values.size() != prev.values.size())
    throw PreconditionError("entropy_residual: inconsistent array lengths");
  const Vector nu = c_values.unaryExpr([&](double c) { return m.nu(c); });
  EntropyResidual best;
  residual_line(prev.values, next.values, nu, cfg, m, boundary == Boundary::Periodic, k_set,
                0, 1, best);
  return best;
}

EntropyResidual entropy_residual_sweep(const Array2& prev, const Array2& next,
                                       const Array2& c_values, const SchemeConfig& cfg,
                                       const Model& m, Axis axis, Boundary boundary,
                                       const std::vector<double>& k_set) {
  const Eigen::Index nx = prev.rows(), ny = prev.cols();
  const bool periodic = boundary == Boundary::Periodic;
  const Array2 nu = c_values.unaryExpr([&](double c) { return m.nu(c); });
  EntropyResidual best;
  if (axis == Axis::X) {
    if (c_values.rows() != nx + 1 || c_values.cols() != ny)
      throw PreconditionError("entropy_residual_sweep: c^x has the wrong shape");
    for (Eigen::Index j = 0; j < ny; ++j)
      residual_line(prev.col(j), next.col(j), nu.col(j), cfg, m, periodic, k_set,
                    static_cast<long>(nx * j), 1, best);
  } else {
    if (c_values.rows() != nx || c_values.cols() != ny + 1)
      throw PreconditionError("entropy_residual_sweep: c^y has the wrong shape");
    for (Eigen::Index i = 0; i < nx; ++i)
      residual_line(prev.row(i).transpose(), next.row(i).transpose(),
                    nu.row(i).transpose(), cfg, m, periodic, k_set, static_cast<long>(i),
                    static_cast<long>(nx), best);
  }
  return best;
}

// ---------------------------------------------------------------------------

DiagnosticsRecorder::DiagnosticsRecorder(DiagnosticsLevel level,
                                         DiagnosticsThresholds thresholds, double dt)
    : thresholds_(std::move(thresholds)), dt_(dt) {
  report_.level = level;
}

namespace {

void flag(DiagnosticsReport& r, const char* kind, long step, long cell, double value) {
  constexpr std::size_t kMaxPerKind = 50;
  const auto same = std::count_if(r.violations.begin(), r.violations.end(),
                                  [&](const Violation& v) { return v.kind == kind; });
  if (static_cast<std::size_t>(same) < kMaxPerKind)
    r.violations.push_back({kind, step, cell, value});
}

}  // namespace

void DiagnosticsRecorder::record(long step, const Sample& s) {
  auto& r = report_;
  r.time.push_back(s.time);
  r.mass.push_back(s.mass);
  r.min.push_back(s.min);
  r.max.push_back(s.max);
  r.total_variation.push_back(s.tv);
  const double rate = step == 0 ? 0.0 : s.l1_change / dt_;
  r.l1_rate.push_back(rate);
  r.time_modulus = std::max(r.time_modulus, rate);

  const double out = (r.outflow.empty() ? 0.0 : r.outflow.back()) + (step == 0 ? 0.0 : s.outflow);
  r.outflow.push_back(out);
  const double m0 = r.mass.front();
  const double scale = m0 != 0.0 ? std::abs(m0) : 1.0;
  const double drift = std::abs(s.mass - m0) / scale;
  r.max_mass_drift = std::max(r.max_mass_drift, drift);
  r.max_balance_drift = std::max(r.max_balance_drift, std::abs(s.mass + out - m0) / scale);
  if (drift > thresholds_.mass_relative) flag(r, "mass", step, -1, drift);
  audit_bounds(step, s.min, s.argmin, s.max, s.argmax);

  if (r.level == DiagnosticsLevel::Full) {
    const double e = s.entropy ? s.entropy->max : std::nan("");
    r.entropy_residual.push_back(e);
    if (s.entropy) {
      r.max_entropy_residual = std::max(r.max_entropy_residual, e);
      if (e > thresholds_.entropy) flag(r, "entropy", step, s.entropy->cell, e);
    }
  }
}

void DiagnosticsRecorder::audit_bounds(long step, double min, long argmin, double max,
                                       long argmax) {
  if (min < thresholds_.min_floor) flag(report_, "min", step, argmin, min);
  if (thresholds_.max_ceiling && max > *thresholds_.max_ceiling)
    flag(report_, "max", step, argmax, max);
}

DiagnosticsReport DiagnosticsRecorder::finish() && { return std::move(report_); }

DiagnosticsRecorder::Sample measure(const Field1D& u, const Grid1D& grid,
                                    const Field1D* prev) {
  DiagnosticsRecorder::Sample s{};
  Eigen::Index imin = 0, imax = 0;
  s.time = u.time;
  s.mass = grid.dx() * u.values.sum();
  s.min = u.values.minCoeff(&imin);
  s.max = u.values.maxCoeff(&imax);
  s.argmin = static_cast<long>(imin);
  s.argmax = static_cast<long>(imax);
  s.tv = total_variation(u, grid.boundary);
  if (prev) s.l1_change = grid.dx() * (u.values - prev->values).abs().sum();
  return s;
}

DiagnosticsRecorder::Sample measure(const Field2D& u, const Grid2D& grid,
                                    const Field2D* prev) {
  DiagnosticsRecorder::Sample s{};
  Eigen::Index ri = 0, ci = 0, rx = 0, cx = 0;
  const double cell = grid.dx() * grid.dy();
  s.time = u.time;
  s.mass = cell * u.values.sum();
  s.min = u.values.minCoeff(&ri, &ci);
  s.max = u.values.maxCoeff(&rx, &cx);
  s.argmin = static_cast<long>(ri + grid.nx * ci);
  s.argmax = static_cast<long>(rx + grid.nx * cx);
  s.tv = total_variation(u, grid.boundary);
  if (prev) s.l1_change = cell * (u.values - prev->values).abs().sum();
  return s;
}

std::string report_csv(const DiagnosticsReport& r) {
  std::ostringstream os;
  os << "step,time,mass,min,max,tv,l1_rate,entropy_residual,outflow\n";
  for (std::size_t n = 0; n < r.time.size(); ++n) {
    os << n << ',' << format_double(r.time[n]) << ',' << format_double(r.mass[n]) << ','
       << format_double(r.min[n]) << ',' << format_double(r.max[n]) << ','
       << format_double(r.total_variation[n]) << ',' << format_double(r.l1_rate[n]) << ',';
    if (n < r.entropy_residual.size() && !std::isnan(r.entropy_residual[n]))
      os << format_double(r.entropy_residual[n]);
    os << ',' << format_double(r.outflow[n]) << '\n';
  }
  return os.str();
}

std::string report_summary_json(const DiagnosticsReport& r) {
  nlohmann::ordered_json j;
  j["level"] = to_string(r.level);
  j["steps"] = r.steps();
  j["lambda"] = r.lambda;
  j["cfl_limit"] = r.cfl_limit;
  j["cfl_margin"] = r.cfl_margin();
  j["cfl_satisfied"] = r.cfl_margin() >= 0.0;
  if (!r.mass.empty()) {
    j["initial_mass"] = r.mass.front();
    j["final_mass"] = r.mass.back();
    j["min"] = *std::min_element(r.min.begin(), r.min.end());
    j["max"] = *std::max_element(r.max.begin(), r.max.end());
    j["initial_tv"] = r.total_variation.front();
    j["max_tv"] = *std::max_element(r.total_variation.begin(), r.total_variation.end());
  }
  j["max_mass_drift"] = r.max_mass_drift;
  if (!r.outflow.empty()) j["boundary_outflow"] = r.outflow.back();
  j["max_balance_drift"] = r.max_balance_drift;
  j["time_modulus"] = r.time_modulus;
  if (r.level == DiagnosticsLevel::Full && std::isfinite(r.max_entropy_residual))
    j["max_entropy_residual"] = r.max_entropy_residual;
  auto& v = j["violations"] = nlohmann::json::array();
  for (const auto& x : r.violations)
    v.push_back({{"kind", x.kind}, {"step", x.step}, {"cell", x.cell}, {"value", x.value}});
  j["warnings"] = r.warnings;
  j["verdict"] = r.ok() ? "pass" : "fail";
  return j.dump(2);
}

}  // namespace nlfv
