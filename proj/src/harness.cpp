#include "nlfv/harness.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace nlfv {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double l1_distance_nested(const Field1D& coarse, const Grid1D& cg, const Field1D& fine,
                          const Grid1D& fg) {
  if (fg.n_cells != 2 * cg.n_cells || !close(cg.x_min, fg.x_min) || !close(cg.x_max, fg.x_max))
    throw PreconditionError("l1_distance_nested: fine grid is not the 2-refinement of the coarse");
  if (coarse.values.size() != cg.n_cells || fine.values.size() != fg.n_cells)
    throw PreconditionError("l1_distance_nested: field size does not match its grid");
  double sum = 0.0;
  for (int i = 0; i < fg.n_cells; ++i) sum += std::abs(fine.values[i] - coarse.values[i / 2]);
  return fg.dx() * sum;
}

double l1_distance_nested(const Field2D& coarse, const Grid2D& cg, const Field2D& fine,
                          const Grid2D& fg) {
  if (fg.nx != 2 * cg.nx || fg.ny != 2 * cg.ny || !close(cg.x_min, fg.x_min) ||
      !close(cg.x_max, fg.x_max) || !close(cg.y_min, fg.y_min) || !close(cg.y_max, fg.y_max))
    throw PreconditionError("l1_distance_nested: fine grid is not the 2-refinement of the coarse");
  if (coarse.values.rows() != cg.nx || coarse.values.cols() != cg.ny ||
      fine.values.rows() != fg.nx || fine.values.cols() != fg.ny)
    throw PreconditionError("l1_distance_nested: field shape does not match its grid");
  double sum = 0.0;
  for (int j = 0; j < fg.ny; ++j) {
    double col = 0.0;
    for (int i = 0; i < fg.nx; ++i) col += std::abs(fine.values(i, j) - coarse.values(i / 2, j / 2));
    sum += col;
  }
  return fg.dx() * fg.dy() * sum;
}

std::vector<double> ConvergenceTable::alphas() const {
  std::vector<double> out;
  for (const auto& r : rows)
    if (r.alpha) out.push_back(*r.alpha);
  return out;
}

ConvergenceTable make_table(const std::vector<double>& dx, const std::vector<double>& dist) {
  ConvergenceTable t;
  for (std::size_t j = 0; j < dist.size(); ++j) {
    ConvergenceRow r{dx[j], dist[j], std::nullopt};
    if (j + 1 < dist.size()) r.alpha = std::log2(dist[j] / dist[j + 1]);
    t.rows.push_back(r);
  }
  return t;
}

ConvergenceTable convergence_study(const RunConfig1D& base, int levels,
                                   const StudyProgress& progress) {
  if (levels < 2) throw ConfigError("convergence study needs at least 2 levels");
  RunConfig1D cfg = base;
  cfg.initial_values.reset();
  std::vector<double> dx, dist;
  std::vector<std::string> warnings;
  Field1D prev;
  Grid1D prev_grid;
  for (int level = 0; level <= levels; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult1D r = run_1d(cfg);
    for (auto& w : r.warnings) warnings.push_back(w);
    if (level > 0) {
      dx.push_back(prev_grid.dx());
      dist.push_back(l1_distance_nested(prev, prev_grid, r.final_state, cfg.grid));
    }
    if (progress) progress(level, cfg.grid.dx(), seconds_since(t0));
    prev = std::move(r.final_state);
    prev_grid = cfg.grid;
    cfg.grid = cfg.grid.refined();
  }
  ConvergenceTable t = make_table(dx, dist);
  t.warnings = std::move(warnings);
  return t;
}

ConvergenceTable convergence_study(const RunConfig2D& base, int levels,
                                   const StudyProgress& progress) {
  if (levels < 2) throw ConfigError("convergence study needs at least 2 levels");
  RunConfig2D cfg = base;
  cfg.initial_values.reset();
  std::vector<double> dx, dist;
  std::vector<std::string> warnings;
  Field2D prev;
  Grid2D prev_grid;
  for (int level = 0; level <= levels; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult2D r = run_2d(cfg);
    if (level == 0) warnings = r.warnings;
    if (level > 0) {
      dx.push_back(prev_grid.dx());
      dist.push_back(l1_distance_nested(prev, prev_grid, r.final_state, cfg.grid));
    }
    if (progress) progress(level, cfg.grid.dx(), seconds_since(t0));
    prev = std::move(r.final_state);
    prev_grid = cfg.grid;
    cfg.grid = cfg.grid.refined();
  }
  ConvergenceTable t = make_table(dx, dist);
  t.warnings = std::move(warnings);
  return t;
}

namespace {

Field1D local_godunov(const Field1D& u0, const Grid1D& grid, const Model& g, double t_end,
                      double lambda) {
  const TimeGrid tg = time_grid(t_end, lambda * grid.dx());
  const double lam = tg.dt / grid.dx();
  if (lam * g.f_lip > 1.0) throw ConfigError("local reference: mesh ratio exceeds 1 / |g|_Lip");
  const int n = grid.n_cells;
  const bool periodic = grid.boundary == Boundary::Periodic;
  Vector u = u0.values;
  Vector flux(n + 1);
  for (long s = 0; s < tg.steps; ++s) {
    for (int k = 0; k <= n; ++k) {
      const double left = k > 0 ? u[k - 1] : (periodic ? u[n - 1] : 0.0);
      const double right = k < n ? u[k] : (periodic ? u[0] : 0.0);
      flux[k] = godunov_local(g, left, right);
    }
    for (int i = 0; i < n; ++i) u[i] -= lam * (flux[i + 1] - flux[i]);
  }
  Field1D out;
  out.values = std::move(u);
  out.time = t_end;
  out.step_index = tg.steps;
  return out;
}

Model localized(const Model& m) {
  if (m.name == "nonlocal-lwr-1d") return builtin_model("local-lwr-1d");
  Model g = m;
  g.name = m.name + "-local";
  const auto f = m.f, nu = m.nu, beta = m.beta;
  g.f = [f, nu, beta](double u) { return f(u) * nu(beta(u)); };
  g.nu = [](double) { return 1.0; };
  g.beta = [](double) { return 0.0; };
  g.f_shape = FluxShape::General;
  double lip = 0.0;
  const int samples = 4000;
  for (int q = 0; q < samples; ++q) {
    const double a = m.value_min + (m.value_max - m.value_min) * q / samples;
    const double b = m.value_min + (m.value_max - m.value_min) * (q + 1) / samples;
    lip = std::max(lip, std::abs(g.f(b) - g.f(a)) / (b - a));
  }
  g.f_lip = lip;
  return g;
}

}  // namespace

Field1D local_reference_1d(const RunConfig1D& cfg) {
  const Field1D u0 = initial_field(cfg);
  return local_godunov(u0, cfg.grid, localized(cfg.model), cfg.t_end, cfg.scheme.lambda);
}

Field1D local_reference_1d(const InitialDatum1D& u0, const Grid1D& grid, double t_end,
                           double lambda) {
  return local_godunov(project_initial_data(u0, grid), grid, builtin_model("local-lwr-1d"),
                       t_end, lambda);
}

std::vector<EtaSweepRow> eta_sweep(const RunConfig1D& base, const std::vector<double>& etas,
                                   const Field1D* reference) {
  const double dx = base.grid.dx();
  for (double eta : etas)
    if (!(eta >= 2.0 * dx)) {
      std::ostringstream os;
      os << "eta-sweep: eta = " << eta << " is below 2 dx = " << 2.0 * dx;
      throw ConfigError(os.str());
    }
  const Field1D ref = reference ? *reference : local_reference_1d(base);
  std::vector<EtaSweepRow> rows;
  for (double eta : etas) {
    RunConfig1D cfg = base;
    cfg.kernel = KernelSpec::lwr_quadratic(eta);
    RunResult1D r = run_1d(cfg);
    const double d = dx * (r.final_state.values - ref.values).abs().sum();
    rows.push_back({eta, d, std::move(r.final_state)});
  }
  return rows;
}

}  // namespace nlfv
