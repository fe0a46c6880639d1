#pragma once

#include "nlfv/solver1d.hpp"
#include "nlfv/solver2d.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace nlfv {

/// Exact L1 distance between a piecewise-constant field and its 2-refinement
/// partner. Throws PreconditionError unless `fine_grid` is coarse_grid.refined().
double l1_distance_nested(const Field1D& coarse, const Grid1D& coarse_grid,
                          const Field1D& fine, const Grid1D& fine_grid);
double l1_distance_nested(const Field2D& coarse, const Grid2D& coarse_grid,
                          const Field2D& fine, const Grid2D& fine_grid);

struct ConvergenceRow {
  double dx;
  double l1_distance;          ///< || u_dx(T) - u_{dx/2}(T) ||_L1
  std::optional<double> alpha;  ///< log2(d_j / d_{j+1}); absent on the last row
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::vector<std::string> warnings;
  std::vector<double> alphas() const;
};

/// Called after each completed simulation with its level index and dx.
using StudyProgress = std::function<void(int level, double dx, double seconds)>;

/// Runs levels + 1 simulations at dx, dx/2, ... with lambda fixed; initial
/// data are projected afresh on every level.
ConvergenceTable convergence_study(const RunConfig1D& base, int levels,
                                   const StudyProgress& progress = {});
ConvergenceTable convergence_study(const RunConfig2D& base, int levels,
                                   const StudyProgress& progress = {});

/// Rates from a list of nested distances.
ConvergenceTable make_table(const std::vector<double>& dx, const std::vector<double>& dist);

/// Local law u_t + g(u)_x = 0 with g(u) = f(u) nu(beta(u)), solved by the
/// classical Godunov scheme on the same grid, dt and final time as `cfg`.
/// For nonlocal-lwr-1d, g(u) = u(1 - u).
Field1D local_reference_1d(const RunConfig1D& cfg);
Field1D local_reference_1d(const InitialDatum1D& u0, const Grid1D& grid, double t_end,
                           double lambda = 0.1286);

struct EtaSweepRow {
  double eta;
  double l1_distance;
  Field1D solution;
};

/// Nonlocal runs with the quadratic LWR kernel of every eta, each compared in
/// L1 with the local reference. Throws ConfigError when eta < 2 dx.
std::vector<EtaSweepRow> eta_sweep(const RunConfig1D& base, const std::vector<double>& etas,
                                   const Field1D* reference = nullptr);

}  // namespace nlfv
