#pragma once

#include "nlfv/model.hpp"
#include "nlfv/types.hpp"

#include <limits>
#include <string>

namespace nlfv {

enum class FluxFamily { LaxFriedrichs, Godunov };
enum class CflEnforcement { Strict, Warn };

/// Flux family and mesh ratio of the fully discrete scheme. In 2D, `lambda`
/// is the x ratio and `lambda_y` the y ratio.
struct SchemeConfig {
  FluxFamily family = FluxFamily::LaxFriedrichs;
  double theta = 0.3333;
  double lambda = 0.1286;
  double lambda_y = 0.1286;
  InterfaceRule recon = InterfaceRule::Mean;
  CflEnforcement cfl = CflEnforcement::Strict;

  /// Throws ConfigError unless theta lies in (0, 2/3) (Lax-Friedrichs) and the
  /// ratios are positive and finite.
  void validate(int dimension = 1) const;
  /// Copy whose `lambda` is the ratio of the given axis.
  SchemeConfig along(Axis axis) const;
};

/// (a/2)(f(b) + f(c)) - theta (c - b) / (2 lambda), with a = nu(c_{i+1/2}).
double lax_friedrichs(double a, double b, double c, double theta, double lambda,
                      const Model& m);

/// Godunov flux of the local law u_t + f(u)_x = 0: min of f on [a, b] when
/// a <= b, max of f on [b, a] otherwise.
double godunov_local(const Model& m, double a, double b);

/// The scheme's interface flux F(nu_c, b, c) for the configured family.
double numerical_flux(const SchemeConfig& cfg, double nu_c, double b, double c,
                      const Model& m);

/// G(a, b, k) = F(a v k, b v k) - F(a ^ k, b ^ k).
double entropy_flux(const SchemeConfig& cfg, double nu_c, double a, double b, double k,
                    const Model& m);

inline constexpr double kUnconstrained = std::numeric_limits<double>::infinity();

/// Largest admissible mesh ratio. 1D: min(1, 4-6 theta, 6 theta) /
/// (1 + 6 |f|_Lip |nu|_inf) for Lax-Friedrichs, 1 / (6 |f|_Lip |nu|_inf) for
/// Godunov. In 2D the Lax-Friedrichs bound is the same per axis and the
/// Godunov bound becomes 1 / (2 |f|_Lip |nu|_inf). Returns kUnconstrained
/// when |f|_Lip |nu|_inf = 0: with a constant flux the update is monotone for
/// every ratio.
double max_mesh_ratio(const SchemeConfig& cfg, const Model& m, int dimension = 1);

std::string to_string(FluxFamily f);
std::string to_string(CflEnforcement c);
FluxFamily parse_flux_family(const std::string& s);
CflEnforcement parse_cfl_enforcement(const std::string& s);

}  // namespace nlfv
