#include "nlfv/flux.hpp"

#include <algorithm>
#include <cmath>

namespace nlfv {

void SchemeConfig::validate(int dimension) const {
  if (family == FluxFamily::LaxFriedrichs && !(theta > 0.0 && theta < 2.0 / 3.0))
    throw ConfigError("scheme.theta must lie in (0, 2/3)");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ConfigError("scheme.lambda must be positive and finite");
  if (dimension == 2 && (!(lambda_y > 0.0) || !std::isfinite(lambda_y)))
    throw ConfigError("scheme.lambda_y must be positive and finite");
}

SchemeConfig SchemeConfig::along(Axis axis) const {
  SchemeConfig c = *this;
  if (axis == Axis::Y) c.lambda = lambda_y;
  return c;
}

double lax_friedrichs(double a, double b, double c, double theta, double lambda,
                      const Model& m) {
  return 0.5 * a * (m.f(b) + m.f(c)) - theta * (c - b) / (2.0 * lambda);
}

namespace {

// Minimum of g on [lo, hi]: a uniform scan locates the best bracket, then
// golden-section search refines inside it.
template <typename G>
double golden_min(G g, double lo, double hi) {
  constexpr int kScan = 64;
  constexpr double inv_phi = 0.6180339887498949;
  const double h = (hi - lo) / kScan;
  int best_k = 0;
  double best = g(lo);
  for (int k = 1; k <= kScan; ++k) {
    const double v = g(k == kScan ? hi : lo + k * h);
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  double a = lo + std::max(best_k - 1, 0) * h;
  double b = best_k + 1 >= kScan ? hi : lo + (best_k + 1) * h;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double g1 = g(x1), g2 = g(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (g1 < g2) {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - inv_phi * (b - a);
      g1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + inv_phi * (b - a);
      g2 = g(x2);
    }
  }
  return std::min({best, g1, g2});
}

}  // namespace

double godunov_local(const Model& m, double a, double b) {
  switch (m.f_shape) {
    case FluxShape::Increasing:
      return m.f(a);
    case FluxShape::Concave:
      if (a <= b) return std::min(m.f(a), m.f(b));
      if (b <= m.f_vertex && m.f_vertex <= a) return m.f(m.f_vertex);
      return std::max(m.f(a), m.f(b));
    case FluxShape::General:
      break;
  }
  if (a == b) return m.f(a);
  if (a < b) return golden_min([&](double u) { return m.f(u); }, a, b);
  return -golden_min([&](double u) { return -m.f(u); }, b, a);
}

double numerical_flux(const SchemeConfig& cfg, double nu_c, double b, double c,
                      const Model& m) {
  if (cfg.family == FluxFamily::LaxFriedrichs)
    return lax_friedrichs(nu_c, b, c, cfg.theta, cfg.lambda, m);
  return nu_c * godunov_local(m, b, c);
}

double entropy_flux(const SchemeConfig& cfg, double nu_c, double a, double b, double k,
                    const Model& m) {
  return numerical_flux(cfg, nu_c, std::max(a, k), std::max(b, k), m) -
         numerical_flux(cfg, nu_c, std::min(a, k), std::min(b, k), m);
}

double max_mesh_ratio(const SchemeConfig& cfg, const Model& m, int dimension) {
  const double speed = m.f_lip * m.nu_sup;
  if (speed == 0.0) return kUnconstrained;
  if (cfg.family == FluxFamily::LaxFriedrichs) {
    const double t = cfg.theta;
    return std::min({1.0, 4.0 - 6.0 * t, 6.0 * t}) / (1.0 + 6.0 * speed);
  }
  return dimension == 2 ? 1.0 / (2.0 * speed) : 1.0 / (6.0 * speed);
}

std::string to_string(FluxFamily f) {
  return f == FluxFamily::LaxFriedrichs ? "lax-friedrichs" : "godunov";
}

std::string to_string(CflEnforcement c) {
  return c == CflEnforcement::Strict ? "strict" : "warn";
}

FluxFamily parse_flux_family(const std::string& s) {
  if (s == "lax-friedrichs" || s == "lf") return FluxFamily::LaxFriedrichs;
  if (s == "godunov") return FluxFamily::Godunov;
  throw ConfigError("unknown flux family '" + s + "'; valid choices: lax-friedrichs godunov");
}

CflEnforcement parse_cfl_enforcement(const std::string& s) {
  if (s == "strict") return CflEnforcement::Strict;
  if (s == "warn") return CflEnforcement::Warn;
  throw ConfigError("unknown cfl enforcement '" + s + "'; valid choices: strict warn");
}

}  // namespace nlfv
