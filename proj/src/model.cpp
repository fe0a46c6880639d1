#include "nlfv/model.hpp"

#include "nlfv/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlfv {

double eval(const Model& m, ModelFunction which, double u) {
  switch (which) {
    case ModelFunction::F:
      return m.f(u);
    case ModelFunction::Nu:
      return m.nu(u);
    case ModelFunction::Beta:
      break;
  }
  return m.beta(u);
}

namespace {

Model nonlocal_lwr_1d() {
  Model m;
  m.name = "nonlocal-lwr-1d";
  m.f = [](double u) { return u; };
  m.nu = [](double r) { return 1.0 - r; };
  m.beta = [](double r) { return r; };
  m.f_lip = 1.0;
  m.nu_sup = 1.0;
  m.f_shape = FluxShape::Increasing;
  m.dimension = 1;
  return m;
}

// Crowd model exactly as tabulated: f = u(1-u), nu = 1, beta = 1-u.
Model crowd_2d() {
  Model m;
  m.name = "crowd-2d";
  m.f = [](double u) { return u * (1.0 - u); };
  m.nu = [](double) { return 1.0; };
  m.beta = [](double u) { return 1.0 - u; };
  m.f_lip = 1.0;
  m.nu_sup = 1.0;
  m.f_shape = FluxShape::Concave;
  m.f_vertex = 0.5;
  m.dimension = 2;
  return m;
}

// Crowd model with nu(r) = r, so that nu(mu * (1-u)) = 1 - mu * u for a
// unit-mass kernel: the flux u(1-u)(1 - u * mu).
Model crowd_2d_nonlocal() {
  Model m = crowd_2d();
  m.name = "crowd-2d-nonlocal";
  m.nu = [](double r) { return r; };
  return m;
}

// Local LWR flux u(1-u); used by the local Godunov reference solver.
Model local_lwr_1d() {
  Model m;
  m.name = "local-lwr-1d";
  m.f = [](double u) { return u * (1.0 - u); };
  m.nu = [](double) { return 1.0; };
  m.beta = [](double) { return 0.0; };
  m.f_lip = 1.0;
  m.nu_sup = 1.0;
  m.f_shape = FluxShape::Concave;
  m.f_vertex = 0.5;
  m.dimension = 1;
  return m;
}

Model linear_advection() {
  Model m;
  m.name = "linear-advection";
  m.f = [](double u) { return u; };
  m.nu = [](double) { return 1.0; };
  m.beta = [](double) { return 0.0; };
  m.f_lip = 1.0;
  m.nu_sup = 1.0;
  m.f_shape = FluxShape::Increasing;
  m.dimension = 1;
  return m;
}

struct RegistryEntry {
  std::string_view name;
  Model (*make)();
};

// Custom models are added here.
constexpr RegistryEntry kRegistry[] = {
    {"nonlocal-lwr-1d", nonlocal_lwr_1d},
    {"crowd-2d", crowd_2d},
    {"crowd-2d-nonlocal", crowd_2d_nonlocal},
    {"local-lwr-1d", local_lwr_1d},
    {"linear-advection", linear_advection},
};

}  // namespace

std::vector<std::string> builtin_model_names() {
  std::vector<std::string> names;
  for (const auto& e : kRegistry) names.emplace_back(e.name);
  return names;
}

Model builtin_model(std::string_view name) {
  for (const auto& e : kRegistry) {
    if (e.name != name) continue;
    Model m = e.make();
    if (m.f(0.0) != 0.0)
      throw ConfigError("model '" + m.name + "' violates f(0) = 0");
    if (!(std::isfinite(m.f_lip) && m.f_lip >= 0.0 && std::isfinite(m.nu_sup) &&
          m.nu_sup >= 0.0))
      throw ConfigError("model '" + m.name + "' declares invalid bounds");
    return m;
  }
  std::ostringstream msg;
  msg << "unknown model '" << name << "'; valid choices:";
  for (const auto& e : kRegistry) msg << ' ' << e.name;
  throw ConfigError(msg.str());
}

std::vector<std::string> check_model_bounds(const Model& m, int samples) {
  std::vector<std::string> problems;
  const double lo = m.value_min;
  const double hi = m.value_max;
  const double h = (hi - lo) / (samples - 1);
  double worst_lip = 0.0;
  double worst_nu = 0.0;
  double prev = m.f(lo);
  for (int s = 0; s < samples; ++s) {
    const double u = lo + s * h;
    const double fu = m.f(u);
    if (s > 0) worst_lip = std::max(worst_lip, std::abs(fu - prev) / h);
    prev = fu;
    worst_nu = std::max(worst_nu, std::abs(m.nu(u)));
  }
  constexpr double slack = 1e-9;
  if (worst_lip > m.f_lip * (1.0 + slack) + slack) {
    std::ostringstream msg;
    msg << m.name << ": sampled Lipschitz constant of f " << worst_lip
        << " exceeds declared f_lip " << m.f_lip;
    problems.push_back(msg.str());
  }
  if (worst_nu > m.nu_sup * (1.0 + slack) + slack) {
    std::ostringstream msg;
    msg << m.name << ": sampled sup |nu| " << worst_nu << " exceeds declared nu_sup "
        << m.nu_sup;
    problems.push_back(msg.str());
  }
  if (m.f(0.0) != 0.0) problems.push_back(m.name + ": f(0) != 0");
  return problems;
}

}  // namespace nlfv
