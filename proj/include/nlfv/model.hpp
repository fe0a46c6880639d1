#pragma once

#include "nlfv/types.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace nlfv {

/// Shape hint for f, used by the Godunov flux to avoid numeric search.
enum class FluxShape {
  Increasing,  ///< f nondecreasing: the Godunov flux is pure upwind
  Concave,     ///< f concave with its maximum at `f_vertex`
  General,     ///< no structure known: scan plus golden-section refinement
};

enum class ModelFunction { F, Nu, Beta };

/// The scalar triple (f, nu, beta) of u_t + (f(u) nu(mu * beta(u)))_x = 0,
/// together with the bounds entering the CFL conditions. Immutable once built.
struct Model {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> nu;
  std::function<double(double)> beta;
  double f_lip = 0.0;   ///< Lipschitz bound of f on the reachable value range
  double nu_sup = 0.0;  ///< sup |nu| on the reachable convolution range
  FluxShape f_shape = FluxShape::General;
  double f_vertex = 0.0;
  int dimension = 1;  ///< natural space dimension of the built-in experiment
  double value_min = 0.0;  ///< value range on which the bounds are declared
  double value_max = 1.0;
};

double eval(const Model& m, ModelFunction which, double u);

/// Looks a model up in the compile-time registry. Throws ConfigError naming
/// the valid choices for unknown names.
Model builtin_model(std::string_view name);

std::vector<std::string> builtin_model_names();

/// Dense-sampling audit of the declared bounds on [value_min, value_max]:
/// returns a description of every violated bound (empty when consistent).
std::vector<std::string> check_model_bounds(const Model& m, int samples = 4001);

}  // namespace nlfv
