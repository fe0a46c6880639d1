#pragma once

#include "nlfv/types.hpp"

#include <random>

namespace testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline double uniform(double a = 0.0, double b = 1.0) {
  return std::uniform_real_distribution<double>(a, b)(rng());
}

inline nlfv::Vector random_vector(int n, double a = 0.0, double b = 1.0) {
  nlfv::Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(a, b);
  return v;
}

inline nlfv::Array2 random_array(int nx, int ny, double a = 0.0, double b = 1.0) {
  nlfv::Array2 v(nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) v(i, j) = uniform(a, b);
  return v;
}

}  // namespace testing
