#pragma once

#include "nlfv/types.hpp"

namespace nlfv {

/// Uniform 1D cell grid C_i = [x_min + i dx, x_min + (i+1) dx).
struct Grid1D {
  double x_min = -1.5;
  double x_max = 1.5;
  int n_cells = 1;
  Boundary boundary = Boundary::ZeroExtension;

  double dx() const { return (x_max - x_min) / n_cells; }
  double center(int i) const { return x_min + (i + 0.5) * dx(); }
  void validate() const;
  /// Same extent and boundary with twice as many cells.
  Grid1D refined() const;
};

struct Grid2D {
  double x_min = -4.0;
  double x_max = 4.0;
  double y_min = -4.0;
  double y_max = 4.0;
  int nx = 1;
  int ny = 1;
  Boundary boundary = Boundary::ZeroExtension;

  double dx() const { return (x_max - x_min) / nx; }
  double dy() const { return (y_max - y_min) / ny; }
  double center_x(int i) const { return x_min + (i + 0.5) * dx(); }
  double center_y(int j) const { return y_min + (j + 0.5) * dy(); }
  void validate() const;
  Grid2D refined() const;
};

/// Piecewise-constant cell averages at one time level.
struct Field1D {
  Vector values;
  double time = 0.0;
  long step_index = 0;
};

struct Field2D {
  Array2 values;  ///< (nx, ny)
  double time = 0.0;
  long step_index = 0;
};

}  // namespace nlfv
