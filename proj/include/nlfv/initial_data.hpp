#pragma once

#include "nlfv/grid.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nlfv {

/// value * indicator of the open interval (a, b).
struct IntervalPiece {
  double a;
  double b;
  double value;
};

/// Initial datum u0 on the line. Sums of interval indicators are projected
/// exactly; anything else goes through `fn` and composite quadrature.
struct InitialDatum1D {
  std::string name;
  std::vector<IntervalPiece> pieces;
  std::function<double(double)> fn;

  double operator()(double x) const;
};

/// value * indicator of the annulus r_inner^2 <= x^2 + y^2 <= r_outer^2
/// (r_inner = 0 gives a disk).
struct AnnulusPiece {
  double r_inner;
  double r_outer;
  double value;
};

struct InitialDatum2D {
  std::string name;
  std::vector<AnnulusPiece> pieces;
  std::function<double(double, double)> fn;

  double operator()(double x, double y) const;
};

/// 0.25 on (-0.9, 0.3) plus 0.5 on (0.1, 0.3).
InitialDatum1D riemann_ex1();
/// `left` on (x_lo, x0), `right` on (x0, x_hi).
InitialDatum1D riemann_datum(double left, double right, double x0, double x_lo,
                             double x_hi);
InitialDatum1D constant_datum(double value);

/// Indicator of 4 <= x^2 + y^2 <= 9.
InitialDatum2D annular_datum();
/// Indicator of x^2 + y^2 <= 4.
InitialDatum2D circular_datum();
InitialDatum2D constant_datum_2d(double value);

InitialDatum1D initial_datum_1d(const std::string& name);
InitialDatum2D initial_datum_2d(const std::string& name);

/// Cell averages (1/dx) * integral of u0 over C_i.
Field1D project_initial_data(const InitialDatum1D& u0, const Grid1D& grid);

/// Cell averages over each rectangle; annulus pieces use the exact
/// disk-rectangle overlap, evaluated by adaptive integration of the chord length.
Field2D project_initial_data_2d(const InitialDatum2D& u0, const Grid2D& grid);

/// Area of the disk of radius r centred at the origin intersected with
/// [x0, x1] x [y0, y1].
double disk_rectangle_overlap(double r, double x0, double x1, double y0, double y1);

}  // namespace nlfv
