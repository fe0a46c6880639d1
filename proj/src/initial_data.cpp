#include "nlfv/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlfv {

double InitialDatum1D::operator()(double x) const {
  if (fn) return fn(x);
  double v = 0.0;
  for (const auto& p : pieces)
    if (x > p.a && x < p.b) v += p.value;
  return v;
}

double InitialDatum2D::operator()(double x, double y) const {
  if (fn) return fn(x, y);
  const double r2 = x * x + y * y;
  double v = 0.0;
  for (const auto& p : pieces)
    if (r2 >= p.r_inner * p.r_inner && r2 <= p.r_outer * p.r_outer) v += p.value;
  return v;
}

InitialDatum1D riemann_ex1() {
  return {"riemann-ex1", {{-0.9, 0.3, 0.25}, {0.1, 0.3, 0.5}}, {}};
}

InitialDatum1D riemann_datum(double left, double right, double x0, double x_lo,
                             double x_hi) {
  return {"riemann", {{x_lo, x0, left}, {x0, x_hi, right}}, {}};
}

InitialDatum1D constant_datum(double value) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {"constant", {{-inf, inf, value}}, {}};
}

InitialDatum2D annular_datum() { return {"annular", {{2.0, 3.0, 1.0}}, {}}; }

InitialDatum2D circular_datum() { return {"circular", {{0.0, 2.0, 1.0}}, {}}; }

InitialDatum2D constant_datum_2d(double value) {
  return {"constant", {}, [value](double, double) { return value; }};
}

InitialDatum1D initial_datum_1d(const std::string& name) {
  if (name == "riemann-ex1") return riemann_ex1();
  if (name == "zero") return constant_datum(0.0);
  throw ConfigError("unknown 1D initial datum '" + name +
                    "'; valid choices: riemann-ex1 zero riemann custom");
}

InitialDatum2D initial_datum_2d(const std::string& name) {
  if (name == "annular") return annular_datum();
  if (name == "circular") return circular_datum();
  if (name == "zero") return constant_datum_2d(0.0);
  throw ConfigError("unknown 2D initial datum '" + name +
                    "'; valid choices: annular circular zero");
}

Field1D project_initial_data(const InitialDatum1D& u0, const Grid1D& grid) {
  grid.validate();
  const double dx = grid.dx();
  Field1D out;
  out.values = Vector::Zero(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) {
    const double lo = grid.x_min + i * dx;
    const double hi = lo + dx;
    double integral = 0.0;
    if (u0.fn) {
      constexpr int kSub = 16;
      const double h = dx / kSub;
      for (int s = 0; s < kSub; ++s) integral += h * u0.fn(lo + (s + 0.5) * h);
    } else {
      for (const auto& p : u0.pieces) {
        const double overlap = std::min(hi, p.b) - std::max(lo, p.a);
        if (overlap > 0.0) integral += p.value * overlap;
      }
    }
    out.values[i] = integral / (hi - lo);
  }
  return out;
}

namespace {

// Length of {y in [y0, y1] : x^2 + y^2 <= r^2}.
double chord(double r, double x, double y0, double y1) {
  const double s2 = r * r - x * x;
  if (s2 <= 0.0) return 0.0;
  const double s = std::sqrt(s2);
  return std::max(0.0, std::min(y1, s) - std::max(y0, -s));
}

template <typename G>
double adaptive_simpson(G& g, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = g(lm), frm = g(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double disk_rectangle_overlap(double r, double x0, double x1, double y0, double y1) {
  if (r <= 0.0) return 0.0;
  const double a = std::max(x0, -r);
  const double b = std::min(x1, r);
  if (a >= b || y0 >= y1) return 0.0;
  // Cell fully inside the disk.
  const double fx = std::max(std::abs(x0), std::abs(x1));
  const double fy = std::max(std::abs(y0), std::abs(y1));
  if (fx * fx + fy * fy <= r * r) return (x1 - x0) * (y1 - y0);

  std::vector<double> cuts{a, b};
  for (double y : {y0, y1})
    if (std::abs(y) < r) {
      const double c = std::sqrt(r * r - y * y);
      for (double x : {-c, c})
        if (x > a && x < b) cuts.push_back(x);
    }
  std::sort(cuts.begin(), cuts.end());

  auto g = [&](double x) { return chord(r, x, y0, y1); };
  const double tol = 1e-13 * (x1 - x0) * (y1 - y0);
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    if (hi <= lo) continue;
    const double flo = g(lo), fhi = g(hi), fm = g(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    area += adaptive_simpson(g, lo, hi, flo, fm, fhi, whole, tol, 40);
  }
  return area;
}

Field2D project_initial_data_2d(const InitialDatum2D& u0, const Grid2D& grid) {
  grid.validate();
  const double dx = grid.dx(), dy = grid.dy();
  Field2D out;
  out.values = Array2::Zero(grid.nx, grid.ny);
  for (int j = 0; j < grid.ny; ++j) {
    const double y0 = grid.y_min + j * dy, y1 = y0 + dy;
    for (int i = 0; i < grid.nx; ++i) {
      const double x0 = grid.x_min + i * dx, x1 = x0 + dx;
      double integral = 0.0;
      if (u0.fn) {
        constexpr int kSub = 16;
        const double hx = dx / kSub, hy = dy / kSub;
        for (int b = 0; b < kSub; ++b)
          for (int a = 0; a < kSub; ++a)
            integral += hx * hy * u0.fn(x0 + (a + 0.5) * hx, y0 + (b + 0.5) * hy);
      } else {
        for (const auto& p : u0.pieces) {
          const double area = std::clamp(disk_rectangle_overlap(p.r_outer, x0, x1, y0, y1) -
                                             disk_rectangle_overlap(p.r_inner, x0, x1, y0, y1),
                                         0.0, (x1 - x0) * (y1 - y0));
          integral += p.value * area;
        }
      }
      out.values(i, j) = integral / ((x1 - x0) * (y1 - y0));
    }
  }
  return out;
}

}  // namespace nlfv
