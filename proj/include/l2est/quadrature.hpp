#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace l2est {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double rel_tol = 1e-7;
  double abs_floor = 1e-12;
  int max_halvings = 12;
  int base_panels = 2;  // initial subdivisions per knot interval
};

//! Composite Simpson over [a, b] with panels aligned to the given interior
//! knots, dyadically refined until two successive refinements differ by less
//! than max(rel_tol * |I|, abs_floor). Throws QuadratureError if the limit of
//! max_halvings is reached without convergence.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    std::vector<double> knots = {}, const QuadratureOptions& opt = {});

//! Tensor composite Simpson on [ax, bx] x [ay, by] with the same refinement
//! rule applied to the full grid.
double integrate_2d(const std::function<double(double, double)>& f, double ax, double bx,
                    double ay, double by, std::vector<double> knots_x = {},
                    std::vector<double> knots_y = {}, const QuadratureOptions& opt = {});

//! Maximum of a continuous function over [a, b]: scan on a uniform grid of
//! grid_points then one golden-section polish around the best cell.
double maximize_1d(const std::function<double(double)>& f, double a, double b,
                   int grid_points = 4097);

struct Max1D {
  double x = 0.0;
  double value = 0.0;
};
Max1D maximize_1d_arg(const std::function<double(double)>& f, double a, double b,
                      int grid_points = 4097);

}  // namespace l2est
