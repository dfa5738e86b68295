#include "l2est/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace l2est {

namespace {

std::vector<double> panel_edges(double a, double b, std::vector<double>& knots, int splits) {
  std::vector<double> edges;
  knots.push_back(a);
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    if (knots[i] < a || knots[i + 1] > b) continue;
    for (int s = 0; s < splits; ++s)
      edges.push_back(knots[i] + (knots[i + 1] - knots[i]) * s / splits);
  }
  edges.push_back(b);
  return edges;
}

// Three-point Gauss-Legendre per panel. The nodes are interior, so integrand
// jumps that sit on (or within a few ulps of) the knot-aligned panel edges
// are never sampled from the wrong side; the rule is exact through degree 5,
// which covers every piecewise-polynomial kernel factor on aligned panels.
constexpr double kGl3Offset = 0.7745966692414834;  // sqrt(3/5)
constexpr double kGl3WOuter = 5.0 / 18.0;
constexpr double kGl3WInner = 8.0 / 18.0;

double panel_rule(const std::function<double(double)>& f, const std::vector<double>& edges) {
  double total = 0.0, comp = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    double lo = edges[i], hi = edges[i + 1];
    double w = hi - lo, mid = 0.5 * (lo + hi), half = 0.5 * w;
    double v = w * (kGl3WOuter * f(mid - kGl3Offset * half) + kGl3WInner * f(mid) +
                    kGl3WOuter * f(mid + kGl3Offset * half));
    // Neumaier compensation; panel counts reach ~2^12.
    double t = total + v;
    comp += std::abs(total) >= std::abs(v) ? (total - t) + v : (v - t) + total;
    total = t;
  }
  return total + comp;
}

std::vector<double> halve(const std::vector<double>& edges) {
  std::vector<double> out;
  out.reserve(edges.size() * 2);
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    out.push_back(edges[i]);
    out.push_back(0.5 * (edges[i] + edges[i + 1]));
  }
  out.push_back(edges.back());
  return out;
}

}  // namespace

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    std::vector<double> knots, const QuadratureOptions& opt) {
  if (!(b > a)) return 0.0;
  std::vector<double> edges = panel_edges(a, b, knots, opt.base_panels);
  double prev = panel_rule(f, edges);
  for (int h = 0; h < opt.max_halvings; ++h) {
    edges = halve(edges);
    double cur = panel_rule(f, edges);
    if (std::abs(cur - prev) <= std::max(opt.rel_tol * std::abs(cur), opt.abs_floor)) return cur;
    prev = cur;
  }
  throw QuadratureError("integrate_1d failed to converge after " +
                        std::to_string(opt.max_halvings) + " halvings");
}

double integrate_2d(const std::function<double(double, double)>& f, double ax, double bx,
                    double ay, double by, std::vector<double> knots_x,
                    std::vector<double> knots_y, const QuadratureOptions& opt) {
  if (!(bx > ax) || !(by > ay)) return 0.0;
  std::vector<double> ex = panel_edges(ax, bx, knots_x, opt.base_panels);
  std::vector<double> ey = panel_edges(ay, by, knots_y, opt.base_panels);

  auto tensor = [&](const std::vector<double>& gx, const std::vector<double>& gy) {
    double total = 0.0, comp = 0.0;
    for (size_t i = 0; i + 1 < gx.size(); ++i) {
      double x0 = gx[i], x1 = gx[i + 1], xm = 0.5 * (x0 + x1);
      double wx = x1 - x0;
      double halfx = 0.5 * wx;
      auto row = [&](double x) {
        double r = 0.0;
        for (size_t j = 0; j + 1 < gy.size(); ++j) {
          double y0 = gy[j], y1 = gy[j + 1];
          double wy = y1 - y0, ym = 0.5 * (y0 + y1), halfy = 0.5 * wy;
          r += wy * (kGl3WOuter * f(x, ym - kGl3Offset * halfy) + kGl3WInner * f(x, ym) +
                     kGl3WOuter * f(x, ym + kGl3Offset * halfy));
        }
        return r;
      };
      double v = wx * (kGl3WOuter * row(xm - kGl3Offset * halfx) + kGl3WInner * row(xm) +
                       kGl3WOuter * row(xm + kGl3Offset * halfx));
      double t = total + v;
      comp += std::abs(total) >= std::abs(v) ? (total - t) + v : (v - t) + total;
      total = t;
    }
    return total + comp;
  };

  double prev = tensor(ex, ey);
  for (int h = 0; h < opt.max_halvings; ++h) {
    ex = halve(ex);
    ey = halve(ey);
    double cur = tensor(ex, ey);
    if (std::abs(cur - prev) <= std::max(opt.rel_tol * std::abs(cur), opt.abs_floor)) return cur;
    prev = cur;
  }
  throw QuadratureError("integrate_2d failed to converge after " +
                        std::to_string(opt.max_halvings) + " halvings");
}

Max1D maximize_1d_arg(const std::function<double(double)>& f, double a, double b,
                      int grid_points) {
  double best = -std::numeric_limits<double>::infinity();
  double best_x = a;
  for (int i = 0; i < grid_points; ++i) {
    double x = a + (b - a) * i / (grid_points - 1);
    double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  double step = (b - a) / (grid_points - 1);
  double lo = std::max(a, best_x - step), hi = std::min(b, best_x + step);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    }
  }
  Max1D out;
  out.x = 0.5 * (lo + hi);
  out.value = std::max({best, f1, f2});
  if (best > std::max(f1, f2)) out.x = best_x;
  return out;
}

double maximize_1d(const std::function<double(double)>& f, double a, double b, int grid_points) {
  return maximize_1d_arg(f, a, b, grid_points).value;
}

}  // namespace l2est
