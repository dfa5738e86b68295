#include "l2est/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace l2est {

namespace {

Rational binomial(int n, int k) {
  Rational r = 1;
  for (int i = 1; i <= k; ++i) r = r * Rational(n - k + i) / Rational(i);
  return r;
}

// Segment data for the d-dimensional norm computations, restricted to [0, b]
// by evenness of kappa and autocorr.
struct AxisSegment {
  Rational lo, hi;
  Rational kap;       // kappa is constant per cell
  Rational a0, a1;    // autocorr = a0 + a1 * x on the cell
};

std::vector<AxisSegment> positive_segments(const KernelSet& ks) {
  std::vector<AxisSegment> segs;
  const auto& ac = ks.autocorr;
  for (int s = 0; s < ac.segment_count(); ++s) {
    if (ac.breaks[s] < 0) continue;
    AxisSegment seg;
    seg.lo = ac.breaks[s];
    seg.hi = ac.breaks[s + 1];
    seg.a0 = ac.coeffs[s].size() > 0 ? ac.coeffs[s][0] : Rational(0);
    seg.a1 = ac.coeffs[s].size() > 1 ? ac.coeffs[s][1] : Rational(0);
    Rational mid = (seg.lo + seg.hi) / 2;
    seg.kap = ks.kappa.value(mid);  // autocorr breaks refine kappa's
    segs.push_back(seg);
  }
  return segs;
}

// ∫ |u + v*y| dy over [y0, y1].
double abs_linear_integral(double u, double v, double y0, double y1) {
  auto signed_part = [&](double a, double b) { return u * (b - a) + 0.5 * v * (b * b - a * a); };
  if (v == 0.0) return std::abs(u) * (y1 - y0);
  double root = -u / v;
  if (root <= y0 || root >= y1) return std::abs(signed_part(y0, y1));
  return std::abs(signed_part(y0, root)) + std::abs(signed_part(root, y1));
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 32);
}

// ∫∫...∫ |2*∏kappa − ∏autocorr| over one lattice cell, recursing over axes
// with an exact |linear| integral in the last one.
double cell_abs_integral(const std::vector<AxisSegment>& segs, const std::vector<int>& cell,
                         std::vector<double>& x, int axis, double kprod, double aprod) {
  int d = static_cast<int>(cell.size());
  const AxisSegment& s = segs[cell[axis]];
  if (axis == d - 1) {
    double c = 2.0 * kprod * to_double(s.kap);
    double u = c - aprod * to_double(s.a0);
    double v = -aprod * to_double(s.a1);
    return abs_linear_integral(u, v, to_double(s.lo), to_double(s.hi));
  }
  double lo = to_double(s.lo), hi = to_double(s.hi);
  double kap = to_double(s.kap), a0 = to_double(s.a0), a1 = to_double(s.a1);
  auto inner = [&](double xi) {
    return cell_abs_integral(segs, cell, x, axis + 1, kprod * kap, aprod * (a0 + a1 * xi));
  };
  return integrate_adaptive(inner, lo, hi, 1e-12);
}

}  // namespace

KernelSet build_kernel(int b) {
  if (b < 2) throw std::invalid_argument("kernel order must satisfy b >= 2");

  KernelSet ks;
  ks.b = b;
  ks.t = Rational(b);

  // kappa = sum_k (-1)^{k+1} C(b,k)/k * 1{|y| < k/2}: a step function on the
  // half-integer lattice over (-b/2, b/2).
  std::vector<Rational> c(b + 1);
  for (int k = 1; k <= b; ++k) {
    c[k] = binomial(b, k) / Rational(k);
    if (k % 2 == 0) c[k] = -c[k];
  }
  ks.kappa.breaks.clear();
  for (int j = -b; j <= b; ++j) ks.kappa.breaks.push_back(Rational(j, 2));
  ks.kappa.coeffs.resize(2 * b);
  for (int j = 0; j < 2 * b; ++j) {
    Rational mid = (ks.kappa.breaks[j] + ks.kappa.breaks[j + 1]) / 2;
    Rational v = 0;
    for (int k = 1; k <= b; ++k)
      if (rat_abs(mid) < Rational(k, 2)) v += c[k];
    ks.kappa.coeffs[j] = {v};
  }

  ks.autocorr = PiecewisePoly1D::convolve_steps(ks.kappa, ks.kappa);
  ks.kappa_integral = ks.kappa.integral();
  ks.kappa_l1 = ks.kappa.abs_integral();

  PiecewisePoly1D t_profile =
      PiecewisePoly1D::combine(ks.kappa, ks.autocorr, Rational(2), Rational(-1));
  ks.t_norm1_1d = t_profile.abs_integral();
  ks.t_norminf_1d = t_profile.sup_abs();
  ks.varpi_1d = to_double(rat_max(Rational(1), rat_max(ks.t_norm1_1d, ks.t_norminf_1d)));
  return ks;
}

std::vector<double> KernelSet::knots() const {
  std::vector<double> k;
  k.reserve(autocorr.breaks.size());
  for (const auto& b : autocorr.breaks) k.push_back(to_double(b));
  return k;
}

double varpi_T(const KernelSet& ks, int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (d == 1) return ks.varpi_1d;

  const auto segs = positive_segments(ks);
  const int n = static_cast<int>(segs.size());

  // Sup norm: per cell T is multilinear, so the extremum over the closed cell
  // sits at a vertex. Enumerate over the nonnegative orthant (T is even per
  // axis).
  Rational sup = 0;
  std::vector<int> cell(d, 0);
  std::function<void(int)> walk_cells = [&](int axis) {
    if (axis == d) {
      for (int corner = 0; corner < (1 << d); ++corner) {
        Rational kprod = 1, aprod = 1;
        for (int j = 0; j < d; ++j) {
          const AxisSegment& s = segs[cell[j]];
          kprod *= s.kap;
          const Rational& x = (corner >> j) & 1 ? s.hi : s.lo;
          aprod *= s.a0 + s.a1 * x;
        }
        sup = rat_max(sup, rat_abs(Rational(2) * kprod - aprod));
      }
      return;
    }
    for (cell[axis] = 0; cell[axis] < n; ++cell[axis]) walk_cells(axis + 1);
  };
  walk_cells(0);

  double l1 = 0.0;
  std::vector<double> x(d, 0.0);
  std::function<void(int, double)> walk_l1 = [&](int axis, double acc) {
    if (axis == d) {
      l1 += cell_abs_integral(segs, cell, x, 0, 1.0, 1.0);
      return;
    }
    for (cell[axis] = 0; cell[axis] < n; ++cell[axis]) walk_l1(axis + 1, acc);
  };
  walk_l1(0, 1.0);
  l1 *= std::pow(2.0, d);

  return std::max({1.0, l1, to_double(sup)});
}

namespace {

void check_bandwidth(const std::vector<double>& x, const std::vector<double>& h) {
  if (x.size() != h.size()) throw std::invalid_argument("point/bandwidth dimension mismatch");
  for (double hj : h)
    if (!(hj > 0.0)) throw std::domain_error("bandwidth coordinates must be positive");
}

}  // namespace

double eval_K(const KernelSet& ks, const std::vector<double>& x, const std::vector<double>& h) {
  check_bandwidth(x, h);
  double v = 1.0, vol = 1.0;
  for (size_t j = 0; j < x.size(); ++j) {
    v *= ks.kappa.value(x[j] / h[j]);
    vol *= h[j];
    if (v == 0.0) return 0.0;
  }
  return v / vol;
}

double eval_T(const KernelSet& ks, const std::vector<double>& x, const std::vector<double>& h) {
  check_bandwidth(x, h);
  double kprod = 1.0, aprod = 1.0, vol = 1.0;
  for (size_t j = 0; j < x.size(); ++j) {
    double u = x[j] / h[j];
    kprod *= ks.kappa.value(u);
    aprod *= ks.autocorr.value(u);
    vol *= h[j];
  }
  return (2.0 * kprod - aprod) / vol;
}

CompiledKernel compile_kernel(const KernelSet& ks) {
  CompiledKernel ck;
  ck.t = static_cast<double>(ks.b);
  ck.cells = 4 * ks.b;
  ck.kap.assign(ck.cells, 0.0);
  ck.ac0.assign(ck.cells, 0.0);
  ck.ac1.assign(ck.cells, 0.0);
  for (int i = 0; i < ck.cells; ++i) {
    Rational lo = Rational(-ks.b) + Rational(i, 2);
    Rational mid = lo + Rational(1, 4);
    ck.kap[i] = to_double(ks.kappa.value(mid));
    int seg = ks.autocorr.segment_of(mid);
    if (seg >= 0) {
      ck.ac0[i] = to_double(ks.autocorr.coeffs[seg][0]);
      ck.ac1[i] = ks.autocorr.coeffs[seg].size() > 1 ? to_double(ks.autocorr.coeffs[seg][1]) : 0.0;
    }
  }
  return ck;
}

}  // namespace l2est
