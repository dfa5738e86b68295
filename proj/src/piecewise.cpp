#include "l2est/piecewise.hpp"

#include <algorithm>
#include <stdexcept>

namespace l2est {

int PiecewisePoly1D::segment_of(const Rational& x) const {
  if (x <= breaks.front() || x >= breaks.back()) return -1;
  auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  return static_cast<int>(it - breaks.begin()) - 1;
}

Rational PiecewisePoly1D::segment_value(int s, const Rational& x) const {
  Rational acc = 0;
  const auto& c = coeffs[s];
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Rational PiecewisePoly1D::value(const Rational& x) const {
  int s = segment_of(x);
  if (s < 0) return 0;
  return segment_value(s, x);
}

double PiecewisePoly1D::value(double x) const { return to_double(value(Rational(x))); }

Rational PiecewisePoly1D::integral() const {
  Rational total = 0;
  for (int s = 0; s < segment_count(); ++s) {
    const Rational& a = breaks[s];
    const Rational& b = breaks[s + 1];
    Rational pa = 0, pb = 0;  // antiderivative at a and b
    Rational apow = a, bpow = b;
    for (size_t k = 0; k < coeffs[s].size(); ++k) {
      Rational div = Rational(static_cast<long long>(k + 1));
      pa += coeffs[s][k] * apow / div;
      pb += coeffs[s][k] * bpow / div;
      apow *= a;
      bpow *= b;
    }
    total += pb - pa;
  }
  return total;
}

namespace {

Rational linear_abs_integral(const Rational& c0, const Rational& c1, const Rational& a,
                             const Rational& b) {
  auto signed_part = [&](const Rational& lo, const Rational& hi) {
    return c0 * (hi - lo) + c1 * (hi * hi - lo * lo) / 2;
  };
  if (c1 == 0) return rat_abs(c0) * (b - a);
  Rational root = -c0 / c1;
  if (root <= a || root >= b) return rat_abs(signed_part(a, b));
  return rat_abs(signed_part(a, root)) + rat_abs(signed_part(root, b));
}

}  // namespace

Rational PiecewisePoly1D::abs_integral() const {
  Rational total = 0;
  for (int s = 0; s < segment_count(); ++s) {
    const auto& c = coeffs[s];
    if (c.size() > 2) throw std::logic_error("abs_integral: segment degree > 1");
    Rational c0 = c.empty() ? Rational(0) : c[0];
    Rational c1 = c.size() > 1 ? c[1] : Rational(0);
    total += linear_abs_integral(c0, c1, breaks[s], breaks[s + 1]);
  }
  return total;
}

Rational PiecewisePoly1D::sup_abs() const {
  Rational best = 0;
  for (int s = 0; s < segment_count(); ++s) {
    if (coeffs[s].size() > 2) throw std::logic_error("sup_abs: segment degree > 1");
    best = rat_max(best, rat_abs(segment_value(s, breaks[s])));
    best = rat_max(best, rat_abs(segment_value(s, breaks[s + 1])));
  }
  return best;
}

bool PiecewisePoly1D::is_step() const {
  for (const auto& c : coeffs)
    if (c.size() > 1) return false;
  return true;
}

PiecewisePoly1D PiecewisePoly1D::combine(const PiecewisePoly1D& f, const PiecewisePoly1D& g,
                                         const Rational& cf, const Rational& cg) {
  std::vector<Rational> pts;
  pts.reserve(f.breaks.size() + g.breaks.size());
  pts.insert(pts.end(), f.breaks.begin(), f.breaks.end());
  pts.insert(pts.end(), g.breaks.begin(), g.breaks.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  PiecewisePoly1D out;
  out.breaks = pts;
  out.coeffs.resize(pts.size() - 1);
  for (size_t s = 0; s + 1 < pts.size(); ++s) {
    Rational mid = (pts[s] + pts[s + 1]) / 2;
    std::vector<Rational> c;
    auto add = [&c](const PiecewisePoly1D& p, const Rational& scale, const Rational& x) {
      int seg = p.segment_of(x);
      if (seg < 0) return;
      if (c.size() < p.coeffs[seg].size()) c.resize(p.coeffs[seg].size(), Rational(0));
      for (size_t k = 0; k < p.coeffs[seg].size(); ++k) c[k] += scale * p.coeffs[seg][k];
    };
    add(f, cf, mid);
    add(g, cg, mid);
    if (c.empty()) c.push_back(Rational(0));
    out.coeffs[s] = std::move(c);
  }
  return out;
}

PiecewisePoly1D PiecewisePoly1D::convolve_steps(const PiecewisePoly1D& f,
                                                const PiecewisePoly1D& g) {
  if (!f.is_step() || !g.is_step())
    throw std::logic_error("convolve_steps: inputs must be piecewise constant");

  // The convolution is continuous piecewise linear; its kinks lie in the
  // Minkowski sums of the two breakpoint sets. Sample exactly there and
  // interpolate.
  std::vector<Rational> pts;
  for (const auto& a : f.breaks)
    for (const auto& b : g.breaks) pts.push_back(a + b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  auto conv_at = [&](const Rational& x) {
    Rational acc = 0;
    for (int i = 0; i < f.segment_count(); ++i) {
      if (f.coeffs[i][0] == 0) continue;
      for (int j = 0; j < g.segment_count(); ++j) {
        if (g.coeffs[j][0] == 0) continue;
        // overlap of [f_lo, f_hi] with [x - g_hi, x - g_lo]
        Rational lo = rat_max(f.breaks[i], Rational(x - g.breaks[j + 1]));
        Rational hi = f.breaks[i + 1];
        Rational cap = x - g.breaks[j];
        if (cap < hi) hi = cap;
        if (hi > lo) acc += f.coeffs[i][0] * g.coeffs[j][0] * (hi - lo);
      }
    }
    return acc;
  };

  std::vector<Rational> vals(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) vals[i] = conv_at(pts[i]);

  PiecewisePoly1D out;
  out.breaks = pts;
  out.coeffs.resize(pts.size() - 1);
  for (size_t s = 0; s + 1 < pts.size(); ++s) {
    Rational slope = (vals[s + 1] - vals[s]) / (pts[s + 1] - pts[s]);
    Rational intercept = vals[s] - slope * pts[s];
    out.coeffs[s] = {intercept, slope};
  }
  return out;
}

}  // namespace l2est
