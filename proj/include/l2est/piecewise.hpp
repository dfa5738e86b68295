#pragma once

#include <vector>

#include "l2est/rational.hpp"

namespace l2est {

//! Compactly supported piecewise polynomial on the real line with exact
//! rational breakpoints and coefficients. Evaluation outside the open
//! support interval (breaks.front(), breaks.back()) is exactly zero.
//! Everything produced in this project has segment degree <= 1.
struct PiecewisePoly1D {
  std::vector<Rational> breaks;               // strictly increasing, size = #segments + 1
  std::vector<std::vector<Rational>> coeffs;  // per segment, ascending powers of x

  int segment_count() const { return static_cast<int>(coeffs.size()); }
  Rational support_lo() const { return breaks.front(); }
  Rational support_hi() const { return breaks.back(); }

  //! Index of the segment containing x, or -1 outside the open support.
  int segment_of(const Rational& x) const;

  Rational value(const Rational& x) const;
  double value(double x) const;

  //! Exact value of the polynomial of segment s at x (no support check).
  Rational segment_value(int s, const Rational& x) const;

  Rational integral() const;
  Rational abs_integral() const;  // splits linear segments at sign roots
  Rational sup_abs() const;       // requires degree <= 1 (extrema at segment ends)

  bool is_step() const;  // all segments degree 0

  //! Merge two breakpoint partitions; degree-wise sum cf*f + cg*g on the union.
  static PiecewisePoly1D combine(const PiecewisePoly1D& f, const PiecewisePoly1D& g,
                                 const Rational& cf, const Rational& cg);

  //! Exact convolution of two piecewise-constant functions (result is
  //! continuous piecewise linear).
  static PiecewisePoly1D convolve_steps(const PiecewisePoly1D& f, const PiecewisePoly1D& g);
};

}  // namespace l2est
