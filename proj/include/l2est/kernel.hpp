#pragma once

#include <vector>

#include "l2est/piecewise.hpp"

namespace l2est {

//! Order-b kernel built from the rectangular base function on [-1/2, 1/2],
//! together with its autocorrelation and the exact norms derived from the
//! one-dimensional profile T(x) = 2*kappa(x) - autocorr(x). Immutable after
//! construction; safe for shared concurrent reads.
struct KernelSet {
  int b = 0;                  // kernel order (>= 2)
  PiecewisePoly1D kappa;      // supported on (-b/2, b/2)
  PiecewisePoly1D autocorr;   // kappa correlated with itself, supported on (-b, b)
  Rational t;                 // support width parameter, t = b
  Rational kappa_integral;    // exactly 1
  Rational kappa_l1;          // ∫|kappa|
  Rational t_norm1_1d;        // ‖T‖₁ in one dimension, exact
  Rational t_norminf_1d;      // ‖T‖∞ in one dimension, exact
  double varpi_1d = 0.0;      // max(1, ‖T‖₁, ‖T‖∞) in one dimension

  //! Kernel breakpoints as doubles (kinks of kappa and autocorr), for
  //! quadrature panel alignment.
  std::vector<double> knots() const;
};

//! Construct the order-b kernel set. Throws std::invalid_argument for b < 2.
KernelSet build_kernel(int b);

//! max(1, ‖T‖₁, ‖T‖∞) for the d-dimensional T(x) = 2·∏kappa(x_j) − ∏autocorr(x_j).
//! The sup norm is exact (vertex enumeration of the per-cell multilinear form);
//! the L1 norm is exact for d = 1 and accurate to ~1e-9 for d >= 2.
double varpi_T(const KernelSet& ks, int d);

//! Scaled kernel evaluations. h must be strictly positive in every axis
//! (std::domain_error otherwise).
double eval_K(const KernelSet& ks, const std::vector<double>& x, const std::vector<double>& h);
double eval_T(const KernelSet& ks, const std::vector<double>& x, const std::vector<double>& h);

//! Flat lookup tables over the uniform half-integer lattice covering [-b, b],
//! for the inner loops of the U-statistics. Evaluations agree with the exact
//! piecewise representation.
struct CompiledKernel {
  double t = 0.0;           // support half-width of autocorr (= b)
  double inv_step = 2.0;    // cells of width 1/2
  int cells = 0;
  std::vector<double> kap;  // kappa value per cell
  std::vector<double> ac0, ac1;  // autocorr = ac0 + ac1 * u per cell

  inline int cell_of(double u) const { return static_cast<int>((u + t) * inv_step); }

  //! 2*∏kappa(u_j) − ∏autocorr(u_j); exactly 0 if any |u_j| >= t.
  inline double t_profile(double u) const {
    if (!(u > -t && u < t)) return 0.0;
    int c = cell_of(u);
    return 2.0 * kap[c] - (ac0[c] + ac1[c] * u);
  }
  inline double kappa_at(double u) const {
    if (!(u > -t && u < t)) return 0.0;
    return kap[cell_of(u)];
  }
  inline double autocorr_at(double u) const {
    if (!(u > -t && u < t)) return 0.0;
    int c = cell_of(u);
    return ac0[c] + ac1[c] * u;
  }
};

CompiledKernel compile_kernel(const KernelSet& ks);

}  // namespace l2est
