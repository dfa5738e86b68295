#pragma once

#include <vector>

#include "l2est/grid.hpp"
#include "l2est/rational.hpp"

namespace l2est {

//! Smoothness parameters (beta_j, r_j) with r_j = +infinity allowed. All the
//! case arithmetic below runs in exact rational arithmetic over the (exactly
//! representable) double inputs, so algebraically equal formulas produce
//! bit-identical doubles.
struct SmoothnessParams {
  std::vector<double> beta;  // all > 0
  std::vector<double> r;     // all >= 1, may be +infinity

  int dim() const { return static_cast<int>(beta.size()); }
  static SmoothnessParams isotropic(double beta, double r, int d);
};

//! tau_s = 1 - sum 1/(beta_j r_j) + (sum 1/beta_j)/s, with 1/inf = 0.
//! s may be +infinity.
double tau(const SmoothnessParams& p, double s);

//! The four-case minimax exponent; exactly one case applies.
double rate_exponent(const SmoothnessParams& p);

//! Isotropic version evaluated through its own printed case formula.
double rate_exponent_isotropic(double beta, double r, int d);

bool is_parametric(const SmoothnessParams& p);  // rate_exponent == 1/2

enum class NormalizationFamily { Anisotropic, Isotropic };

//! mu_m^{z*}: mu_m = sqrt(ln m)/m when z* < 1/2; ln(m)/m (anisotropic family)
//! or 1/m (isotropic family) when z* = 1/2.
double adaptive_normalization(const SmoothnessParams& p, int m, NormalizationFamily family);

//! p_j = r/(r-1) for r >= 2 (1 at r = inf), p_j = r for r < 2.
double exponent_p(double r);

//! z = 1/tau(1) when all r >= 2; 1/(2 - tau(inf)) when all r <= 2.
//! Throws std::invalid_argument for mixed regimes.
double z_exponent(const SmoothnessParams& p);

//! 1/upsilon = sum 1/(p_j beta_j).
double upsilon_inverse(const SmoothnessParams& p);

struct OptimalBandwidth {
  std::vector<double> h;            // mu_m^{2/(beta_j p_j (1 + 1/upsilon))}
  std::vector<int> projected_exps;  // coordinatewise downward grid projection
};

//! Theoretical bandwidth of the bias/variance balance, plus its projection
//! onto the grid levels (largest level not exceeding h_j; the smallest level
//! if all exceed it).
OptimalBandwidth optimal_bandwidth(const SmoothnessParams& p, int m);

}  // namespace l2est
