#include "l2est/rate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace l2est {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ExactParams {
  std::vector<Rational> beta;
  std::vector<Rational> inv_r;  // 1/r, exact; 0 for r = infinity
};

ExactParams exact(const SmoothnessParams& p) {
  if (p.beta.empty() || p.beta.size() != p.r.size())
    throw std::invalid_argument("smoothness parameters need matching nonempty beta/r");
  ExactParams e;
  for (size_t j = 0; j < p.beta.size(); ++j) {
    if (!(p.beta[j] > 0.0)) throw std::invalid_argument("beta coordinates must be positive");
    if (!(p.r[j] >= 1.0)) throw std::invalid_argument("r coordinates must be >= 1");
    e.beta.emplace_back(p.beta[j]);
    e.inv_r.emplace_back(std::isinf(p.r[j]) ? Rational(0) : Rational(1) / Rational(p.r[j]));
  }
  return e;
}

Rational tau_exact(const ExactParams& e, const Rational& inv_s) {
  Rational t = 1;
  for (size_t j = 0; j < e.beta.size(); ++j) t -= e.inv_r[j] / e.beta[j];
  for (size_t j = 0; j < e.beta.size(); ++j) t += inv_s / e.beta[j];
  return t;
}

Rational rate_exponent_exact(const ExactParams& e) {
  Rational t1 = tau_exact(e, Rational(1));
  Rational t2 = tau_exact(e, Rational(1, 2));
  Rational ti = tau_exact(e, Rational(0));
  if (t2 >= 1 && t1 > 2) return Rational(1) / t1;
  if (t2 < 1 && ti < 0) return Rational(1) / (Rational(2) - ti);
  return Rational(1, 2);
}

}  // namespace

SmoothnessParams SmoothnessParams::isotropic(double beta, double r, int d) {
  SmoothnessParams p;
  p.beta.assign(d, beta);
  p.r.assign(d, r);
  return p;
}

double tau(const SmoothnessParams& p, double s) {
  if (!(s >= 1.0)) throw std::invalid_argument("tau: s must be >= 1");
  Rational inv_s = std::isinf(s) ? Rational(0) : Rational(1) / Rational(s);
  return to_double(tau_exact(exact(p), inv_s));
}

double rate_exponent(const SmoothnessParams& p) { return to_double(rate_exponent_exact(exact(p))); }

double rate_exponent_isotropic(double beta, double r, int d) {
  if (!(beta > 0.0) || !(r >= 1.0) || d < 1)
    throw std::invalid_argument("rate_exponent_isotropic: bad parameters");
  Rational B(beta), D(d);
  Rational inv_r = std::isinf(r) ? Rational(0) : Rational(1) / Rational(r);
  // Conditions and values written with 1/r so that r = infinity is exact;
  // beta*r < d(r-1) divides through to beta < d(1 - 1/r), etc.
  if (inv_r <= Rational(1, 2)) {
    Rational rhs = D * (Rational(1) - inv_r);
    if (B < rhs) return to_double(B / (B + rhs));
    return 0.5;
  }
  if (B < D * inv_r) {
    // beta*r/(beta*r + d) with r finite
    Rational R = Rational(1) / inv_r;
    return to_double(B * R / (B * R + D));
  }
  return 0.5;
}

bool is_parametric(const SmoothnessParams& p) {
  return rate_exponent_exact(exact(p)) == Rational(1, 2);
}

double adaptive_normalization(const SmoothnessParams& p, int m, NormalizationFamily family) {
  if (m < 3) throw std::invalid_argument("adaptive_normalization: m must be >= 3");
  Rational z = rate_exponent_exact(exact(p));
  const double md = static_cast<double>(m);
  const double lm = std::log(md);
  double mu;
  if (z < Rational(1, 2))
    mu = std::sqrt(lm) / md;
  else
    mu = family == NormalizationFamily::Anisotropic ? lm / md : 1.0 / md;
  return std::pow(mu, to_double(z));
}

double exponent_p(double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("exponent_p: r must be >= 1");
  if (std::isinf(r)) return 1.0;
  if (r >= 2.0) return r / (r - 1.0);
  return r;
}

namespace {

enum class Regime { Upper, Lower };  // r in [2,inf]^d vs [1,2]^d

Regime regime_of(const ExactParams& e) {
  bool all_upper = true, all_lower = true;
  for (const auto& ir : e.inv_r) {
    if (ir > Rational(1, 2)) all_upper = false;
    if (ir < Rational(1, 2)) all_lower = false;
  }
  if (all_upper) return Regime::Upper;
  if (all_lower) return Regime::Lower;
  throw std::invalid_argument("unsupported parameters: r must lie in [1,2]^d or [2,inf]^d");
}

// 1/p_j: 1 - 1/r for r >= 2, 1/r for r <= 2.
Rational inv_p(const ExactParams& e, size_t j, Regime reg) {
  return reg == Regime::Upper ? Rational(1) - e.inv_r[j] : e.inv_r[j];
}

Rational upsilon_inv_exact(const ExactParams& e, Regime reg) {
  Rational s = 0;
  for (size_t j = 0; j < e.beta.size(); ++j) s += inv_p(e, j, reg) / e.beta[j];
  return s;
}

}  // namespace

double z_exponent(const SmoothnessParams& p) {
  ExactParams e = exact(p);
  Regime reg = regime_of(e);
  if (reg == Regime::Upper) return to_double(Rational(1) / tau_exact(e, Rational(1)));
  return to_double(Rational(1) / (Rational(2) - tau_exact(e, Rational(0))));
}

double upsilon_inverse(const SmoothnessParams& p) {
  ExactParams e = exact(p);
  return to_double(upsilon_inv_exact(e, regime_of(e)));
}

OptimalBandwidth optimal_bandwidth(const SmoothnessParams& p, int m) {
  if (m < 3) throw std::invalid_argument("optimal_bandwidth: m must be >= 3");
  ExactParams e = exact(p);
  Regime reg = regime_of(e);
  Rational scale = Rational(1) + upsilon_inv_exact(e, reg);  // = 1/z
  Rational z = rate_exponent_exact(e);

  const double md = static_cast<double>(m);
  const double lm = std::log(md);
  const double mu = z < Rational(1, 2) ? std::sqrt(lm) / md : lm / md;

  OptimalBandwidth ob;
  const int d = p.dim();
  ob.h.resize(d);
  ob.projected_exps.resize(d);

  // Level exponents available in the grid for this m.
  const int top = static_cast<int>(std::floor(2.0 * lm)) - 1;
  const int extra = 2 * static_cast<int>(std::floor(lm));
  const int max_exp = std::max(top, extra);

  for (int j = 0; j < d; ++j) {
    Rational expo = Rational(2) / (e.beta[j] * scale / inv_p(e, j, reg));
    // beta_j * p_j * (1 + 1/upsilon) = beta_j * scale / inv_p_j
    ob.h[j] = std::pow(mu, to_double(expo));
    double k = std::ceil(-std::log(ob.h[j]));
    int ki = static_cast<int>(k);
    ob.projected_exps[j] = std::clamp(ki, 1, max_exp);
  }
  return ob;
}

}  // namespace l2est
