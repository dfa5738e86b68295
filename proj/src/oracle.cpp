#include "l2est/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace l2est {

OracleConstants oracle_constants(double q, double varpi, int d) {
  if (!(q >= 1.0)) throw std::invalid_argument("oracle constants need q >= 1");
  OracleConstants c;
  const double s = 12.0 * q + 2.0;
  const double gamma_q1 = std::tgamma(q + 1.0);
  c.lambda_q = std::pow(2.0, q + 1.0) * std::pow(varpi, q) *
               (1.0 + std::pow(2.0, 2.0 * q - 1.0) * (1.0 + std::pow(2.0, q) * gamma_q1) +
                std::pow(2.0, 2.0 * q - 2.0) * gamma_q1 *
                    (0.5 * std::pow(3.0 * std::sqrt(s), q) +
                     std::pow(28.0 * (6.0 * q + 1.0), q)));
  c.lambda_star_q = std::pow(2.0, q - 1.0) * c.lambda_q + gamma_q1 * std::pow(8.0 * varpi, q);
  c.omega_q = std::pow(3.0, d + 1.0) * (24.0 * q + 4.0) * (24.0 * q + 4.0) * varpi;
  return c;
}

namespace {

// Memoizes a univariate function on exact double keys; tensor quadrature
// grids revisit axis coordinates heavily.
class AxisCache {
 public:
  explicit AxisCache(std::function<double(double)> f) : f_(std::move(f)) {}
  double operator()(double x) {
    auto it = cache_.find(x);
    if (it != cache_.end()) return it->second;
    double v = f_(x);
    cache_.emplace(x, v);
    return v;
  }

 private:
  std::function<double(double)> f_;
  std::unordered_map<double, double> cache_;
};

}  // namespace

OracleCalc::OracleCalc(const DensityModel& model, const KernelSet& ks, const BandwidthGrid& grid,
                       double q, QuadratureOptions opt)
    : model_(model),
      ks_(ks),
      ck_(compile_kernel(ks)),
      grid_(grid),
      q_(q),
      s_(12.0 * q + 2.0),
      opt_(opt),
      varpi_(varpi_T(ks, grid.d)),
      l2_sq_(model.l2_sq_exact()),
      sup_norm_(model.sup_norm()) {
  if (model.dim() != grid.d) throw std::invalid_argument("density/grid dimension mismatch");
  // Breakpoints plus exact sign roots of the 1-D profile 2*kappa - autocorr,
  // so |T| integrands get kink-aligned panels.
  PiecewisePoly1D prof =
      PiecewisePoly1D::combine(ks.kappa, ks.autocorr, Rational(2), Rational(-1));
  for (const auto& b : prof.breaks) t_knots_.push_back(to_double(b));
  for (int s = 0; s < prof.segment_count(); ++s) {
    const auto& c = prof.coeffs[s];
    if (c.size() > 1 && c[1] != 0) {
      Rational root = -c[0] / c[1];
      if (root > prof.breaks[s] && root < prof.breaks[s + 1])
        t_knots_.push_back(to_double(root));
    }
  }
  std::sort(t_knots_.begin(), t_knots_.end());
}

double OracleCalc::smoother(const std::vector<double>& h, const std::vector<double>& x) const {
  const double half = 0.5 * static_cast<double>(ks_.b);
  double prod = 1.0;
  for (int j = 0; j < model_.dim(); ++j) {
    std::vector<double> knots;
    for (int k = -ks_.b; k <= ks_.b; ++k) knots.push_back(0.5 * k);
    for (double kink : model_.axis_kinks(j)) {
      double u = (x[j] - kink) / h[j];
      if (u > -half && u < half) knots.push_back(u);
    }
    auto integrand = [&](double u) {
      return ck_.kappa_at(u) * model_.marginal_pdf(j, x[j] - h[j] * u);
    };
    prod *= integrate_1d(integrand, -half, half, knots, opt_);
  }
  return prod;
}

double OracleCalc::bias_at(const std::vector<double>& h, const std::vector<double>& x) const {
  return smoother(h, x) - model_.pdf(x);
}

namespace {

std::vector<double> bias_axis_knots(const DensityModel& model, int axis, double h, int b) {
  std::vector<double> knots = model.axis_kinks(axis);
  for (double kink : model.axis_kinks(axis))
    for (int k = -b; k <= b; ++k) knots.push_back(kink + h * 0.5 * k);
  return knots;
}

}  // namespace

double OracleCalc::bias_norm_sq(int member) {
  auto it = bias_sq_.find(member);
  if (it != bias_sq_.end()) return it->second;

  const auto h = grid_.h_values(member);
  const double half = 0.5 * static_cast<double>(ks_.b);
  const int d = model_.dim();
  double value = 0.0;

  // S_h factorizes over axes for product densities; cache the axis smoothers
  // on the tensor grid.
  std::vector<AxisCache> s_axis;
  for (int j = 0; j < d; ++j) {
    s_axis.emplace_back([this, j, hj = h[j], half](double xj) {
      std::vector<double> knots;
      for (int k = -ks_.b; k <= ks_.b; ++k) knots.push_back(0.5 * k);
      for (double kink : model_.axis_kinks(j)) {
        double u = (xj - kink) / hj;
        if (u > -half && u < half) knots.push_back(u);
      }
      auto integrand = [&](double u) { return ck_.kappa_at(u) * model_.marginal_pdf(j, xj - hj * u); };
      return integrate_1d(integrand, -half, half, knots, opt_);
    });
  }

  if (d == 1) {
    auto [lo, hi] = model_.support(0);
    auto f = [&](double x) {
      double bx = s_axis[0](x) - model_.marginal_pdf(0, x);
      return bx * bx;
    };
    value = integrate_1d(f, lo - half * h[0], hi + half * h[0],
                         bias_axis_knots(model_, 0, h[0], ks_.b), opt_);
  } else if (d == 2) {
    auto [lo0, hi0] = model_.support(0);
    auto [lo1, hi1] = model_.support(1);
    auto f = [&](double x, double y) {
      double bx = s_axis[0](x) * s_axis[1](y) -
                  model_.marginal_pdf(0, x) * model_.marginal_pdf(1, y);
      return bx * bx;
    };
    value = integrate_2d(f, lo0 - half * h[0], hi0 + half * h[0], lo1 - half * h[1],
                         hi1 + half * h[1], bias_axis_knots(model_, 0, h[0], ks_.b),
                         bias_axis_knots(model_, 1, h[1], ks_.b), opt_);
  } else {
    throw std::invalid_argument("bias quadrature supports d <= 2");
  }

  bias_sq_.emplace(member, value);
  return value;
}

double OracleCalc::bias_gap(int member) {
  double best = 0.0;
  for (int w = 0; w < grid_.size(); ++w) {
    double gap = std::abs(bias_norm_sq(grid_.join(member, w)) - bias_norm_sq(w));
    best = std::max(best, gap);
  }
  return best;
}

std::vector<double> OracleCalc::outer_knots(int axis, double h) const {
  // The inner smoothing integral, viewed as a function of the outer
  // variable, kinks wherever a density kink crosses a profile knot.
  std::vector<double> knots = model_.axis_kinks(axis);
  for (double kink : model_.axis_kinks(axis))
    for (double tk : t_knots_) knots.push_back(kink - h * tk);
  return knots;
}

double OracleCalc::double_t_integral(int member) {
  if (model_.dim() != 1)
    throw std::invalid_argument("double_t_integral is implemented for d = 1");
  auto it = dbl_t_.find(member);
  if (it != dbl_t_.end()) return it->second;

  const double h = grid_.h_values(member)[0];
  const double t = static_cast<double>(ks_.b);
  auto [lo, hi] = model_.support(0);
  auto inner = [&](double z) {
    std::vector<double> knots = t_knots_;
    for (double kink : model_.axis_kinks(0)) {
      double u = (kink - z) / h;
      if (u > -t && u < t) knots.push_back(u);
    }
    auto g = [&](double u) { return ck_.t_profile(u) * model_.marginal_pdf(0, z + h * u); };
    return integrate_1d(g, -t, t, knots, opt_);
  };
  auto outer = [&](double z) { return model_.marginal_pdf(0, z) * inner(z); };
  double value = integrate_1d(outer, lo, hi, outer_knots(0, h), opt_);
  dbl_t_.emplace(member, value);
  return value;
}

double OracleCalc::expected_n(int member) { return l2_sq_ - bias_norm_sq(member); }

double OracleCalc::b_field_at(int axis, double a, const std::vector<double>& x) const {
  if (!(a > 0.0)) throw std::domain_error("step size a must be positive");
  const double half = 0.5 * static_cast<double>(ks_.b);
  std::vector<double> knots;
  for (int k = -ks_.b; k <= ks_.b; ++k) knots.push_back(0.5 * k);
  for (double kink : model_.axis_kinks(axis)) {
    double u = (kink - x[axis]) / a;
    if (u > -half && u < half) knots.push_back(u);
  }
  auto g = [&](double u) {
    std::vector<double> shifted = x;
    shifted[axis] += u * a;
    return ck_.kappa_at(u) * model_.pdf(shifted);
  };
  return integrate_1d(g, -half, half, knots, opt_) - model_.pdf(x);
}

double OracleCalc::b_norm_1d(int axis, double a) {
  const double half = 0.5 * static_cast<double>(ks_.b);
  auto [lo, hi] = model_.support(axis);
  auto b_field = [&](double x) {
    std::vector<double> knots;
    for (int k = -ks_.b; k <= ks_.b; ++k) knots.push_back(0.5 * k);
    for (double kink : model_.axis_kinks(axis)) {
      double u = (kink - x) / a;
      if (u > -half && u < half) knots.push_back(u);
    }
    auto g = [&](double u) { return ck_.kappa_at(u) * model_.marginal_pdf(axis, x + a * u); };
    return integrate_1d(g, -half, half, knots, opt_) - model_.marginal_pdf(axis, x);
  };
  std::vector<double> knots = model_.axis_kinks(axis);
  for (double kink : model_.axis_kinks(axis))
    for (int k = -ks_.b; k <= ks_.b; ++k) knots.push_back(kink + a * 0.5 * k);
  auto sq = [&](double x) {
    double v = b_field(x);
    return v * v;
  };
  double int_sq = integrate_1d(sq, lo - half * a, hi + half * a, knots, opt_);

  double other = 1.0;
  for (int j = 0; j < model_.dim(); ++j)
    if (j != axis) other *= model_.axis_l2_sq(j);
  return std::sqrt(other * int_sq);
}

double OracleCalc::b_norm(int axis, int quarter_exp) {
  auto key = std::make_pair(axis, quarter_exp);
  auto it = b_norms_.find(key);
  if (it != b_norms_.end()) return it->second;
  double a = std::exp(-0.25 * static_cast<double>(quarter_exp));
  double v = b_norm_1d(axis, a);
  b_norms_.emplace(key, v);
  return v;
}

double OracleCalc::frak_b(int member) {
  // sup over a <= h_l on the geometric grid a = h_l e^{-i/4}, i = 0..8.
  double best = 0.0;
  for (int axis = 0; axis < grid_.d; ++axis) {
    int k = grid_.members[member].k[axis];
    for (int i = 0; i <= 8; ++i) best = std::max(best, b_norm(axis, 4 * k + i));
  }
  return best;
}

double OracleCalc::j_pop(int member) {
  auto it = j_.find(member);
  if (it != j_.end()) return it->second;
  const auto h = grid_.h_values(member);
  const double t = static_cast<double>(ks_.b);
  double value = 0.0;
  if (grid_.d == 1) {
    auto [lo, hi] = model_.support(0);
    auto inner = [&](double z) {
      std::vector<double> knots = t_knots_;
      for (double kink : model_.axis_kinks(0)) {
        double u = (kink - z) / h[0];
        if (u > -t && u < t) knots.push_back(u);
      }
      auto g = [&](double u) {
        return std::abs(ck_.t_profile(u)) * model_.marginal_pdf(0, z + h[0] * u);
      };
      return integrate_1d(g, -t, t, knots, opt_);
    };
    auto outer = [&](double z) { return model_.marginal_pdf(0, z) * inner(z); };
    value = integrate_1d(outer, lo, hi, outer_knots(0, h[0]), opt_);
  } else if (grid_.d == 2) {
    QuadratureOptions rough = opt_;
    rough.rel_tol = std::max(opt_.rel_tol, 1e-5);
    auto [lo0, hi0] = model_.support(0);
    auto [lo1, hi1] = model_.support(1);
    auto inner = [&](double z0, double z1) {
      auto g = [&](double u0, double u1) {
        double tv = 2.0 * ck_.kappa_at(u0) * ck_.kappa_at(u1) -
                    ck_.autocorr_at(u0) * ck_.autocorr_at(u1);
        return std::abs(tv) * model_.marginal_pdf(0, z0 + h[0] * u0) *
               model_.marginal_pdf(1, z1 + h[1] * u1);
      };
      return integrate_2d(g, -t, t, -t, t, t_knots_, t_knots_, rough);
    };
    auto outer = [&](double z0, double z1) {
      double fz = model_.marginal_pdf(0, z0) * model_.marginal_pdf(1, z1);
      if (fz == 0.0) return 0.0;
      return fz * inner(z0, z1);
    };
    value = integrate_2d(outer, lo0, hi0, lo1, hi1, outer_knots(0, h[0]), outer_knots(1, h[1]),
                         rough);
  } else {
    throw std::invalid_argument("J quadrature supports d <= 2");
  }
  j_.emplace(member, value);
  return value;
}

double OracleCalc::w_pop(int member) {
  auto it = w_.find(member);
  if (it != w_.end()) return it->second;
  const auto h = grid_.h_values(member);
  const double t = static_cast<double>(ks_.b);
  double value = 0.0;

  auto g_at = [&](const std::vector<double>& x) {
    double prod = 1.0;
    if (grid_.d == 1) {
      std::vector<double> knots = t_knots_;
      for (double kink : model_.axis_kinks(0)) {
        double u = (kink - x[0]) / h[0];
        if (u > -t && u < t) knots.push_back(u);
      }
      auto g = [&](double u) {
        return std::abs(ck_.t_profile(u)) * model_.marginal_pdf(0, x[0] + h[0] * u);
      };
      prod = integrate_1d(g, -t, t, knots, opt_);
    } else {
      QuadratureOptions rough = opt_;
      rough.rel_tol = std::max(opt_.rel_tol, 1e-5);
      auto g = [&](double u0, double u1) {
        double tv = 2.0 * ck_.kappa_at(u0) * ck_.kappa_at(u1) -
                    ck_.autocorr_at(u0) * ck_.autocorr_at(u1);
        return std::abs(tv) * model_.marginal_pdf(0, x[0] + h[0] * u0) *
               model_.marginal_pdf(1, x[1] + h[1] * u1);
      };
      prod = integrate_2d(g, -t, t, -t, t, t_knots_, t_knots_, rough);
    }
    return prod;
  };

  if (grid_.d == 1) {
    auto [lo, hi] = model_.support(0);
    value = maximize_1d([&](double x) { return g_at({x}); }, lo - t * h[0], hi + t * h[0]);
  } else if (grid_.d == 2) {
    auto [lo0, hi0] = model_.support(0);
    auto [lo1, hi1] = model_.support(1);
    double a0 = lo0 - t * h[0], b0 = hi0 + t * h[0];
    double a1 = lo1 - t * h[1], b1 = hi1 + t * h[1];
    const int n = 65;
    double best = 0.0, bx = a0, by = a1;
    for (int i = 0; i <= n; ++i)
      for (int jj = 0; jj <= n; ++jj) {
        double x = a0 + (b0 - a0) * i / n, y = a1 + (b1 - a1) * jj / n;
        double v = g_at({x, y});
        if (v > best) {
          best = v;
          bx = x;
          by = y;
        }
      }
    double sx = (b0 - a0) / n, sy = (b1 - a1) / n;
    for (int round = 0; round < 3; ++round) {
      double lo_x = bx - sx, hi_x = bx + sx, lo_y = by - sy, hi_y = by + sy;
      for (int i = 0; i <= 8; ++i)
        for (int jj = 0; jj <= 8; ++jj) {
          double x = lo_x + (hi_x - lo_x) * i / 8, y = lo_y + (hi_y - lo_y) * jj / 8;
          double v = g_at({x, y});
          if (v > best) {
            best = v;
            bx = x;
            by = y;
          }
        }
      sx /= 4.0;
      sy /= 4.0;
    }
    value = best;
  } else {
    throw std::invalid_argument("W quadrature supports d <= 2");
  }
  w_.emplace(member, value);
  return value;
}

double OracleCalc::wcal_pop(int member) {
  auto it = wcal_.find(member);
  if (it != wcal_.end()) return it->second;
  const auto h = grid_.h_values(member);
  const double t = static_cast<double>(ks_.b);
  const auto& gm = grid_.members[member];

  // Product density: sup over k in Z^d of the box mass factorizes per axis.
  double sup_prob = 1.0;
  for (int axis = 0; axis < grid_.d; ++axis) {
    const double w = t * h[axis];
    auto [lo, hi] = model_.support(axis);
    auto window = [&](std::int64_t k) {
      return model_.marginal_cdf(axis, (static_cast<double>(k) + 2.0) * w) -
             model_.marginal_cdf(axis, (static_cast<double>(k) - 1.0) * w);
    };
    auto k_lo = static_cast<std::int64_t>(std::floor(lo / w)) - 2;
    auto k_hi = static_cast<std::int64_t>(std::ceil(hi / w)) + 2;
    double best = 0.0;
    if (k_hi - k_lo <= 65536) {
      for (auto k = k_lo; k <= k_hi; ++k) best = std::max(best, window(k));
    } else {
      // Anchor the lattice search at the continuous window-probability
      // maximum (the window is tiny relative to the support here).
      auto cont = [&](double x) {
        return model_.marginal_cdf(axis, x + 3.0 * w) - model_.marginal_cdf(axis, x);
      };
      Max1D mx = maximize_1d_arg(cont, lo - 3.0 * w, hi);
      auto k0 = static_cast<std::int64_t>(std::floor(mx.x / w)) + 1;
      for (auto k = k0 - 4; k <= k0 + 4; ++k) best = std::max(best, window(k));
    }
    sup_prob *= best;
  }

  const double m = static_cast<double>(grid_.m);
  double value = std::max(256.0 * s_ * grid_.log_m / m, sup_prob) / gm.volume;
  wcal_.emplace(member, value);
  return value;
}

double OracleCalc::wstar_pop(int member) {
  const auto& gm = grid_.members[member];
  if (gm.small) return 1.0 / grid_.alpha;
  return wcal_pop(member);
}

double OracleCalc::kappa_pop(int member) const {
  const auto& gm = grid_.members[member];
  if (gm.small) return 1.0 / grid_.alpha;
  const double m = static_cast<double>(grid_.m);
  return std::max(256.0 * s_ * grid_.log_m / (m * gm.volume), sup_norm_);
}

double OracleCalc::u_det(int member) {
  const auto& gm = grid_.members[member];
  const double m = static_cast<double>(grid_.m);
  const double lm = grid_.log_m;
  const double m2v = m * m * gm.volume;
  const double J = j_pop(member), W = w_pop(member);
  return std::sqrt(16.0 * s_ * W * J * lm / m) + std::sqrt(16.0 * s_ * varpi_ * J * lm / m2v) +
         23.0 * s_ * W * lm / m + gm.upsilon * s_ * s_ * varpi_ * lm / m2v;
}

double OracleCalc::u_star(int member) {
  const auto& gm = grid_.members[member];
  const double m = static_cast<double>(grid_.m);
  const double lm = grid_.log_m;
  const double m2v = m * m * gm.volume;
  const double J = j_pop(member), Ws = wstar_pop(member);
  return std::sqrt(16.0 * s_ * varpi_ * Ws * J * lm / m) +
         std::sqrt(16.0 * s_ * varpi_ * J * lm / m2v) + 147.0 * s_ * varpi_ * Ws * lm / m +
         gm.upsilon * s_ * s_ * varpi_ * lm / m2v;
}

double OracleCalc::frak_u(int member) const {
  const auto& gm = grid_.members[member];
  const double m = static_cast<double>(grid_.m);
  const double lm = grid_.log_m;
  const double m2v = m * m * gm.volume;
  const double kap = kappa_pop(member);
  return std::sqrt(kap * l2_sq_ * lm / m) + std::sqrt(l2_sq_ * lm / m2v) + kap * lm / m +
         gm.upsilon * lm / m2v;
}

double OracleCalc::remainder() const {
  return std::pow(grid_.log_m, static_cast<double>(grid_.d) / (2.0 * q_)) /
         (static_cast<double>(grid_.m) * static_cast<double>(grid_.m));
}

double OracleCalc::o_star() {
  double best = std::numeric_limits<double>::infinity();
  const double norm = std::sqrt(l2_sq_);
  for (int i = 0; i < grid_.size(); ++i) {
    double fb = frak_b(i);
    best = std::min(best, fb * fb + norm * fb + frak_u(i));
  }
  return best + remainder();
}

double OracleCalc::o_full() {
  if (grid_.d != 1) throw std::invalid_argument("the full oracle risk is computed for d = 1");
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_.size(); ++i)
    best = std::min(best, bias_norm_sq(i) + bias_gap(i) + frak_u(i));
  return best + remainder();
}

OracleReport OracleCalc::report(bool full_fields) {
  OracleReport rep;
  rep.q = q_;
  rep.varpi = varpi_;
  rep.l2_sq = l2_sq_;
  rep.sup_norm = sup_norm_;
  rep.constants = oracle_constants(q_, varpi_, grid_.d);
  rep.remainder = remainder();
  rep.rows.resize(grid_.size());
  for (int i = 0; i < grid_.size(); ++i) {
    OracleRow& r = rep.rows[i];
    r.k = grid_.members[i].k;
    r.volume = grid_.members[i].volume;
    r.frak_b = frak_b(i);
    r.kappa = kappa_pop(i);
    r.frak_u = frak_u(i);
    if (grid_.d <= 2) {
      r.bias_sq = bias_norm_sq(i);
      r.w_cal = wcal_pop(i);
      r.w_star = wstar_pop(i);
    }
    if (full_fields) {
      r.bias_gap = bias_gap(i);
      r.j_pop = j_pop(i);
      r.w_pop = w_pop(i);
      r.u_det = u_det(i);
      r.u_star = u_star(i);
    }
  }
  rep.o_star = o_star();
  if (grid_.d == 1 && full_fields) rep.o_f = o_full();
  return rep;
}

}  // namespace l2est
