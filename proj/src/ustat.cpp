#include "l2est/ustat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

namespace l2est {

namespace {

struct Kahan {
  double sum = 0.0, comp = 0.0;
  inline void add(double v) {
    double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Cell index with x in (c*w, (c+1)*w].
inline std::int64_t upper_cell(double x, double w) {
  double v = x / w;
  auto c = static_cast<std::int64_t>(std::floor(v));
  if (static_cast<double>(c) == v) --c;
  return c;
}

using Cell = std::vector<std::int64_t>;

}  // namespace

SplitSample SplitSample::from_rows(const PointMatrix& all) {
  if (all.n == 0) throw std::invalid_argument("empty sample");
  if (all.n % 2 != 0)
    throw std::invalid_argument("sample size must be even (n = 2m); got n = " +
                                std::to_string(all.n));
  SplitSample s;
  s.m = all.n / 2;
  s.X.n = s.Y.n = s.m;
  s.X.d = s.Y.d = all.d;
  s.X.data.assign(all.data.begin(), all.data.begin() + s.m * all.d);
  s.Y.data.assign(all.data.begin() + s.m * all.d, all.data.end());
  return s;
}

SplitSample SplitSample::from_rows(std::vector<double> rows, std::size_t n, int d) {
  PointMatrix pm;
  pm.n = n;
  pm.d = d;
  pm.data = std::move(rows);
  return from_rows(pm);
}

PairSums compute_pair_sums(const SplitSample& s, const CompiledKernel& ck,
                           const std::vector<double>& h, PairPath path) {
  const int d = s.X.d;
  if (static_cast<int>(h.size()) != d) throw std::invalid_argument("bandwidth dimension mismatch");
  for (double hj : h)
    if (!(hj > 0.0)) throw std::domain_error("bandwidth coordinates must be positive");

  std::vector<double> inv_h(d);
  for (int j = 0; j < d; ++j) inv_h[j] = 1.0 / h[j];
  const double t = ck.t;

  Kahan sum_t, sum_abs;
  auto accumulate_pair = [&](const double* y, const double* x) {
    double kprod = 1.0, aprod = 1.0;
    for (int j = 0; j < d; ++j) {
      double u = (y[j] - x[j]) * inv_h[j];
      if (!(u > -t && u < t)) return;
      int c = ck.cell_of(u);
      kprod *= ck.kap[c];
      aprod *= ck.ac0[c] + ck.ac1[c] * u;
    }
    double v = 2.0 * kprod - aprod;
    sum_t.add(v);
    sum_abs.add(std::abs(v));
  };

  if (path == PairPath::Naive) {
    for (std::size_t i = 0; i < s.m; ++i)
      for (std::size_t j = 0; j < s.m; ++j) accumulate_pair(s.Y.row(i), s.X.row(j));
  } else {
    // Lattice of side t*h_j per axis; a qualifying pair differs by at most
    // one cell in each axis, and the in-support test above keeps the pruning
    // exact.
    std::vector<double> cell_w(d);
    for (int j = 0; j < d; ++j) cell_w[j] = t * h[j];
    std::map<Cell, std::vector<std::uint32_t>> bins;
    Cell c(d);
    for (std::size_t i = 0; i < s.m; ++i) {
      const double* x = s.X.row(i);
      for (int j = 0; j < d; ++j) c[j] = static_cast<std::int64_t>(std::floor(x[j] / cell_w[j]));
      bins[c].push_back(static_cast<std::uint32_t>(i));
    }
    int n_offsets = 1;
    for (int j = 0; j < d; ++j) n_offsets *= 3;
    Cell probe(d);
    for (std::size_t i = 0; i < s.m; ++i) {
      const double* y = s.Y.row(i);
      for (int j = 0; j < d; ++j) c[j] = static_cast<std::int64_t>(std::floor(y[j] / cell_w[j]));
      // Offsets walked in a fixed order so the summation order is a pure
      // function of the data.
      for (int off = 0; off < n_offsets; ++off) {
        int rem = off;
        for (int j = 0; j < d; ++j) {
          probe[j] = c[j] + (rem % 3) - 1;
          rem /= 3;
        }
        auto it = bins.find(probe);
        if (it == bins.end()) continue;
        for (std::uint32_t xi : it->second) accumulate_pair(y, s.X.row(xi));
      }
    }
  }

  double vol = 1.0;
  for (double hj : h) vol *= hj;
  double scale = 1.0 / (static_cast<double>(s.m) * static_cast<double>(s.m) * vol);
  return {sum_t.value() * scale, sum_abs.value() * scale};
}

double compute_N(const SplitSample& s, const CompiledKernel& ck, const std::vector<double>& h,
                 PairPath path) {
  return compute_pair_sums(s, ck, h, path).n_hat;
}

double compute_J(const SplitSample& s, const CompiledKernel& ck, const std::vector<double>& h,
                 PairPath path) {
  return compute_pair_sums(s, ck, h, path).j_hat;
}

std::size_t sliding_box_max(const PointMatrix& X, const std::vector<double>& h, double t) {
  const int d = X.d;
  std::map<Cell, std::size_t> counts;
  Cell c(d);
  for (std::size_t i = 0; i < X.n; ++i) {
    const double* x = X.row(i);
    for (int j = 0; j < d; ++j) c[j] = upper_cell(x[j] / h[j], t);
    ++counts[c];
  }

  // Scatter each occupied cell's count into the 3^d windows that contain it;
  // any window with positive count is anchored within one cell of an
  // occupied one, so the maximum over these accumulators is the global sup.
  int n_offsets = 1;
  for (int j = 0; j < d; ++j) n_offsets *= 3;
  std::map<Cell, std::size_t> windows;
  Cell anchor(d);
  for (const auto& [cell, cnt] : counts) {
    for (int off = 0; off < n_offsets; ++off) {
      int rem = off;
      for (int j = 0; j < d; ++j) {
        anchor[j] = cell[j] + (rem % 3) - 1;
        rem /= 3;
      }
      windows[anchor] += cnt;
    }
  }
  std::size_t best = 0;
  for (const auto& [k, v] : windows) best = std::max(best, v);
  return best;
}

std::size_t sliding_box_max_bruteforce(const PointMatrix& X, const std::vector<double>& h,
                                       double t) {
  const int d = X.d;
  if (X.n == 0) return 0;
  std::vector<Cell> cells(X.n, Cell(d));
  Cell lo(d), hi(d);
  for (std::size_t i = 0; i < X.n; ++i) {
    for (int j = 0; j < d; ++j) {
      cells[i][j] = upper_cell(X.row(i)[j] / h[j], t);
      if (i == 0) {
        lo[j] = hi[j] = cells[i][j];
      } else {
        lo[j] = std::min(lo[j], cells[i][j]);
        hi[j] = std::max(hi[j], cells[i][j]);
      }
    }
  }
  std::size_t best = 0;
  Cell k(d);
  std::function<void(int)> walk = [&](int axis) {
    if (axis == d) {
      std::size_t acc = 0;
      for (const auto& cc : cells) {
        bool in = true;
        for (int j = 0; j < d; ++j)
          if (cc[j] < k[j] - 1 || cc[j] > k[j] + 1) {
            in = false;
            break;
          }
        if (in) ++acc;
      }
      best = std::max(best, acc);
      return;
    }
    for (k[axis] = lo[axis] - 1; k[axis] <= hi[axis] + 1; ++k[axis]) walk(axis + 1);
  };
  walk(0);
  return best;
}

WStats compute_W(const PointMatrix& X, const std::vector<double>& h, double volume,
                 const BandwidthGrid& grid, double q, double t) {
  const double s = 12.0 * q + 2.0;
  const double m = static_cast<double>(grid.m);
  const double sup = static_cast<double>(sliding_box_max(X, h, t));
  WStats w;
  w.w_raw = std::max(256.0 * s * grid.log_m, sup) / (m * volume);
  const bool small = m * volume < grid.log_m;
  w.w_hat = small ? 1.0 / grid.alpha : w.w_raw;
  return w;
}

double compute_Ucal(double j_hat, double w_hat, double upsilon, double volume, int m, double q,
                    double varpi) {
  if (j_hat < 0.0 || w_hat < 0.0)
    throw std::logic_error("internal invariant violation: negative J or W statistic");
  const double s = 12.0 * q + 2.0;
  const double lm = std::log(static_cast<double>(m));
  const double md = static_cast<double>(m);
  const double m2v = md * md * volume;
  return std::sqrt(16.0 * s * varpi * w_hat * j_hat * lm / md) +
         std::sqrt(16.0 * s * varpi * j_hat * lm / m2v) +
         147.0 * s * varpi * w_hat * lm / md + s * s * varpi * upsilon * lm / m2v;
}

StatTable build_stat_table(const SplitSample& s, const BandwidthGrid& grid,
                           const CompiledKernel& ck, double q, double varpi, PairPath path) {
  if (static_cast<int>(s.m) != grid.m)
    throw std::invalid_argument("sample half-size does not match the grid");
  StatTable t;
  t.q = q;
  t.s = 12.0 * q + 2.0;
  t.varpi = varpi;
  t.rows.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const auto h = grid.h_values(i);
    const auto& gm = grid.members[i];
    PairSums ps = compute_pair_sums(s, ck, h, path);
    WStats w = compute_W(s.X, h, gm.volume, grid, q, ck.t);
    StatRow& row = t.rows[i];
    row.n_hat = ps.n_hat;
    row.j_hat = ps.j_hat;
    row.w_raw = w.w_raw;
    row.w_hat = w.w_hat;
    row.ucal = compute_Ucal(row.j_hat, row.w_hat, gm.upsilon, gm.volume, grid.m, q, varpi);
  }
  return t;
}

}  // namespace l2est
