#include "l2est/selector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace l2est {

std::vector<double> ucal_hat_all(const StatTable& table, const BandwidthGrid& grid) {
  const int n = grid.size();
  std::vector<double> out(n, 0.0);
  for (int h = 0; h < n; ++h) {
    double best = -std::numeric_limits<double>::infinity();
    for (int w = 0; w < n; ++w) best = std::max(best, table.rows[grid.join(h, w)].ucal);
    out[h] = best;
  }
  return out;
}

double ucal_hat(int h_index, const StatTable& table, const BandwidthGrid& grid) {
  double best = -std::numeric_limits<double>::infinity();
  for (int w = 0; w < grid.size(); ++w)
    best = std::max(best, table.rows[grid.join(h_index, w)].ucal);
  return best;
}

std::vector<double> r_hat_all(const StatTable& table, const BandwidthGrid& grid,
                              const std::vector<double>& uh) {
  const int n = grid.size();
  std::vector<double> out(n, 0.0);
  for (int h = 0; h < n; ++h) {
    double best = 0.0;
    for (int w = 0; w < n; ++w) {
      double gap = std::abs(table.rows[grid.join(h, w)].n_hat - table.rows[w].n_hat);
      best = std::max(best, gap - 18.0 * uh[w]);
    }
    out[h] = std::max(best, 0.0);
  }
  return out;
}

double r_hat(int h_index, const StatTable& table, const BandwidthGrid& grid) {
  auto uh = ucal_hat_all(table, grid);
  double best = 0.0;
  for (int w = 0; w < grid.size(); ++w) {
    double gap = std::abs(table.rows[grid.join(h_index, w)].n_hat - table.rows[w].n_hat);
    best = std::max(best, gap - 18.0 * uh[w]);
  }
  return std::max(best, 0.0);
}

SelectionResult select(const StatTable& table, const BandwidthGrid& grid) {
  if (grid.size() == 0) throw EmptyGridError("select: empty grid");
  if (static_cast<int>(table.rows.size()) != grid.size())
    throw std::invalid_argument("select: table/grid size mismatch");

  SelectionResult res;
  res.ucal_hat = ucal_hat_all(table, grid);
  res.r_hat = r_hat_all(table, grid, res.ucal_hat);
  res.objective.resize(grid.size());
  for (int h = 0; h < grid.size(); ++h)
    res.objective[h] = res.r_hat[h] + 18.0 * res.ucal_hat[h];

  double best = *std::min_element(res.objective.begin(), res.objective.end());
  for (int h = 0; h < grid.size(); ++h)
    if (res.objective[h] == best) res.ties.push_back(h);

  // Prefer the larger volume, then the lexicographically larger bandwidth
  // (i.e. smaller exponent vector).
  int pick = res.ties.front();
  for (int h : res.ties) {
    if (grid.members[h].volume > grid.members[pick].volume ||
        (grid.members[h].volume == grid.members[pick].volume &&
         grid.members[h].k < grid.members[pick].k))
      pick = h;
  }
  res.h_star = pick;
  res.h_star_exps = grid.members[pick].k;
  res.n_at_star = table.rows[pick].n_hat;
  res.estimate = std::sqrt(std::abs(res.n_at_star));
  return res;
}

double combiner_threshold(int m) {
  return 2.0 * std::log(static_cast<double>(m)) / std::sqrt(static_cast<double>(m));
}

CombinerBranch combiner_branch(double est_star, double est_iso, int m, double threshold) {
  double tau = threshold < 0.0 ? combiner_threshold(m) : threshold;
  return std::abs(est_star - est_iso) <= tau ? CombinerBranch::Isotropic
                                             : CombinerBranch::Selected;
}

CombineResult isotropic_combine(const SplitSample& sample, const BandwidthGrid& grid,
                                const StatTable& table, const CompiledKernel& ck,
                                double threshold_override) {
  CombineResult out;
  out.selection = select(table, grid);
  out.est_star = out.selection.estimate;

  const double h_iso = std::pow(static_cast<double>(grid.m), -1.0 / grid.d);
  std::vector<double> h(grid.d, h_iso);
  out.n_iso = compute_N(sample, ck, h, PairPath::Binned);
  out.est_iso = std::sqrt(std::abs(out.n_iso));

  out.branch = combiner_branch(out.est_star, out.est_iso, grid.m, threshold_override);
  out.estimate = out.branch == CombinerBranch::Isotropic ? out.est_iso : out.est_star;
  return out;
}

}  // namespace l2est
