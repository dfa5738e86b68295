#include "l2est/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace l2est {

double alpha_m(int m) {
  if (m < 21)
    throw std::invalid_argument(
        "unsupported sample size: need m >= 21 so that 1/ln(m) <= 1/3");
  return 1.0 / std::log(static_cast<double>(m));
}

double upsilon_value(double volume, int m) {
  const double lm = std::log(static_cast<double>(m));
  const double a = 1.0 / lm;
  const double mv = static_cast<double>(m) * volume;
  if (mv > a * a) return 10.0 * lm;
  return 17.0 * lm / std::abs(std::log(mv));
}

std::uint64_t BandwidthGrid::key(const std::vector<int>& k) {
  std::uint64_t out = 0;
  for (int v : k) out = out * 1000003u + static_cast<std::uint64_t>(v + 1);
  return out;
}

void BandwidthGrid::rebuild_index() {
  index_.clear();
  index_.reserve(members.size() * 2);
  for (int i = 0; i < size(); ++i) index_.emplace(key(members[i].k), i);
}

int BandwidthGrid::index_of(const std::vector<int>& k) const {
  auto it = index_.find(key(k));
  if (it == index_.end()) return -1;
  // Guard against hash collisions.
  if (members[it->second].k != k) {
    for (int i = 0; i < size(); ++i)
      if (members[i].k == k) return i;
    return -1;
  }
  return it->second;
}

int BandwidthGrid::join(int i, int j) const {
  std::vector<int> k(d);
  for (int a = 0; a < d; ++a) k[a] = std::min(members[i].k[a], members[j].k[a]);
  int idx = index_of(k);
  if (idx < 0) throw std::logic_error("grid closure violated");
  return idx;
}

std::vector<double> BandwidthGrid::h_values(int i) const {
  std::vector<double> h(d);
  for (int a = 0; a < d; ++a) h[a] = std::exp(static_cast<double>(-members[i].k[a]));
  return h;
}

BandwidthGrid build_grid(int m, int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  BandwidthGrid g;
  g.m = m;
  g.d = d;
  g.alpha = alpha_m(m);
  g.log_m = std::log(static_cast<double>(m));

  // Z_m = {e^{-1},...,e^{-(floor(2 ln m)-1)}} ∪ {e^{-2 floor(ln m)}}, as a set.
  const int top = static_cast<int>(std::floor(2.0 * g.log_m)) - 1;
  const int extra = 2 * static_cast<int>(std::floor(g.log_m));
  for (int k = 1; k <= top; ++k) g.level_exps.push_back(k);
  if (std::find(g.level_exps.begin(), g.level_exps.end(), extra) == g.level_exps.end())
    g.level_exps.push_back(extra);
  std::sort(g.level_exps.begin(), g.level_exps.end());

  const double m2 = static_cast<double>(m) * static_cast<double>(m);
  const double a2 = g.alpha * g.alpha;

  std::vector<int> k(d);
  // Exponent-sum bound keeps the enumeration linear in the output size.
  const double max_sum = 2.0 * g.log_m - std::log(g.log_m);
  std::function<void(int, int)> emit = [&](int axis, int partial_sum) {
    if (partial_sum > max_sum + 1.0) return;
    if (axis == d) {
      double vol = std::exp(static_cast<double>(-partial_sum));
      if (m2 * vol < g.log_m) return;
      GridMember gm;
      gm.k = k;
      gm.volume = vol;
      double mv = static_cast<double>(m) * vol;
      gm.small = mv < g.log_m;
      gm.star = mv <= a2;
      gm.upsilon = upsilon_value(vol, m);
      g.members.push_back(std::move(gm));
      return;
    }
    for (int lev : g.level_exps) {
      k[axis] = lev;
      emit(axis + 1, partial_sum + lev);
    }
  };
  emit(0, 0);

  if (g.members.empty()) throw EmptyGridError("empty bandwidth grid for m=" + std::to_string(m) +
                                              ", d=" + std::to_string(d));
  std::sort(g.members.begin(), g.members.end(),
            [](const GridMember& a, const GridMember& b) { return a.k < b.k; });
  g.rebuild_index();
  return g;
}

}  // namespace l2est
