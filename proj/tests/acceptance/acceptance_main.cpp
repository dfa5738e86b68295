// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run all criteria or a subset via --criterion K (repeatable).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "l2est/density.hpp"
#include "l2est/grid.hpp"
#include "l2est/harness.hpp"
#include "l2est/io.hpp"
#include "l2est/kernel.hpp"
#include "l2est/oracle.hpp"
#include "l2est/quadrature.hpp"
#include "l2est/rate.hpp"
#include "l2est/selector.hpp"
#include "l2est/ustat.hpp"

using namespace l2est;

namespace {

DensitySpec zoo_spec(const std::string& name, int d = 1) {
  DensitySpec spec;
  spec.name = name;
  spec.d = d;
  return spec;
}

// ---------------------------------------------------------------------------
// 1. Kernel exactness: rational unit integral for b in 2..8 and agreement of
//    the exact autocorrelation with pointwise numeric convolution.
bool criterion_1(std::string& detail) {
  for (int b = 2; b <= 8; ++b) {
    KernelSet ks = build_kernel(b);
    if (ks.kappa_integral != Rational(1)) {
      detail = "kernel integral differs from 1 at b=" + std::to_string(b);
      return false;
    }
  }
  double worst = 0.0;
  for (int b : {2, 5, 8}) {
    KernelSet ks = build_kernel(b);
    CompiledKernel ck = compile_kernel(ks);
    const double t = static_cast<double>(b);
    for (int i = 0; i < 1000; ++i) {
      double x = -t + 2.0 * t * (i + 0.5) / 1000.0;
      std::vector<double> knots;
      for (int k = -b; k <= b; ++k) {
        knots.push_back(0.5 * k);
        knots.push_back(0.5 * k - x);
      }
      auto integrand = [&](double v) { return ck.kappa_at(v) * ck.kappa_at(x + v); };
      double numeric = integrate_1d(integrand, -0.5 * t, 0.5 * t, knots);
      worst = std::max(worst, std::abs(numeric - ck.autocorr_at(x)));
    }
  }
  std::ostringstream os;
  os << "max |A - numeric convolution| = " << worst;
  detail = os.str();
  return worst < 1e-10;
}

// ---------------------------------------------------------------------------
// 2. Representation identity at m = 1000 for gaussian and uniform, d = 1.
bool criterion_2(std::string& detail) {
  KernelSet ks = build_kernel(2);
  BandwidthGrid grid = build_grid(1000, 1);
  double worst = 0.0;
  for (const char* name : {"gaussian_product", "uniform_cube"}) {
    DensityModel f = make_density(zoo_spec(name));
    OracleCalc calc(f, ks, grid, 2.0);
    for (int i = 0; i < grid.size(); ++i) {
      double resid =
          std::abs(calc.double_t_integral(i) + calc.bias_norm_sq(i) - f.l2_sq_exact());
      worst = std::max(worst, resid);
    }
  }
  std::ostringstream os;
  os << "max |∫∫T_h ff + ||B||² − ||f||²| over members = " << worst;
  detail = os.str();
  return worst <= 1e-4;
}

// ---------------------------------------------------------------------------
// 3. Unbiasedness of the signed statistic against the quadrature expectation.
bool criterion_3(std::string& detail) {
  const int m = 500, R = 2000;
  DensityModel f = make_density(zoo_spec("gaussian_product"));
  KernelSet ks = build_kernel(2);
  CompiledKernel ck = compile_kernel(ks);
  BandwidthGrid grid = build_grid(m, 1);
  int member = grid.index_of({3});
  if (member < 0) {
    detail = "h = e^-3 not in the m=500 grid";
    return false;
  }
  OracleCalc calc(f, ks, grid, 2.0);
  double expectation = calc.double_t_integral(member);

  const auto h = grid.h_values(member);
  double sum = 0.0, sumsq = 0.0;
  for (int rep = 0; rep < R; ++rep) {
    Rng rng = replication_rng(20240501, m, rep);
    auto rows = f.sample(rng, 2 * m);
    SplitSample s = SplitSample::from_rows(std::move(rows), 2 * m, 1);
    double n_hat = compute_N(s, ck, h);
    sum += n_hat;
    sumsq += n_hat * n_hat;
  }
  double mean = sum / R;
  double se = std::sqrt((sumsq / R - mean * mean) / (R - 1));
  std::ostringstream os;
  os << "|mc mean - quadrature| = " << std::abs(mean - expectation) << ", 3se = " << 3.0 * se;
  detail = os.str();
  return std::abs(mean - expectation) <= 3.0 * se;
}

// ---------------------------------------------------------------------------
// 4. Fast paths equal their reference implementations.
bool criterion_4(std::string& detail) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  std::uniform_int_distribution<int> msize(5, 500);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_int_distribution<int> lev(1, 5);
  KernelSet ks = build_kernel(2);
  CompiledKernel ck = compile_kernel(ks);
  double worst_rel = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    int d = dim(rng), m = msize(rng);
    std::vector<double> rows(2 * m * d);
    for (auto& v : rows) v = u(rng);
    SplitSample s = SplitSample::from_rows(std::move(rows), 2 * m, d);
    std::vector<double> h(d);
    for (auto& hv : h) hv = std::exp(-lev(rng));

    PairSums naive = compute_pair_sums(s, ck, h, PairPath::Naive);
    PairSums fast = compute_pair_sums(s, ck, h, PairPath::Binned);
    double scale_n = std::max({std::abs(naive.n_hat), std::abs(naive.j_hat), 1e-300});
    worst_rel = std::max(worst_rel, std::abs(fast.n_hat - naive.n_hat) / scale_n);
    if (naive.j_hat > 0)
      worst_rel = std::max(worst_rel, std::abs(fast.j_hat - naive.j_hat) / naive.j_hat);

    if (sliding_box_max(s.X, h, ck.t) != sliding_box_max_bruteforce(s.X, h, ck.t)) {
      detail = "sliding-box window maximum differs from brute force";
      return false;
    }
  }
  std::ostringstream os;
  os << "max relative gap binned vs naive = " << worst_rel;
  detail = os.str();
  return worst_rel <= 1e-12;
}

struct ConcentrationResult {
  double freq_th3 = 0.0;
  double freq_th4_upper = 0.0;
  double freq_th4_lower = 0.0;
};

ConcentrationResult concentration_run() {
  const int m = 1000, R = 500;
  const double q = 1.0;
  DensityModel f = make_density(zoo_spec("uniform_cube"));
  KernelSet ks = build_kernel(2);
  CompiledKernel ck = compile_kernel(ks);
  BandwidthGrid grid = build_grid(m, 1);
  OracleCalc calc(f, ks, grid, q);
  double varpi = varpi_T(ks, 1);

  std::vector<double> expected(grid.size()), ustar(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    expected[i] = calc.expected_n(i);
    ustar[i] = calc.u_star(i);
  }

  ConcentrationResult out;
  for (int rep = 0; rep < R; ++rep) {
    Rng rng = replication_rng(777, m, rep);
    auto rows = f.sample(rng, 2 * m);
    SplitSample s = SplitSample::from_rows(std::move(rows), 2 * m, 1);
    StatTable table = build_stat_table(s, grid, ck, q, varpi);
    bool th3 = false, th4a = false, th4b = false;
    for (int i = 0; i < grid.size(); ++i) {
      if (std::abs(table.rows[i].n_hat - expected[i]) > ustar[i]) th3 = true;
      if (table.rows[i].ucal > 2.0 * ustar[i]) th4a = true;
      if (ustar[i] > 9.0 * table.rows[i].ucal) th4b = true;
    }
    out.freq_th3 += th3 ? 1.0 / R : 0.0;
    out.freq_th4_upper += th4a ? 1.0 / R : 0.0;
    out.freq_th4_lower += th4b ? 1.0 / R : 0.0;
  }
  return out;
}

// 5. Nonrandom upper-function surrogate (uniform, q=1, m=1000, R=500).
bool criterion_5(std::string& detail) {
  ConcentrationResult r = concentration_run();
  std::ostringstream os;
  os << "exceedance frequency = " << r.freq_th3;
  detail = os.str();
  return r.freq_th3 <= 0.01;
}

// 6. Random upper-function surrogate: two-sided envelope comparison.
bool criterion_6(std::string& detail) {
  ConcentrationResult r = concentration_run();
  std::ostringstream os;
  os << "freq{U > 2U*} = " << r.freq_th4_upper << ", freq{U* > 9U} = " << r.freq_th4_lower;
  detail = os.str();
  return r.freq_th4_upper <= 0.01 && r.freq_th4_lower <= 0.01;
}

// ---------------------------------------------------------------------------
// 7. Parametric-regime rate of the combined estimator (gaussian, q=2).
bool criterion_7(std::string& detail) {
  nlohmann::json j = {{"kind", "combiner"},
                      {"density", {{"name", "gaussian_product"}, {"d", 1}}},
                      {"m", {250, 500, 1000, 2000, 4000}},
                      {"replications", 200},
                      {"q", 2.0},
                      {"b", 2},
                      {"seed", 31}};
  ExperimentConfig cfg = config_from_json(j);
  Report rep = run_combiner(cfg);
  double slope = rep.get("gaussian_product_d1", 0, "slope_combined");
  std::ostringstream os;
  os << "ln-risk slope = " << slope << " (target <= -0.35)";
  detail = os.str();
  return slope <= -0.35;
}

// 8. Nonparametric trend for the selected estimator (laplace and mixture).
bool criterion_8(std::string& detail) {
  bool ok = true;
  std::ostringstream os;
  for (const char* name : {"laplace_product", "gaussian_mixture"}) {
    nlohmann::json j = {{"kind", "risk"},
                        {"density", {{"name", name}, {"d", 1}}},
                        {"m", {250, 500, 1000, 2000, 4000}},
                        {"replications", 200},
                        {"q", 2.0},
                        {"b", 2},
                        {"seed", 47}};
    ExperimentConfig cfg = config_from_json(j);
    Report rep = run_risk(cfg);
    double slope = rep.get(std::string(name) + "_d1", 0, "slope_selected");
    os << name << " slope = " << slope << "; ";
    ok = ok && slope <= -0.25;
  }
  os << "(target <= -0.25)";
  detail = os.str();
  return ok;
}

// ---------------------------------------------------------------------------
// 9. Oracle-inequality ratio across the default suite. The seeded run is
//    deterministic; its ratios are frozen in oracle_ratio_fixture.json and
//    compared on every run (the file is created when absent).
bool criterion_9(std::string& detail) {
  nlohmann::json densities = nlohmann::json::array();
  for (const char* name :
       {"uniform_cube", "gaussian_product", "laplace_product", "gaussian_mixture"})
    for (int d : {1, 2}) densities.push_back({{"name", name}, {"d", d}});
  nlohmann::json j = {{"kind", "oracle_ratio"}, {"densities", densities},
                      {"m", {250, 1000}},      {"replications", 64},
                      {"q", 2.0},              {"b", 2},
                      {"seed", 101}};
  ExperimentConfig cfg = config_from_json(j);
  Report rep = run_oracle_ratio(cfg);

  // Stability of the c1 stand-in: the ratio must vary by at most a factor 10
  // over m for each suite entry; the largest ratio is the reported constant.
  double worst_spread = 0.0;
  for (const auto& row : rep.rows)
    if (row.metric == "ratio_spread_over_m") worst_spread = std::max(worst_spread, row.value);

  nlohmann::ordered_json ratios;
  for (const auto& row : rep.rows)
    if (row.metric == "ratio") ratios[row.density][std::to_string(row.m)] = row.value;

  std::ostringstream os;
  os << "max per-density ratio spread over m = " << worst_spread
     << "; c1 stand-in (max ratio) = " << rep.get("suite", 0, "ratio_max")
     << "; joint suite spread = " << rep.get("suite", 0, "ratio_spread");

#ifdef L2EST_SOURCE_DIR
  std::filesystem::path fixture =
      std::filesystem::path(L2EST_SOURCE_DIR) / "tests" / "acceptance" /
      "oracle_ratio_fixture.json";
  if (!std::filesystem::exists(fixture)) {
    std::ofstream out(fixture);
    out << ratios.dump(2) << '\n';
    os << "; fixture recorded at " << fixture.string();
  } else {
    std::ifstream in(fixture);
    auto frozen = nlohmann::ordered_json::parse(in);
    double worst = 0.0;
    for (auto& [density, by_m] : frozen.items())
      for (auto& [m, v] : by_m.items()) {
        double got = ratios.at(density).at(m).get<double>();
        double want = v.get<double>();
        worst = std::max(worst, std::abs(got - want) / std::abs(want));
      }
    os << "; max drift vs fixture = " << worst;
    if (worst > 1e-6) {
      detail = os.str();
      return false;
    }
  }
#endif
  detail = os.str();
  return worst_spread <= 10.0;
}

// ---------------------------------------------------------------------------
// 10. Rate-formula cross-checks on random parameter draws.
bool criterion_10(std::string& detail) {
  std::mt19937_64 rng(6021023);
  std::uniform_real_distribution<double> ub(0.05, 6.0);
  std::uniform_real_distribution<double> ur_hi(2.0, 9.0);
  std::uniform_real_distribution<double> ur_lo(1.0, 2.0);
  std::uniform_int_distribution<int> ud(1, 4);
  std::uniform_int_distribution<int> coin(0, 3);
  double worst = 0.0;
  for (int it = 0; it < 100; ++it) {
    int d = ud(rng);
    double beta = ub(rng);
    bool upper = coin(rng) != 0;
    double r = coin(rng) == 0 ? std::numeric_limits<double>::infinity()
                              : (upper ? ur_hi(rng) : ur_lo(rng));
    double iso = rate_exponent_isotropic(beta, r, d);
    double aniso = rate_exponent(SmoothnessParams::isotropic(beta, r, d));
    if (iso != aniso) {
      detail = "anisotropic and isotropic exponents differ on an equal-coordinate draw";
      return false;
    }
    SmoothnessParams p = SmoothnessParams::isotropic(beta, r, d);
    double z = z_exponent(p);
    worst = std::max(worst, std::abs(1.0 + upsilon_inverse(p) - 1.0 / z));
  }
  std::ostringstream os;
  os << "exponent formulas identical; max |1 + 1/υ − 1/z| = " << worst;
  detail = os.str();
  return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// 11. Combiner rule boundary behaviour.
bool criterion_11(std::string& detail) {
  for (int m : {21, 100, 1000, 50000}) {
    // difference exactly at the threshold: est_iso = 0 makes |est_star - 0|
    // reproduce tau bit-for-bit
    double tau = combiner_threshold(m);
    if (combiner_branch(tau, 0.0, m, -1.0) != CombinerBranch::Isotropic) {
      detail = "threshold case not inclusive at m=" + std::to_string(m);
      return false;
    }
    double above = 2.0001 * std::log(static_cast<double>(m)) /
                   std::sqrt(static_cast<double>(m));
    if (combiner_branch(above, 0.0, m, -1.0) != CombinerBranch::Selected) {
      detail = "above-threshold case not selecting h* at m=" + std::to_string(m);
      return false;
    }
  }
  detail = "inclusive at the threshold, strict above it";
  return true;
}

// ---------------------------------------------------------------------------
// 12. Byte-identical reports across worker counts.
bool criterion_12(std::string& detail) {
  nlohmann::json j = {{"kind", "risk"},
                      {"density", {{"name", "gaussian_product"}, {"d", 1}}},
                      {"m", {50, 100}},
                      {"replications", 16},
                      {"q", 2.0},
                      {"b", 2},
                      {"seed", 12}};
  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() / "l2est_acceptance_repro";
  fs::remove_all(base);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  std::string ref_csv, ref_json;
  for (int workers : {1, 2, 8}) {
    ExperimentConfig cfg = config_from_json(j);
    cfg.workers = workers;
    Report rep = run_risk(cfg);
    fs::path dir = base / std::to_string(workers);
    write_report(rep, dir.string(), false);
    std::string csv = slurp(dir / "report.csv");
    std::string js = slurp(dir / "report.json");
    if (workers == 1) {
      ref_csv = csv;
      ref_json = js;
    } else if (csv != ref_csv || js != ref_json) {
      detail = "reports differ at workers=" + std::to_string(workers);
      return false;
    }
  }
  detail = "report.csv and report.json byte-identical for workers in {1, 2, 8}";
  return !ref_csv.empty();
}

struct Criterion {
  int id;
  const char* name;
  std::function<bool(std::string&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) wanted.push_back(std::atoi(argv[++i]));
  }

  const std::vector<Criterion> criteria = {
      {1, "kernel exactness", criterion_1},
      {2, "representation identity", criterion_2},
      {3, "unbiasedness of the signed statistic", criterion_3},
      {4, "fast paths equal reference paths", criterion_4},
      {5, "nonrandom upper-function exceedance", criterion_5},
      {6, "random upper-function envelopes", criterion_6},
      {7, "parametric-regime rate (combined)", criterion_7},
      {8, "nonparametric trend (selected)", criterion_8},
      {9, "oracle-inequality ratio", criterion_9},
      {10, "rate-formula cross-checks", criterion_10},
      {11, "combiner boundary rule", criterion_11},
      {12, "reproducibility across workers", criterion_12},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end())
      continue;
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::printf("[%s] criterion %2d: %s - %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                detail.c_str(), dt / 1000.0);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
