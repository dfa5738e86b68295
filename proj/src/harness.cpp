#include "l2est/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <thread>

#include "l2est/io.hpp"
#include "l2est/oracle.hpp"
#include "l2est/rate.hpp"
#include "l2est/ustat.hpp"

namespace l2est {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

DensitySpec density_from_json(const json& j) {
  DensitySpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.d = j.value("d", 1);
  spec.sigma = j.value("sigma", 1.0);
  spec.lambda = j.value("lambda", 1.0);
  if (j.contains("weights")) spec.weights = j.at("weights").get<std::vector<double>>();
  if (j.contains("means")) spec.means = j.at("means").get<std::vector<double>>();
  if (j.contains("sigmas")) spec.sigmas = j.at("sigmas").get<std::vector<double>>();
  return spec;
}

std::string density_tag(const DensitySpec& spec) {
  return spec.name + "_d" + std::to_string(spec.d);
}

struct Session {
  DensityModel model;
  KernelSet kernels;
  CompiledKernel ck;
  double varpi = 1.0;
  double norm = 0.0;  // ‖f‖₂

  Session(const DensitySpec& spec, int b)
      : model(make_density(spec)), kernels(build_kernel(b)), ck(compile_kernel(kernels)) {
    varpi = varpi_T(kernels, model.dim());
    norm = std::sqrt(model.l2_sq_exact());
  }
};

double wilson_half(double freq, int n) {
  const double z = 1.959963984540054;
  double denom = 1.0 + z * z / n;
  return z * std::sqrt(freq * (1.0 - freq) / n + z * z / (4.0 * static_cast<double>(n) * n)) /
         denom;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (kind != "risk" && kind != "concentration" &&
      kind != "oracle_ratio" && kind != "combiner")
    throw std::invalid_argument("unknown experiment kind: " + kind);
  if (densities.empty()) throw std::invalid_argument("config needs at least one density");
  if (m_list.empty()) throw std::invalid_argument("config needs a nonempty m list");
  for (int m : m_list)
    if (m < 21) throw std::invalid_argument("every m must be >= 21");
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (b < 2) throw std::invalid_argument("kernel order b must be >= 2");
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.kind = j.at("kind").get<std::string>();
  if (j.contains("densities"))
    for (const auto& dj : j.at("densities")) cfg.densities.push_back(density_from_json(dj));
  else if (j.contains("density"))
    cfg.densities.push_back(density_from_json(j.at("density")));
  cfg.m_list = j.at("m").get<std::vector<int>>();
  cfg.replications = j.value("replications", 1);
  cfg.q = j.value("q", 2.0);
  cfg.b = j.value("b", 2);
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.workers = j.value("workers", 1);
  cfg.output_dir = j.value("output", std::string("out"));
  cfg.plotdata = j.value("plotdata", false);
  if (j.contains("combiner_threshold")) {
    const auto& t = j.at("combiner_threshold");
    if (t.is_string() && t.get<std::string>() == "inf")
      cfg.combiner_threshold = std::numeric_limits<double>::infinity();
    else
      cfg.combiner_threshold = t.get<double>();
  }
  if (j.contains("check")) cfg.check = j.at("check");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j = json::parse(in);
  return config_from_json(j);
}

void Report::add(const std::string& experiment, const std::string& density, int m,
                 const std::string& metric, double value) {
  rows.push_back({experiment, density, m, metric, value});
  summary["results"][density][std::to_string(m)][metric] = value;
}

double Report::get(const std::string& density, int m, const std::string& metric) const {
  for (const auto& r : rows)
    if (r.density == density && r.m == m && r.metric == metric) return r.value;
  throw std::out_of_range("report metric not found: " + density + "/" + std::to_string(m) + "/" +
                          metric);
}

void write_report(const Report& rep, const std::string& dir, bool plotdata) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream csv(fs::path(dir) / "report.csv");
    csv << "experiment,density,m,metric,value\n";
    for (const auto& r : rep.rows)
      csv << r.experiment << ',' << r.density << ',' << r.m << ',' << r.metric << ','
          << format_double(r.value) << '\n';
  }
  {
    std::ofstream js(fs::path(dir) / "report.json");
    js << rep.summary.dump(2) << '\n';
  }
  if (plotdata) {
    fs::create_directories(fs::path(dir) / "plotdata");
    // One x-y file per (experiment, density, metric), x = m.
    std::map<std::string, std::vector<std::pair<int, double>>> series;
    for (const auto& r : rep.rows)
      series[r.experiment + "_" + r.density + "_" + r.metric].push_back({r.m, r.value});
    for (auto& [name, pts] : series) {
      std::stable_sort(pts.begin(), pts.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      std::ofstream f(fs::path(dir) / "plotdata" / (name + ".csv"));
      f << "m,value\n";
      for (const auto& [m, v] : pts) f << m << ',' << format_double(v) << '\n';
    }
  }
}

ordered_json read_report_json(const std::string& dir) {
  std::ifstream in(std::filesystem::path(dir) / "report.json");
  if (!in) throw std::runtime_error("cannot open report.json under " + dir);
  return ordered_json::parse(in);
}

Rng replication_rng(std::uint64_t seed, int m, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(index),
                    0x9e3779b9u};
  return Rng(seq);
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int count = std::min<std::size_t>(workers, n);
  pool.reserve(count);
  for (int w = 0; w < count; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  OlsFit fit;
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("ols_fit needs >= 2 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = y[i] - fit.intercept - fit.slope * x[i];
      rss += e * e;
    }
    fit.slope_se = std::sqrt(rss / (n - 2) / sxx);
  }
  return fit;
}

namespace {

struct RiskAccum {
  double risk = 0.0;
  double se = 0.0;
};

//! q-risk (mean |err|^q)^{1/q} with a delta-method standard error.
RiskAccum q_risk(const std::vector<double>& errs, double q) {
  RiskAccum out;
  const std::size_t n = errs.size();
  double mean = 0.0;
  for (double e : errs) mean += std::pow(std::abs(e), q);
  mean /= n;
  out.risk = std::pow(mean, 1.0 / q);
  if (n > 1) {
    double var = 0.0;
    for (double e : errs) {
      double v = std::pow(std::abs(e), q) - mean;
      var += v * v;
    }
    var /= static_cast<double>(n - 1) * n;
    double deriv = mean > 0 ? std::pow(mean, 1.0 / q - 1.0) / q : 0.0;
    out.se = deriv * std::sqrt(var);
  }
  return out;
}

struct RepOutcome {
  double est_selected = 0.0;
  double est_combined = 0.0;
  double est_iso = 0.0;
  bool branch_iso = false;
  double v_star = 0.0;
  std::vector<int> star_exps;
  double est_fixed = 0.0;  // estimator at the projected theoretical bandwidth
  bool has_fixed = false;
};

//! Shared replication body for the risk-style experiments.
RepOutcome run_replication(const Session& ses, const BandwidthGrid& grid,
                           const ExperimentConfig& cfg, int m, int rep, bool combined,
                           int fixed_member) {
  Rng rng = replication_rng(cfg.seed, m, rep);
  auto rows = ses.model.sample(rng, 2 * static_cast<std::size_t>(m));
  SplitSample sample = SplitSample::from_rows(std::move(rows), 2 * m, ses.model.dim());
  StatTable table = build_stat_table(sample, grid, ses.ck, cfg.q, ses.varpi);

  RepOutcome out;
  if (combined) {
    CombineResult cr = isotropic_combine(sample, grid, table, ses.ck, cfg.combiner_threshold);
    out.est_selected = cr.est_star;
    out.est_combined = cr.estimate;
    out.est_iso = cr.est_iso;
    out.branch_iso = cr.branch == CombinerBranch::Isotropic;
    out.v_star = grid.members[cr.selection.h_star].volume;
    out.star_exps = cr.selection.h_star_exps;
  } else {
    SelectionResult sel = select(table, grid);
    out.est_selected = sel.estimate;
    out.v_star = grid.members[sel.h_star].volume;
    out.star_exps = sel.h_star_exps;
  }
  if (fixed_member >= 0) {
    out.est_fixed = std::sqrt(std::abs(table.rows[fixed_member].n_hat));
    out.has_fixed = true;
  }
  return out;
}

int fixed_oracle_member(const Session& ses, const BandwidthGrid& grid, int m) {
  if (!ses.model.label()) return -1;
  SmoothnessParams p;
  p.beta = ses.model.label()->beta;
  p.r = ses.model.label()->r;
  try {
    OptimalBandwidth ob = optimal_bandwidth(p, m);
    return grid.index_of(ob.projected_exps);
  } catch (const std::exception&) {
    return -1;
  }
}

Report run_risk_like(const ExperimentConfig& cfg, bool combined) {
  const std::string kind = combined ? "combiner" : "risk";
  Report rep;
  rep.summary["experiment"] = kind;
  rep.summary["q"] = cfg.q;
  rep.summary["b"] = cfg.b;
  rep.summary["seed"] = cfg.seed;
  rep.summary["replications"] = cfg.replications;

  for (const auto& spec : cfg.densities) {
    Session ses(spec, cfg.b);
    const std::string tag = density_tag(spec);
    std::vector<double> log_m, log_risk, log_risk_combined;

    for (int m : cfg.m_list) {
      BandwidthGrid grid = build_grid(m, ses.model.dim());
      int fixed_member = fixed_oracle_member(ses, grid, m);
      const int R = cfg.replications;
      std::vector<RepOutcome> outs(R);
      parallel_for(R, cfg.workers, [&](std::size_t i) {
        outs[i] = run_replication(ses, grid, cfg, m, static_cast<int>(i), combined, fixed_member);
      });

      std::vector<double> err_sel(R), err_comb(R), err_iso(R), err_fixed;
      double mean_v = 0.0;
      int iso_count = 0;
      std::map<std::vector<int>, int> star_counts;
      for (int i = 0; i < R; ++i) {
        err_sel[i] = outs[i].est_selected - ses.norm;
        mean_v += outs[i].v_star / R;
        ++star_counts[outs[i].star_exps];
        if (combined) {
          err_comb[i] = outs[i].est_combined - ses.norm;
          err_iso[i] = outs[i].est_iso - ses.norm;
          if (outs[i].branch_iso) ++iso_count;
        }
        if (outs[i].has_fixed) err_fixed.push_back(outs[i].est_fixed - ses.norm);
      }
      double iso_freq = static_cast<double>(iso_count) / R;

      RiskAccum sel = q_risk(err_sel, cfg.q);
      rep.add(kind, tag, m, "risk_selected", sel.risk);
      rep.add(kind, tag, m, "risk_selected_se", sel.se);
      rep.add(kind, tag, m, "mean_v_star", mean_v);
      auto modal = std::max_element(star_counts.begin(), star_counts.end(),
                                    [](const auto& a, const auto& b) {
                                      return a.second < b.second ||
                                             (a.second == b.second && b.first < a.first);
                                    });
      rep.add(kind, tag, m, "modal_h_star_sum_exp",
              std::accumulate(modal->first.begin(), modal->first.end(), 0.0));
      if (!err_fixed.empty() && static_cast<int>(err_fixed.size()) == R) {
        RiskAccum fx = q_risk(err_fixed, cfg.q);
        rep.add(kind, tag, m, "risk_fixed_oracle_bandwidth", fx.risk);
      }
      if (combined) {
        RiskAccum comb = q_risk(err_comb, cfg.q);
        RiskAccum iso = q_risk(err_iso, cfg.q);
        rep.add(kind, tag, m, "risk_combined", comb.risk);
        rep.add(kind, tag, m, "risk_combined_se", comb.se);
        rep.add(kind, tag, m, "risk_isotropic", iso.risk);
        rep.add(kind, tag, m, "branch_isotropic_freq", iso_freq);
        log_risk_combined.push_back(std::log(comb.risk));
      }
      log_m.push_back(std::log(static_cast<double>(m)));
      log_risk.push_back(std::log(sel.risk));
    }

    if (log_m.size() >= 2) {
      OlsFit fit = ols_fit(log_m, log_risk);
      rep.add(kind, tag, 0, "slope_selected", fit.slope);
      rep.add(kind, tag, 0, "slope_selected_halfwidth", 1.959963984540054 * fit.slope_se);
      if (combined) {
        OlsFit cfit = ols_fit(log_m, log_risk_combined);
        rep.add(kind, tag, 0, "slope_combined", cfit.slope);
        rep.add(kind, tag, 0, "slope_combined_halfwidth", 1.959963984540054 * cfit.slope_se);
      }
    }
  }
  return rep;
}

}  // namespace

Report run_risk(const ExperimentConfig& cfg) { return run_risk_like(cfg, false); }
Report run_combiner(const ExperimentConfig& cfg) { return run_risk_like(cfg, true); }

ConcentrationEvents concentration_events(const StatTable& table,
                                         const std::vector<double>& expected_n,
                                         const std::vector<double>& u_star) {
  ConcentrationEvents ev;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (std::abs(table.rows[i].n_hat - expected_n[i]) > u_star[i])
      ev.deviation_exceeds_ustar = true;
    if (table.rows[i].ucal > 2.0 * u_star[i]) ev.random_above_2ustar = true;
    if (u_star[i] > 9.0 * table.rows[i].ucal) ev.ustar_above_9random = true;
  }
  return ev;
}

Report run_concentration(const ExperimentConfig& cfg) {
  Report rep;
  rep.summary["experiment"] = "concentration";
  rep.summary["q"] = cfg.q;
  rep.summary["b"] = cfg.b;
  rep.summary["seed"] = cfg.seed;
  rep.summary["replications"] = cfg.replications;

  for (const auto& spec : cfg.densities) {
    Session ses(spec, cfg.b);
    if (ses.model.dim() > 2)
      throw std::invalid_argument("concentration experiments require d <= 2");
    const std::string tag = density_tag(spec);
    for (int m : cfg.m_list) {
      BandwidthGrid grid = build_grid(m, ses.model.dim());
      OracleCalc oracle(ses.model, ses.kernels, grid, cfg.q);
      std::vector<double> expected_n(grid.size()), u_star(grid.size());
      for (int i = 0; i < grid.size(); ++i) {
        expected_n[i] = oracle.expected_n(i);
        u_star[i] = oracle.u_star(i);
      }

      const int R = cfg.replications;
      std::vector<std::array<char, 3>> hits(R);
      parallel_for(R, cfg.workers, [&](std::size_t i) {
        Rng rng = replication_rng(cfg.seed, m, static_cast<int>(i));
        auto rows = ses.model.sample(rng, 2 * static_cast<std::size_t>(m));
        SplitSample sample = SplitSample::from_rows(std::move(rows), 2 * m, ses.model.dim());
        StatTable table = build_stat_table(sample, grid, ses.ck, cfg.q, ses.varpi);
        ConcentrationEvents ev = concentration_events(table, expected_n, u_star);
        hits[i] = {static_cast<char>(ev.deviation_exceeds_ustar),
                   static_cast<char>(ev.random_above_2ustar),
                   static_cast<char>(ev.ustar_above_9random)};
      });

      double f3 = 0, f4a = 0, f4b = 0;
      for (int i = 0; i < R; ++i) {
        f3 += hits[i][0];
        f4a += hits[i][1];
        f4b += hits[i][2];
      }
      f3 /= R;
      f4a /= R;
      f4b /= R;
      rep.add("concentration", tag, m, "freq_upper_function_exceeded", f3);
      rep.add("concentration", tag, m, "freq_upper_function_exceeded_wilson_half",
              wilson_half(f3, R));
      rep.add("concentration", tag, m, "freq_random_gt_2ustar", f4a);
      rep.add("concentration", tag, m, "freq_random_gt_2ustar_wilson_half", wilson_half(f4a, R));
      rep.add("concentration", tag, m, "freq_ustar_gt_9random", f4b);
      rep.add("concentration", tag, m, "freq_ustar_gt_9random_wilson_half", wilson_half(f4b, R));

      OracleConstants consts = oracle_constants(cfg.q, ses.varpi, ses.model.dim());
      double lm = std::log(static_cast<double>(m));
      rep.add("concentration", tag, m, "bound_deviation_envelope",
              consts.lambda_star_q * std::pow(2.0 * lm, ses.model.dim()) *
                  std::pow(static_cast<double>(m), -4.0 * cfg.q));
      rep.add("concentration", tag, m, "bound_envelope_comparison_scale",
              std::pow(2.0 * lm, 0.5 * ses.model.dim()) *
                  std::pow(static_cast<double>(m), -2.0 * cfg.q));
    }
  }
  return rep;
}

Report run_oracle_ratio(const ExperimentConfig& cfg) {
  Report rep;
  rep.summary["experiment"] = "oracle_ratio";
  rep.summary["q"] = cfg.q;
  rep.summary["b"] = cfg.b;
  rep.summary["seed"] = cfg.seed;
  rep.summary["replications"] = cfg.replications;

  double ratio_max = 0.0, ratio_min = std::numeric_limits<double>::infinity();
  for (const auto& spec : cfg.densities) {
    Session ses(spec, cfg.b);
    const std::string tag = density_tag(spec);
    double dens_max = 0.0, dens_min = std::numeric_limits<double>::infinity();
    for (int m : cfg.m_list) {
      BandwidthGrid grid = build_grid(m, ses.model.dim());
      OracleCalc oracle(ses.model, ses.kernels, grid, cfg.q);
      double o_star = oracle.o_star();
      double denom = std::min(o_star / ses.norm, std::sqrt(o_star));

      const int R = cfg.replications;
      std::vector<double> errs(R);
      parallel_for(R, cfg.workers, [&](std::size_t i) {
        RepOutcome out = run_replication(ses, grid, cfg, m, static_cast<int>(i), false, -1);
        errs[i] = out.est_selected - ses.norm;
      });
      RiskAccum acc = q_risk(errs, cfg.q);
      double ratio = acc.risk / denom;
      rep.add("oracle_ratio", tag, m, "risk_selected", acc.risk);
      rep.add("oracle_ratio", tag, m, "oracle_star", o_star);
      rep.add("oracle_ratio", tag, m, "oracle_bound", denom);
      rep.add("oracle_ratio", tag, m, "ratio", ratio);
      ratio_max = std::max(ratio_max, ratio);
      ratio_min = std::min(ratio_min, ratio);
      dens_max = std::max(dens_max, ratio);
      dens_min = std::min(dens_min, ratio);
    }
    // stability of the constant stand-in across sample sizes
    rep.add("oracle_ratio", tag, 0, "ratio_spread_over_m", dens_max / dens_min);
  }
  rep.add("oracle_ratio", "suite", 0, "ratio_max", ratio_max);
  rep.add("oracle_ratio", "suite", 0, "ratio_min", ratio_min);
  rep.add("oracle_ratio", "suite", 0, "ratio_spread", ratio_max / ratio_min);
  return rep;
}

Report run_experiment(const ExperimentConfig& cfg) {
  if (cfg.kind == "risk") return run_risk(cfg);
  if (cfg.kind == "combiner") return run_combiner(cfg);
  if (cfg.kind == "concentration") return run_concentration(cfg);
  if (cfg.kind == "oracle_ratio") return run_oracle_ratio(cfg);
  throw std::invalid_argument("unknown experiment kind: " + cfg.kind);
}

int check_report(const Report& rep, const ExperimentConfig& cfg) {
  if (cfg.check.is_null() || cfg.check.empty()) return 0;
  bool ok = true;
  auto fail = [&](const std::string& why) {
    ok = false;
    std::fprintf(stderr, "check violation: %s\n", why.c_str());
  };

  if (cfg.check.contains("max_slope")) {
    double lim = cfg.check.at("max_slope").get<double>();
    const char* metric = cfg.kind == "combiner" ? "slope_combined" : "slope_selected";
    for (const auto& r : rep.rows)
      if (r.metric == metric && r.value > lim)
        fail(r.density + " " + metric + " = " + format_double(r.value) + " > " +
             format_double(lim));
  }
  if (cfg.check.contains("max_frequency")) {
    double lim = cfg.check.at("max_frequency").get<double>();
    for (const auto& r : rep.rows)
      if (r.metric.rfind("freq_", 0) == 0 && r.metric.find("wilson") == std::string::npos &&
          r.metric != "branch_isotropic_freq" && r.value > lim)
        fail(r.density + " " + r.metric + " = " + format_double(r.value));
  }
  if (cfg.check.contains("max_ratio_spread")) {
    double lim = cfg.check.at("max_ratio_spread").get<double>();
    for (const auto& r : rep.rows)
      if (r.metric == "ratio_spread" && r.value > lim)
        fail("ratio_spread = " + format_double(r.value) + " > " + format_double(lim));
  }
  if (cfg.check.contains("max_inflation")) {
    double lim = cfg.check.at("max_inflation").get<double>();
    for (const auto& spec : cfg.densities) {
      std::string tag = density_tag(spec);
      for (int m : cfg.m_list) {
        try {
          double comb = rep.get(tag, m, "risk_combined");
          double best = std::min(rep.get(tag, m, "risk_selected"), rep.get(tag, m, "risk_isotropic"));
          if (comb > lim * best)
            fail(tag + " m=" + std::to_string(m) + " combined risk exceeds " +
                 format_double(lim) + "x best branch");
        } catch (const std::out_of_range&) {
        }
      }
    }
  }
  if (cfg.check.value("monotone_within_se", false)) {
    for (const auto& spec : cfg.densities) {
      std::string tag = density_tag(spec);
      for (std::size_t i = 0; i + 1 < cfg.m_list.size(); ++i) {
        double r0 = rep.get(tag, cfg.m_list[i], "risk_selected");
        double se0 = rep.get(tag, cfg.m_list[i], "risk_selected_se");
        double r1 = rep.get(tag, cfg.m_list[i + 1], "risk_selected");
        if (r1 > r0 + se0)
          fail(tag + " risk not decreasing within one se between m=" +
               std::to_string(cfg.m_list[i]) + " and m=" + std::to_string(cfg.m_list[i + 1]));
      }
    }
  }
  if (cfg.check.contains("max_fixed_h_advantage")) {
    double lim = cfg.check.at("max_fixed_h_advantage").get<double>();
    for (const auto& r : rep.rows)
      if (r.metric == "risk_fixed_oracle_bandwidth") {
        double sel = rep.get(r.density, r.m, "risk_selected");
        if (sel > lim * r.value)
          fail(r.density + " m=" + std::to_string(r.m) + " selected risk > " +
               format_double(lim) + "x fixed-bandwidth risk");
      }
  }
  return ok ? 0 : 2;
}

}  // namespace l2est
