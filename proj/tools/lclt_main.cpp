// landscape-clt: config-driven runner for random-landscape level processes.
//
// Subcommands:
//   counts    closed-form combinatorics against brute-force enumeration
//   verify    identity / distributional check suites, JSON verdict
//   simulate  replicate engine -> ProcessMatrix CSV + JSON summary per n
//   report    recompute the JSON summary from a stored matrix CSV
//
// Exit codes: 0 pass, 1 check failure, 2 usage/config error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lclt/combinatorics.hpp"
#include "lclt/hermite.hpp"
#include "lclt/io.hpp"
#include "lclt/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lclt;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

constexpr int kCountsOracleLimit = 7;  // enumeration stays under ~10^7 pairs

struct CheckLog {
  json checks = json::array();
  bool pass = true;

  void add(const std::string& name, bool ok, json detail = {}) {
    json row{{"name", name}, {"pass", ok}};
    if (!detail.is_null()) row["detail"] = std::move(detail);
    checks.push_back(std::move(row));
    pass = pass && ok;
  }
};

// ---------------------------------------------------------------------------
// counts

bool counts_table(int n_max, std::ostream& out, std::string& first_fail) {
  bool ok = true;
  auto row = [&](const std::string& label, const BigInt& closed,
                 const BigInt& oracle) {
    out << label << ": " << closed.str() << " = " << oracle.str();
    if (closed == oracle) {
      out << "\n";
    } else {
      out << "  MISMATCH\n";
      if (ok) first_fail = label;
      ok = false;
    }
  };

  for (int n = 2; n <= std::min(n_max, 8); ++n)
    row("assignment fixed_point_sq n=" + std::to_string(n),
        fixed_point_square_sum(n), oracle_fixed_point_square_sum(n));
  for (int n = 2; n <= n_max; ++n)
    row("assignment sum_r2 n=" + std::to_string(n),
        overlap_square_sum(ModelId::assignment(), n),
        oracle_overlap_square_sum(ModelId::assignment(), n));
  for (int n = 4; n <= n_max; ++n)
    row("hamiltonian sum_r2 n=" + std::to_string(n),
        overlap_square_sum(ModelId::hamiltonian(), n),
        oracle_overlap_square_sum(ModelId::hamiltonian(), n));
  for (int n = 3; n <= n_max; ++n)
    row("spanning_tree sum_r2 n=" + std::to_string(n),
        overlap_square_sum(ModelId::spanning_tree(), n),
        oracle_overlap_square_sum(ModelId::spanning_tree(), n));
  for (int n = 4; n <= n_max; ++n) {
    row("hamiltonian pair_equal n=" + std::to_string(n),
        hp_pair_count(n, EdgeRelation::equal),
        oracle_pair_count(ModelKind::hamiltonian, n, 0, 1, 0, 1));
    row("hamiltonian pair_share n=" + std::to_string(n),
        hp_pair_count(n, EdgeRelation::share_one_vertex),
        oracle_pair_count(ModelKind::hamiltonian, n, 0, 1, 1, 2));
    row("hamiltonian pair_disjoint n=" + std::to_string(n),
        hp_pair_count(n, EdgeRelation::disjoint),
        oracle_pair_count(ModelKind::hamiltonian, n, 0, 1, 2, 3));
  }
  for (int n = 3; n <= n_max; ++n) {
    row("spanning_tree pair_equal n=" + std::to_string(n),
        st_pair_count(n, EdgeRelation::equal),
        oracle_pair_count(ModelKind::spanning_tree, n, 0, 1, 0, 1));
    row("spanning_tree pair_share n=" + std::to_string(n),
        st_pair_count(n, EdgeRelation::share_one_vertex),
        oracle_pair_count(ModelKind::spanning_tree, n, 0, 1, 1, 2));
    if (n >= 4)
      row("spanning_tree pair_disjoint n=" + std::to_string(n),
          st_pair_count(n, EdgeRelation::disjoint),
          oracle_pair_count(ModelKind::spanning_tree, n, 0, 1, 2, 3));
  }
  for (int n = 2; n <= n_max; ++n) {
    const auto [share, disjoint] = edge_pair_census(n);
    const BigInt edges = BigInt(n) * (n - 1) / 2;
    row("edge_census partition n=" + std::to_string(n), edges * edges,
        edges + share + disjoint);
  }
  return ok;
}

int cmd_counts(int n_max) {
  if (n_max < 2) {
    std::cerr << "counts: n_max >= 2 required\n";
    return kUsage;
  }
  if (n_max > kCountsOracleLimit) {
    std::cerr << "counts: oracle enumeration infeasible beyond n_max = "
              << kCountsOracleLimit << " (requested " << n_max << ")\n";
    return kUsage;
  }
  std::string first_fail;
  const bool ok = counts_table(n_max, std::cout, first_fail);
  if (!ok) std::cerr << "first failing identity: " << first_fail << "\n";
  return ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// verify suites

CheckLog suite_counts() {
  CheckLog log;
  std::ostringstream sink;
  std::string first_fail;
  const bool ok = counts_table(6, sink, first_fail);
  log.add("counts_table_n6", ok,
          ok ? json{} : json{{"first_fail", first_fail}});
  return log;
}

CheckLog suite_hermite() {
  CheckLog log;
  HermiteBasis basis(12);
  const auto& q = basis.quadrature();
  double worst = 0.0;
  for (int i = 0; i <= 12; ++i)
    for (int j = i; j <= 12; ++j) {
      const double ip = q.integrate(
          [&](double x) { return basis.eval(i, x) * basis.eval(j, x); });
      worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
    }
  log.add("orthonormality_1e-10", worst < 1e-10, json{{"worst", worst}});

  double coeff_worst = 0.0;
  for (double z : {-1.0, 0.5, 2.0})
    for (int i = 1; i <= 8; ++i) {
      // composite Simpson oracle for <1_{.<=z}, h_i>
      const int segs = 4000;
      const double lo = -10.0, h = (z - lo) / segs;
      double acc = basis.eval(i, lo) * gauss_pdf(lo) +
                   basis.eval(i, z) * gauss_pdf(z);
      for (int s = 1; s < segs; ++s) {
        const double x = lo + s * h;
        acc += basis.eval(i, x) * gauss_pdf(x) * ((s & 1) ? 4.0 : 2.0);
      }
      coeff_worst = std::max(
          coeff_worst, std::abs(acc * h / 3.0 - basis.indicator_coeff(z, i)));
    }
  log.add("indicator_coeff_vs_quadrature_1e-8", coeff_worst < 1e-8,
          json{{"worst", coeff_worst}});
  return log;
}

CheckLog suite_spin_glass(const ExperimentConfig& cfg) {
  CheckLog log;
  const auto model = cfg.model();
  if (model.kind != ModelKind::spin_glass)
    throw config_error("spin_glass_identities suite needs a spin_glass model");
  const int n = cfg.n_list.empty() ? 10 : cfg.n_list.front();
  double worst_sum = 0.0, worst_rel = 0.0;
  for (int r = 0; r < cfg.R; ++r) {
    const auto run = run_spin_glass(model, cfg.disorder(), n, cfg.seed, r);
    worst_sum = std::max(worst_sum, std::abs(run.sum_x));
    worst_rel = std::max(
        worst_rel, std::abs(run.sum_x2_minus_1 - run.coupling_identity) /
                       std::max(1.0, std::abs(run.coupling_identity)));
  }
  log.add("sum_energy_zero_1e-10", worst_sum < 1e-10,
          json{{"worst", worst_sum}});
  log.add("coupling_identity_rel_1e-9", worst_rel < 1e-9,
          json{{"worst", worst_rel}});
  return log;
}

CheckLog suite_walk() {
  CheckLog log;
  for (int d : {1, 2, 3}) {
    const int horizon = d == 3 ? 14 : 24;
    const auto t = build_walk_table(d, horizon);
    double mass_worst = 0.0;
    for (int k = 1; k <= horizon; ++k) {
      double total = 0.0;
      for (double p : t.lvl[k]) total += p;
      mass_worst = std::max(mass_worst, std::abs(total - 1.0));
    }
    bool identity_ok = true;
    try {
      return_sum(t, horizon / 2);  // asserts sum p_k^2 = p_{2k}(0) per k
    } catch (const std::exception&) {
      identity_ok = false;
    }
    const auto series = origin_return_series(d, horizon / 2);
    double series_worst = 0.0;
    for (int k = 1; 2 * k <= horizon; ++k)
      series_worst = std::max(
          series_worst, std::abs(series[k] - t.origin_return(2 * k)));
    log.add("d" + std::to_string(d) + "_level_mass_1e-12", mass_worst < 1e-12,
            json{{"worst", mass_worst}});
    log.add("d" + std::to_string(d) + "_square_identity", identity_ok);
    log.add("d" + std::to_string(d) + "_series_matches_table_1e-12",
            series_worst < 1e-12, json{{"worst", series_worst}});
  }
  return log;
}

CheckLog suite_limit_law(const ExperimentConfig& cfg) {
  CheckLog log;
  const auto model = cfg.model();
  auto law = LimitLaw::std_normal_for(model);
  // negative-control fixture: inflate the multiplier used to build samples
  const double corruption = cfg.corrupt_multiplier ? 1.5 : 1.0;

  const double m0 = law.multiplier(0.0) * corruption;
  const double want0 =
      model.kind == ModelKind::spin_glass ? 0.0 : gauss_pdf(0.0);
  log.add("multiplier_at_zero", std::abs(m0 - want0) < 1e-12,
          json{{"got", m0}, {"want", want0}});

  const ZGrid grid = ZGrid::defaults();
  RngStream rng{cfg.seed, 0, 0};
  const int draws = 4000;
  double s2 = 0.0;
  double minor_worst = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double w = law.draw_w(rng);
    std::vector<double> v(grid.z.size());
    for (std::size_t j = 0; j < grid.z.size(); ++j)
      v[j] = corruption * law.multiplier(grid.z[j]) * w;
    s2 += v[5] * v[5];  // z = 1
    minor_worst = std::max(
        minor_worst,
        std::abs(v[1] * law.multiplier(grid.z[4]) -
                 v[4] * law.multiplier(grid.z[1])) /
            std::max(1.0, std::abs(w)));
  }
  const double want_var = std::pow(law.multiplier(1.0) * law.w_sd(), 2);
  const double got_var = s2 / draws;
  log.add("marginal_variance_at_z1_10pct",
          std::abs(got_var - want_var) <= 0.10 * want_var,
          json{{"got", got_var}, {"want", want_var}});
  log.add("rank_one_minors_1e-10", minor_worst < 1e-10 * corruption + 1e-10,
          json{{"worst", minor_worst}});
  return log;
}

int cmd_verify(const ExperimentConfig& cfg) {
  json suites = json::array();
  bool all = true;
  std::stringstream names(cfg.suite);
  std::string name;
  bool any = false;
  while (std::getline(names, name, ',')) {
    name = lclt::detail::trim(name);
    if (name.empty()) continue;
    any = true;
    CheckLog log;
    if (name == "counts") log = suite_counts();
    else if (name == "hermite") log = suite_hermite();
    else if (name == "spin_glass_identities") log = suite_spin_glass(cfg);
    else if (name == "walk_identities") log = suite_walk();
    else if (name == "limit_law") log = suite_limit_law(cfg);
    else throw config_error("unknown verify suite: " + name);
    suites.push_back(json{{"suite", name}, {"pass", log.pass},
                          {"checks", log.checks}});
    all = all && log.pass;
    std::cout << (log.pass ? "[pass] " : "[FAIL] ") << name << "\n";
  }
  if (!any) throw config_error("verify: no suite named in config");

  fs::create_directories(cfg.out_dir);
  std::ofstream out(fs::path(cfg.out_dir) / "verify.json");
  out << json{{"schema", 1}, {"pass", all}, {"suites", suites}}.dump(2)
      << "\n";
  return all ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// simulate / report

LimitLaw limit_law_for(const ExperimentConfig& cfg, const ModelId& model,
                       unsigned threads) {
  if (model.kind == ModelKind::polymer && model.dim >= 3)
    return LimitLaw::normal_for(
        model, std::sqrt(s_squared_d3(model.dim, 200).partial));
  if (model.kind == ModelKind::brw) {
    auto bank = load_or_build_wbank(cfg.out_dir, model.offspring,
                                    cfg.disorder(), cfg.wbank_draws, cfg.seed,
                                    threads);
    return LimitLaw::brw_with_bank(std::move(bank));
  }
  return LimitLaw::std_normal_for(model);
}

int cmd_simulate(const ExperimentConfig& cfg) {
  if (cfg.n_list.empty())
    throw config_error("simulate: run section must set n or n_list");
  const auto model = cfg.model();
  const auto spec = cfg.disorder();
  const ZGrid grid{cfg.grid};
  grid.validate();
  fs::create_directories(cfg.out_dir);

  std::optional<LimitLaw> law;
  if (cfg.formats.count("json"))
    law = limit_law_for(cfg, model, cfg.threads);

  for (int n : cfg.n_list) {
    const auto pm =
        replicate_engine(model, spec, n, cfg.R, cfg.M, grid,
                         cfg.centering_mode(), cfg.seed, cfg.threads);
    const std::string stem = model.name() + "_n" + std::to_string(n);
    if (cfg.formats.count("csv")) {
      std::ofstream out(fs::path(cfg.out_dir) / (stem + ".csv"));
      write_matrix_csv(pm, out);
    }
    if (cfg.formats.count("json")) {
      std::ofstream out(fs::path(cfg.out_dir) / (stem + ".json"));
      out << summarize_matrix(pm, law ? &*law : nullptr).dump(2) << "\n";
    }
    std::cout << stem << ": R=" << pm.R << " M=" << pm.M
              << " grid=" << pm.grid.z.size() << " done\n";
  }
  return kOk;
}

int cmd_report(const std::string& in_path,
               const std::optional<ExperimentConfig>& cfg,
               const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) throw config_error("cannot open matrix csv: " + in_path);
  auto pm = read_matrix_csv(in);
  std::optional<LimitLaw> law;
  if (cfg) {
    pm.model = cfg->model().name();
    pm.seed = cfg->seed;
    law = limit_law_for(*cfg, cfg->model(), cfg->threads);
  }
  const auto summary = summarize_matrix(pm, law ? &*law : nullptr);
  if (out_path.empty()) {
    std::cout << summary.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << summary.dump(2) << "\n";
  }
  return kOk;
}

ExperimentConfig load_config(const std::string& path,
                             std::optional<std::uint64_t> seed_override,
                             std::optional<unsigned> threads_override,
                             std::optional<std::string> out_override) {
  auto cfg = parse_config_file(path);
  if (seed_override) cfg.seed = *seed_override;
  if (threads_override) cfg.threads = *threads_override;
  if (out_override) cfg.out_dir = *out_override;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random landscape level-process simulator"};
  app.require_subcommand(1);

  std::string config_path, report_in, report_out;
  int n_max = 6;
  std::optional<std::uint64_t> seed_override;
  std::optional<unsigned> threads_override;
  std::optional<std::string> out_override;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path,
                                "experiment config file");
    if (config_required) opt->required();
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { seed_override = s; },
        "override the config seed");
    sub->add_option_function<unsigned>(
        "--threads", [&](const unsigned& t) { threads_override = t; },
        "worker thread cap (overrides LANDSCAPE_CLT_THREADS)");
    sub->add_option_function<std::string>(
        "--out", [&](const std::string& o) { out_override = o; },
        "override the output directory");
  };

  auto* counts = app.add_subcommand(
      "counts", "closed-form counts against enumeration oracles");
  counts->add_option("--n-max", n_max, "largest n in the table");

  auto* verify =
      app.add_subcommand("verify", "run identity/distribution check suites");
  add_common(verify, true);

  auto* simulate =
      app.add_subcommand("simulate", "run the replicate engine per n");
  add_common(simulate, true);

  auto* report = app.add_subcommand(
      "report", "summarize a stored ProcessMatrix CSV as JSON");
  add_common(report, false);
  report->add_option("--in", report_in, "matrix csv produced by simulate")
      ->required();
  report->add_option("--summary-out", report_out,
                     "write the JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (counts->parsed()) return cmd_counts(n_max);
    if (verify->parsed())
      return cmd_verify(load_config(config_path, seed_override,
                                    threads_override, out_override));
    if (simulate->parsed())
      return cmd_simulate(load_config(config_path, seed_override,
                                      threads_override, out_override));
    if (report->parsed()) {
      std::optional<ExperimentConfig> cfg;
      if (!config_path.empty())
        cfg = load_config(config_path, seed_override, threads_override,
                          out_override);
      return cmd_report(report_in, cfg, report_out);
    }
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kUsage;
  } catch (const size_error& e) {
    std::cerr << "size error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
