// Experiment configuration (strict sectioned key-value file), ProcessMatrix
// CSV serialization and JSON summaries.

#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lclt/empirical.hpp"
#include "lclt/stats.hpp"

namespace lclt {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  // model section
  std::string model_kind;
  int d = 1;
  std::string graph = "complete";
  std::vector<int> offspring_values{1, 2};
  std::vector<double> offspring_probs{0.5, 0.5};
  double eps = 0.0;  // > 0 selects the fixed rule
  double eps_scale = 1.0;
  double eps_exponent = 1.0;

  // disorder section
  std::string disorder_kind = "rademacher";
  double skew_a = 2.0;

  // run section
  std::vector<int> n_list;
  int R = 2;
  std::uint64_t M = 0;
  std::vector<double> grid = ZGrid::defaults().z;
  std::string centering = "phi_n_exact";
  std::size_t mc_center_samples = 10'000'000;
  bool has_seed = false;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string suite = "counts";
  bool corrupt_multiplier = false;
  int wbank_draws = 10'000;

  // output section
  std::string out_dir = "out";
  std::set<std::string> formats{"csv", "json"};

  ModelId model() const {
    if (model_kind == "assignment") return ModelId::assignment();
    if (model_kind == "hamiltonian") return ModelId::hamiltonian();
    if (model_kind == "spanning_tree") return ModelId::spanning_tree();
    if (model_kind == "polymer") return ModelId::polymer(d);
    if (model_kind == "brw")
      return ModelId::brw(OffspringLaw{offspring_values, offspring_probs});
    if (model_kind == "spin_glass")
      return graph == "box" ? ModelId::spin_glass_box(d)
                            : ModelId::spin_glass_sk();
    if (model_kind == "equicorrelated")
      return ModelId::equicorrelated(eps > 0.0
                                         ? EpsRule::fixed(eps)
                                         : EpsRule{false, 0.0, eps_scale,
                                                   eps_exponent});
    throw config_error("unknown model kind: " + model_kind);
  }

  DisorderSpec disorder() const {
    if (disorder_kind == "rademacher") return DisorderSpec::rademacher();
    if (disorder_kind == "uniform_sym") return DisorderSpec::uniform_sym();
    if (disorder_kind == "std_normal") return DisorderSpec::std_normal();
    if (disorder_kind == "centered_exponential")
      return DisorderSpec::centered_exponential();
    if (disorder_kind == "two_point_skew")
      return DisorderSpec::two_point_skew(skew_a);
    throw config_error("unknown disorder kind: " + disorder_kind);
  }

  CenteringMode centering_mode() const {
    if (centering == "phi_n_exact") return CenteringMode::phi_n_exact();
    if (centering == "phi_n_mc")
      return CenteringMode::phi_n_mc(mc_center_samples);
    if (centering == "gauss_phi") return CenteringMode::gauss_phi();
    if (centering == "gauss_phi_edgeworth")
      return CenteringMode::gauss_phi_edgeworth();
    throw config_error("unknown centering mode: " + centering);
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

template <typename T>
T parse_number(const std::string& v, const std::string& key) {
  std::istringstream in(trim(v));
  T out;
  if (!(in >> out))
    throw config_error("bad value for " + key + ": '" + v + "'");
  std::string rest;
  if (in >> rest)
    throw config_error("trailing characters in value for " + key + ": '" + v +
                       "'");
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& v, const std::string& key) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_number<T>(item, key));
  }
  return out;
}

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw config_error("bad boolean for " + key + ": '" + v + "'");
}

}  // namespace detail

// Sectioned key = value file; '#' starts a comment; unknown sections or
// keys are hard errors so a typo cannot silently invalidate an experiment.
inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("line " + std::to_string(lineno) +
                           ": malformed section header");
      section = line.substr(1, line.size() - 2);
      if (section != "model" && section != "disorder" && section != "run" &&
          section != "output")
        throw config_error("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) +
                         ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    using detail::parse_bool;
    using detail::parse_list;
    using detail::parse_number;

    if (section == "model") {
      if (key == "kind") cfg.model_kind = val;
      else if (key == "d") cfg.d = parse_number<int>(val, key);
      else if (key == "graph") cfg.graph = val;
      else if (key == "offspring_values")
        cfg.offspring_values = parse_list<int>(val, key);
      else if (key == "offspring_probs")
        cfg.offspring_probs = parse_list<double>(val, key);
      else if (key == "eps") cfg.eps = parse_number<double>(val, key);
      else if (key == "eps_scale")
        cfg.eps_scale = parse_number<double>(val, key);
      else if (key == "eps_exponent")
        cfg.eps_exponent = parse_number<double>(val, key);
      else
        throw config_error("unknown key '" + key + "' in [model]");
    } else if (section == "disorder") {
      if (key == "kind") cfg.disorder_kind = val;
      else if (key == "skew_a") cfg.skew_a = parse_number<double>(val, key);
      else
        throw config_error("unknown key '" + key + "' in [disorder]");
    } else if (section == "run") {
      if (key == "n") cfg.n_list = {parse_number<int>(val, key)};
      else if (key == "n_list") cfg.n_list = parse_list<int>(val, key);
      else if (key == "R") cfg.R = parse_number<int>(val, key);
      else if (key == "M") cfg.M = parse_number<std::uint64_t>(val, key);
      else if (key == "grid") cfg.grid = parse_list<double>(val, key);
      else if (key == "centering") cfg.centering = val;
      else if (key == "mc_center_samples")
        cfg.mc_center_samples = parse_number<std::size_t>(val, key);
      else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(val, key);
        cfg.has_seed = true;
      } else if (key == "threads")
        cfg.threads = parse_number<unsigned>(val, key);
      else if (key == "suite") cfg.suite = val;
      else if (key == "corrupt_multiplier")
        cfg.corrupt_multiplier = parse_bool(val, key);
      else if (key == "wbank_draws")
        cfg.wbank_draws = parse_number<int>(val, key);
      else
        throw config_error("unknown key '" + key + "' in [run]");
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = val;
      else if (key == "formats") {
        cfg.formats.clear();
        for (const auto& f : parse_list<std::string>(val, key))
          cfg.formats.insert(f);
      } else
        throw config_error("unknown key '" + key + "' in [output]");
    } else {
      throw config_error("line " + std::to_string(lineno) +
                         ": key outside any section");
    }
  }
  if (!cfg.has_seed)
    throw config_error("run section must set an explicit seed");
  return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  return parse_config(in);
}

// ---------------------------------------------------------------------------
// CSV: header "z, <values>", one "rep_<i>, <values>" row per replicate.

inline void write_matrix_csv(const ProcessMatrix& m, std::ostream& out) {
  out << "z";
  char buf[32];
  for (double z : m.grid.z) {
    std::snprintf(buf, sizeof buf, "%.17g", z);
    out << ',' << buf;
  }
  out << '\n';
  for (int r = 0; r < m.R; ++r) {
    out << "rep_" << r;
    for (std::size_t j = 0; j < m.grid.z.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m.at(r, static_cast<int>(j)));
      out << ',' << buf;
    }
    out << '\n';
  }
}

inline ProcessMatrix read_matrix_csv(std::istream& in) {
  ProcessMatrix m;
  std::string line;
  if (!std::getline(in, line)) throw config_error("empty matrix csv");
  {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    if (detail::trim(cell) != "z")
      throw config_error("matrix csv must start with a z header row");
    while (std::getline(ss, cell, ','))
      m.grid.z.push_back(std::stod(cell));
  }
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');  // rep_<i>
    std::size_t cols = 0;
    while (std::getline(ss, cell, ',')) {
      m.values.push_back(std::stod(cell));
      ++cols;
    }
    if (cols != m.grid.z.size())
      throw config_error("matrix csv row width mismatch");
    ++m.R;
  }
  return m;
}

// JSON summary of a matrix against its limit law.
inline nlohmann::json summarize_matrix(const ProcessMatrix& m,
                                       const LimitLaw* law) {
  nlohmann::json per_z = nlohmann::json::array();
  std::vector<double> variances(m.grid.z.size(), 0.0);
  for (std::size_t j = 0; j < m.grid.z.size(); ++j) {
    const auto col = m.column(static_cast<int>(j));
    double s1 = 0, s2 = 0;
    for (double v : col) {
      s1 += v;
      s2 += v * v;
    }
    const double mean = s1 / col.size();
    const double var = s2 / col.size() - mean * mean;
    variances[j] = var;
    nlohmann::json entry{{"z", m.grid.z[j]}, {"mean", mean},
                         {"variance", var}};
    if (law) {
      const double mult = law->multiplier(m.grid.z[j]);
      if (std::abs(mult) > 1e-12) {
        entry["ks_vs_limit"] = ks_distance(col, [&](double v) {
          const double u = v / mult;
          return mult > 0 ? law->w_cdf(u) : 1.0 - law->w_cdf(u);
        });
      }
    }
    per_z.push_back(std::move(entry));
  }
  nlohmann::json out{{"schema", 1},
                     {"model", m.model},
                     {"n", m.n},
                     {"R", m.R},
                     {"M", m.M},
                     {"seed", m.seed},
                     {"per_z", per_z}};
  int lo = -1, hi = -1;
  for (std::size_t j = 0; j < variances.size(); ++j)
    if (variances[j] > 1e-18) {
      if (lo < 0) lo = static_cast<int>(j);
      hi = static_cast<int>(j);
    }
  if (lo >= 0 && hi > lo)
    out["rank_one_correlation"] =
        rank_one_correlation(m, m.grid.z[lo], m.grid.z[hi]);
  return out;
}

// W-bank disk cache: one draw per line.
inline std::vector<double> load_or_build_wbank(
    const std::filesystem::path& dir, const OffspringLaw& law,
    const DisorderSpec& spec, int draws, std::uint64_t seed,
    unsigned threads = 0) {
  std::ostringstream name;
  name << "wbank_m" << law.mean() << "_depth"
       << brw_bank_depth(law, 300'000) << "_d" << draws << "_s" << seed
       << ".csv";
  const auto path = dir / name.str();
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    std::vector<double> bank;
    double v;
    while (in >> v) bank.push_back(v);
    if (static_cast<int>(bank.size()) == draws) return bank;
  }
  auto bank = brw_w_bank(law, spec, draws, seed, 300'000, threads);
  std::filesystem::create_directories(dir);
  std::ofstream out(path);
  char buf[32];
  for (double v : bank) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << '\n';
  }
  return bank;
}

}  // namespace lclt
