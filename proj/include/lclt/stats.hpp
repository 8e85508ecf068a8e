// Limit-law samplers and distributional tests: the rank-one process
// p(z) W (z p(z) W / sqrt2 for spin glasses), Kolmogorov-Smirnov distances,
// cross-z correlation checks and per-n convergence tables.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lclt/brw.hpp"
#include "lclt/empirical.hpp"
#include "lclt/gaussian.hpp"
#include "lclt/walk.hpp"

namespace lclt {

struct LimitLaw {
  enum class WKind { std_normal, polymer_series, brw_bank };

  ModelKind model = ModelKind::assignment;
  WKind wkind = WKind::std_normal;
  double normal_sd = 1.0;  // sd of W in the std_normal kind
  DisorderSpec polymer_spec;  // xi law feeding the polymer W series
  std::shared_ptr<const PolymerWSampler> polymer_w;
  std::shared_ptr<const std::vector<double>> bank;  // sorted BRW W draws

  // per-z multiplier of the limit process
  double multiplier(double z) const {
    return model == ModelKind::spin_glass
               ? z * gauss_pdf(z) / std::numbers::sqrt2
               : gauss_pdf(z);
  }

  double w_sd() const {
    switch (wkind) {
      case WKind::std_normal:
        return normal_sd;
      case WKind::polymer_series:
        return std::sqrt(polymer_w->variance());
      case WKind::brw_bank: {
        double s1 = 0, s2 = 0;
        for (double w : *bank) {
          s1 += w;
          s2 += w * w;
        }
        const double m = s1 / bank->size();
        return std::sqrt(s2 / bank->size() - m * m);
      }
    }
    return 1.0;
  }

  double draw_w(RngStream& rng) const {
    switch (wkind) {
      case WKind::std_normal:
        return normal_sd * rng.next_normal();
      case WKind::polymer_series:
        return polymer_w->draw(polymer_spec, rng);
      case WKind::brw_bank:
        if (!bank || bank->empty())
          throw std::invalid_argument("brw limit law needs a W bank");
        return (*bank)[rng.next_below(bank->size())];
    }
    throw std::invalid_argument("unknown W kind");
  }

  // P[W <= w]; the bank kind uses its empirical distribution function
  double w_cdf(double w) const {
    switch (wkind) {
      case WKind::std_normal:
        return gauss_cdf(w / normal_sd);
      case WKind::polymer_series:
        // the series W is a large weighted i.i.d. sum; normal to first order
        return gauss_cdf(w / w_sd());
      case WKind::brw_bank: {
        const auto it = std::upper_bound(bank->begin(), bank->end(), w);
        return static_cast<double>(it - bank->begin()) / bank->size();
      }
    }
    return 0.0;
  }

  static LimitLaw std_normal_for(const ModelId& model) {
    LimitLaw law;
    law.model = model.kind;
    return law;
  }

  // normal W with a non-unit sd (e.g. the d >= 3 polymer series variance)
  static LimitLaw normal_for(const ModelId& model, double sd) {
    LimitLaw law;
    law.model = model.kind;
    law.normal_sd = sd;
    return law;
  }

  static LimitLaw polymer_d3(std::shared_ptr<const PolymerWSampler> sampler,
                             DisorderSpec spec) {
    LimitLaw law;
    law.model = ModelKind::polymer;
    law.wkind = WKind::polymer_series;
    law.polymer_w = std::move(sampler);
    law.polymer_spec = std::move(spec);
    return law;
  }

  static LimitLaw brw_with_bank(std::vector<double> draws) {
    LimitLaw law;
    law.model = ModelKind::brw;
    law.wkind = WKind::brw_bank;
    std::sort(draws.begin(), draws.end());
    law.bank = std::make_shared<const std::vector<double>>(std::move(draws));
    return law;
  }
};

// One draw of the limit process on the grid: a rank-one vector.
inline std::vector<double> limit_sample(const LimitLaw& law, const ZGrid& grid,
                                        RngStream& rng) {
  grid.validate();
  const double w = law.draw_w(rng);
  std::vector<double> out(grid.z.size());
  for (std::size_t j = 0; j < grid.z.size(); ++j)
    out[j] = law.multiplier(grid.z[j]) * w;
  return out;
}

// sup-norm distance between the empirical cdf of samples and cdf.
template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf) {
  if (samples.size() < 20)
    throw std::invalid_argument("ks_distance: at least 20 samples required");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - (i + 1.0) / n));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

// Asymptotic Kolmogorov critical value: 1.6276/sqrt(n) is the 1% level.
inline double ks_critical(double alpha, std::size_t n) {
  const double k = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return k / std::sqrt(static_cast<double>(n));
}

// Signed Pearson correlation between two grid columns of the matrix.
// Rank-one limits force |corr| -> 1; the spin-glass multiplier is odd in z,
// so its correlation across z = 0 comes out negative.
inline double rank_one_correlation(const ProcessMatrix& m, double z1,
                                   double z2) {
  auto locate = [&](double z) -> int {
    for (std::size_t j = 0; j < m.grid.z.size(); ++j)
      if (std::abs(m.grid.z[j] - z) < 1e-6) return static_cast<int>(j);
    throw std::invalid_argument("rank_one_correlation: z not on the grid");
  };
  const int a = locate(z1), b = locate(z2);
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int r = 0; r < m.R; ++r) {
    const double x = m.at(r, a), y = m.at(r, b);
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  const double n = m.R;
  const double va = saa / n - (sa / n) * (sa / n);
  const double vb = sbb / n - (sb / n) * (sb / n);
  if (va <= 0.0 || vb <= 0.0)
    throw std::domain_error("rank_one_correlation: zero-variance column");
  return (sab / n - (sa / n) * (sb / n)) / std::sqrt(va * vb);
}

// W bank for the branching random walk: draws of -sqrt(n)|T_n|^{-1} sum X_n
// at the deepest generation whose expected population stays within cap.
inline int brw_bank_depth(const OffspringLaw& law, double population_cap) {
  const double m = law.mean();
  int n = 1;
  while (n < 40 && std::pow(m, n + 1) <= population_cap) ++n;
  return n;
}

inline std::vector<double> brw_w_bank(const OffspringLaw& law,
                                      const DisorderSpec& spec, int draws,
                                      std::uint64_t seed,
                                      double population_cap = 300'000,
                                      unsigned threads = 0) {
  const int depth = brw_bank_depth(law, population_cap);
  std::vector<double> bank(draws);
  parallel_for(
      draws,
      [&](std::uint64_t i) {
        RngStream rng{seed, mix64(i ^ 0x57a7b4bcull), 0};
        const auto tree = brw_generate(law, depth, spec, rng,
                                       static_cast<std::size_t>(
                                           population_cap * 8));
        bank[i] = brw_w_statistic(tree, depth);
      },
      threads);
  return bank;
}

// ---------------------------------------------------------------------------
// convergence tables

struct ConvergenceRow {
  int n = 0;
  std::vector<double> mean;      // per z
  std::vector<double> variance;  // per z
  std::vector<double> ks;        // per z vs the limit marginal (NaN at 0)
  double rank_one_corr = 0.0;    // first vs last grid point
};

struct ConvergenceTable {
  std::string model;
  ZGrid grid;
  std::vector<ConvergenceRow> rows;
};

inline ConvergenceTable convergence_table(
    const ModelId& model, const DisorderSpec& spec, const LimitLaw& law,
    const std::vector<int>& n_list, int R, std::uint64_t M, const ZGrid& grid,
    const CenteringMode& centering, std::uint64_t seed, unsigned threads = 0) {
  ConvergenceTable table;
  table.model = model.name();
  table.grid = grid;
  for (int n : n_list) {
    const auto pm =
        replicate_engine(model, spec, n, R, M, grid, centering, seed, threads);
    ConvergenceRow row;
    row.n = n;
    const std::size_t Z = pm.grid.z.size();
    row.mean.resize(Z);
    row.variance.resize(Z);
    row.ks.resize(Z);
    for (std::size_t j = 0; j < Z; ++j) {
      const auto col = pm.column(static_cast<int>(j));
      double s1 = 0, s2 = 0;
      for (double v : col) {
        s1 += v;
        s2 += v * v;
      }
      row.mean[j] = s1 / col.size();
      row.variance[j] = s2 / col.size() - row.mean[j] * row.mean[j];
      const double mult = law.multiplier(pm.grid.z[j]);
      if (std::abs(mult) < 1e-12) {
        row.ks[j] = std::numeric_limits<double>::quiet_NaN();
      } else {
        row.ks[j] = ks_distance(col, [&](double v) {
          const double u = v / mult;
          return mult > 0 ? law.w_cdf(u) : 1.0 - law.w_cdf(u);
        });
      }
    }
    // correlate the outermost grid points whose columns carry variance
    // (extreme z can be degenerate at tiny n)
    int lo = -1, hi = -1;
    for (std::size_t j = 0; j < Z; ++j)
      if (row.variance[j] > 1e-18) {
        if (lo < 0) lo = static_cast<int>(j);
        hi = static_cast<int>(j);
      }
    row.rank_one_corr =
        (lo >= 0 && hi > lo)
            ? rank_one_correlation(pm, pm.grid.z[lo], pm.grid.z[hi])
            : std::numeric_limits<double>::quiet_NaN();
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace lclt
