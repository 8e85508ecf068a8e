// Driving-noise laws: centered unit-variance distributions for the landscape
// weights, exact lattice convolutions for the normalized-sum law Phi_n,
// local-limit diagnostics and the Edgeworth term Q(z).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lclt/gaussian.hpp"
#include "lclt/rng.hpp"

namespace lclt {

enum class DisorderKind {
  rademacher,
  uniform_sym,
  std_normal,
  centered_exponential,
  two_point_skew,
};

// Support is b + h*Z with h maximal; atom values are b + h*index so that
// atom identity stays exact regardless of floating point.
struct Lattice {
  double b = 0.0;
  double h = 0.0;
  std::vector<std::pair<int, double>> atoms;  // (index, probability)
};

struct DisorderSpec {
  DisorderKind kind = DisorderKind::rademacher;
  std::string name;
  double third_moment = 0.0;
  double skew_a = 0.0;  // two_point_skew parameter
  std::optional<Lattice> lattice;

  static DisorderSpec rademacher() {
    DisorderSpec s;
    s.kind = DisorderKind::rademacher;
    s.name = "rademacher";
    s.lattice = Lattice{-1.0, 2.0, {{0, 0.5}, {1, 0.5}}};
    return s;
  }

  static DisorderSpec uniform_sym() {
    DisorderSpec s;
    s.kind = DisorderKind::uniform_sym;
    s.name = "uniform_sym";
    return s;
  }

  static DisorderSpec std_normal() {
    DisorderSpec s;
    s.kind = DisorderKind::std_normal;
    s.name = "std_normal";
    return s;
  }

  static DisorderSpec centered_exponential() {
    DisorderSpec s;
    s.kind = DisorderKind::centered_exponential;
    s.name = "centered_exponential";
    s.third_moment = 2.0;  // E(Exp(1) - 1)^3
    return s;
  }

  // Values {a, -1/a} with P[a] = 1/(1+a^2): mean 0, variance 1 and
  // E xi^3 = a - 1/a, a lattice law with tunable skew.
  static DisorderSpec two_point_skew(double a) {
    if (a <= 0.0 || a == 1.0)
      throw std::invalid_argument("two_point_skew requires a > 0, a != 1");
    DisorderSpec s;
    s.kind = DisorderKind::two_point_skew;
    s.name = "two_point_skew";
    s.skew_a = a;
    s.third_moment = a - 1.0 / a;
    const double pa = 1.0 / (1.0 + a * a);
    s.lattice = Lattice{-1.0 / a, a + 1.0 / a, {{0, 1.0 - pa}, {1, pa}}};
    return s;
  }

  bool is_lattice() const { return lattice.has_value(); }

  double draw(RngStream& rng) const {
    switch (kind) {
      case DisorderKind::rademacher:
        return (rng.next_u64() >> 63) ? 1.0 : -1.0;
      case DisorderKind::uniform_sym:
        return (2.0 * rng.next_unit() - 1.0) * std::numbers::sqrt3;
      case DisorderKind::std_normal:
        return rng.next_normal();
      case DisorderKind::centered_exponential:
        return -std::log(rng.next_unit_pos()) - 1.0;
      case DisorderKind::two_point_skew: {
        const double pa = 1.0 / (1.0 + skew_a * skew_a);
        return rng.next_unit() < pa ? skew_a : -1.0 / skew_a;
      }
    }
    throw std::invalid_argument("unknown disorder kind");
  }

  // Pure function of (seed, replicate, key): the lazily materialized
  // disorder field. Two counters are reserved per key so every kind,
  // including the Box-Muller normal, fits in a fixed budget.
  double keyed_value(std::uint64_t seed, std::uint64_t replicate,
                     std::uint64_t key) const {
    RngStream rng{seed, mix64(replicate ^ 0x9e3779b185ebca87ull), 2 * key};
    return draw(rng);
  }
};

inline std::vector<double> sample_xi(const DisorderSpec& spec, RngStream& rng,
                                     std::size_t count) {
  if (count < 1) throw std::invalid_argument("sample_xi: count >= 1 required");
  std::vector<double> out(count);
  for (auto& v : out) v = spec.draw(rng);
  return out;
}

// Distribution function of (xi_1 + ... + xi_n)/sqrt(n).
//
// Lattice specs get an exact convolution table over integer atom indices;
// std_normal is exact by Gaussian stability; everything else falls back to a
// Monte Carlo sample with a reported standard error. An exact table that
// would exceed the atom budget also falls back, with a warning flag.
class SumLaw {
 public:
  enum class Rep { exact_lattice, gaussian_exact, mc_sample };

  static constexpr std::size_t kDefaultAtomBudget = 1'000'000;
  static constexpr std::size_t kDefaultMcSamples = 1'000'000;

  SumLaw(const DisorderSpec& spec, int n,
         std::size_t atom_budget = kDefaultAtomBudget,
         std::size_t mc_samples = kDefaultMcSamples,
         RngStream mc_stream = RngStream{0x5eedf00d, 0, 0})
      : spec_(spec), n_(n) {
    if (n < 1) throw std::invalid_argument("SumLaw: n >= 1 required");
    if (spec.kind == DisorderKind::std_normal) {
      rep_ = Rep::gaussian_exact;
      return;
    }
    if (spec.is_lattice()) {
      const auto& lat = *spec.lattice;
      const int max_idx = lat.atoms.back().first;
      const std::size_t table = static_cast<std::size_t>(n) * max_idx + 1;
      if (table <= atom_budget) {
        rep_ = Rep::exact_lattice;
        build_lattice_table();
        return;
      }
      budget_fallback_ = true;
    }
    rep_ = Rep::mc_sample;
    mc_ = spec_mc_sample(mc_samples, mc_stream);
  }

  Rep rep() const { return rep_; }
  int n() const { return n_; }
  bool budget_fallback() const { return budget_fallback_; }

  // P[(xi_1+...+xi_n)/sqrt(n) <= z].
  double cdf(double z) const {
    switch (rep_) {
      case Rep::gaussian_exact:
        return gauss_cdf(z);
      case Rep::exact_lattice: {
        // Atoms sit at (n*b + h*k)/sqrt(n), k = 0..kmax; cum_ is inclusive.
        const double zs = z * std::sqrt(static_cast<double>(n_));
        const double nb = n_ * spec_.lattice->b;
        const double h = spec_.lattice->h;
        const double kf = std::floor((zs - nb) / h + 1e-12);
        if (kf < 0.0) return 0.0;
        const std::size_t k = static_cast<std::size_t>(kf);
        if (k >= cum_.size()) return 1.0;
        return cum_[k];
      }
      case Rep::mc_sample: {
        const auto it = std::upper_bound(mc_.begin(), mc_.end(), z);
        return static_cast<double>(it - mc_.begin()) / mc_.size();
      }
    }
    return 0.0;
  }

  // Standard error of cdf(z); zero for the exact representations.
  double cdf_se(double z) const {
    if (rep_ != Rep::mc_sample) return 0.0;
    const double f = cdf(z);
    return std::sqrt(f * (1.0 - f) / mc_.size());
  }

  // Exact-lattice accessors (index space: sum value = n*b + h*k).
  const std::vector<double>& pmf() const { return require_lattice(), pmf_; }
  double atom_sum_value(std::size_t k) const {
    require_lattice();
    return n_ * spec_.lattice->b + spec_.lattice->h * k;
  }
  double atom_position(std::size_t k) const {
    return atom_sum_value(k) / std::sqrt(static_cast<double>(n_));
  }

 private:
  void require_lattice() const {
    if (rep_ != Rep::exact_lattice)
      throw std::logic_error("SumLaw: exact lattice table not available");
  }

  void build_lattice_table() {
    const auto& lat = *spec_.lattice;
    const int max_idx = lat.atoms.back().first;
    pmf_.assign(1, 1.0);  // k = 0 for the empty sum
    std::vector<double> next;
    for (int step = 0; step < n_; ++step) {
      next.assign(pmf_.size() + max_idx, 0.0);
      for (std::size_t k = 0; k < pmf_.size(); ++k) {
        if (pmf_[k] == 0.0) continue;
        for (const auto& [idx, p] : lat.atoms) next[k + idx] += pmf_[k] * p;
      }
      pmf_.swap(next);
    }
    cum_.resize(pmf_.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < pmf_.size(); ++k) {
      acc += pmf_[k];
      cum_[k] = acc;
    }
  }

  std::vector<double> spec_mc_sample(std::size_t m, RngStream rng) const {
    std::vector<double> out(m);
    const double root_n = std::sqrt(static_cast<double>(n_));
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < n_; ++j) s += spec_.draw(rng);
      out[i] = s / root_n;
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  DisorderSpec spec_;
  int n_;
  Rep rep_ = Rep::mc_sample;
  bool budget_fallback_ = false;
  std::vector<double> pmf_, cum_;  // exact lattice
  std::vector<double> mc_;         // sorted MC sample
};

inline double phi_n(const DisorderSpec& spec, int n, double z) {
  return SumLaw(spec, n).cdf(z);
}

// Max over lattice atoms z of |P[S_n = z] - (h/sqrt n) p(z/sqrt n)|,
// the finite-n deviation in Gnedenko's local limit theorem. A margin of
// zero-probability atoms beyond the support is included, since the theorem
// is uniform over the whole lattice nb + hZ.
inline double local_limit_check(const DisorderSpec& spec, int n) {
  if (!spec.is_lattice())
    throw std::domain_error("local_limit_check: lattice disorder required");
  const SumLaw law(spec, n);
  if (law.rep() != SumLaw::Rep::exact_lattice)
    throw std::domain_error("local_limit_check: exact table unavailable");
  const double h = spec.lattice->h;
  const double root_n = std::sqrt(static_cast<double>(n));
  const auto& pmf = law.pmf();
  double worst = 0.0;
  const long margin = 8;
  for (long k = -margin; k < static_cast<long>(pmf.size()) + margin; ++k) {
    const double prob =
        (k >= 0 && k < static_cast<long>(pmf.size())) ? pmf[k] : 0.0;
    const double z = n * spec.lattice->b + h * k;
    const double approx = (h / root_n) * gauss_pdf(z / root_n);
    worst = std::max(worst, std::abs(prob - approx));
  }
  return worst;
}

// Edgeworth term Q(z) = (1/6) E[xi^3] (1 - z^2).
inline double edgeworth_q(const DisorderSpec& spec, double z) {
  return spec.third_moment * (1.0 - z * z) / 6.0;
}

}  // namespace lclt
