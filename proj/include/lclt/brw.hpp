// Branching random walk: Galton-Watson trees with i.i.d. displacements,
// particle energies, pairwise ancestor overlaps and the normalized
// overlap-moment process V_n^{(k)}.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lclt/disorder.hpp"
#include "lclt/landscapes.hpp"
#include "lclt/rng.hpp"

namespace lclt {

// Generations 0..n; node j of generation g keeps its parent index in
// generation g-1 and the running displacement sum along its path.
struct BrwTree {
  OffspringLaw law;
  std::vector<std::vector<std::int32_t>> parent;  // per generation
  std::vector<std::vector<double>> position;      // per generation, sum of xi

  int depth() const { return static_cast<int>(parent.size()) - 1; }
  std::size_t generation_size(int g) const { return parent[g].size(); }

  // normalized particle energy X_n(t) = position / sqrt(n)
  double energy(int g, std::size_t node) const {
    return position[g][node] / std::sqrt(static_cast<double>(g));
  }
};

inline BrwTree brw_generate(const OffspringLaw& law, int n,
                            const DisorderSpec& spec, RngStream& rng,
                            std::size_t population_cap = 1'000'000) {
  law.validate();
  BrwTree t;
  t.law = law;
  t.parent.resize(n + 1);
  t.position.resize(n + 1);
  t.parent[0] = {-1};
  t.position[0] = {0.0};
  for (int g = 1; g <= n; ++g) {
    const auto& prev = t.position[g - 1];
    auto& par = t.parent[g];
    auto& pos = t.position[g];
    for (std::size_t j = 0; j < prev.size(); ++j) {
      const int children = law.draw(rng);
      for (int c = 0; c < children; ++c) {
        par.push_back(static_cast<std::int32_t>(j));
        pos.push_back(prev[j] + spec.draw(rng));
      }
    }
    if (pos.size() > population_cap)
      throw size_error("brw population cap exceeded at generation " +
                       std::to_string(g));
  }
  return t;
}

// V_n^{(k)} = m^{-2n} sum over ordered pairs of distinct generation-n
// particles of r^k, with r the depth of the last common ancestor. Computed
// from descendant counts: pairs splitting at a depth-j node v number
// c_v^2 - sum_children c_u^2.
inline double brw_vnk(const BrwTree& t, int n, int k) {
  if (n > t.depth()) throw std::invalid_argument("brw_vnk: tree too shallow");
  std::vector<std::int64_t> count(t.generation_size(n), 1);
  double acc = 0.0;
  for (int g = n; g >= 1; --g) {
    std::vector<std::int64_t> up(t.generation_size(g - 1), 0);
    std::vector<double> child_sq(t.generation_size(g - 1), 0.0);
    for (std::size_t j = 0; j < count.size(); ++j) {
      up[t.parent[g][j]] += count[j];
      child_sq[t.parent[g][j]] +=
          static_cast<double>(count[j]) * static_cast<double>(count[j]);
    }
    if (g - 1 >= 1) {
      // pairs whose last common ancestor sits at depth g-1
      double split = 0.0;
      for (std::size_t v = 0; v < up.size(); ++v)
        split += static_cast<double>(up[v]) * up[v] - child_sq[v];
      acc += split * std::pow(static_cast<double>(g - 1), k);
    }
    count = std::move(up);
  }
  return acc / std::pow(t.law.mean(), 2.0 * n);
}

// E[V_{n+1}^{(k)}] = gamma2 * sum_{i=1}^{n} i^k / m^{i+2}
inline double brw_vnk_expected(const OffspringLaw& law, int n_plus_1, int k) {
  const double m = law.mean();
  double acc = 0.0;
  for (int i = 1; i <= n_plus_1 - 1; ++i)
    acc += std::pow(static_cast<double>(i), k) / std::pow(m, i + 2.0);
  return law.gamma2() * acc;
}

// Uniform particle of generation n as a path-key configuration.
inline Configuration brw_sample_particle(const BrwTree& t, int n,
                                         RngStream& rng) {
  if (n > t.depth()) throw std::invalid_argument("tree too shallow");
  Configuration c;
  c.kind = ModelKind::brw;
  c.n = n;
  c.items.resize(n);
  std::size_t node = rng.next_below(t.generation_size(n));
  for (int g = n; g >= 1; --g) {
    c.items[g - 1] = static_cast<std::int32_t>(node);
    node = t.parent[g][node];
  }
  return c;
}

// -sqrt(n) |T_n|^{-1} sum_t X_n(t); its n -> infinity limit is the BRW W.
inline double brw_w_statistic(const BrwTree& t, int n) {
  const auto& pos = t.position[n];
  double s = 0.0;
  for (double p : pos) s += p;
  // sum of X_n over T_n is sum(pos)/sqrt(n)
  return -s / static_cast<double>(pos.size());
}

}  // namespace lclt
