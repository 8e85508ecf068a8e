// The landscape models behind one interface: uniform configuration
// sampling, energy evaluation, overlaps, exact constants (c_n, s_n^2,
// |Omega_n|) and exhaustive enumeration at small n.
//
// A configuration is a model-tagged integer payload:
//   assignment    permutation, perm[i] = machine of job i
//   hamiltonian   canonical vertex sequence of the undirected cycle
//                 (minimal vertex first, smaller neighbor second)
//   spanning_tree sorted edge keys u*n+v, u < v
//   polymer       step codes in [0, 2d): axis s>>1, sign s&1
//   spin_glass    +-1 per vertex
//   brw           child indices along the tree path (see brw.hpp)
//   equicorrelated  opaque index

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "lclt/bigint.hpp"
#include "lclt/disorder.hpp"
#include "lclt/rng.hpp"
#include "lclt/walk.hpp"

namespace lclt {

enum class ModelKind {
  assignment,
  hamiltonian,
  spanning_tree,
  polymer,
  brw,
  spin_glass,
  equicorrelated,
};

struct OffspringLaw {
  std::vector<int> values;  // all >= 1 (no extinction)
  std::vector<double> probs;

  void validate() const {
    if (values.empty() || values.size() != probs.size())
      throw std::invalid_argument("offspring law: values/probs mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] < 1)
        throw std::invalid_argument("offspring law: Z >= 1 required");
      total += probs[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("offspring law: probabilities must sum to 1");
    if (mean() <= 1.0)
      throw std::invalid_argument("offspring law: supercritical mean required");
  }

  double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * probs[i];
    return m;
  }

  double gamma2() const {  // E[Z(Z-1)]
    double g = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      g += static_cast<double>(values[i]) * (values[i] - 1) * probs[i];
    return g;
  }

  int draw(RngStream& rng) const {
    double u = rng.next_unit();
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      if (u < probs[i]) return values[i];
      u -= probs[i];
    }
    return values.back();
  }

  static OffspringLaw fixed(int z) { return OffspringLaw{{z}, {1.0}}; }
  static OffspringLaw two_point(int a, int b, double pb) {
    return OffspringLaw{{a, b}, {1.0 - pb, pb}};
  }
};

enum class GraphKind { complete, box };

struct EpsRule {
  bool is_fixed = false;
  double fixed_value = 0.01;
  double scale = 1.0;
  double exponent = 1.0;

  double eps(int n) const {
    const double e = is_fixed
                         ? fixed_value
                         : scale * std::pow(static_cast<double>(n), -exponent);
    if (e <= 0.0 || e >= 1.0)
      throw std::invalid_argument("eps rule must land in (0,1)");
    return e;
  }

  static EpsRule fixed(double v) { return EpsRule{true, v, 0, 0}; }
  static EpsRule inverse_n(double scale = 1.0) {
    return EpsRule{false, 0, scale, 1.0};
  }
};

struct ModelId {
  ModelKind kind = ModelKind::assignment;
  int dim = 1;                           // polymer
  GraphKind graph = GraphKind::complete; // spin_glass
  int box_dim = 2;                       // spin_glass box
  OffspringLaw offspring;                // brw
  EpsRule eps_rule;                      // equicorrelated

  static ModelId assignment() { return {ModelKind::assignment}; }
  static ModelId hamiltonian() { return {ModelKind::hamiltonian}; }
  static ModelId spanning_tree() { return {ModelKind::spanning_tree}; }
  static ModelId polymer(int d) {
    if (d < 1) throw std::invalid_argument("polymer: d >= 1 required");
    ModelId m{ModelKind::polymer};
    m.dim = d;
    return m;
  }
  static ModelId brw(OffspringLaw law) {
    law.validate();
    ModelId m{ModelKind::brw};
    m.offspring = std::move(law);
    return m;
  }
  static ModelId spin_glass_sk() {
    ModelId m{ModelKind::spin_glass};
    m.graph = GraphKind::complete;
    return m;
  }
  static ModelId spin_glass_box(int d) {
    ModelId m{ModelKind::spin_glass};
    m.graph = GraphKind::box;
    m.box_dim = d;
    return m;
  }
  static ModelId equicorrelated(EpsRule rule) {
    ModelId m{ModelKind::equicorrelated};
    m.eps_rule = rule;
    return m;
  }

  std::string name() const {
    switch (kind) {
      case ModelKind::assignment: return "assignment";
      case ModelKind::hamiltonian: return "hamiltonian";
      case ModelKind::spanning_tree: return "spanning_tree";
      case ModelKind::polymer: return "polymer_d" + std::to_string(dim);
      case ModelKind::brw: return "brw";
      case ModelKind::spin_glass:
        return graph == GraphKind::complete ? "spin_glass_sk"
                                            : "spin_glass_ea";
      case ModelKind::equicorrelated: return "equicorrelated";
    }
    return "?";
  }
};

struct Configuration {
  ModelKind kind = ModelKind::assignment;
  int n = 0;
  std::vector<std::int32_t> items;
};

// ---------------------------------------------------------------------------
// disorder field: a lazily materialized, deterministically keyed assignment
// of xi values to base elements. One field per disorder replicate.

struct DisorderField {
  DisorderSpec spec;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  std::vector<double> dense;  // cache for the contiguous key range [0, size)

  double value(std::uint64_t key) const {
    return key < dense.size() ? dense[key]
                              : spec.keyed_value(seed, replicate, key);
  }

  void materialize(std::uint64_t count) {
    dense.resize(count);
    for (std::uint64_t k = 0; k < count; ++k)
      dense[k] = spec.keyed_value(seed, replicate, k);
  }
};

// element keys
inline std::uint64_t assignment_key(int i, int j, int n) {
  return static_cast<std::uint64_t>(i) * n + j;
}
inline std::uint64_t edge_key(int u, int v, int n) {
  if (u > v) std::swap(u, v);
  return static_cast<std::uint64_t>(u) * n + v;
}
// (k, x) for polymers, d <= 3: 16 bits per coordinate plus the time index
inline std::uint64_t polymer_key(int k, const int* x, int d) {
  std::uint64_t key = static_cast<std::uint64_t>(k);
  for (int j = 0; j < d; ++j)
    key = (key << 16) | static_cast<std::uint64_t>(x[j] + 32768);
  return key;
}

// ---------------------------------------------------------------------------
// spin-glass graphs

struct SpinGraph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;

  static SpinGraph complete(int n) {
    SpinGraph g;
    g.vertices = n;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) g.edges.emplace_back(u, v);
    return g;
  }

  // d-dimensional box with side length L, nearest-neighbor edges, free
  // boundary conditions.
  static SpinGraph box(int d, int side) {
    SpinGraph g;
    int total = 1;
    for (int j = 0; j < d; ++j) total *= side;
    g.vertices = total;
    std::vector<int> stride(d, 1);
    for (int j = 1; j < d; ++j) stride[j] = stride[j - 1] * side;
    for (int v = 0; v < total; ++v) {
      int rest = v;
      for (int j = 0; j < d; ++j) {
        const int coord = (rest / stride[j]) % side;
        if (coord + 1 < side) g.edges.emplace_back(v, v + stride[j]);
        rest = v;
      }
    }
    return g;
  }
};

inline SpinGraph spin_graph(const ModelId& model, int n) {
  if (model.kind != ModelKind::spin_glass)
    throw std::invalid_argument("spin_graph: spin_glass model required");
  return model.graph == GraphKind::complete
             ? SpinGraph::complete(n)
             : SpinGraph::box(model.box_dim, n);
}

// ---------------------------------------------------------------------------
// exact counts and constants

inline BigInt base_size(const ModelId& model, int n) {
  switch (model.kind) {
    case ModelKind::assignment:
      if (n < 1) throw std::invalid_argument("assignment: n >= 1");
      return big_factorial(n);
    case ModelKind::hamiltonian:
      if (n < 3) throw std::invalid_argument("hamiltonian: n >= 3");
      return big_factorial(n - 1) / 2;
    case ModelKind::spanning_tree:
      if (n < 2) throw std::invalid_argument("spanning_tree: n >= 2");
      return n == 2 ? BigInt(1) : big_pow(n, n - 2);
    case ModelKind::polymer:
      if (n < 1) throw std::invalid_argument("polymer: n >= 1");
      return big_pow(2 * model.dim, n);
    case ModelKind::spin_glass:
      return big_pow(2, spin_graph(model, n).vertices);
    default:
      throw std::invalid_argument(
          "base_size: not defined for this model kind");
  }
}

inline int energy_summand_count(const ModelId& model, int n) {
  switch (model.kind) {
    case ModelKind::assignment:
    case ModelKind::hamiltonian:
    case ModelKind::polymer:
      return n;
    case ModelKind::spanning_tree:
      return n - 1;
    case ModelKind::brw:
      return n;
    case ModelKind::spin_glass:
      return static_cast<int>(spin_graph(model, n).edges.size());
    default:
      throw std::invalid_argument("energy_summand_count: unsupported model");
  }
}

inline double scaling_cn(const ModelId& model, int n) {
  switch (model.kind) {
    case ModelKind::assignment:
      if (n < 2) throw std::invalid_argument("scaling_cn: n >= 2");
      return std::sqrt(static_cast<double>(n));
    case ModelKind::hamiltonian:
      if (n < 3) throw std::invalid_argument("scaling_cn: n >= 3");
      return std::sqrt(n / 2.0);
    case ModelKind::spanning_tree:
      if (n < 2) throw std::invalid_argument("scaling_cn: n >= 2");
      return std::sqrt(n / 2.0);
    case ModelKind::polymer:
      if (model.dim == 1)
        return std::pow(std::numbers::pi * n / 4.0, 0.25);
      if (model.dim == 2) {
        if (n < 2) throw std::invalid_argument("scaling_cn: n >= 2 for d=2");
        return std::sqrt(std::numbers::pi * n / std::log((double)n));
      }
      return std::sqrt(static_cast<double>(n));
    case ModelKind::brw:
      return std::sqrt(static_cast<double>(n));
    case ModelKind::spin_glass:
      return std::sqrt(
          static_cast<double>(spin_graph(model, n).edges.size()));
    case ModelKind::equicorrelated:
      return 1.0 / std::sqrt(model.eps_rule.eps(n));
  }
  throw std::invalid_argument("scaling_cn: unknown model");
}

// log of s_n^2 = Var[sum_omega X_n(omega)]; closed forms per model, the
// polymer case through the exact return-probability series.
inline double s_n_squared_log(const ModelId& model, int n) {
  switch (model.kind) {
    case ModelKind::assignment:  // n!(n-1)!
      return std::lgamma(n + 1.0) + std::lgamma(static_cast<double>(n));
    case ModelKind::hamiltonian:  // (1/2)(n-1)!(n-2)!
      return std::lgamma(static_cast<double>(n)) + std::lgamma(n - 1.0) -
             std::log(2.0);
    case ModelKind::spanning_tree:  // 2 n^{2n-5}
      return std::log(2.0) + (2.0 * n - 5.0) * std::log((double)n);
    case ModelKind::polymer: {  // (2d)^{2n}/n * sum_{k<=n} p_{2k}(0)
      const auto series = origin_return_series(model.dim, n);
      double acc = 0.0;
      for (int k = 1; k <= n; ++k) acc += series[k];
      return 2.0 * n * std::log(2.0 * model.dim) - std::log((double)n) +
             std::log(acc);
    }
    default:
      throw std::domain_error("s_n_squared: no closed form for this model");
  }
}

inline double s_n_squared(const ModelId& model, int n) {
  return std::exp(s_n_squared_log(model, n));
}

// ---------------------------------------------------------------------------
// canonical form and enumeration

// Lexicographically minimal representative of the dihedral orbit: the
// smallest vertex first, then the smaller of its two cycle neighbors.
inline void canonicalize_cycle(std::vector<std::int32_t>& c) {
  const auto mn = std::min_element(c.begin(), c.end());
  std::rotate(c.begin(), mn, c.end());
  if (c.size() > 2 && c.back() < c[1]) std::reverse(c.begin() + 1, c.end());
}

// Prufer sequence -> labeled tree on {0..n-1}, returned as sorted edge keys.
inline std::vector<std::int32_t> prufer_decode(
    const std::vector<std::int32_t>& seq, int n) {
  std::vector<int> degree(n, 1);
  for (int s : seq) ++degree[s];
  std::vector<std::int32_t> edges;
  edges.reserve(n - 1);
  int ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  int leaf = ptr;
  for (int s : seq) {
    edges.push_back(static_cast<std::int32_t>(edge_key(leaf, s, n)));
    if (--degree[s] == 1 && s < ptr) {
      leaf = s;
    } else {
      ++ptr;
      while (ptr < n && degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.push_back(static_cast<std::int32_t>(edge_key(leaf, n - 1, n)));
  std::sort(edges.begin(), edges.end());
  return edges;
}

inline Configuration sample_config(const ModelId& model, int n,
                                   RngStream& rng) {
  Configuration c;
  c.kind = model.kind;
  c.n = n;
  switch (model.kind) {
    case ModelKind::assignment: {
      c.items.resize(n);
      std::iota(c.items.begin(), c.items.end(), 0);
      for (int i = n - 1; i > 0; --i)
        std::swap(c.items[i], c.items[rng.next_below(i + 1)]);
      return c;
    }
    case ModelKind::hamiltonian: {
      if (n < 3) throw std::invalid_argument("hamiltonian: n >= 3");
      c.items.resize(n);
      std::iota(c.items.begin(), c.items.end(), 0);
      for (int i = n - 1; i > 0; --i)
        std::swap(c.items[i], c.items[rng.next_below(i + 1)]);
      canonicalize_cycle(c.items);
      return c;
    }
    case ModelKind::spanning_tree: {
      if (n < 2) throw std::invalid_argument("spanning_tree: n >= 2");
      std::vector<std::int32_t> seq(std::max(0, n - 2));
      for (auto& s : seq) s = static_cast<std::int32_t>(rng.next_below(n));
      c.items = prufer_decode(seq, n);
      return c;
    }
    case ModelKind::polymer: {
      c.items.resize(n);
      for (auto& s : c.items)
        s = static_cast<std::int32_t>(rng.next_below(2 * model.dim));
      return c;
    }
    case ModelKind::spin_glass: {
      const auto g = spin_graph(model, n);
      c.items.resize(g.vertices);
      for (auto& s : c.items) s = (rng.next_u64() >> 63) ? 1 : -1;
      return c;
    }
    default:
      throw std::invalid_argument(
          "sample_config: use the brw/equicorrelated entry points");
  }
}

inline std::vector<Configuration> enumerate_configs(const ModelId& model,
                                                    int n,
                                                    std::uint64_t limit) {
  const BigInt count = base_size(model, n);
  if (count > limit)
    throw size_error("enumeration refused: |Omega_n| = " + count.str() +
                     " exceeds limit " + std::to_string(limit));
  std::vector<Configuration> out;
  out.reserve(static_cast<std::size_t>(count));

  auto push = [&](std::vector<std::int32_t> items) {
    out.push_back(Configuration{model.kind, n, std::move(items)});
  };

  switch (model.kind) {
    case ModelKind::assignment: {
      std::vector<std::int32_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      do push(perm);
      while (std::next_permutation(perm.begin(), perm.end()));
      return out;
    }
    case ModelKind::hamiltonian: {
      // vertex 0 stays first; direction fixed by tail[first] < tail[last]
      std::vector<std::int32_t> tail(n - 1);
      std::iota(tail.begin(), tail.end(), 1);
      do {
        if (tail.front() > tail.back()) continue;
        std::vector<std::int32_t> cyc(n);
        cyc[0] = 0;
        std::copy(tail.begin(), tail.end(), cyc.begin() + 1);
        push(std::move(cyc));
      } while (std::next_permutation(tail.begin(), tail.end()));
      return out;
    }
    case ModelKind::spanning_tree: {
      if (n == 2) {
        push({static_cast<std::int32_t>(edge_key(0, 1, 2))});
        return out;
      }
      std::vector<std::int32_t> seq(n - 2, 0);
      while (true) {
        push(prufer_decode(seq, n));
        int pos = n - 3;
        while (pos >= 0 && seq[pos] == n - 1) seq[pos--] = 0;
        if (pos < 0) break;
        ++seq[pos];
      }
      return out;
    }
    case ModelKind::polymer: {
      const int base = 2 * model.dim;
      std::vector<std::int32_t> steps(n, 0);
      while (true) {
        push(steps);
        int pos = n - 1;
        while (pos >= 0 && steps[pos] == base - 1) steps[pos--] = 0;
        if (pos < 0) break;
        ++steps[pos];
      }
      return out;
    }
    case ModelKind::spin_glass: {
      const auto g = spin_graph(model, n);
      const int v = g.vertices;
      for (std::uint64_t mask = 0; mask < (1ull << v); ++mask) {
        std::vector<std::int32_t> spins(v);
        for (int b = 0; b < v; ++b) spins[b] = (mask >> b) & 1 ? 1 : -1;
        push(std::move(spins));
      }
      return out;
    }
    default:
      throw std::invalid_argument("enumerate_configs: unsupported model");
  }
}

// ---------------------------------------------------------------------------
// energy and overlap

// Generic field access lets tests override the disorder (e.g. all-zero).
template <typename FieldFn>
double energy_with(const ModelId& model, const Configuration& c,
                   FieldFn&& field) {
  const int n = c.n;
  switch (model.kind) {
    case ModelKind::assignment: {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += field(assignment_key(i, c.items[i], n));
      return s / std::sqrt(static_cast<double>(n));
    }
    case ModelKind::hamiltonian: {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += field(edge_key(c.items[i], c.items[(i + 1) % n], n));
      return s / std::sqrt(static_cast<double>(n));
    }
    case ModelKind::spanning_tree: {
      double s = 0.0;
      for (auto k : c.items) s += field(static_cast<std::uint64_t>(k));
      return s / std::sqrt(static_cast<double>(n - 1));
    }
    case ModelKind::polymer: {
      const int d = model.dim;
      int x[3] = {0, 0, 0};
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        const int step = c.items[k];
        x[step >> 1] += (step & 1) ? 1 : -1;
        s += field(polymer_key(k + 1, x, d));
      }
      return s / std::sqrt(static_cast<double>(n));
    }
    case ModelKind::spin_glass: {
      const auto g = spin_graph(model, n);
      double s = 0.0;
      for (const auto& [u, v] : g.edges)
        s += c.items[u] * c.items[v] * field(edge_key(u, v, g.vertices));
      return s / std::sqrt(static_cast<double>(g.edges.size()));
    }
    default:
      throw std::invalid_argument("energy: unsupported model");
  }
}

inline double energy(const ModelId& model, const Configuration& c,
                     const DisorderField& field) {
  return energy_with(model, c,
                     [&](std::uint64_t key) { return field.value(key); });
}

// Shared-element count; the spin glass uses the real-valued rho variant.
inline int overlap(const ModelId& model, const Configuration& a,
                   const Configuration& b) {
  if (a.kind != b.kind || a.n != b.n)
    throw std::invalid_argument("overlap: model/size mismatch");
  switch (model.kind) {
    case ModelKind::assignment: {
      int r = 0;
      for (int i = 0; i < a.n; ++i) r += (a.items[i] == b.items[i]);
      return r;
    }
    case ModelKind::hamiltonian: {
      const int n = a.n;
      std::vector<std::int32_t> ea(n), eb(n);
      for (int i = 0; i < n; ++i) {
        ea[i] = static_cast<std::int32_t>(
            edge_key(a.items[i], a.items[(i + 1) % n], n));
        eb[i] = static_cast<std::int32_t>(
            edge_key(b.items[i], b.items[(i + 1) % n], n));
      }
      std::sort(ea.begin(), ea.end());
      std::sort(eb.begin(), eb.end());
      std::vector<std::int32_t> common;
      std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(),
                            std::back_inserter(common));
      return static_cast<int>(common.size());
    }
    case ModelKind::spanning_tree: {
      std::vector<std::int32_t> common;
      std::set_intersection(a.items.begin(), a.items.end(), b.items.begin(),
                            b.items.end(), std::back_inserter(common));
      return static_cast<int>(common.size());
    }
    case ModelKind::polymer: {
      int xa[3] = {0, 0, 0}, xb[3] = {0, 0, 0};
      const int d = model.dim;
      int r = 0;
      for (int k = 0; k < a.n; ++k) {
        xa[a.items[k] >> 1] += (a.items[k] & 1) ? 1 : -1;
        xb[b.items[k] >> 1] += (b.items[k] & 1) ? 1 : -1;
        bool same = true;
        for (int j = 0; j < d; ++j) same &= (xa[j] == xb[j]);
        r += same;
      }
      return r;
    }
    case ModelKind::brw: {
      int r = 0;
      while (r < a.n && a.items[r] == b.items[r]) ++r;
      return r;
    }
    default:
      throw std::invalid_argument("overlap: use rho_overlap for spin glasses");
  }
}

// rho_n(w1,w2) = |E|^{-1} sum_e (w1<>e)(w2<>e)
inline double rho_overlap(const ModelId& model, const Configuration& a,
                          const Configuration& b) {
  if (model.kind != ModelKind::spin_glass)
    throw std::invalid_argument("rho_overlap: spin_glass only");
  const auto g = spin_graph(model, a.n);
  long long s = 0;
  for (const auto& [u, v] : g.edges)
    s += (a.items[u] * a.items[v]) * (b.items[u] * b.items[v]);
  return static_cast<double>(s) / static_cast<double>(g.edges.size());
}

// ---------------------------------------------------------------------------
// equicorrelated pipeline self-test model: X_i = sqrt(1-eps) G_i + sqrt(eps) N

inline std::vector<double> equicorrelated_energies(std::size_t count,
                                                   double eps,
                                                   RngStream& rng) {
  if (eps <= 0.0 || eps >= 1.0)
    throw std::invalid_argument("equicorrelated: eps in (0,1) required");
  const double shared = rng.next_normal();
  std::vector<double> out(count);
  const double a = std::sqrt(1.0 - eps), b = std::sqrt(eps);
  for (auto& v : out) v = a * rng.next_normal() + b * shared;
  return out;
}

}  // namespace lclt
