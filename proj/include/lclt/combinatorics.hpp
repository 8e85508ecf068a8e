// Exact counting layer: pair counts for Hamiltonian cycles and spanning
// trees, transfer currents on the complete graph, overlap second moments
// and the condition ratio sum r^2 / (n s_n^2). Every closed form has a
// brute-force oracle driven by the landscapes enumerators.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lclt/bigint.hpp"
#include "lclt/landscapes.hpp"

namespace lclt {

enum class EdgeRelation { equal, share_one_vertex, disjoint };

// sum over all permutations of (#fixed points)^2; 2*n! for n >= 2.
inline BigInt fixed_point_square_sum(int n) {
  if (n < 1) throw std::invalid_argument("fixed_point_square_sum: n >= 1");
  if (n == 1) return 1;
  return 2 * big_factorial(n);
}

inline BigInt oracle_fixed_point_square_sum(int n) {
  const auto perms = enumerate_configs(ModelId::assignment(), n, 1'000'000);
  BigInt acc = 0;
  for (const auto& p : perms) {
    int fix = 0;
    for (int i = 0; i < n; ++i) fix += (p.items[i] == i);
    acc += fix * fix;
  }
  return acc;
}

// Hamiltonian cycles of K_n containing two given edges.
inline BigInt hp_pair_count(int n, EdgeRelation rel) {
  switch (rel) {
    case EdgeRelation::equal:
      if (n < 3) throw std::invalid_argument("hp_pair_count: n >= 3");
      return big_factorial(n - 2);
    case EdgeRelation::share_one_vertex:
      if (n < 3) throw std::invalid_argument("hp_pair_count: n >= 3");
      return big_factorial(n - 3);
    case EdgeRelation::disjoint:
      if (n < 4) throw std::invalid_argument("hp_pair_count: n >= 4");
      return 2 * big_factorial(n - 3);
  }
  throw std::invalid_argument("hp_pair_count: bad relation");
}

// Spanning trees of K_n containing two given edges, via the transfer
// current determinant times n^{n-2} (exact rationals, so the n^{n-4}
// closed forms stay valid down to n = 3).
inline BigRat st_pair_prob(int n, EdgeRelation rel);

inline BigInt st_pair_count(int n, EdgeRelation rel) {
  if (rel == EdgeRelation::equal && n < 3)
    throw std::invalid_argument("st_pair_count: n >= 3");
  if (rel != EdgeRelation::equal && n < (rel == EdgeRelation::disjoint ? 4 : 3))
    throw std::invalid_argument("st_pair_count: n too small for relation");
  const BigRat prob = st_pair_prob(n, rel);
  const BigRat count = prob * BigRat(big_pow(n, n - 2));
  if (boost::multiprecision::denominator(count) != 1)
    throw std::logic_error("st_pair_count: non-integer count");
  return BigInt(boost::multiprecision::numerator(count));
}

// Transfer current Y(g,h) on K_n for oriented edges g=(a,b), h=(c,d):
// 2/n on the diagonal, +-1/n for one shared endpoint, 0 for disjoint.
inline BigRat transfer_current(int n, int a, int b, int c, int d) {
  if (n < 3) throw std::invalid_argument("transfer_current: n >= 3");
  if (a == b || c == d)
    throw std::invalid_argument("transfer_current: loops not allowed");
  if (a == c && b == d) return BigRat(2, n);
  if (a == d && b == c) return BigRat(-2, n);
  if (a == c || b == d) return BigRat(1, n);
  if (a == d || b == c) return BigRat(-1, n);
  return BigRat(0);
}

// P[e, f in uniform spanning tree] = det [[Y(e,e), Y(e,f)], [Y(f,e), Y(f,f)]]
inline BigRat st_pair_prob(int n, int e1, int e2, int f1, int f2) {
  const BigRat yee = transfer_current(n, e1, e2, e1, e2);
  const BigRat yff = transfer_current(n, f1, f2, f1, f2);
  const BigRat yef = transfer_current(n, e1, e2, f1, f2);
  const BigRat yfe = transfer_current(n, f1, f2, e1, e2);
  return yee * yff - yef * yfe;
}

inline BigRat st_pair_prob(int n, EdgeRelation rel) {
  switch (rel) {
    case EdgeRelation::equal:
      return transfer_current(n, 0, 1, 0, 1);
    case EdgeRelation::share_one_vertex:
      return st_pair_prob(n, 0, 1, 1, 2);
    case EdgeRelation::disjoint:
      return st_pair_prob(n, 0, 1, 2, 3);
  }
  throw std::invalid_argument("st_pair_prob: bad relation");
}

// Number of configurations containing both edges, by enumeration.
inline BigInt oracle_pair_count(ModelKind kind, int n, int e1, int e2,
                                int f1, int f2) {
  const ModelId model =
      kind == ModelKind::hamiltonian ? ModelId::hamiltonian()
                                     : ModelId::spanning_tree();
  const auto configs = enumerate_configs(model, n, 1'000'000);
  const auto ke = static_cast<std::int32_t>(edge_key(e1, e2, n));
  const auto kf = static_cast<std::int32_t>(edge_key(f1, f2, n));
  BigInt acc = 0;
  std::vector<std::int32_t> edges;
  for (const auto& c : configs) {
    edges.clear();
    if (kind == ModelKind::spanning_tree) {
      edges.assign(c.items.begin(), c.items.end());
    } else {
      for (int i = 0; i < n; ++i)
        edges.push_back(static_cast<std::int32_t>(
            edge_key(c.items[i], c.items[(i + 1) % n], n)));
    }
    bool has_e = false, has_f = false;
    for (auto k : edges) {
      has_e |= (k == ke);
      has_f |= (k == kf);
    }
    if (has_e && has_f) ++acc;
  }
  return acc;
}

// Ordered pair counts over E_n^2 by relation: (share one vertex, disjoint).
inline std::pair<BigInt, BigInt> edge_pair_census(int n) {
  if (n < 2) throw std::invalid_argument("edge_pair_census: n >= 2");
  return {6 * big_binomial(n, 3), 6 * big_binomial(n, 4)};
}

// sum over ordered configuration pairs of r_n^2, exact closed forms from
// the per-relation pair counts.
inline BigInt overlap_square_sum(const ModelId& model, int n) {
  switch (model.kind) {
    case ModelKind::assignment:
      if (n < 2) throw std::invalid_argument("overlap_square_sum: n >= 2");
      return 2 * big_factorial(n) * big_factorial(n);
    case ModelKind::hamiltonian: {
      if (n < 4) throw std::invalid_argument("overlap_square_sum: n >= 4");
      const BigInt f2 = big_factorial(n - 2), f3 = big_factorial(n - 3);
      return big_binomial(n, 2) * f2 * f2 +
             6 * big_binomial(n, 3) * f3 * f3 +
             24 * big_binomial(n, 4) * f3 * f3;
    }
    case ModelKind::spanning_tree: {
      if (n < 3) throw std::invalid_argument("overlap_square_sum: n >= 3");
      // assemble from N_n(e,f)^2 in exact rationals: n^{2(n-4)} is
      // fractional at n = 3 while the total stays integral
      const BigRat nn = BigRat(big_pow(n, n - 2));
      BigRat acc = BigRat(n) * (n - 1) / 2 *
                   st_pair_prob(n, EdgeRelation::equal) *
                   st_pair_prob(n, EdgeRelation::equal) * nn * nn;
      acc += 6 * BigRat(big_binomial(n, 3)) *
             st_pair_prob(n, EdgeRelation::share_one_vertex) *
             st_pair_prob(n, EdgeRelation::share_one_vertex) * nn * nn;
      if (n >= 4)
        acc += 6 * BigRat(big_binomial(n, 4)) *
               st_pair_prob(n, EdgeRelation::disjoint) *
               st_pair_prob(n, EdgeRelation::disjoint) * nn * nn;
      if (boost::multiprecision::denominator(acc) != 1)
        throw std::logic_error("overlap_square_sum: non-integer total");
      return BigInt(boost::multiprecision::numerator(acc));
    }
    default:
      throw std::invalid_argument("overlap_square_sum: unsupported model");
  }
}

inline BigInt oracle_overlap_square_sum(const ModelId& model, int n,
                                        std::uint64_t limit = 1'000'000) {
  const auto configs = enumerate_configs(model, n, limit);
  BigInt acc = 0;
  for (const auto& a : configs)
    for (const auto& b : configs) {
      const long long r = overlap(model, a, b);
      acc += r * r;
    }
  return acc;
}

// sum r^2 / (n s_n^2); exactly 2 for assignments, bounded for the others.
inline double condition_ratio(const ModelId& model, int n) {
  const BigInt sq = overlap_square_sum(model, n);
  BigInt s2;
  switch (model.kind) {
    case ModelKind::assignment:
      s2 = big_factorial(n) * big_factorial(n - 1);
      break;
    case ModelKind::hamiltonian:
      s2 = big_factorial(n - 1) * big_factorial(n - 2);  // doubled below
      return to_double(BigRat(sq) / (BigRat(n) * BigRat(s2) / 2));
    case ModelKind::spanning_tree:
      s2 = 2 * big_pow(n, 2 * n - 5);
      break;
    default:
      throw std::invalid_argument("condition_ratio: unsupported model");
  }
  return to_double(BigRat(sq) / (BigRat(n) * BigRat(s2)));
}

}  // namespace lclt
