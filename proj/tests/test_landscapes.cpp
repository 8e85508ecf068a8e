#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "lclt/gaussian.hpp"
#include "lclt/landscapes.hpp"

using namespace lclt;

TEST_CASE("base sizes") {
  REQUIRE(base_size(ModelId::assignment(), 3) == 6);
  REQUIRE(base_size(ModelId::hamiltonian(), 4) == 3);
  REQUIRE(base_size(ModelId::spanning_tree(), 4) == 16);
  REQUIRE(base_size(ModelId::polymer(1), 3) == 8);
  REQUIRE(base_size(ModelId::polymer(2), 2) == 16);
  REQUIRE(base_size(ModelId::spin_glass_sk(), 4) == 16);
  REQUIRE_THROWS_AS(base_size(ModelId::hamiltonian(), 2),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(base_size(ModelId::brw(OffspringLaw::fixed(2)), 3),
                    std::invalid_argument);
}

TEST_CASE("enumeration is exact and distinct") {
  auto key_of = [](const Configuration& c) {
    return std::vector<int>(c.items.begin(), c.items.end());
  };
  for (auto [model, n] :
       std::vector<std::pair<ModelId, int>>{{ModelId::assignment(), 3},
                                            {ModelId::hamiltonian(), 5},
                                            {ModelId::spanning_tree(), 4},
                                            {ModelId::polymer(1), 3}}) {
    const auto configs = enumerate_configs(model, n, 100000);
    REQUIRE(BigInt(configs.size()) == base_size(model, n));
    std::set<std::vector<int>> uniq;
    for (const auto& c : configs) uniq.insert(key_of(c));
    REQUIRE(uniq.size() == configs.size());
  }
  // spanning trees decode to valid trees: n-1 distinct edges, connected
  for (const auto& c : enumerate_configs(ModelId::spanning_tree(), 5, 1000)) {
    REQUIRE(c.items.size() == 4);
    std::vector<int> comp(5);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int v) {
      return comp[v] == v ? v : comp[v] = find(comp[v]);
    };
    for (auto k : c.items) comp[find(k / 5)] = find(k % 5);
    for (int v = 1; v < 5; ++v) REQUIRE(find(v) == find(0));
  }
  REQUIRE_THROWS_AS(enumerate_configs(ModelId::assignment(), 30, 1000),
                    size_error);
}

TEST_CASE("uniform sampling hits every configuration equally") {
  struct Case {
    ModelId model;
    int n;
    int draws;
  };
  for (const auto& tc : {Case{ModelId::spanning_tree(), 4, 100000},
                         Case{ModelId::hamiltonian(), 4, 60000},
                         Case{ModelId::assignment(), 3, 60000}}) {
    const auto all = enumerate_configs(tc.model, tc.n, 1000);
    std::map<std::vector<std::int32_t>, int> hits;
    for (const auto& c : all) hits[c.items] = 0;
    RngStream rng{31337, 0, 0};
    for (int i = 0; i < tc.draws; ++i) {
      const auto c = sample_config(tc.model, tc.n, rng);
      auto it = hits.find(c.items);
      REQUIRE(it != hits.end());
      ++it->second;
    }
    const double p = 1.0 / all.size();
    const double expect = tc.draws * p;
    const double se = std::sqrt(tc.draws * p * (1.0 - p));
    for (const auto& [k, h] : hits)
      REQUIRE(std::abs(h - expect) < 4.0 * se);
  }
}

TEST_CASE("cycle canonical form is orbit-invariant") {
  RngStream rng{5, 0, 0};
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 5 + static_cast<int>(rng.next_below(4));
    auto c = sample_config(ModelId::hamiltonian(), n, rng);
    // arbitrary rotation + optional reflection of the stored cycle
    auto rep = c.items;
    const int rot = static_cast<int>(rng.next_below(n));
    std::rotate(rep.begin(), rep.begin() + rot, rep.end());
    if (rng.next_u64() & 1) std::reverse(rep.begin(), rep.end());
    canonicalize_cycle(rep);
    REQUIRE(rep == c.items);
  }
}

TEST_CASE("energy: zero field, moments, and distinct summands") {
  auto zero = [](std::uint64_t) { return 0.0; };
  RngStream rng{7, 0, 0};
  for (auto [model, n] :
       std::vector<std::pair<ModelId, int>>{{ModelId::assignment(), 5},
                                            {ModelId::hamiltonian(), 5},
                                            {ModelId::spanning_tree(), 5},
                                            {ModelId::polymer(2), 5},
                                            {ModelId::spin_glass_sk(), 5}}) {
    auto c = sample_config(model, n, rng);
    REQUIRE(energy_with(model, c, zero) == 0.0);

    // exact term counting: every configuration touches summand_count
    // distinct keys, each with weight 1/sqrt(summand_count)
    std::set<std::uint64_t> keys;
    energy_with(model, c, [&](std::uint64_t k) {
      keys.insert(k);
      return 0.0;
    });
    REQUIRE(static_cast<int>(keys.size()) == energy_summand_count(model, n));
  }

  SECTION("E[energy] = 0, Var[energy] = 1 across disorder replicates") {
    const auto model = ModelId::hamiltonian();
    const auto spec = DisorderSpec::rademacher();
    RngStream crng{11, 0, 0};
    const auto c = sample_config(model, 6, crng);
    const int reps = 100000;
    double s1 = 0, s2 = 0;
    for (int r = 0; r < reps; ++r) {
      DisorderField f{spec, 99, static_cast<std::uint64_t>(r)};
      const double e = energy(model, c, f);
      s1 += e;
      s2 += e * e;
    }
    const double mean = s1 / reps;
    REQUIRE(std::abs(mean) < 4.0 / std::sqrt((double)reps));
    REQUIRE(s2 / reps - mean * mean == Catch::Approx(1.0).epsilon(0.03));
  }

  SECTION("spin glass energy is invariant under a global flip") {
    const auto model = ModelId::spin_glass_sk();
    RngStream crng{13, 0, 0};
    auto c = sample_config(model, 8, crng);
    DisorderField f{DisorderSpec::std_normal(), 5, 1};
    const double e = energy(model, c, f);
    for (auto& s : c.items) s = -s;
    REQUIRE(energy(model, c, f) == e);
  }
}

TEST_CASE("overlap semantics") {
  RngStream rng{23, 0, 0};
  SECTION("self-overlap equals the summand count") {
    for (auto [model, n] :
         std::vector<std::pair<ModelId, int>>{{ModelId::assignment(), 6},
                                              {ModelId::hamiltonian(), 6},
                                              {ModelId::spanning_tree(), 6},
                                              {ModelId::polymer(1), 6}}) {
      const auto c = sample_config(model, n, rng);
      REQUIRE(overlap(model, c, c) == energy_summand_count(model, n));
    }
  }
  SECTION("any two distinct cycles of K4 share exactly 2 edges") {
    const auto cycles = enumerate_configs(ModelId::hamiltonian(), 4, 100);
    REQUIRE(cycles.size() == 3);
    for (std::size_t i = 0; i < cycles.size(); ++i)
      for (std::size_t j = i + 1; j < cycles.size(); ++j)
        REQUIRE(overlap(ModelId::hamiltonian(), cycles[i], cycles[j]) == 2);
  }
  SECTION("any two distinct trees of K3 share exactly 1 edge") {
    const auto trees = enumerate_configs(ModelId::spanning_tree(), 3, 100);
    REQUIRE(trees.size() == 3);
    for (std::size_t i = 0; i < trees.size(); ++i)
      for (std::size_t j = i + 1; j < trees.size(); ++j)
        REQUIRE(overlap(ModelId::spanning_tree(), trees[i], trees[j]) == 1);
  }
  SECTION("polymer overlap matches a direct path walk") {
    const auto model = ModelId::polymer(2);
    for (int trial = 0; trial < 50; ++trial) {
      const auto a = sample_config(model, 10, rng);
      const auto b = sample_config(model, 10, rng);
      int xa[2] = {0, 0}, xb[2] = {0, 0}, want = 0;
      for (int k = 0; k < 10; ++k) {
        xa[a.items[k] >> 1] += (a.items[k] & 1) ? 1 : -1;
        xb[b.items[k] >> 1] += (b.items[k] & 1) ? 1 : -1;
        want += (xa[0] == xb[0] && xa[1] == xb[1]);
      }
      REQUIRE(overlap(model, a, b) == want);
      REQUIRE(overlap(model, a, b) == overlap(model, b, a));
      REQUIRE(overlap(model, a, b) <= overlap(model, a, a));
    }
  }
}

TEST_CASE("scaling constants") {
  REQUIRE(scaling_cn(ModelId::assignment(), 100) == 10.0);
  REQUIRE(scaling_cn(ModelId::hamiltonian(), 8) ==
          Catch::Approx(2.0).margin(1e-15));
  REQUIRE(scaling_cn(ModelId::polymer(1), 4) ==
          Catch::Approx(std::pow(std::numbers::pi, 0.25)).margin(1e-12));
  REQUIRE(scaling_cn(ModelId::spin_glass_sk(), 4) ==
          Catch::Approx(std::sqrt(6.0)).margin(1e-12));
  REQUIRE(scaling_cn(ModelId::polymer(2), 100) ==
          Catch::Approx(std::sqrt(100.0 * std::numbers::pi /
                                  std::log(100.0))).margin(1e-9));
}

TEST_CASE("s_n^2 closed forms") {
  REQUIRE(s_n_squared(ModelId::assignment(), 3) ==
          Catch::Approx(12.0).epsilon(1e-12));
  REQUIRE(s_n_squared(ModelId::spanning_tree(), 3) ==
          Catch::Approx(6.0).epsilon(1e-12));
  REQUIRE(s_n_squared(ModelId::hamiltonian(), 4) ==
          Catch::Approx(6.0).epsilon(1e-12));
  REQUIRE_THROWS_AS(s_n_squared(ModelId::spin_glass_sk(), 4),
                    std::domain_error);
  // polymer: (2d)^{2n}/n sum p_{2k}(0); d=1, n=1: 4 * 1/2 = 2
  REQUIRE(s_n_squared(ModelId::polymer(1), 1) ==
          Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("spin glass: sum of energies vanishes for every realization") {
  for (auto [model, n] : std::vector<std::pair<ModelId, int>>{
           {ModelId::spin_glass_sk(), 14}, {ModelId::spin_glass_box(2), 4}}) {
    const auto g = spin_graph(model, n);
    DisorderField f{DisorderSpec::std_normal(), 77, 0};
    double total = 0.0;
    const std::uint64_t omega = 1ull << g.vertices;
    std::vector<double> j(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      j[e] = f.value(edge_key(g.edges[e].first, g.edges[e].second,
                              g.vertices));
    const double norm = 1.0 / std::sqrt((double)g.edges.size());
    for (std::uint64_t mask = 0; mask < omega; ++mask) {
      double s = 0.0;
      for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const int su = (mask >> g.edges[e].first) & 1 ? 1 : -1;
        const int sv = (mask >> g.edges[e].second) & 1 ? 1 : -1;
        s += su * sv * j[e];
      }
      total += s * norm;
    }
    REQUIRE(std::abs(total) < 1e-10);
  }
}

TEST_CASE("equicorrelated energies") {
  RngStream rng{41, 0, 0};
  const double eps = 0.1;
  const int groups = 4000, per = 8;
  double cross = 0.0, count = 0.0;
  std::vector<double> all;
  for (int g = 0; g < groups; ++g) {
    const auto xs = equicorrelated_energies(per, eps, rng);
    for (int i = 0; i < per; ++i) {
      all.push_back(xs[i]);
      for (int j = i + 1; j < per; ++j) {
        cross += xs[i] * xs[j];
        count += 1.0;
      }
    }
  }
  // population pairwise correlation is eps exactly; MC estimate agrees
  REQUIRE(cross / count == Catch::Approx(eps).margin(4.0 / std::sqrt(count)));

  // each marginal is standard normal: KS at the asymptotic 1% level
  std::sort(all.begin(), all.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const double f = gauss_cdf(all[i]);
    ks = std::max(ks, std::abs(f - (i + 1.0) / all.size()));
    ks = std::max(ks, std::abs(f - i * 1.0 / all.size()));
  }
  REQUIRE(ks < 1.6276 / std::sqrt((double)all.size()));
  REQUIRE_THROWS_AS(equicorrelated_energies(10, 1.5, rng),
                    std::invalid_argument);
}
