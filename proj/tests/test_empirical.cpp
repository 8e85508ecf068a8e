#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lclt/empirical.hpp"

using namespace lclt;

TEST_CASE("empirical cdf") {
  const ZGrid grid{{-0.5, 0.0, 0.5, 2.0}};
  const std::vector<double> energies{-1.0, 0.0, 1.0};
  const auto f = empirical_cdf(energies, grid);
  REQUIRE(f[0] == Catch::Approx(1.0 / 3.0));
  REQUIRE(f[1] == Catch::Approx(2.0 / 3.0));  // closed indicator at 0
  REQUIRE(f[2] == Catch::Approx(2.0 / 3.0));
  REQUIRE(f[3] == Catch::Approx(1.0));
  for (std::size_t j = 1; j < f.size(); ++j) REQUIRE(f[j] >= f[j - 1]);
  REQUIRE(empirical_cdf({{0.0}}, ZGrid{{-1.0}})[0] == 0.0);
  REQUIRE(empirical_cdf({{0.0}}, ZGrid{{0.0}})[0] == 1.0);
  REQUIRE_THROWS_AS(empirical_cdf(std::vector<double>{}, grid),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(empirical_cdf(energies, ZGrid{{1.0, 1.0}}),
                    std::invalid_argument);
}

TEST_CASE("grid nudging moves points off lattice atoms") {
  const SumLaw law(DisorderSpec::rademacher(), 4);
  // atoms of S_4/sqrt4 sit at -2,-1.5,...: z = 0 is an atom
  const auto g = nudge_off_atoms(ZGrid{{-1.0, 0.0, 0.3}}, law);
  REQUIRE(g.z[0] == Catch::Approx(-1.0 + 1e-9).margin(1e-12));
  REQUIRE(g.z[1] == Catch::Approx(1e-9).margin(1e-12));
  REQUIRE(g.z[2] == 0.3);
}

TEST_CASE("degenerate disorder gives a step process") {
  // all xi forced to 0: F_hat is a unit step at 0
  const auto model = ModelId::assignment();
  const int n = 4;
  const auto configs = enumerate_configs(model, n, 100);
  auto zero = [](std::uint64_t) { return 0.0; };
  const ZGrid grid{{-0.5, 0.25, 1.0}};
  std::vector<double> energies;
  for (const auto& c : configs) energies.push_back(energy_with(model, c, zero));
  const auto f = empirical_cdf(energies, grid);
  REQUIRE(f[0] == 0.0);
  REQUIRE(f[1] == 1.0);
  REQUIRE(f[2] == 1.0);
}

TEST_CASE("replicate engine is deterministic and centered") {
  const auto model = ModelId::polymer(1);
  const auto spec = DisorderSpec::rademacher();
  const int n = 8, R = 300;
  const auto grid = ZGrid::defaults();
  const auto a = replicate_engine(model, spec, n, R, 0, grid,
                                  CenteringMode::phi_n_exact(), 424242, 1);
  const auto b = replicate_engine(model, spec, n, R, 0, grid,
                                  CenteringMode::phi_n_exact(), 424242, 2);
  REQUIRE(a.values == b.values);  // parallel == serial, bit-exact

  // exact centering is unbiased: column means near 0 at 4 sd/sqrt(R)
  for (std::size_t j = 0; j < a.grid.z.size(); ++j) {
    const auto col = a.column(static_cast<int>(j));
    double s1 = 0, s2 = 0;
    for (double v : col) {
      s1 += v;
      s2 += v * v;
    }
    const double mean = s1 / R, sd = std::sqrt(s2 / R - mean * mean);
    REQUIRE(std::abs(mean) <= 4.0 * sd / std::sqrt((double)R) + 1e-12);
  }

  // rows, un-scaled and re-centered, are nondecreasing in z
  const auto center = center_values(model, spec, n, a.grid,
                                    CenteringMode::phi_n_exact());
  const double cn = scaling_cn(model, n);
  for (int r = 0; r < 10; ++r) {
    double prev = -1.0;
    for (std::size_t j = 0; j < a.grid.z.size(); ++j) {
      const double fhat = a.at(r, static_cast<int>(j)) / cn + center[j];
      REQUIRE(fhat >= prev - 1e-12);
      prev = fhat;
    }
  }
}

TEST_CASE("sampling budget is enforced") {
  const auto model = ModelId::assignment();
  const auto spec = DisorderSpec::rademacher();
  // c_n^2 = 16 needs M >= 1600
  REQUIRE_THROWS_AS(
      replicate_engine(model, spec, 16, 4, 100, ZGrid::defaults(),
                       CenteringMode::phi_n_exact(), 1),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      scaled_process(model, spec, 16, 1, 0, ZGrid::defaults(),
                     CenteringMode::phi_n_exact(), 100),
      std::invalid_argument);
}

TEST_CASE("equicorrelated process matches the closed-form limit") {
  // eps fixed: per-z variance of the scaled process approaches p(z)^2
  const auto model = ModelId::equicorrelated(EpsRule::fixed(0.01));
  const auto spec = DisorderSpec::std_normal();
  const int R = 400;
  const std::uint64_t M = 40'000;  // >= 100 / eps
  const auto pm = replicate_engine(model, spec, 1, R, M, ZGrid::defaults(),
                                   CenteringMode::gauss_phi(), 7);
  for (std::size_t j = 0; j < pm.grid.z.size(); ++j) {
    const auto col = pm.column(static_cast<int>(j));
    double s1 = 0, s2 = 0;
    for (double v : col) {
      s1 += v;
      s2 += v * v;
    }
    const double mean = s1 / R;
    const double var = s2 / R - mean * mean;
    const double want = std::pow(gauss_pdf(pm.grid.z[j]), 2);
    REQUIRE(var == Catch::Approx(want).epsilon(0.35));
  }
}

TEST_CASE("reduction residual variance decays for enumerable models") {
  // Gaussian disorder: rademacher puts a Phi_n atom exactly at z = 0 for
  // even n, which genuinely breaks monotonicity between parity classes.
  const auto spec = DisorderSpec::std_normal();
  SECTION("polymer d=1 across n in {6, 9, 12}") {
    const auto model = ModelId::polymer(1);
    const double v6 = reduction_residual_variance(model, spec, 6, 0.0, 200, 5);
    const double v9 = reduction_residual_variance(model, spec, 9, 0.0, 200, 5);
    const double v12 =
        reduction_residual_variance(model, spec, 12, 0.0, 200, 5);
    REQUIRE(v9 < v6);
    REQUIRE(v12 < v9);
  }
  SECTION("assignment n=5 sanity bound") {
    const double v =
        reduction_residual_variance(ModelId::assignment(), spec, 5, 0.0, 200,
                                    5);
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("overlapping-sum pair moments respect the lemma bound") {
  RngStream rng{777, 0, 0};
  const auto spec = DisorderSpec::rademacher();
  SECTION("independent sums give a vanishing moment") {
    const auto est = overlap_pair_moment(spec, 50, 0, 200'000, 0.0, rng);
    REQUIRE(std::abs(est.value) < 4.0 * est.se);
  }
  SECTION("full overlap is E[Y^2] <= 9") {
    const auto est = overlap_pair_moment(spec, 50, 50, 100'000, 0.0, rng);
    REQUIRE(est.value >= 0.0);
    REQUIRE(est.value <= 9.0);
  }
  SECTION("nonnegativity and the C r/n envelope at r/n = 0.1") {
    const auto est = overlap_pair_moment(spec, 100, 10, 200'000, 0.0, rng);
    REQUIRE(est.value >= -4.0 * est.se);
    REQUIRE(est.value <= 2.0 * 0.1 + 4.0 * est.se);
  }
}

TEST_CASE("spin-glass exact identities per replicate") {
  const auto model = ModelId::spin_glass_sk();
  const auto spec = DisorderSpec::std_normal();
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    const auto run = run_spin_glass(model, spec, 10, 99, rep);
    REQUIRE(std::abs(run.sum_x) < 1e-10);
    REQUIRE(run.sum_x2_minus_1 ==
            Catch::Approx(run.coupling_identity).epsilon(1e-9));
  }
  // EA box, free boundary
  const auto ea = run_spin_glass(ModelId::spin_glass_box(2), spec, 4, 99, 0);
  REQUIRE(ea.graph.vertices == 16);
  REQUIRE(ea.graph.edges.size() == 24);
  REQUIRE(std::abs(ea.sum_x) < 1e-10);
  REQUIRE(ea.sum_x2_minus_1 ==
          Catch::Approx(ea.coupling_identity).epsilon(1e-9));

  REQUIRE_THROWS_AS(
      run_spin_glass(model, DisorderSpec::rademacher(), 8, 1, 0),
      std::domain_error);
}

TEST_CASE("second-order residual shrinks with the system") {
  const auto spec = DisorderSpec::std_normal();
  const auto model = ModelId::spin_glass_sk();
  const ZGrid grid{{1.0}};
  auto variance_at = [&](int nv) {
    const int R = 400;
    double s1 = 0, s2 = 0;
    for (int r = 0; r < R; ++r) {
      const auto run = run_spin_glass(model, spec, nv, 31, r);
      const double v = second_order_residual(run, grid)[0];
      s1 += v;
      s2 += v * v;
    }
    const double mean = s1 / R;
    return s2 / R - mean * mean;
  };
  const double v8 = variance_at(8);
  const double v12 = variance_at(12);
  REQUIRE(v12 < v8);
}

TEST_CASE("condition checker") {
  SECTION("assignment: propcond2a is exactly 2") {
    for (int n : {3, 4, 5}) {
      const auto rep = condition_checker(ModelId::assignment(), n);
      REQUIRE(rep.propcond2a_ratio == Catch::Approx(2.0).margin(1e-9));
      REQUIRE(rep.cond1_variance_ratio == Catch::Approx(1.0).margin(1e-9));
    }
  }
  SECTION("SK: cond1 vanishes exactly, variance identity holds") {
    const auto rep = condition_checker(ModelId::spin_glass_sk(), 8);
    REQUIRE(rep.cond1_variance_ratio == 0.0);
    REQUIRE(rep.propcond2a_ratio == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("polymer d=1: condition-2 tail decays") {
    const auto r6 = condition_checker(ModelId::polymer(1), 6);
    const auto r9 = condition_checker(ModelId::polymer(1), 9);
    const auto r12 = condition_checker(ModelId::polymer(1), 12);
    REQUIRE(r12.cond2_tail_ratio < 0.5);
    REQUIRE(r9.cond2_tail_ratio < r6.cond2_tail_ratio);
    // the integer overlap cutoff r > n^{3/4} makes the n=9 -> n=12 step a
    // sawtooth; the coarse trend still points down
    REQUIRE(r12.cond2_tail_ratio < r6.cond2_tail_ratio);
  }
}
