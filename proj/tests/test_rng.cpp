#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "lclt/rng.hpp"

using lclt::RngStream;

TEST_CASE("same (seed, stream, counter) reproduces bit-identical output") {
  RngStream a{42, 7, 0};
  RngStream b{42, 7, 0};
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());

  RngStream c{42, 7, 500};
  RngStream d{42, 7, 0};
  for (int i = 0; i < 500; ++i) d.next_u64();
  REQUIRE(c.next_u64() == d.next_u64());
}

TEST_CASE("distinct stream ids give distinct sequences") {
  RngStream a{42, 0, 0};
  RngStream b{42, 1, 0};
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += (a.next_u64() == b.next_u64());
  REQUIRE(equal == 0);

  RngStream base{9, 3, 0};
  REQUIRE(base.substream(0).stream_id != base.substream(1).stream_id);
  REQUIRE(base.substream(0).stream_id != base.stream_id);
}

TEST_CASE("uniform doubles stay in range and look uniform") {
  RngStream rng{1, 2, 0};
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // mean of U(0,1): sd of the average is 1/sqrt(12 n)
  REQUIRE(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("next_below is unbiased over a small range") {
  RngStream rng{11, 0, 0};
  const std::uint64_t bound = 6;
  std::vector<int> hits(bound, 0);
  const int n = 600000;
  for (int i = 0; i < n; ++i) ++hits[rng.next_below(bound)];
  const double expect = static_cast<double>(n) / bound;
  const double se = std::sqrt(expect * (1.0 - 1.0 / bound));
  for (auto h : hits) REQUIRE(std::abs(h - expect) < 4.0 * se);
}

TEST_CASE("normal draws have the right first moments") {
  RngStream rng{5, 0, 0};
  const int n = 400000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.next_normal();
    s1 += x;
    s2 += x * x;
  }
  REQUIRE(std::abs(s1 / n) < 4.0 / std::sqrt(static_cast<double>(n)));
  // Var of the sample second moment of N(0,1) is 2/n
  REQUIRE(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));

  std::vector<double> bulk(100001);
  RngStream r2{5, 9, 0};
  r2.fill_normal(bulk);
  double m = 0.0;
  for (double x : bulk) m += x;
  REQUIRE(std::abs(m / bulk.size()) < 4.0 / std::sqrt(100001.0));
}
