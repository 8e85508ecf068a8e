// Simple random walk on Z^d: exact step distributions p_k(x), return
// probability sums, the summability constant for d >= 3, and the series
// sampler for the d >= 3 polymer limit variable.
//
// Two exact routes to p_{2k}(0) are kept deliberately: the dynamic-
// programming table (within its memory budget) and the multinomial identity
//   p_{2k}(0) = C(2k,k) 4^{-k} * sum_{k_1+...+k_d=k} multinomial(k;1/d,..)^2,
// which costs O(k^{d-1}) per level and reaches k far beyond any table.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "lclt/disorder.hpp"
#include "lclt/rng.hpp"

namespace lclt {

struct size_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sites x in Z^d with ||x||_1 <= radius and ||x||_1 = parity (mod 2),
// enumerated lexicographically and addressed through offset arrays.
class L1BallIndex {
 public:
  L1BallIndex() = default;

  L1BallIndex(int d, int radius, int parity)
      : d_(d), radius_(radius), parity_(parity & 1) {
    if (d < 1 || d > 3)
      throw std::invalid_argument("L1BallIndex: d in {1,2,3} required");
    if (d_ == 1) {
      size_ = count_range(radius_, parity_);
    } else if (d_ == 2) {
      off1_.assign(2 * radius_ + 2, 0);
      std::int64_t acc = 0;
      for (int x1 = -radius_; x1 <= radius_; ++x1) {
        off1_[x1 + radius_] = acc;
        acc += count_range(radius_ - std::abs(x1), parity_ ^ (x1 & 1));
      }
      off1_[2 * radius_ + 1] = acc;
      size_ = acc;
    } else {
      const int w = 2 * radius_ + 1;
      off2_.assign(static_cast<std::size_t>(w) * w + 1, 0);
      std::int64_t acc = 0;
      for (int x1 = -radius_; x1 <= radius_; ++x1)
        for (int x2 = -radius_; x2 <= radius_; ++x2) {
          off2_[static_cast<std::size_t>(x1 + radius_) * w + (x2 + radius_)] =
              acc;
          const int m = radius_ - std::abs(x1) - std::abs(x2);
          if (m >= 0) acc += count_range(m, parity_ ^ ((x1 + x2) & 1));
        }
      off2_.back() = acc;
      size_ = acc;
    }
  }

  int dim() const { return d_; }
  int radius() const { return radius_; }
  int parity() const { return parity_; }
  std::int64_t size() const { return size_; }

  // -1 when the site is outside the ball or has the wrong parity.
  std::int64_t index_of(const int* x) const {
    int norm = 0;
    for (int j = 0; j < d_; ++j) norm += std::abs(x[j]);
    if (norm > radius_ || (norm & 1) != parity_) return -1;
    if (d_ == 1) {
      const int mq = max_abs(radius_, parity_);
      return (x[0] + mq) / 2;
    }
    if (d_ == 2) {
      const int m = radius_ - std::abs(x[0]);
      const int q = parity_ ^ (x[0] & 1);
      return off1_[x[0] + radius_] + (x[1] + max_abs(m, q)) / 2;
    }
    const int w = 2 * radius_ + 1;
    const int m = radius_ - std::abs(x[0]) - std::abs(x[1]);
    const int q = parity_ ^ ((x[0] + x[1]) & 1);
    return off2_[static_cast<std::size_t>(x[0] + radius_) * w +
                 (x[1] + radius_)] +
           (x[2] + max_abs(m, q)) / 2;
  }

  template <typename Fn>  // Fn(std::int64_t idx, const int* site)
  void for_each(Fn&& fn) const {
    int x[3] = {0, 0, 0};
    if (d_ == 1) {
      const int mq = max_abs(radius_, parity_);
      std::int64_t idx = 0;
      for (int v = -mq; v <= mq; v += 2, ++idx) {
        x[0] = v;
        fn(idx, x);
      }
      return;
    }
    std::int64_t idx = 0;
    for (int x1 = -radius_; x1 <= radius_; ++x1) {
      x[0] = x1;
      if (d_ == 2) {
        const int mq = max_abs(radius_ - std::abs(x1), parity_ ^ (x1 & 1));
        for (int v = -mq; v <= mq; v += 2, ++idx) {
          x[1] = v;
          fn(idx, x);
        }
      } else {
        const int m2 = radius_ - std::abs(x1);
        for (int x2 = -m2; x2 <= m2; ++x2) {
          x[1] = x2;
          const int mq = max_abs(radius_ - std::abs(x1) - std::abs(x2),
                                 parity_ ^ ((x1 + x2) & 1));
          for (int v = -mq; v <= mq; v += 2, ++idx) {
            x[2] = v;
            fn(idx, x);
          }
        }
      }
    }
  }

 private:
  // largest |value| <= m with value = q (mod 2); -1 when empty
  static int max_abs(int m, int q) { return ((m & 1) == (q & 1)) ? m : m - 1; }
  static std::int64_t count_range(int m, int q) {
    if (m < 0) return 0;
    const int mq = max_abs(m, q & 1);
    return mq < 0 ? 0 : mq + 1;
  }

  int d_ = 1, radius_ = 0, parity_ = 0;
  std::int64_t size_ = 0;
  std::vector<std::int64_t> off1_, off2_;
};

// Exact p_k(x) for k = 0..horizon by convolution.
struct WalkTable {
  int d = 1;
  int horizon = 0;
  std::vector<L1BallIndex> index;        // per k
  std::vector<std::vector<double>> lvl;  // per k, by site index

  double prob(int k, const int* x) const {
    if (k < 0 || k > horizon) return 0.0;
    const std::int64_t i = index[k].index_of(x);
    return i < 0 ? 0.0 : lvl[k][i];
  }

  double origin_return(int k) const {  // p_k(0)
    static constexpr int origin[3] = {0, 0, 0};
    return prob(k, origin);
  }
};

inline WalkTable build_walk_table(int d, int horizon,
                                  std::size_t budget = 20'000'000) {
  if (d < 1 || d > 3) throw std::invalid_argument("build_walk_table: d in {1,2,3}");
  if (horizon < 1) throw std::invalid_argument("build_walk_table: horizon >= 1");
  WalkTable t;
  t.d = d;
  t.horizon = horizon;
  t.index.reserve(horizon + 1);
  std::size_t total = 0;
  for (int k = 0; k <= horizon; ++k) {
    t.index.emplace_back(d, k, k & 1);
    total += static_cast<std::size_t>(t.index.back().size());
    if (total > budget)
      throw size_error("walk table exceeds entry budget (" +
                       std::to_string(budget) + ") at level " +
                       std::to_string(k));
  }
  t.lvl.resize(horizon + 1);
  t.lvl[0] = {1.0};
  const double inv = 1.0 / (2.0 * d);
  for (int k = 1; k <= horizon; ++k) {
    const auto& prev = t.index[k - 1];
    const auto& prevp = t.lvl[k - 1];
    t.lvl[k].assign(t.index[k].size(), 0.0);
    auto& cur = t.lvl[k];
    t.index[k].for_each([&](std::int64_t i, const int* x) {
      int y[3] = {x[0], x[1], x[2]};
      double s = 0.0;
      for (int j = 0; j < d; ++j) {
        y[j] = x[j] - 1;
        if (auto idx = prev.index_of(y); idx >= 0) s += prevp[idx];
        y[j] = x[j] + 1;
        if (auto idx = prev.index_of(y); idx >= 0) s += prevp[idx];
        y[j] = x[j];
      }
      cur[i] = s * inv;
    });
  }
  return t;
}

// Exact p_{2k}(0) for k = 1..kmax via the multinomial identity; the
// d-category step-count pmf row is carried along to keep everything in
// well-scaled doubles.
inline std::vector<double> origin_return_series(int d, int kmax) {
  if (d < 1 || d > 3)
    throw std::invalid_argument("origin_return_series: d in {1,2,3}");
  std::vector<double> out(kmax + 1, 0.0);
  double central = 1.0;  // C(2k,k)/4^k
  if (d == 1) {
    for (int k = 1; k <= kmax; ++k) {
      central *= (2.0 * k - 1.0) / (2.0 * k);
      out[k] = central;
    }
    return out;
  }
  if (d == 2) {
    std::vector<double> q{1.0}, nq;  // binomial(k, 1/2) pmf
    for (int k = 1; k <= kmax; ++k) {
      central *= (2.0 * k - 1.0) / (2.0 * k);
      nq.assign(k + 1, 0.0);
      for (int a = 0; a <= k; ++a)
        nq[a] = 0.5 * ((a > 0 ? q[a - 1] : 0.0) + (a < k ? q[a] : 0.0));
      q.swap(nq);
      double sq = 0.0;
      for (double v : q) sq += v * v;
      out[k] = central * sq;
    }
    return out;
  }
  // d == 3: trinomial pmf over (a, b), flattened triangular row
  auto at = [](std::vector<double>& v, int k, int a, int b) -> double& {
    return v[static_cast<std::size_t>(a) * (k + 1) + b];
  };
  std::vector<double> q{1.0}, nq;
  for (int k = 1; k <= kmax; ++k) {
    central *= (2.0 * k - 1.0) / (2.0 * k);
    nq.assign(static_cast<std::size_t>(k + 1) * (k + 1), 0.0);
    const double third = 1.0 / 3.0;
    for (int a = 0; a <= k; ++a)
      for (int b = 0; a + b <= k; ++b) {
        double s = 0.0;
        if (a > 0) s += q[static_cast<std::size_t>(a - 1) * k + b];
        if (b > 0) s += q[static_cast<std::size_t>(a) * k + (b - 1)];
        if (a + b < k) s += q[static_cast<std::size_t>(a) * k + b];
        at(nq, k, a, b) = s * third;
      }
    q.swap(nq);
    double sq = 0.0;
    for (int a = 0; a <= k; ++a)
      for (int b = 0; a + b <= k; ++b) {
        const double v = at(q, k, a, b);
        sq += v * v;
      }
    out[k] = central * sq;
  }
  return out;
}

// sum_{k=1}^{n} p_{2k}(0), asserting the symmetry identity
// sum_x p_k(x)^2 = p_{2k}(0) at every level on the way.
inline double return_sum(const WalkTable& t, int n) {
  if (2 * n > t.horizon)
    throw std::invalid_argument("return_sum: need horizon >= 2n");
  double acc = 0.0;
  for (int k = 1; k <= n; ++k) {
    double sq = 0.0;
    for (double v : t.lvl[k]) sq += v * v;
    const double ret = t.origin_return(2 * k);
    if (std::abs(sq - ret) > 1e-10 * ret)
      throw std::logic_error("return_sum: sum_x p_k^2(x) != p_{2k}(0) at k=" +
                             std::to_string(k));
    acc += ret;
  }
  return acc;
}

struct SSquared {
  double partial = 0.0;     // sum_{k<=cutoff} p_{2k}(0)
  double tail_bound = 0.0;  // bound on the omitted tail
};

// Partial sum of S^2 = sum_k sum_x p_k^2(x) for d >= 3, with a tail bound
// from p_{2k}(0) ~ 2^{1-d}(pi k/d)^{-d/2} times a 1.2 safety factor.
inline SSquared s_squared_d3(int d, int cutoff) {
  if (d < 3) throw std::domain_error("s_squared_d3: d >= 3 required");
  const auto series = origin_return_series(d, cutoff);
  SSquared out;
  for (int k = 1; k <= cutoff; ++k) out.partial += series[k];
  const double c = std::pow(2.0, 1.0 - d) *
                   std::pow(static_cast<double>(d) / std::numbers::pi,
                            0.5 * d);
  out.tail_bound =
      1.2 * c * std::pow(static_cast<double>(cutoff), 1.0 - 0.5 * d) /
      (0.5 * d - 1.0);
  return out;
}

inline SSquared s_squared_d3(const WalkTable& t, int cutoff) {
  if (t.d < 3) throw std::domain_error("s_squared_d3: d >= 3 required");
  if (2 * cutoff > t.horizon)
    throw std::invalid_argument("s_squared_d3: need horizon >= 2*cutoff");
  SSquared out = s_squared_d3(t.d, cutoff);
  out.partial = return_sum(t, cutoff);
  return out;
}

// One draw of -sum_{k<=cutoff} sum_x p_k(x) xi_k(x) from exact table levels.
inline double polymer_limit_w(const WalkTable& t, const DisorderSpec& spec,
                              int cutoff, RngStream& rng) {
  if (t.d < 3) throw std::domain_error("polymer_limit_w: d >= 3 required");
  if (cutoff > t.horizon)
    throw std::invalid_argument("polymer_limit_w: cutoff exceeds horizon");
  double w = 0.0;
  for (int k = 1; k <= cutoff; ++k)
    for (double p : t.lvl[k]) w -= p * spec.draw(rng);
  return w;
}

// Series sampler for large cutoffs: DP levels are precomputed once with a
// site-probability floor (sites below it are dropped; the cumulative mass
// loss at the default floor is < 1e-3 and the variance bias is < 1e-5
// relative), after which a draw touches one stored probability per site.
class PolymerWSampler {
 public:
  PolymerWSampler(int d, int cutoff, double floor = 1e-9)
      : d_(d), cutoff_(cutoff), floor_(floor) {
    if (d < 3) throw std::domain_error("PolymerWSampler: d >= 3 required");
    levels_.resize(cutoff + 1);
    L1BallIndex prev_idx(d, 0, 0);
    std::vector<double> prev{1.0};
    const double inv = 1.0 / (2.0 * d);
    for (int k = 1; k <= cutoff; ++k) {
      const int cap = radius_cap(k);
      L1BallIndex idx(d, cap, k & 1);
      std::vector<double> cur(idx.size(), 0.0);
      idx.for_each([&](std::int64_t i, const int* x) {
        int y[3] = {x[0], x[1], x[2]};
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
          y[j] = x[j] - 1;
          if (auto pi = prev_idx.index_of(y); pi >= 0) s += prev[pi];
          y[j] = x[j] + 1;
          if (auto pi = prev_idx.index_of(y); pi >= 0) s += prev[pi];
          y[j] = x[j];
        }
        cur[i] = s * inv;
      });
      auto& out = levels_[k];
      out.reserve(cur.size());
      for (double p : cur)
        if (p >= floor_) out.push_back(static_cast<float>(p));
      // Sub-floor sites are zeroed so they stop propagating in the DP.
      for (double& p : cur)
        if (p < floor_) p = 0.0;
      prev_idx = std::move(idx);
      prev = std::move(cur);
      variance_ += sq_sum(out);
    }
  }

  int cutoff() const { return cutoff_; }
  double variance() const { return variance_; }  // sum of stored p^2

  double draw(const DisorderSpec& spec, RngStream& rng) const {
    double w = 0.0;
    if (spec.kind == DisorderKind::rademacher) {
      std::uint64_t bits = 0;
      int have = 0;
      for (const auto& lev : levels_)
        for (float p : lev) {
          if (have == 0) {
            bits = rng.next_u64();
            have = 64;
          }
          w -= (bits & 1) ? p : -static_cast<double>(p);
          bits >>= 1;
          --have;
        }
      return w;
    }
    for (const auto& lev : levels_)
      for (float p : lev) w -= p * spec.draw(rng);
    return w;
  }

 private:
  int radius_cap(int k) const {
    const double t = std::max(1.0, std::log(1.0 / floor_));
    const int cap = static_cast<int>(std::ceil(std::sqrt(2.0 * k * t))) + 2;
    return std::min(k, cap);
  }

  static double sq_sum(const std::vector<float>& v) {
    double s = 0.0;
    for (float p : v) s += static_cast<double>(p) * p;
    return s;
  }

  int d_, cutoff_;
  double floor_;
  double variance_ = 0.0;
  std::vector<std::vector<float>> levels_;
};

}  // namespace lclt
