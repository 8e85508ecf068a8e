// Counter-based splittable random number generator.
//
// Every output is a pure function of (seed, stream_id, counter), so streams
// are cheap value types: copying one and advancing the copy never perturbs
// the original, replicates get disjoint stream ids, and a value attached to
// a 64-bit key can be regenerated at any time without storing it.
// The mixer is the splitmix64 finalizer (Vigna 2015), applied in three
// chained rounds so that seed, stream and counter each pass through a full
// avalanche before being combined.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace lclt {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// 64 random bits for the triple (seed, stream, counter).
inline std::uint64_t keyed_u64(std::uint64_t seed, std::uint64_t stream,
                               std::uint64_t counter) {
  return mix64(seed ^ mix64(stream ^ mix64(counter)));
}

inline double u64_to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;  // [0, 1)
}

inline double u64_to_unit_pos(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
}

struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t counter = 0;

  std::uint64_t next_u64() { return keyed_u64(seed, stream_id, counter++); }

  double next_unit() { return u64_to_unit(next_u64()); }
  double next_unit_pos() { return u64_to_unit_pos(next_u64()); }

  // Box-Muller, two uniforms per normal; the sine twin is discarded so the
  // counter consumption per draw stays fixed.
  double next_normal() {
    const double u1 = next_unit_pos();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  void fill_normal(std::span<double> out) {
    std::size_t i = 0;
    for (; i + 1 < out.size(); i += 2) {
      const double u1 = next_unit_pos();
      const double u2 = next_unit();
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double t = 2.0 * std::numbers::pi * u2;
      out[i] = r * std::cos(t);
      out[i + 1] = r * std::sin(t);
    }
    if (i < out.size()) out[i] = next_normal();
  }

  // Unbiased integer in [0, bound) via Lemire's multiply-shift rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    while (true) {
      const std::uint64_t x = next_u64();
      const __uint128_t m = static_cast<__uint128_t>(x) * bound;
      const std::uint64_t lo = static_cast<std::uint64_t>(m);
      if (lo >= bound || lo >= (-bound) % bound)
        return static_cast<std::uint64_t>(m >> 64);
    }
  }

  // Independent child stream; distinct ids give statistically independent
  // sequences, identical ids reproduce bit-identical ones.
  [[nodiscard]] RngStream substream(std::uint64_t id) const {
    return RngStream{seed, mix64(stream_id + kGolden * (id + 1)), 0};
  }
};

}  // namespace lclt
