#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace lclt {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt big_factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline BigInt big_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline BigInt big_pow(BigInt base, int e) {
  BigInt r = 1;
  while (e-- > 0) r *= base;
  return r;
}

inline double to_double(const BigRat& r) {
  return static_cast<double>(r);
}

}  // namespace lclt
