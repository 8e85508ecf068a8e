#pragma once

#include <cmath>
#include <numbers>

namespace lclt {

// Standard Gaussian density p(z) = (2*pi)^{-1/2} exp(-z^2/2).
inline double gauss_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// Standard Gaussian distribution function.
inline double gauss_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// Monte Carlo estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

}  // namespace lclt
