#pragma once

#include <cmath>
#include <cstdint>

// |observed - expected| within z binomial standard errors of expected.
inline bool within_sigma(double p_hat, double p, std::uint64_t n, double z = 4.0) {
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return std::abs(p_hat - p) <= z * sigma + 1e-15;
}
