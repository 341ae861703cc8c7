#pragma once

// Closed-form integrals of |sum_k c_k exp(-z_k t)|^2 style amplitudes, used
// for channel weights and quadrature tails.

#include <cmath>
#include <complex>
#include <span>

namespace kaon::detail {

using complex = std::complex<double>;

struct Term1 {
  complex coef;
  complex z;
};

struct Term2 {
  complex coef;
  complex z_l;
  complex z_r;
};

/// integral over [from, inf) of |sum coef exp(-z t)|^2
inline double mod2_tail(std::span<const Term1> terms, double from) {
  complex sum = 0.0;
  for (const auto& a : terms) {
    for (const auto& b : terms) {
      const complex s = a.z + std::conj(b.z);
      sum += a.coef * std::conj(b.coef) * std::exp(-s * from) / s;
    }
  }
  return sum.real();
}

/// integral over [from_l, inf) x [from_r, inf)
inline double mod2_tail(std::span<const Term2> terms, double from_l, double from_r) {
  complex sum = 0.0;
  for (const auto& a : terms) {
    for (const auto& b : terms) {
      const complex sl = a.z_l + std::conj(b.z_l);
      const complex sr = a.z_r + std::conj(b.z_r);
      sum += a.coef * std::conj(b.coef) * std::exp(-sl * from_l) / sl * std::exp(-sr * from_r) / sr;
    }
  }
  return sum.real();
}

/// integral over tau_r in [from_r, inf) at fixed tau_l
inline double mod2_tail_right(std::span<const Term2> terms, double tau_l, double from_r) {
  complex sum = 0.0;
  for (const auto& a : terms) {
    for (const auto& b : terms) {
      const complex sl = a.z_l + std::conj(b.z_l);
      const complex sr = a.z_r + std::conj(b.z_r);
      sum += a.coef * std::conj(b.coef) * std::exp(-sl * tau_l) * std::exp(-sr * from_r) / sr;
    }
  }
  return sum.real();
}

/// integral over tau_l in [from_l, inf) at fixed tau_r
inline double mod2_tail_left(std::span<const Term2> terms, double from_l, double tau_r) {
  complex sum = 0.0;
  for (const auto& a : terms) {
    for (const auto& b : terms) {
      const complex sl = a.z_l + std::conj(b.z_l);
      const complex sr = a.z_r + std::conj(b.z_r);
      sum += a.coef * std::conj(b.coef) * std::exp(-sl * from_l) / sl * std::exp(-sr * tau_r);
    }
  }
  return sum.real();
}

}  // namespace kaon::detail
