#pragma once

#include <array>
#include <stdexcept>
#include <string_view>

#include "kaon/constants.hpp"

namespace kaon {

enum class Observable { Strangeness, Lifetime };
enum class Outcome { K0, K0bar, KS, KL };
enum class Procedure { Active, Passive };
enum class Side { Left, Right };

/// Lifetime-basis index used for amplitude arrays.
enum class Eigenstate : int { S = 0, L = 1 };

Observable observable_of(Outcome o);
std::string_view to_string(Observable o);
std::string_view to_string(Outcome o);
std::string_view to_string(Procedure p);
Observable parse_observable(std::string_view s);
Outcome parse_outcome(std::string_view s);
Procedure parse_procedure(std::string_view s);

/// Thrown when normalizing a state whose norm vanishes.
class SingularState : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kNormTolerance = 1e-12;

/// Single kaon in the lifetime basis {K_S, K_L}.
struct SingleKaonState {
  complex c_S;
  complex c_L;
  bool normalized = true;

  double norm_squared() const { return std::norm(c_S) + std::norm(c_L); }
  const complex& amplitude(Eigenstate e) const { return e == Eigenstate::S ? c_S : c_L; }
};

/// Lifetime-basis coefficients of a measurement eigenstate. The strangeness
/// convention is K0 = (K_S + K_L)/sqrt(2), K0bar = (K_S - K_L)/sqrt(2).
std::array<double, 2> basis_coefficients(Outcome o);

SingleKaonState make_state(Outcome o);

/// Complex rate z_e with amplitude(tau) = exp(-z_e tau): Gamma_S/2 for K_S and
/// i*delta_m + Gamma_L/2 for K_L.
complex decay_exponent(Eigenstate e, const PhysicalConstants& k);

/// Free-space factor multiplying the amplitude of eigenstate `e` after time
/// `tau`, with the common phase exp(-i m_S tau) removed.
complex propagation_factor(Eigenstate e, double tau, const PhysicalConstants& k);

/// Non-unitary free evolution; the result is flagged unnormalized.
SingleKaonState evolve(const SingleKaonState& s, double tau, const PhysicalConstants& k);

/// Probability that a kaon prepared in `s` at the origin is undecayed at tau.
double survival_probability(const SingleKaonState& s, double tau, const PhysicalConstants& k);

SingleKaonState normalize_to_survivors(const SingleKaonState& s);

/// |<outcome|s>|^2 for a normalized state.
double project(const SingleKaonState& s, Outcome o);

complex inner_product(Outcome bra, const SingleKaonState& ket);

}  // namespace kaon
