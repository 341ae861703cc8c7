#include "kaon/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace kaon {

namespace {

void require_normalized(const SingleKaonState& s, const char* where) {
  if (!s.normalized || std::abs(s.norm_squared() - 1.0) > kNormTolerance) {
    throw InvalidArgument(std::string(where) + ": state must be normalized");
  }
}

}  // namespace

Observable observable_of(Outcome o) {
  return (o == Outcome::K0 || o == Outcome::K0bar) ? Observable::Strangeness
                                                   : Observable::Lifetime;
}

std::string_view to_string(Observable o) {
  return o == Observable::Strangeness ? "Strangeness" : "Lifetime";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::K0: return "K0";
    case Outcome::K0bar: return "K0bar";
    case Outcome::KS: return "KS";
    case Outcome::KL: return "KL";
  }
  return "?";
}

std::string_view to_string(Procedure p) { return p == Procedure::Active ? "Active" : "Passive"; }

Observable parse_observable(std::string_view s) {
  if (s == "Strangeness") return Observable::Strangeness;
  if (s == "Lifetime") return Observable::Lifetime;
  throw InvalidArgument("unknown observable '" + std::string(s) + "'");
}

Outcome parse_outcome(std::string_view s) {
  if (s == "K0") return Outcome::K0;
  if (s == "K0bar") return Outcome::K0bar;
  if (s == "KS") return Outcome::KS;
  if (s == "KL") return Outcome::KL;
  throw InvalidArgument("unknown outcome '" + std::string(s) + "'");
}

Procedure parse_procedure(std::string_view s) {
  if (s == "Active") return Procedure::Active;
  if (s == "Passive") return Procedure::Passive;
  throw InvalidArgument("unknown procedure '" + std::string(s) + "'");
}

std::array<double, 2> basis_coefficients(Outcome o) {
  constexpr double h = std::numbers::sqrt2 / 2.0;
  switch (o) {
    case Outcome::K0: return {h, h};
    case Outcome::K0bar: return {h, -h};
    case Outcome::KS: return {1.0, 0.0};
    case Outcome::KL: return {0.0, 1.0};
  }
  return {0.0, 0.0};
}

SingleKaonState make_state(Outcome o) {
  const auto c = basis_coefficients(o);
  return {c[0], c[1], true};
}

complex decay_exponent(Eigenstate e, const PhysicalConstants& k) {
  if (e == Eigenstate::S) return {0.5 * k.gamma_S, 0.0};
  return {0.5 * k.gamma_L, k.delta_m};
}

complex propagation_factor(Eigenstate e, double tau, const PhysicalConstants& k) {
  if (e == Eigenstate::S) return {std::exp(-0.5 * k.gamma_S * tau), 0.0};
  return std::polar(std::exp(-0.5 * k.gamma_L * tau), -k.delta_m * tau);
}

SingleKaonState evolve(const SingleKaonState& s, double tau, const PhysicalConstants& k) {
  if (!(tau >= 0.0)) throw InvalidArgument("evolve: tau must be non-negative");
  return {s.c_S * propagation_factor(Eigenstate::S, tau, k),
          s.c_L * propagation_factor(Eigenstate::L, tau, k), false};
}

double survival_probability(const SingleKaonState& s, double tau, const PhysicalConstants& k) {
  require_normalized(s, "survival_probability");
  if (!(tau >= 0.0)) throw InvalidArgument("survival_probability: tau must be non-negative");
  return std::norm(s.c_S) * std::exp(-k.gamma_S * tau) +
         std::norm(s.c_L) * std::exp(-k.gamma_L * tau);
}

SingleKaonState normalize_to_survivors(const SingleKaonState& s) {
  const double n2 = s.norm_squared();
  if (!(n2 > 0.0)) throw SingularState("normalize_to_survivors: state has zero norm");
  const double inv = 1.0 / std::sqrt(n2);
  return {s.c_S * inv, s.c_L * inv, true};
}

complex inner_product(Outcome bra, const SingleKaonState& ket) {
  const auto b = basis_coefficients(bra);
  return b[0] * ket.c_S + b[1] * ket.c_L;
}

double project(const SingleKaonState& s, Outcome o) {
  require_normalized(s, "project");
  return std::min(1.0, std::norm(inner_product(o, s)));
}

}  // namespace kaon
