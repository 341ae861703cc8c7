#include "kaon/single_kaon.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>

namespace kaon {

namespace {

void require_time(double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("tau must be non-negative");
}

}  // namespace

ProbabilityPair strangeness_probs(double tau, const PhysicalConstants& k) {
  require_time(tau);
  const double fringe = visibility_single(tau, k) * std::cos(k.delta_m * tau);
  const double p0 = 0.5 * (1.0 + fringe);
  return {p0, 1.0 - p0};
}

double visibility_single(double tau, const PhysicalConstants& k) {
  require_time(tau);
  return 1.0 / std::cosh(k.delta_gamma() * tau / 2.0);
}

ProbabilityPair lifetime_probs(double tau, const PhysicalConstants& k) {
  require_time(tau);
  const double p_long = 1.0 / (1.0 + std::exp(k.delta_gamma() * tau));
  return {1.0 - p_long, p_long};
}

ProbabilityPair misid_probs(const MisidWindow& window, const PhysicalConstants& k) {
  window.validate();
  // -expm1 keeps the K_L figure accurate for short windows.
  return {std::exp(-k.gamma_S * window.delta_tau_w), -std::expm1(-k.gamma_L * window.delta_tau_w)};
}

double equal_misid_window(const PhysicalConstants& k) {
  const auto gap = [&](double x) {
    return std::exp(-k.gamma_S * x) + std::expm1(-k.gamma_L * x);
  };
  // gap(0) = 1 > 0 and gap decreases monotonically to -1.
  double hi = 1.0;
  while (gap(hi) > 0.0) hi *= 2.0;
  boost::math::tools::eps_tolerance<double> tol(52);
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(gap, 0.0, hi, tol, iterations);
  return 0.5 * (a + b);
}

}  // namespace kaon
