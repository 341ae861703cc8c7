#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace kaon {

using complex = std::complex<double>;

/// Thrown when an input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters of the neutral kaon system. Times are in units of the K_S
/// lifetime, so with the defaults gamma_S == 1.
struct PhysicalConstants {
  double gamma_S = 1.0;
  double gamma_L = 1.0 / 579.0;
  double delta_m = 0.4737;
  double br_sl_L = 0.66;
  double br_sl_S = 1.1e-3;
  double br_2pi_S = 1.0 - 1.1e-3;
  double br_3pi_L = 1.0 - 0.66;
  // <K_S|K_L>; kept as data only, every computation is CP conserving.
  double epsilon_overlap = 3.2e-3;

  /// Gamma_L - Gamma_S (negative).
  double delta_gamma() const { return gamma_L - gamma_S; }
  double mean_gamma() const { return 0.5 * (gamma_L + gamma_S); }

  /// Throws InvalidArgument if a hard invariant is broken.
  void validate() const;

  /// Semileptonic widths of K_L and K_S must agree (Delta S = Delta Q with
  /// CP conservation). Returns the relative mismatch |a-b|/max(a,b).
  double semileptonic_width_mismatch() const;
  bool semileptonic_widths_consistent(double tolerance = 0.10) const {
    return semileptonic_width_mismatch() <= tolerance;
  }
};

/// Parses a JSON document using the field names of PhysicalConstants.
/// Missing fields keep their defaults; when only one branching ratio of a
/// complementary pair is given, the other becomes its complement.
PhysicalConstants constants_from_json(const std::string& text);
std::string constants_to_json(const PhysicalConstants& k);

}  // namespace kaon
