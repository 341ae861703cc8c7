#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kaon/decay_model.hpp"
#include "kaon/single_kaon.hpp"

namespace kaon {

/// Upper end of the numerical quadrature range; beyond it the exponential
/// tails are integrated in closed form.
inline constexpr double kQuadratureCutoff = 40.0;

/// sum_f integral of single_decay_rate over [0, inf).
double single_decay_normalization(const PhysicalConstants& k, const AmplitudeModel& model);

/// sum_{f_l, f_r} double integral of joint_decay_rate over [0, inf)^2.
double joint_decay_normalization(const PhysicalConstants& k, const AmplitudeModel& model);

/// sum_f integral over tau_r of mixed_decay_rate(active_l, tau_l, f, tau_r);
/// expected to equal pair-survival(tau_l, 0)/2 for a strangeness outcome.
double mixed_decay_normalization(Outcome active_l, double tau_l, const PhysicalConstants& k,
                                 const AmplitudeModel& model);

enum class CheckStatus { Pass, Warn, Fail };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double worst_deviation = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

std::string_view to_string(CheckStatus s);

struct VerifySettings {
  std::uint64_t random_triples = 1000;
  std::uint64_t seed = 20240611;
  std::uint64_t misid_samples = 1000000;
  MisidWindow window;
};

/// Oracle-equivalence grids, normalization integrals, the randomized
/// delayed-choice identity and the misidentification-window checks.
std::vector<CheckResult> run_verification(const PhysicalConstants& k, const VerifySettings& s);

/// Individual checks, exposed for the test suites.
CheckResult check_core_unitarity(const PhysicalConstants& k);
CheckResult check_single_passive_coincidence(const PhysicalConstants& k, const AmplitudeModel& m);
CheckResult check_single_normalization(const PhysicalConstants& k, const AmplitudeModel& m);
CheckResult check_joint_normalization(const PhysicalConstants& k, const AmplitudeModel& m);
CheckResult check_mixed_normalization(const PhysicalConstants& k, const AmplitudeModel& m);
CheckResult check_joint_oracle(const PhysicalConstants& k);
CheckResult check_pair_passive_coincidence(const PhysicalConstants& k, const AmplitudeModel& m);
CheckResult check_delayed_choice(const PhysicalConstants& k, std::uint64_t triples,
                                 std::uint64_t seed);
CheckResult check_misid_window(const PhysicalConstants& k, const MisidWindow& window,
                               std::uint64_t samples, std::uint64_t seed);
CheckResult check_semileptonic_consistency(const PhysicalConstants& k, const AmplitudeModel& m);

/// |a - b| / max(|a|, |b|), zero when both vanish.
double relative_deviation(double a, double b);

}  // namespace kaon
