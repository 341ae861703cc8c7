#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "kaon/config.hpp"
#include "kaon/estimate.hpp"
#include "kaon/simulator.hpp"

namespace kaon::cli {

enum ExitCode : int { kSuccess = 0, kValidationError = 1, kVerificationFailure = 2 };

/// Entry point of the kaon_eraser tool; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 12 significant digits, as used by every CSV output.
std::string format_csv(double x);

std::string single_kaon_csv(const AnalyticGrid& grid, const PhysicalConstants& k);
std::string joint_csv(const AnalyticGrid& grid, const PhysicalConstants& k);
std::string visibility_csv(const std::vector<VisibilityPoint>& points);

struct PreDetectorFraction {
  std::uint64_t decayed = 0;
  std::uint64_t total = 0;
  double fraction = 0.0;
  double std_err = 0.0;
};

/// Experiment B: share of pairs whose right kaon decayed before the
/// strangeness detector at tau_r0 (recorded as a lifetime measurement).
PreDetectorFraction pre_detector_fraction(const std::vector<EventRecord>& events);

nlohmann::json estimates_to_json(const std::vector<Estimate>& estimates);

nlohmann::json simulation_summary(const RunConfig& cfg, const EventSet& set);

}  // namespace kaon::cli
