#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "kaon/constants.hpp"
#include "kaon/estimate.hpp"
#include "kaon/simulator.hpp"

namespace kaon {

struct AnalyticGrid {
  double tau_max = 20.0;
  double tau_step = 0.1;
  double delta_tau_min = -12.0;
  double delta_tau_max = 12.0;
  double delta_tau_step = 0.1;

  void validate() const;
};

struct VerifyOptions {
  std::uint64_t random_triples = 1000;
  std::uint64_t seed = 20240611;
  std::uint64_t misid_samples = 1000000;
};

/// Everything a CLI invocation needs, loaded from one JSON document.
struct RunConfig {
  PhysicalConstants constants;
  SimulationConfig simulation;
  Binning binning;
  AnalyticGrid analytic;
  VerifyOptions verify;
  std::string out_dir = "out";

  void validate() const;
};

nlohmann::json to_json(const PhysicalConstants& k);
nlohmann::json to_json(const SimulationConfig& cfg);
nlohmann::json to_json(const Binning& b);
nlohmann::json to_json(const RunConfig& cfg);

SimulationConfig simulation_config_from_json(const nlohmann::json& j);
Binning binning_from_json(const nlohmann::json& j);

/// Sections: "constants", "experiment", "binning", "analytic", "verify",
/// "output". Every section and field is optional.
RunConfig run_config_from_json(const std::string& text);

}  // namespace kaon
