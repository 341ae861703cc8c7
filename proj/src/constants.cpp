#include "kaon/constants.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace kaon {

namespace {

constexpr double kBranchingSumTolerance = 1e-9;

void require_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InvalidArgument(std::string(name) + " must lie in [0,1]");
  }
}

}  // namespace

void PhysicalConstants::validate() const {
  if (!(gamma_L > 0.0)) throw InvalidArgument("gamma_L must be positive");
  if (!(gamma_S > gamma_L)) throw InvalidArgument("gamma_S must exceed gamma_L");
  if (!std::isfinite(delta_m)) throw InvalidArgument("delta_m must be finite");
  require_probability(br_sl_L, "br_sl_L");
  require_probability(br_sl_S, "br_sl_S");
  require_probability(br_2pi_S, "br_2pi_S");
  require_probability(br_3pi_L, "br_3pi_L");
  if (std::abs(br_sl_S + br_2pi_S - 1.0) > kBranchingSumTolerance) {
    throw InvalidArgument("br_sl_S + br_2pi_S must equal 1");
  }
  if (std::abs(br_sl_L + br_3pi_L - 1.0) > kBranchingSumTolerance) {
    throw InvalidArgument("br_sl_L + br_3pi_L must equal 1");
  }
  if (br_sl_L * gamma_L > gamma_S) {
    throw InvalidArgument("K_L semileptonic width exceeds the K_S total width");
  }
}

double PhysicalConstants::semileptonic_width_mismatch() const {
  const double from_long = br_sl_L * gamma_L;
  const double from_short = br_sl_S * gamma_S;
  const double scale = std::max(from_long, from_short);
  if (scale == 0.0) return 0.0;
  return std::abs(from_long - from_short) / scale;
}

PhysicalConstants constants_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("constants: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("constants: expected a JSON object");

  PhysicalConstants k;
  auto read = [&](const char* name, double& field) {
    if (!doc.contains(name)) return false;
    if (!doc[name].is_number()) {
      throw InvalidArgument(std::string("constants: field ") + name + " must be a number");
    }
    field = doc[name].get<double>();
    return true;
  };
  read("gamma_S", k.gamma_S);
  read("gamma_L", k.gamma_L);
  read("delta_m", k.delta_m);
  read("epsilon_overlap", k.epsilon_overlap);

  const bool has_sl_L = read("br_sl_L", k.br_sl_L);
  const bool has_3pi_L = read("br_3pi_L", k.br_3pi_L);
  if (has_sl_L && !has_3pi_L) k.br_3pi_L = 1.0 - k.br_sl_L;
  if (has_3pi_L && !has_sl_L) k.br_sl_L = 1.0 - k.br_3pi_L;

  const bool has_sl_S = read("br_sl_S", k.br_sl_S);
  const bool has_2pi_S = read("br_2pi_S", k.br_2pi_S);
  if (has_sl_S && !has_2pi_S) k.br_2pi_S = 1.0 - k.br_sl_S;
  if (has_2pi_S && !has_sl_S) k.br_sl_S = 1.0 - k.br_2pi_S;

  k.validate();
  return k;
}

std::string constants_to_json(const PhysicalConstants& k) {
  nlohmann::json doc = {
      {"gamma_S", k.gamma_S},   {"gamma_L", k.gamma_L},   {"delta_m", k.delta_m},
      {"br_sl_L", k.br_sl_L},   {"br_sl_S", k.br_sl_S},   {"br_2pi_S", k.br_2pi_S},
      {"br_3pi_L", k.br_3pi_L}, {"epsilon_overlap", k.epsilon_overlap},
  };
  return doc.dump();
}

}  // namespace kaon
