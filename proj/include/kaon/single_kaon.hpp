#pragma once

#include <utility>

#include "kaon/constants.hpp"
#include "kaon/decay_model.hpp"

namespace kaon {

/// Active lifetime classification window: a decay within `delta_tau_w` of
/// the measurement time reads as K_S.
struct MisidWindow {
  double delta_tau_w = 4.8;

  void validate() const {
    if (!(delta_tau_w > 0.0)) throw InvalidArgument("misid window must be positive");
  }
};

struct ProbabilityPair {
  double first;
  double second;
};

/// (P[K0], P[K0bar]) at tau for an initial K0, survivors only.
ProbabilityPair strangeness_probs(double tau, const PhysicalConstants& k);

double visibility_single(double tau, const PhysicalConstants& k);

/// (P[K_S], P[K_L]) at tau for an initial K0, survivors only.
ProbabilityPair lifetime_probs(double tau, const PhysicalConstants& k);

/// (wrong K_S, wrong K_L) identification probabilities.
ProbabilityPair misid_probs(const MisidWindow& window, const PhysicalConstants& k);

/// Window length at which both misidentification probabilities coincide.
double equal_misid_window(const PhysicalConstants& k);

}  // namespace kaon
