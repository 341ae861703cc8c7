#pragma once

#include <array>

#include "exp_terms.hpp"
#include "kaon/decay_model.hpp"

namespace kaon::detail {

/// Decay amplitude of a single kaon prepared in `s` at the origin into `c`.
std::array<Term1, 2> single_terms(const SingleKaonState& s, DecayChannel c,
                                  const PhysicalConstants& k, const AmplitudeModel& model);

/// Joint decay amplitude of pair state `s` (prepared at the origin).
std::array<Term2, 4> pair_terms(const TwoKaonState& s, DecayChannel f_l, DecayChannel f_r,
                                const PhysicalConstants& k, const AmplitudeModel& model);

/// Right decay amplitude, as a function of tau_r, after an active left
/// measurement `o` at tau_l on the initial pair.
std::array<Term1, 2> mixed_terms(Outcome o, double tau_l, DecayChannel f_r,
                                 const PhysicalConstants& k, const AmplitudeModel& model);

}  // namespace kaon::detail
