#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>

#include "kaon/pair.hpp"
#include "kaon/state.hpp"

namespace kaon {

enum class DecayChannel { TwoPi, ThreePi, SemileptonicPlus, SemileptonicMinus };

inline constexpr std::array<DecayChannel, 4> kAllChannels = {
    DecayChannel::TwoPi, DecayChannel::ThreePi, DecayChannel::SemileptonicPlus,
    DecayChannel::SemileptonicMinus};

/// Outcome tagged by a decay mode: 2pi -> K_S, 3pi -> K_L, pi- l+ nu -> K0,
/// pi+ l- nubar -> K0bar.
Outcome tagged_outcome(DecayChannel c);
DecayChannel identifying_channel(Outcome o);
std::string_view to_string(DecayChannel c);
DecayChannel parse_channel(std::string_view s);

/// Phase-space integrated transition amplitudes <f|T|K_S>, <f|T|K_L>.
///
/// The semileptonic strength is fixed from the K_L side,
/// |a(l+-, K_L)|^2 = br_sl_L Gamma_L / 2, and the same modulus is used on
/// the K_S side as Delta S = Delta Q requires. The K_S -> 2pi strength
/// takes the remainder of Gamma_S, so sum_f |a(f,K_S)|^2 = Gamma_S and
/// sum_f |a(f,K_L)|^2 = Gamma_L hold exactly. When the input branching
/// ratios disagree on the semileptonic width by more than 10%, `warning`
/// is set.
struct AmplitudeModel {
  std::array<std::array<complex, 2>, 4> a{};
  std::string warning;

  const complex& amplitude(DecayChannel c, Eigenstate e) const {
    return a[static_cast<int>(c)][static_cast<int>(e)];
  }
  double strength(DecayChannel c, Eigenstate e) const { return std::norm(amplitude(c, e)); }
};

AmplitudeModel build_amplitude_model(const PhysicalConstants& k);

/// Gamma(K_f -> f), from the K_L overlap when it is nonzero, otherwise from
/// the K_S one. Throws if the resulting width vanishes.
double decay_width(DecayChannel c, const PhysicalConstants& k, const AmplitudeModel& model);

/// Decay rate density of an initial K0 into channel c at time tau.
double single_decay_rate(DecayChannel c, double tau, const PhysicalConstants& k,
                         const AmplitudeModel& model);

/// Decay rate density for an arbitrary single-kaon state prepared at tau = 0.
double state_decay_rate(const SingleKaonState& s, DecayChannel c, double tau,
                        const PhysicalConstants& k, const AmplitudeModel& model);

/// Extinction of an initial K0 beam: (exp(-Gamma_S tau) + exp(-Gamma_L tau))/2.
double beam_survival(double tau, const PhysicalConstants& k);

/// Single-kaon probability reconstructed from the decay rate of the
/// identifying channel.
double passive_single_prob(Outcome o, double tau, const PhysicalConstants& k,
                           const AmplitudeModel& model);

/// Joint decay rate density of the initial pair into (f_l at tau_l, f_r at tau_r).
double joint_decay_rate(DecayChannel f_l, double tau_l, DecayChannel f_r, double tau_r,
                        const PhysicalConstants& k, const AmplitudeModel& model);

double passive_joint_prob(Outcome out_l, double tau_l, Outcome out_r, double tau_r,
                          const PhysicalConstants& k, const AmplitudeModel& model);

/// Rate for an active left measurement with outcome `active_l` at tau_l and a
/// right decay into f_r at tau_r. For a left K0 this is
/// 1/4 |e^{-i(l_L tau_l + l_S tau_r)} a(f_r,K_S) - e^{-i(l_S tau_l + l_L tau_r)} a(f_r,K_L)|^2.
double mixed_decay_rate(Outcome active_l, double tau_l, DecayChannel f_r, double tau_r,
                        const PhysicalConstants& k, const AmplitudeModel& model);

double mixed_active_passive_prob(Outcome active_l, double tau_l, Outcome out_r, double tau_r,
                                 const PhysicalConstants& k, const AmplitudeModel& model);

/// Closed-form integral of single_decay_rate over [0, inf) for a state
/// prepared at the origin.
double integrated_state_decay(const SingleKaonState& s, DecayChannel c,
                              const PhysicalConstants& k, const AmplitudeModel& model);

/// Closed-form integral of joint_decay_rate over [0, inf)^2.
double integrated_joint_decay(DecayChannel f_l, DecayChannel f_r, const PhysicalConstants& k,
                              const AmplitudeModel& model);

}  // namespace kaon
