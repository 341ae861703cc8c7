#pragma once

#include <array>

#include "kaon/state.hpp"

namespace kaon {

/// Entangled kaon pair over the product lifetime basis |K_i>_left |K_j>_right.
/// amp[i][j] with i, j indexed by Eigenstate (S = 0, L = 1).
struct TwoKaonState {
  std::array<std::array<complex, 2>, 2> amp{};
  bool normalized = true;

  complex& at(Eigenstate left, Eigenstate right) {
    return amp[static_cast<int>(left)][static_cast<int>(right)];
  }
  const complex& at(Eigenstate left, Eigenstate right) const {
    return amp[static_cast<int>(left)][static_cast<int>(right)];
  }
  const complex& c_LS() const { return at(Eigenstate::L, Eigenstate::S); }
  const complex& c_SL() const { return at(Eigenstate::S, Eigenstate::L); }
  const complex& c_SS() const { return at(Eigenstate::S, Eigenstate::S); }
  const complex& c_LL() const { return at(Eigenstate::L, Eigenstate::L); }

  double norm_squared() const;
};

struct JointProjector {
  Outcome left;
  Outcome right;
};

/// (|K_L K_S> - |K_S K_L>)/sqrt(2), i.e. (|K0 K0bar> - |K0bar K0>)/sqrt(2).
TwoKaonState initial_pair();

/// Independent free evolution of both members; unnormalized result.
TwoKaonState evolve_pair(const TwoKaonState& s, double tau_l, double tau_r,
                         const PhysicalConstants& k);

/// Same as evolve_pair but accepts negative increments (inverse evolution).
TwoKaonState propagate_pair(const TwoKaonState& s, double dt_l, double dt_r,
                            const PhysicalConstants& k);

/// Pair conditioned on both members surviving, as a function of
/// delta_tau = tau_l - tau_r.
TwoKaonState normalized_pair(double delta_tau, const PhysicalConstants& k);

TwoKaonState normalize_pair(const TwoKaonState& s);

/// Applies the one-sided projector |o><o| without renormalizing.
TwoKaonState apply_projector(const TwoKaonState& s, Side side, Outcome o);

complex pair_inner_product(const JointProjector& p, const TwoKaonState& s);

/// |<left, right | s>|^2 for a normalized pair.
double joint_projective_prob(const TwoKaonState& s, const JointProjector& p);

/// Probability that both members of the initial pair survive to (tau_l, tau_r):
/// exp(-(Gamma_L+Gamma_S)(tau_l+tau_r)/2) cosh(dGamma (tau_l-tau_r)/2).
double pair_survival(double tau_l, double tau_r, const PhysicalConstants& k);

/// Two-kaon fringe visibility 1/cosh(dGamma dtau / 2).
double pair_visibility(double delta_tau, const PhysicalConstants& k);

enum class JointKind { StrangenessLike, StrangenessUnlike, StrangenessShort, StrangenessLong };

/// Per ordered outcome pair: 1/4 [1 -/+ V cos(dm dtau)] for like/unlike
/// strangeness, 1/(2(1 + exp(+/- dGamma dtau))) for left strangeness with a
/// right K_S/K_L.
double closed_form_joint(JointKind kind, double delta_tau, const PhysicalConstants& k);

/// Closed form for any ordered outcome pair (left outcome at tau_l, right at
/// tau_r, delta_tau = tau_l - tau_r).
double closed_form_joint(const JointProjector& p, double delta_tau, const PhysicalConstants& k);

struct DelayedChoiceNorms {
  double direct;
  double normal_order;
  double delayed_order;
};

/// Squared norms, normalized to surviving pairs, of the three operator
/// orderings: both evolutions then both projectors; evolve to tau_r0,
/// project right, evolve left on; evolve to tau_l, project left, evolve
/// right on.
DelayedChoiceNorms delayed_choice_norms(double tau_l, double tau_r0, const JointProjector& p,
                                        const PhysicalConstants& k);

}  // namespace kaon
