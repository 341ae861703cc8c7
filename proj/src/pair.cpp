#include "kaon/pair.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kaon {

namespace {

constexpr Eigenstate kBasis[2] = {Eigenstate::S, Eigenstate::L};

void require_normalized(const TwoKaonState& s, const char* where) {
  if (!s.normalized || std::abs(s.norm_squared() - 1.0) > kNormTolerance) {
    throw InvalidArgument(std::string(where) + ": pair state must be normalized");
  }
}

}  // namespace

double TwoKaonState::norm_squared() const {
  double sum = 0.0;
  for (const auto& row : amp)
    for (const auto& c : row) sum += std::norm(c);
  return sum;
}

TwoKaonState initial_pair() {
  constexpr double h = std::numbers::sqrt2 / 2.0;
  TwoKaonState s;
  s.at(Eigenstate::L, Eigenstate::S) = h;
  s.at(Eigenstate::S, Eigenstate::L) = -h;
  return s;
}

TwoKaonState propagate_pair(const TwoKaonState& s, double dt_l, double dt_r,
                            const PhysicalConstants& k) {
  TwoKaonState out;
  for (Eigenstate i : kBasis) {
    const complex fl = std::exp(-decay_exponent(i, k) * dt_l);
    for (Eigenstate j : kBasis) {
      out.at(i, j) = s.at(i, j) * fl * std::exp(-decay_exponent(j, k) * dt_r);
    }
  }
  out.normalized = false;
  return out;
}

TwoKaonState evolve_pair(const TwoKaonState& s, double tau_l, double tau_r,
                         const PhysicalConstants& k) {
  if (!(tau_l >= 0.0) || !(tau_r >= 0.0)) {
    throw InvalidArgument("evolve_pair: times must be non-negative");
  }
  TwoKaonState out;
  for (Eigenstate i : kBasis) {
    const complex fl = propagation_factor(i, tau_l, k);
    for (Eigenstate j : kBasis) {
      out.at(i, j) = s.at(i, j) * fl * propagation_factor(j, tau_r, k);
    }
  }
  out.normalized = false;
  return out;
}

TwoKaonState normalized_pair(double delta_tau, const PhysicalConstants& k) {
  const double x = k.delta_gamma() * delta_tau;
  const double scale = 1.0 / std::sqrt(1.0 + std::exp(x));
  TwoKaonState s;
  s.at(Eigenstate::L, Eigenstate::S) = scale;
  s.at(Eigenstate::S, Eigenstate::L) =
      -scale * std::polar(std::exp(0.5 * x), k.delta_m * delta_tau);
  s.normalized = true;
  return s;
}

TwoKaonState normalize_pair(const TwoKaonState& s) {
  const double n2 = s.norm_squared();
  if (!(n2 > 0.0)) throw SingularState("normalize_pair: state has zero norm");
  const double inv = 1.0 / std::sqrt(n2);
  TwoKaonState out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.amp[i][j] = s.amp[i][j] * inv;
  out.normalized = true;
  return out;
}

TwoKaonState apply_projector(const TwoKaonState& s, Side side, Outcome o) {
  // |o><o| has matrix elements b_i b_j in the lifetime basis (b real).
  const auto b = basis_coefficients(o);
  TwoKaonState out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      complex sum = 0.0;
      for (int m = 0; m < 2; ++m) {
        if (side == Side::Left) {
          sum += b[i] * b[m] * s.amp[m][j];
        } else {
          sum += b[j] * b[m] * s.amp[i][m];
        }
      }
      out.amp[i][j] = sum;
    }
  }
  out.normalized = false;
  return out;
}

complex pair_inner_product(const JointProjector& p, const TwoKaonState& s) {
  const auto bl = basis_coefficients(p.left);
  const auto br = basis_coefficients(p.right);
  complex sum = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) sum += bl[i] * br[j] * s.amp[i][j];
  return sum;
}

double joint_projective_prob(const TwoKaonState& s, const JointProjector& p) {
  require_normalized(s, "joint_projective_prob");
  return std::min(1.0, std::norm(pair_inner_product(p, s)));
}

double pair_survival(double tau_l, double tau_r, const PhysicalConstants& k) {
  return std::exp(-(k.gamma_L + k.gamma_S) * (tau_l + tau_r) / 2.0) *
         std::cosh(k.delta_gamma() * (tau_l - tau_r) / 2.0);
}

double pair_visibility(double delta_tau, const PhysicalConstants& k) {
  return 1.0 / std::cosh(k.delta_gamma() * delta_tau / 2.0);
}

double closed_form_joint(JointKind kind, double delta_tau, const PhysicalConstants& k) {
  const double fringe = pair_visibility(delta_tau, k) * std::cos(k.delta_m * delta_tau);
  const double x = k.delta_gamma() * delta_tau;
  switch (kind) {
    case JointKind::StrangenessLike: return 0.25 * (1.0 - fringe);
    case JointKind::StrangenessUnlike: return 0.25 * (1.0 + fringe);
    case JointKind::StrangenessShort: return 1.0 / (2.0 * (1.0 + std::exp(x)));
    case JointKind::StrangenessLong: return 1.0 / (2.0 * (1.0 + std::exp(-x)));
  }
  return 0.0;
}

double closed_form_joint(const JointProjector& p, double delta_tau, const PhysicalConstants& k) {
  const Observable ol = observable_of(p.left);
  const Observable orr = observable_of(p.right);
  const double x = k.delta_gamma() * delta_tau;
  if (ol == Observable::Strangeness && orr == Observable::Strangeness) {
    return closed_form_joint(p.left == p.right ? JointKind::StrangenessLike
                                               : JointKind::StrangenessUnlike,
                             delta_tau, k);
  }
  if (ol == Observable::Strangeness) {
    return closed_form_joint(p.right == Outcome::KS ? JointKind::StrangenessShort
                                                    : JointKind::StrangenessLong,
                             delta_tau, k);
  }
  if (orr == Observable::Strangeness) {
    // Mirror image: a left K_S pairs with the right K_L component, whose weight
    // grows with delta_tau.
    return closed_form_joint(p.left == Outcome::KS ? JointKind::StrangenessShort
                                                   : JointKind::StrangenessLong,
                             -delta_tau, k);
  }
  if (p.left == p.right) return 0.0;
  return p.left == Outcome::KL ? 1.0 / (1.0 + std::exp(x)) : 1.0 / (1.0 + std::exp(-x));
}

DelayedChoiceNorms delayed_choice_norms(double tau_l, double tau_r0, const JointProjector& p,
                                        const PhysicalConstants& k) {
  if (!(tau_l >= 0.0) || !(tau_r0 >= 0.0)) {
    throw InvalidArgument("delayed_choice_norms: times must be non-negative");
  }
  const TwoKaonState phi0 = initial_pair();

  // P^l P^r U_l(tau_l,0) U_r(tau_r0,0) |phi(0)>
  const TwoKaonState evolved = evolve_pair(phi0, tau_l, tau_r0, k);
  const TwoKaonState direct =
      apply_projector(apply_projector(evolved, Side::Right, p.right), Side::Left, p.left);

  // P^l U_l(tau_l,tau_r0) P^r U_l(tau_r0,0) U_r(tau_r0,0) |phi(0)>
  const TwoKaonState common_r = evolve_pair(phi0, tau_r0, tau_r0, k);
  const TwoKaonState normal = apply_projector(
      propagate_pair(apply_projector(common_r, Side::Right, p.right), tau_l - tau_r0, 0.0, k),
      Side::Left, p.left);
  const double normal_survivors = propagate_pair(common_r, tau_l - tau_r0, 0.0, k).norm_squared();

  // P^r U_r(tau_r0,tau_l) P^l U_l(tau_l,0) U_r(tau_l,0) |phi(0)>
  const TwoKaonState common_l = evolve_pair(phi0, tau_l, tau_l, k);
  const TwoKaonState delayed = apply_projector(
      propagate_pair(apply_projector(common_l, Side::Left, p.left), 0.0, tau_r0 - tau_l, k),
      Side::Right, p.right);
  const double delayed_survivors = propagate_pair(common_l, 0.0, tau_r0 - tau_l, k).norm_squared();

  return {direct.norm_squared() / evolved.norm_squared(), normal.norm_squared() / normal_survivors,
          delayed.norm_squared() / delayed_survivors};
}

}  // namespace kaon
