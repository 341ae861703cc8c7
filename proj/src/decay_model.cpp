#include "kaon/decay_model.hpp"

#include <cmath>
#include <sstream>

#include "decay_terms.hpp"

namespace kaon {

namespace {

constexpr Eigenstate kBasis[2] = {Eigenstate::S, Eigenstate::L};

void require_time(double tau, const char* where) {
  if (!(tau >= 0.0)) throw InvalidArgument(std::string(where) + ": times must be non-negative");
}

// e^{-i lambda tau} with the common m_S phase dropped.
complex phase(Eigenstate e, double tau, const PhysicalConstants& k) {
  return propagation_factor(e, tau, k);
}

}  // namespace

Outcome tagged_outcome(DecayChannel c) {
  switch (c) {
    case DecayChannel::TwoPi: return Outcome::KS;
    case DecayChannel::ThreePi: return Outcome::KL;
    case DecayChannel::SemileptonicPlus: return Outcome::K0;
    case DecayChannel::SemileptonicMinus: return Outcome::K0bar;
  }
  return Outcome::KS;
}

DecayChannel identifying_channel(Outcome o) {
  switch (o) {
    case Outcome::KS: return DecayChannel::TwoPi;
    case Outcome::KL: return DecayChannel::ThreePi;
    case Outcome::K0: return DecayChannel::SemileptonicPlus;
    case Outcome::K0bar: return DecayChannel::SemileptonicMinus;
  }
  return DecayChannel::TwoPi;
}

std::string_view to_string(DecayChannel c) {
  switch (c) {
    case DecayChannel::TwoPi: return "TwoPi";
    case DecayChannel::ThreePi: return "ThreePi";
    case DecayChannel::SemileptonicPlus: return "SemileptonicPlus";
    case DecayChannel::SemileptonicMinus: return "SemileptonicMinus";
  }
  return "?";
}

DecayChannel parse_channel(std::string_view s) {
  for (DecayChannel c : kAllChannels) {
    if (to_string(c) == s) return c;
  }
  throw InvalidArgument("unknown decay channel '" + std::string(s) + "'");
}

AmplitudeModel build_amplitude_model(const PhysicalConstants& k) {
  k.validate();
  AmplitudeModel m;
  const double sl = std::sqrt(0.5 * k.br_sl_L * k.gamma_L);
  const auto set = [&](DecayChannel c, Eigenstate e, complex v) {
    m.a[static_cast<int>(c)][static_cast<int>(e)] = v;
  };
  set(DecayChannel::TwoPi, Eigenstate::S, std::sqrt(k.gamma_S - k.br_sl_L * k.gamma_L));
  set(DecayChannel::TwoPi, Eigenstate::L, 0.0);
  set(DecayChannel::ThreePi, Eigenstate::S, 0.0);
  set(DecayChannel::ThreePi, Eigenstate::L, std::sqrt(k.br_3pi_L * k.gamma_L));
  set(DecayChannel::SemileptonicPlus, Eigenstate::S, sl);
  set(DecayChannel::SemileptonicPlus, Eigenstate::L, sl);
  set(DecayChannel::SemileptonicMinus, Eigenstate::S, sl);
  set(DecayChannel::SemileptonicMinus, Eigenstate::L, -sl);

  if (!k.semileptonic_widths_consistent()) {
    std::ostringstream os;
    os << "semileptonic widths br_sl_L*gamma_L=" << k.br_sl_L * k.gamma_L
       << " and br_sl_S*gamma_S=" << k.br_sl_S * k.gamma_S << " differ by "
       << 100.0 * k.semileptonic_width_mismatch() << "% (> 10%)";
    m.warning = os.str();
  }
  return m;
}

double decay_width(DecayChannel c, const PhysicalConstants&, const AmplitudeModel& model) {
  const auto b = basis_coefficients(tagged_outcome(c));
  const double overlap_L = b[1] * b[1];
  const double overlap_S = b[0] * b[0];
  double width = 0.0;
  if (overlap_L > 0.0) {
    width = model.strength(c, Eigenstate::L) / overlap_L;
  } else if (overlap_S > 0.0) {
    width = model.strength(c, Eigenstate::S) / overlap_S;
  }
  if (!(width > 0.0)) {
    throw InvalidArgument("decay_width: width of channel " + std::string(to_string(c)) +
                          " is undefined");
  }
  return width;
}

double state_decay_rate(const SingleKaonState& s, DecayChannel c, double tau,
                        const PhysicalConstants& k, const AmplitudeModel& model) {
  require_time(tau, "state_decay_rate");
  const complex amp = s.c_S * phase(Eigenstate::S, tau, k) * model.amplitude(c, Eigenstate::S) +
                      s.c_L * phase(Eigenstate::L, tau, k) * model.amplitude(c, Eigenstate::L);
  return std::norm(amp);
}

double single_decay_rate(DecayChannel c, double tau, const PhysicalConstants& k,
                         const AmplitudeModel& model) {
  require_time(tau, "single_decay_rate");
  const complex amp = phase(Eigenstate::S, tau, k) * model.amplitude(c, Eigenstate::S) +
                      phase(Eigenstate::L, tau, k) * model.amplitude(c, Eigenstate::L);
  return 0.5 * std::norm(amp);
}

double beam_survival(double tau, const PhysicalConstants& k) {
  return 0.5 * (std::exp(-k.gamma_S * tau) + std::exp(-k.gamma_L * tau));
}

double passive_single_prob(Outcome o, double tau, const PhysicalConstants& k,
                           const AmplitudeModel& model) {
  require_time(tau, "passive_single_prob");
  const DecayChannel c = identifying_channel(o);
  return single_decay_rate(c, tau, k, model) / (decay_width(c, k, model) * beam_survival(tau, k));
}

double joint_decay_rate(DecayChannel f_l, double tau_l, DecayChannel f_r, double tau_r,
                        const PhysicalConstants& k, const AmplitudeModel& model) {
  require_time(tau_l, "joint_decay_rate");
  require_time(tau_r, "joint_decay_rate");
  using E = Eigenstate;
  const complex first = phase(E::L, tau_l, k) * phase(E::S, tau_r, k) *
                        model.amplitude(f_l, E::L) * model.amplitude(f_r, E::S);
  const complex second = phase(E::S, tau_l, k) * phase(E::L, tau_r, k) *
                         model.amplitude(f_l, E::S) * model.amplitude(f_r, E::L);
  return 0.5 * std::norm(first - second);
}

double passive_joint_prob(Outcome out_l, double tau_l, Outcome out_r, double tau_r,
                          const PhysicalConstants& k, const AmplitudeModel& model) {
  const DecayChannel f_l = identifying_channel(out_l);
  const DecayChannel f_r = identifying_channel(out_r);
  return joint_decay_rate(f_l, tau_l, f_r, tau_r, k, model) /
         (decay_width(f_l, k, model) * decay_width(f_r, k, model) *
          pair_survival(tau_l, tau_r, k));
}

double mixed_decay_rate(Outcome active_l, double tau_l, DecayChannel f_r, double tau_r,
                        const PhysicalConstants& k, const AmplitudeModel& model) {
  require_time(tau_l, "mixed_decay_rate");
  require_time(tau_r, "mixed_decay_rate");
  using E = Eigenstate;
  // <active_l| applied to the left factor of (|K_L K_S> - |K_S K_L>)/sqrt(2).
  const auto b = basis_coefficients(active_l);
  const complex first =
      b[1] * phase(E::L, tau_l, k) * phase(E::S, tau_r, k) * model.amplitude(f_r, E::S);
  const complex second =
      b[0] * phase(E::S, tau_l, k) * phase(E::L, tau_r, k) * model.amplitude(f_r, E::L);
  return 0.5 * std::norm(first - second);
}

double mixed_active_passive_prob(Outcome active_l, double tau_l, Outcome out_r, double tau_r,
                                 const PhysicalConstants& k, const AmplitudeModel& model) {
  const DecayChannel f_r = identifying_channel(out_r);
  return mixed_decay_rate(active_l, tau_l, f_r, tau_r, k, model) /
         (decay_width(f_r, k, model) * pair_survival(tau_l, tau_r, k));
}

double integrated_state_decay(const SingleKaonState& s, DecayChannel c,
                              const PhysicalConstants& k, const AmplitudeModel& model) {
  const auto terms = detail::single_terms(s, c, k, model);
  return detail::mod2_tail(terms, 0.0);
}

double integrated_joint_decay(DecayChannel f_l, DecayChannel f_r, const PhysicalConstants& k,
                              const AmplitudeModel& model) {
  const auto terms = detail::pair_terms(initial_pair(), f_l, f_r, k, model);
  return detail::mod2_tail(terms, 0.0, 0.0);
}

namespace detail {

std::array<Term1, 2> single_terms(const SingleKaonState& s, DecayChannel c,
                                  const PhysicalConstants& k, const AmplitudeModel& model) {
  return {Term1{s.c_S * model.amplitude(c, Eigenstate::S), decay_exponent(Eigenstate::S, k)},
          Term1{s.c_L * model.amplitude(c, Eigenstate::L), decay_exponent(Eigenstate::L, k)}};
}

std::array<Term2, 4> pair_terms(const TwoKaonState& s, DecayChannel f_l, DecayChannel f_r,
                                const PhysicalConstants& k, const AmplitudeModel& model) {
  std::array<Term2, 4> out;
  int n = 0;
  for (Eigenstate i : kBasis) {
    for (Eigenstate j : kBasis) {
      out[n++] = Term2{s.at(i, j) * model.amplitude(f_l, i) * model.amplitude(f_r, j),
                       decay_exponent(i, k), decay_exponent(j, k)};
    }
  }
  return out;
}

std::array<Term1, 2> mixed_terms(Outcome o, double tau_l, DecayChannel f_r,
                                 const PhysicalConstants& k, const AmplitudeModel& model) {
  const TwoKaonState evolved = evolve_pair(initial_pair(), tau_l, 0.0, k);
  const auto b = basis_coefficients(o);
  std::array<Term1, 2> out;
  for (Eigenstate j : kBasis) {
    complex right = 0.0;
    for (Eigenstate i : kBasis) right += b[static_cast<int>(i)] * evolved.at(i, j);
    out[static_cast<int>(j)] = Term1{right * model.amplitude(f_r, j), decay_exponent(j, k)};
  }
  return out;
}

}  // namespace detail

}  // namespace kaon
