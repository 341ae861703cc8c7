#include "kaon/verification.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "decay_terms.hpp"
#include "kaon/event_io.hpp"
#include "kaon/pair.hpp"
#include "kaon/rng.hpp"
#include "kaon/simulator.hpp"

namespace kaon {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr Outcome kOutcomes[4] = {Outcome::K0, Outcome::K0bar, Outcome::KS, Outcome::KL};

template <typename F>
double integrate(F f, double a, double b, double tol = 1e-12) {
  return gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol);
}

template <typename F>
double integrate_inner(F f, double a, double b) {
  return gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-11);
}

CheckResult finish(std::string name, double worst, double tol, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.worst_deviation = worst;
  r.tolerance = tol;
  r.status = worst <= tol ? CheckStatus::Pass : CheckStatus::Fail;
  r.detail = std::move(detail);
  return r;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Warn: return "WARN";
    case CheckStatus::Fail: return "FAIL";
  }
  return "?";
}

double relative_deviation(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

double single_decay_normalization(const PhysicalConstants& k, const AmplitudeModel& model) {
  const SingleKaonState k0 = make_state(Outcome::K0);
  double total = 0.0;
  for (DecayChannel c : kAllChannels) {
    total += integrate([&](double t) { return single_decay_rate(c, t, k, model); }, 0.0,
                       kQuadratureCutoff);
    total += detail::mod2_tail(detail::single_terms(k0, c, k, model), kQuadratureCutoff);
  }
  return total;
}

double joint_decay_normalization(const PhysicalConstants& k, const AmplitudeModel& model) {
  const double T = kQuadratureCutoff;
  const TwoKaonState phi0 = initial_pair();
  double total = 0.0;
  for (DecayChannel fl : kAllChannels) {
    for (DecayChannel fr : kAllChannels) {
      const auto terms = detail::pair_terms(phi0, fl, fr, k, model);
      const auto slice = [&](double tl) {
        const double inner =
            integrate_inner([&](double tr) { return joint_decay_rate(fl, tl, fr, tr, k, model); },
                            0.0, T);
        return inner + detail::mod2_tail_right(terms, tl, T);
      };
      total += integrate(slice, 0.0, T, 1e-10);
      total += integrate([&](double tr) { return detail::mod2_tail_left(terms, T, tr); }, 0.0, T);
      total += detail::mod2_tail(terms, T, T);
    }
  }
  return total;
}

double mixed_decay_normalization(Outcome active_l, double tau_l, const PhysicalConstants& k,
                                 const AmplitudeModel& model) {
  double total = 0.0;
  for (DecayChannel c : kAllChannels) {
    total += integrate([&](double tr) { return mixed_decay_rate(active_l, tau_l, c, tr, k, model); },
                       0.0, kQuadratureCutoff);
    total += detail::mod2_tail(detail::mixed_terms(active_l, tau_l, c, k, model), kQuadratureCutoff);
  }
  return total;
}

CheckResult check_core_unitarity(const PhysicalConstants& k) {
  double worst = 0.0;
  SingleKaonState mixed{complex(0.6, 0.0), complex(0.0, 0.8), true};
  std::vector<SingleKaonState> starts;
  for (Outcome o : kOutcomes) starts.push_back(make_state(o));
  starts.push_back(mixed);
  for (const auto& s : starts) {
    for (double t1 : grid(0.0, 12.0, 0.5)) {
      const SingleKaonState a = normalize_to_survivors(evolve(s, t1, k));
      worst = std::max(worst, std::abs(project(a, Outcome::K0) + project(a, Outcome::K0bar) - 1.0));
      worst = std::max(worst, std::abs(project(a, Outcome::KS) + project(a, Outcome::KL) - 1.0));
      for (double t2 : {0.0, 0.7, 3.0}) {
        const SingleKaonState two = normalize_to_survivors(evolve(evolve(s, t1, k), t2, k));
        const SingleKaonState one = normalize_to_survivors(evolve(s, t1 + t2, k));
        for (Outcome o : kOutcomes) {
          worst = std::max(worst, std::abs(project(two, o) - project(one, o)));
        }
      }
    }
  }
  return finish("core: basis completeness and evolution composition", worst, 1e-12);
}

CheckResult check_single_passive_coincidence(const PhysicalConstants& k, const AmplitudeModel& m) {
  double worst = 0.0;
  for (double t : grid(0.0, 12.0, 0.5)) {
    const auto s = strangeness_probs(t, k);
    const auto l = lifetime_probs(t, k);
    worst = std::max(worst, std::abs(passive_single_prob(Outcome::K0, t, k, m) - s.first));
    worst = std::max(worst, std::abs(passive_single_prob(Outcome::K0bar, t, k, m) - s.second));
    worst = std::max(worst, std::abs(passive_single_prob(Outcome::KS, t, k, m) - l.first));
    worst = std::max(worst, std::abs(passive_single_prob(Outcome::KL, t, k, m) - l.second));
  }
  return finish("single kaon: passive reconstruction equals active probabilities", worst, 1e-10);
}

CheckResult check_single_normalization(const PhysicalConstants& k, const AmplitudeModel& m) {
  const double total = single_decay_normalization(k, m);
  std::ostringstream os;
  os << "sum_f int Gamma(f,t) dt = " << format_double(total);
  return finish("single kaon: decay rate normalization", std::abs(total - 1.0), 1e-6, os.str());
}

CheckResult check_joint_normalization(const PhysicalConstants& k, const AmplitudeModel& m) {
  const double total = joint_decay_normalization(k, m);
  std::ostringstream os;
  os << "sum double integral = " << format_double(total);
  return finish("pairs: joint decay rate normalization", std::abs(total - 1.0), 1e-5, os.str());
}

CheckResult check_mixed_normalization(const PhysicalConstants& k, const AmplitudeModel& m) {
  double worst = 0.0;
  for (double tl : {0.0, 1.0, 4.0}) {
    const double expected = pair_survival(tl, 0.0, k) / 2.0;
    worst = std::max(worst, std::abs(mixed_decay_normalization(Outcome::K0, tl, k, m) - expected));
  }
  return finish("pairs: mixed active/passive rate normalization", worst, 1e-5);
}

CheckResult check_joint_oracle(const PhysicalConstants& k) {
  const JointProjector pairs[8] = {
      {Outcome::K0, Outcome::K0},    {Outcome::K0, Outcome::K0bar}, {Outcome::K0bar, Outcome::K0},
      {Outcome::K0bar, Outcome::K0bar}, {Outcome::K0, Outcome::KS},  {Outcome::K0, Outcome::KL},
      {Outcome::K0bar, Outcome::KS}, {Outcome::K0bar, Outcome::KL}};
  double worst = 0.0;
  for (double dt : grid(-12.0, 12.0, 0.25)) {
    const TwoKaonState s = normalized_pair(dt, k);
    for (const auto& p : pairs) {
      worst = std::max(worst, relative_deviation(joint_projective_prob(s, p),
                                                 closed_form_joint(p, dt, k)));
    }
  }
  return finish("pairs: projector oracle equals closed forms (relative)", worst, 1e-10);
}

CheckResult check_pair_passive_coincidence(const PhysicalConstants& k, const AmplitudeModel& m) {
  const double times[5] = {0.0, 1.0, 2.0, 4.0, 8.0};
  double worst = 0.0;
  for (double tl : times) {
    for (double tr : times) {
      for (Outcome ol : kOutcomes) {
        for (Outcome orr : kOutcomes) {
          const double expected = closed_form_joint({ol, orr}, tl - tr, k);
          worst = std::max(worst, std::abs(passive_joint_prob(ol, tl, orr, tr, k, m) - expected));
          if (observable_of(ol) == Observable::Strangeness) {
            worst = std::max(worst,
                             std::abs(mixed_active_passive_prob(ol, tl, orr, tr, k, m) - expected));
          }
        }
      }
    }
  }
  return finish("pairs: passive and mixed probabilities equal closed forms", worst, 1e-10);
}

CheckResult check_delayed_choice(const PhysicalConstants& k, std::uint64_t triples,
                                 std::uint64_t seed) {
  RandomStream rng(seed);
  double worst = 0.0;
  for (std::uint64_t i = 0; i < triples; ++i) {
    const double tl = 12.0 * rng.uniform();
    const double tr = 12.0 * rng.uniform();
    const JointProjector p{kOutcomes[rng.index(4)], kOutcomes[rng.index(4)]};
    const auto n = delayed_choice_norms(tl, tr, p, k);
    const double hi = std::max({n.direct, n.normal_order, n.delayed_order});
    const double lo = std::min({n.direct, n.normal_order, n.delayed_order});
    worst = std::max(worst, hi - lo);
  }
  std::ostringstream os;
  os << triples << " random (tau_l, tau_r0, projector) triples";
  return finish("delayed choice: three orderings share one squared norm", worst, 1e-12, os.str());
}

CheckResult check_misid_window(const PhysicalConstants& k, const MisidWindow& window,
                               std::uint64_t samples, std::uint64_t seed) {
  const auto analytic = misid_probs(window, k);
  const double gap = std::abs(analytic.first - analytic.second);

  const double root = equal_misid_window(k);
  const auto at_root = misid_probs({root}, k);
  const double root_gap = std::abs(at_root.first - at_root.second);

  RandomStream rng(seed);
  const MisidRates sim = simulate_misid_rates(samples, window, k, rng);
  const auto z = [&](double p_hat, double p) {
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(sim.n));
    return std::abs(p_hat - p) / sigma;
  };
  const double z_short = z(sim.wrong_short, analytic.first);
  const double z_long = z(sim.wrong_long, analytic.second);

  std::ostringstream os;
  os << "p_wrong_KS=" << format_double(analytic.first) << " p_wrong_KL=" << format_double(analytic.second)
     << " residual=" << format_double(gap) << "; equal-window root=" << format_double(root)
     << " (gap " << format_double(root_gap) << "); simulated z-scores " << format_double(z_short)
     << ", " << format_double(z_long);
  CheckResult r = finish("misidentification window", gap, 1e-4, os.str());
  if (root_gap > 1e-10 || z_short > 4.0 || z_long > 4.0) r.status = CheckStatus::Fail;
  return r;
}

CheckResult check_semileptonic_consistency(const PhysicalConstants& k, const AmplitudeModel& m) {
  CheckResult r = finish("constants: Delta S = Delta Q semileptonic width consistency",
                         k.semileptonic_width_mismatch(), 0.10);
  if (!m.warning.empty()) {
    r.status = CheckStatus::Warn;
    r.detail = m.warning;
  }
  return r;
}

std::vector<CheckResult> run_verification(const PhysicalConstants& k, const VerifySettings& s) {
  const AmplitudeModel m = build_amplitude_model(k);
  return {
      check_semileptonic_consistency(k, m),
      check_core_unitarity(k),
      check_single_passive_coincidence(k, m),
      check_single_normalization(k, m),
      check_joint_normalization(k, m),
      check_mixed_normalization(k, m),
      check_joint_oracle(k),
      check_pair_passive_coincidence(k, m),
      check_delayed_choice(k, s.random_triples, s.seed),
      check_misid_window(k, s.window, s.misid_samples, s.seed + 1),
  };
}

}  // namespace kaon
