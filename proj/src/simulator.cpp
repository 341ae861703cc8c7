#include "kaon/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "decay_terms.hpp"

namespace kaon {

namespace {

constexpr double kBoundSlack = 1e-12;
constexpr int kMaxFilterAttempts = 1000000;

bool passes(ChannelFilter f, DecayChannel c) {
  return f == ChannelFilter::All || c == DecayChannel::SemileptonicPlus ||
         c == DecayChannel::SemileptonicMinus;
}

template <std::size_t N>
std::size_t draw_index(const std::array<double, N>& cumulative, RandomStream& rng) {
  const double u = rng.uniform() * cumulative.back();
  for (std::size_t i = 0; i < N; ++i) {
    if (u < cumulative[i]) return i;
  }
  // Only reachable through rounding at the top end.
  for (std::size_t i = N; i-- > 0;) {
    if (i == 0 || cumulative[i] > cumulative[i - 1]) return i;
  }
  return 0;
}

MeasurementRecord active(Observable obs, Outcome o, double time) {
  return {Procedure::Active, obs, o, time, std::nullopt};
}

MeasurementRecord passive(const PassiveDecay& d) {
  const Outcome o = tagged_outcome(d.channel);
  return {Procedure::Passive, observable_of(o), o, d.time, d.channel};
}

/// Right factor of a product state |o>_left (x) |chi>_right.
SingleKaonState right_factor(const TwoKaonState& s, Outcome left) {
  const auto b = basis_coefficients(left);
  SingleKaonState chi;
  chi.c_S = b[0] * s.amp[0][0] + b[1] * s.amp[1][0];
  chi.c_L = b[0] * s.amp[0][1] + b[1] * s.amp[1][1];
  return normalize_to_survivors(chi);
}

struct LeftResult {
  std::optional<MeasurementRecord> record;
  SingleKaonState right_at_origin;
};

// Active strangeness on the left at tau_l, sampled from the left marginal
// before anything happens on the right. Operators on the two sides commute,
// so this ordering yields the exact joint statistics.
LeftResult measure_left_first(double tau_l, const PhysicalConstants& k, RandomStream& rng) {
  const TwoKaonState evolved = evolve_pair(initial_pair(), tau_l, 0.0, k);
  const double survive = evolved.norm_squared();
  if (rng.uniform() < survive) {
    const Collapse c =
        active_measure_and_collapse(normalize_pair(evolved), Side::Left, Observable::Strangeness, rng);
    return {active(Observable::Strangeness, c.outcome, tau_l), right_factor(c.state, c.outcome)};
  }
  // The left decayed before its detector: summed over its decay modes this
  // is a lifetime measurement, leaving the right in the opposite eigenstate.
  const double left_long_decayed = -std::expm1(-k.gamma_L * tau_l);
  const double left_short_decayed = -std::expm1(-k.gamma_S * tau_l);
  const bool right_short =
      rng.uniform() * (left_long_decayed + left_short_decayed) < left_long_decayed;
  return {std::nullopt, make_state(right_short ? Outcome::KS : Outcome::KL)};
}

double draw_tau_l(const SimulationConfig& cfg, RandomStream& rng) {
  if (cfg.tau_l_range) {
    const auto [lo, hi] = *cfg.tau_l_range;
    return lo + (hi - lo) * rng.uniform();
  }
  if (cfg.tau_l_grid.size() == 1) return cfg.tau_l_grid.front();
  return cfg.tau_l_grid[rng.index(cfg.tau_l_grid.size())];
}

EventRecord simulate_a1(double tau_l, const SimulationConfig& cfg, const PhysicalConstants& k,
                        RandomStream& rng) {
  // Chronological order: the earlier detector acts first on the pair state,
  // then the partner propagates alone to its own detector.
  EventRecord ev;
  const double tau_r = cfg.tau_r0;
  const double t1 = std::min(tau_l, tau_r);
  const double t2 = std::max(tau_l, tau_r);
  if (rng.uniform() >= std::exp(-(k.gamma_S + k.gamma_L) * t1)) return ev;

  const Side first = tau_l <= tau_r ? Side::Left : Side::Right;
  const TwoKaonState at_t1 = normalize_pair(evolve_pair(initial_pair(), t1, t1, k));
  const Collapse c1 = active_measure_and_collapse(at_t1, first, Observable::Strangeness, rng);

  const double dt = t2 - t1;
  const TwoKaonState moved = first == Side::Left ? evolve_pair(c1.state, 0.0, dt, k)
                                                 : evolve_pair(c1.state, dt, 0.0, k);
  if (rng.uniform() >= moved.norm_squared()) return ev;
  const Side second = first == Side::Left ? Side::Right : Side::Left;
  const Collapse c2 =
      active_measure_and_collapse(normalize_pair(moved), second, Observable::Strangeness, rng);

  const Outcome o_l = first == Side::Left ? c1.outcome : c2.outcome;
  const Outcome o_r = first == Side::Left ? c2.outcome : c1.outcome;
  ev.left = active(Observable::Strangeness, o_l, tau_l);
  ev.right = active(Observable::Strangeness, o_r, tau_r);
  return ev;
}

EventRecord simulate_a2(double tau_l, const SimulationConfig& cfg, const PhysicalConstants& k,
                        RandomStream& rng) {
  EventRecord ev;
  const LeftResult left = measure_left_first(tau_l, k, rng);
  ev.left = left.record;
  const SingleKaonState& chi = left.right_at_origin;
  if (rng.uniform() >= survival_probability(chi, cfg.tau_r0, k)) {
    ev.left.reset();  // only pairs surviving up to both measurements are kept
    return ev;
  }
  const SingleKaonState at_r0 = normalize_to_survivors(evolve(chi, cfg.tau_r0, k));
  const bool is_short = rng.uniform() < std::norm(at_r0.c_S);
  const double decay = cfg.tau_r0 + rng.exponential(is_short ? k.gamma_S : k.gamma_L);
  ev.right = active(Observable::Lifetime, classify_lifetime(decay, cfg.tau_r0, cfg.window),
                    cfg.tau_r0);
  if (!ev.left) ev.right.reset();
  return ev;
}

EventRecord simulate_b(double tau_l, const SimulationConfig& cfg, const PhysicalConstants& k,
                       RandomStream& rng) {
  EventRecord ev;
  const LeftResult left = measure_left_first(tau_l, k, rng);
  ev.left = left.record;
  const SingleKaonState& chi = left.right_at_origin;
  // Summed over channels the decay-time density carries no K_S/K_L
  // interference, so the component can be drawn first.
  const bool is_short = rng.uniform() < std::norm(chi.c_S);
  const double decay = rng.exponential(is_short ? k.gamma_S : k.gamma_L);
  if (decay < cfg.tau_r0) {
    ev.right = active(Observable::Lifetime, classify_lifetime(decay, 0.0, cfg.window), 0.0);
    return ev;
  }
  const SingleKaonState at_r0 = normalize_to_survivors(evolve(chi, cfg.tau_r0, k));
  const Outcome o = rng.uniform() < project(at_r0, Outcome::K0) ? Outcome::K0 : Outcome::K0bar;
  ev.right = active(Observable::Strangeness, o, cfg.tau_r0);
  return ev;
}

EventRecord simulate_c(double tau_l, const SimulationConfig& cfg, const PhysicalConstants& k,
                       const AmplitudeModel& model, RandomStream& rng) {
  for (int attempt = 0; attempt < kMaxFilterAttempts; ++attempt) {
    EventRecord ev;
    const LeftResult left = measure_left_first(tau_l, k, rng);
    const PassiveDecay d = sample_single_decay(left.right_at_origin, k, model, rng);
    if (!passes(cfg.channel_filter, d.channel)) continue;
    ev.left = left.record;
    ev.right = passive(d);
    return ev;
  }
  throw std::runtime_error("experiment C: channel filter rejected every draw");
}

EventRecord simulate_pair(const SimulationConfig& cfg, const PhysicalConstants& k,
                          const AmplitudeModel& model, const PassivePairSampler* pair_sampler,
                          RandomStream& rng) {
  if (cfg.kind == ExperimentKind::D) {
    const PassivePair p = (*pair_sampler)(rng);
    EventRecord ev;
    ev.left = passive(p.left);
    ev.right = passive(p.right);
    return ev;
  }
  const double tau_l = draw_tau_l(cfg, rng);
  switch (cfg.kind) {
    case ExperimentKind::A1: return simulate_a1(tau_l, cfg, k, rng);
    case ExperimentKind::A2: return simulate_a2(tau_l, cfg, k, rng);
    case ExperimentKind::B: return simulate_b(tau_l, cfg, k, rng);
    case ExperimentKind::C: return simulate_c(tau_l, cfg, k, model, rng);
    case ExperimentKind::D: break;
  }
  return {};
}

void run_partition(const SimulationConfig& cfg, const PhysicalConstants& k,
                   const AmplitudeModel& model, const PassivePairSampler* pair_sampler, unsigned p,
                   std::vector<EventRecord>& out) {
  const auto [first, last] = partition_range(cfg.n_pairs, cfg.partitions, p);
  RandomStream rng = RandomStream::for_partition(cfg.seed, p);
  for (std::uint64_t id = first; id < last; ++id) {
    EventRecord ev = simulate_pair(cfg, k, model, pair_sampler, rng);
    ev.pair_id = id;
    out[id] = std::move(ev);
  }
}

std::optional<PassivePairSampler> make_pair_sampler(const SimulationConfig& cfg,
                                                    const PhysicalConstants& k,
                                                    const AmplitudeModel& model) {
  if (cfg.kind != ExperimentKind::D) return std::nullopt;
  return PassivePairSampler(k, model, cfg.channel_filter);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::A1: return "A1";
    case ExperimentKind::A2: return "A2";
    case ExperimentKind::B: return "B";
    case ExperimentKind::C: return "C";
    case ExperimentKind::D: return "D";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view s) {
  for (auto kind : {ExperimentKind::A1, ExperimentKind::A2, ExperimentKind::B, ExperimentKind::C,
                    ExperimentKind::D}) {
    if (to_string(kind) == s) return kind;
  }
  throw InvalidArgument("unknown experiment kind '" + std::string(s) + "'");
}

std::string_view to_string(ChannelFilter f) {
  return f == ChannelFilter::All ? "all" : "semileptonic";
}

ChannelFilter parse_channel_filter(std::string_view s) {
  if (s == "all") return ChannelFilter::All;
  if (s == "semileptonic") return ChannelFilter::Semileptonic;
  throw InvalidArgument("unknown channel filter '" + std::string(s) + "'");
}

void SimulationConfig::validate() const {
  if (n_pairs < 1) throw InvalidArgument("n_pairs must be at least 1");
  if (partitions < 1) throw InvalidArgument("partitions must be at least 1");
  if (!(tau_r0 >= 0.0) || !std::isfinite(tau_r0)) {
    throw InvalidArgument("tau_r0 must be a finite non-negative time");
  }
  window.validate();
  if (tau_l_range) {
    const auto [lo, hi] = *tau_l_range;
    if (!(lo >= 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
      throw InvalidArgument("tau_l_range must satisfy 0 <= lo <= hi");
    }
  } else {
    if (tau_l_grid.empty()) throw InvalidArgument("tau_l_grid must not be empty");
    for (double t : tau_l_grid) {
      if (!(t >= 0.0) || !std::isfinite(t)) {
        throw InvalidArgument("tau_l_grid entries must be finite non-negative times");
      }
    }
  }
  if (channel_filter == ChannelFilter::Semileptonic && kind != ExperimentKind::C &&
      kind != ExperimentKind::D) {
    throw InvalidArgument("channel_filter applies to experiments C and D only");
  }
}

std::pair<std::uint64_t, std::uint64_t> partition_range(std::uint64_t n_pairs,
                                                        unsigned partitions, unsigned p) {
  const std::uint64_t base = n_pairs / partitions;
  const std::uint64_t extra = n_pairs % partitions;
  const std::uint64_t first = p * base + std::min<std::uint64_t>(p, extra);
  return {first, first + base + (p < extra ? 1 : 0)};
}

EventSet run_experiment_serial(const SimulationConfig& cfg, const PhysicalConstants& k,
                               const AmplitudeModel& model) {
  cfg.validate();
  EventSet set;
  set.config = cfg;
  set.events.resize(cfg.n_pairs);
  const auto sampler = make_pair_sampler(cfg, k, model);
  const PassivePairSampler* sp = sampler ? &*sampler : nullptr;
  for (unsigned p = 0; p < cfg.partitions; ++p) {
    run_partition(cfg, k, model, sp, p, set.events);
  }
  return set;
}

EventSet run_experiment(const SimulationConfig& cfg, const PhysicalConstants& k,
                        const AmplitudeModel& model) {
  cfg.validate();
  EventSet set;
  set.config = cfg;
  set.events.resize(cfg.n_pairs);
  const auto sampler = make_pair_sampler(cfg, k, model);
  const PassivePairSampler* sp = sampler ? &*sampler : nullptr;
  const int partitions = static_cast<int>(cfg.partitions);

  // Each partition writes a disjoint slice of `events`, so the merged set is
  // ordered by pair_id regardless of scheduling.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (int p = 0; p < partitions; ++p) {
    try {
      run_partition(cfg, k, model, sp, static_cast<unsigned>(p), set.events);
    } catch (...) {
#pragma omp critical(kaon_simulator_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return set;
}

PassivePairSampler::PassivePairSampler(const PhysicalConstants& k, const AmplitudeModel& model,
                                       ChannelFilter filter)
    : k_(k), model_(model) {
  double total = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const DecayChannel fl = kAllChannels[i];
      const DecayChannel fr = kAllChannels[j];
      const double w = (passes(filter, fl) && passes(filter, fr))
                           ? std::max(0.0, integrated_joint_decay(fl, fr, k, model))
                           : 0.0;
      weights_[i][j] = w;
      total += w;
    }
  }
  if (!(total > 0.0)) throw InvalidArgument("passive pair sampler: no channel pair has weight");
  for (auto& row : weights_)
    for (double& w : row) w /= total;
}

PassivePair PassivePairSampler::operator()(RandomStream& rng) const {
  std::array<double, 16> cumulative{};
  double acc = 0.0;
  for (std::size_t n = 0; n < 16; ++n) {
    acc += weights_[n / 4][n % 4];
    cumulative[n] = acc;
  }
  const std::size_t n = draw_index(cumulative, rng);
  const DecayChannel fl = kAllChannels[n / 4];
  const DecayChannel fr = kAllChannels[n % 4];

  using E = Eigenstate;
  // rate = 1/2 |alpha e^{..} - beta e^{..}|^2 <= |alpha|^2 e^{-G_L tl - G_S tr} + |beta|^2 e^{-G_S tl - G_L tr}
  const double alpha2 = model_.strength(fl, E::L) * model_.strength(fr, E::S);
  const double beta2 = model_.strength(fl, E::S) * model_.strength(fr, E::L);
  const double w_alpha = alpha2 / (k_.gamma_L * k_.gamma_S);
  const double w_beta = beta2 / (k_.gamma_S * k_.gamma_L);
  for (;;) {
    double tl = 0.0;
    double tr = 0.0;
    if (rng.uniform() * (w_alpha + w_beta) < w_alpha) {
      tl = rng.exponential(k_.gamma_L);
      tr = rng.exponential(k_.gamma_S);
    } else {
      tl = rng.exponential(k_.gamma_S);
      tr = rng.exponential(k_.gamma_L);
    }
    const double bound = alpha2 * std::exp(-k_.gamma_L * tl - k_.gamma_S * tr) +
                         beta2 * std::exp(-k_.gamma_S * tl - k_.gamma_L * tr);
    const double rate = joint_decay_rate(fl, tl, fr, tr, k_, model_);
    if (rate > bound * (1.0 + kBoundSlack)) {
      throw std::logic_error("passive pair sampler: proposal does not bound the decay density");
    }
    if (rng.uniform() * bound < rate) return {{fl, tl}, {fr, tr}};
  }
}

PassivePair sample_passive_pair(const PhysicalConstants& k, const AmplitudeModel& model,
                                RandomStream& rng) {
  return PassivePairSampler(k, model)(rng);
}

PassiveDecay sample_single_decay(const SingleKaonState& s, const PhysicalConstants& k,
                                 const AmplitudeModel& model, RandomStream& rng) {
  std::array<double, 4> cumulative{};
  double acc = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto terms = detail::single_terms(s, kAllChannels[i], k, model);
    acc += std::max(0.0, detail::mod2_tail(terms, 0.0));
    cumulative[i] = acc;
  }
  if (!(acc > 0.0)) throw InvalidArgument("sample_single_decay: state has no decay width");
  const DecayChannel c = kAllChannels[draw_index(cumulative, rng)];

  // |x + y|^2 <= 2(|x|^2 + |y|^2)
  const double short2 = std::norm(s.c_S) * model.strength(c, Eigenstate::S);
  const double long2 = std::norm(s.c_L) * model.strength(c, Eigenstate::L);
  const double w_short = short2 / k.gamma_S;
  const double w_long = long2 / k.gamma_L;
  for (;;) {
    const bool from_short = rng.uniform() * (w_short + w_long) < w_short;
    const double t = rng.exponential(from_short ? k.gamma_S : k.gamma_L);
    const double bound = 2.0 * (short2 * std::exp(-k.gamma_S * t) + long2 * std::exp(-k.gamma_L * t));
    const double rate = state_decay_rate(s, c, t, k, model);
    if (rate > bound * (1.0 + kBoundSlack)) {
      throw std::logic_error("single decay sampler: proposal does not bound the decay density");
    }
    if (rng.uniform() * bound < rate) return {c, t};
  }
}

Collapse active_measure_and_collapse(const TwoKaonState& s, Side side, Observable observable,
                                     RandomStream& rng) {
  const Outcome first = observable == Observable::Strangeness ? Outcome::K0 : Outcome::KS;
  const Outcome second = observable == Observable::Strangeness ? Outcome::K0bar : Outcome::KL;
  const TwoKaonState projected = apply_projector(s, side, first);
  const double p_first = projected.norm_squared() / s.norm_squared();
  if (rng.uniform() < p_first) return {first, normalize_pair(projected)};
  return {second, normalize_pair(apply_projector(s, side, second))};
}

Outcome classify_lifetime(double decay_time, double measure_time, const MisidWindow& window) {
  return decay_time <= measure_time + window.delta_tau_w ? Outcome::KS : Outcome::KL;
}

MisidRates simulate_misid_rates(std::uint64_t n, const MisidWindow& window,
                                const PhysicalConstants& k, RandomStream& rng) {
  if (n == 0) throw InvalidArgument("simulate_misid_rates: n must be positive");
  std::uint64_t wrong_short = 0;
  std::uint64_t wrong_long = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (classify_lifetime(rng.exponential(k.gamma_S), 0.0, window) == Outcome::KL) ++wrong_short;
    if (classify_lifetime(rng.exponential(k.gamma_L), 0.0, window) == Outcome::KS) ++wrong_long;
  }
  return {static_cast<double>(wrong_short) / n, static_cast<double>(wrong_long) / n, n};
}

}  // namespace kaon
