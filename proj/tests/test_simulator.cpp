#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "kaon/decay_model.hpp"
#include "kaon/estimate.hpp"
#include "kaon/event_io.hpp"
#include "kaon/simulator.hpp"
#include "test_util.hpp"

using namespace kaon;
using doctest::Approx;

namespace {
const PhysicalConstants k;
const AmplitudeModel m = build_amplitude_model(k);

SimulationConfig config(ExperimentKind kind, std::uint64_t n) {
  SimulationConfig c;
  c.kind = kind;
  c.n_pairs = n;
  c.tau_l_grid = {0.0, 1.0, 2.5};
  c.tau_r0 = 1.5;
  c.seed = 99;
  return c;
}

std::string serialize(const EventSet& s) {
  std::ostringstream os;
  write_events(os, s);
  return os.str();
}
}  // namespace

TEST_CASE("simulator: configuration is validated before sampling") {
  auto c = config(ExperimentKind::A1, 10);
  c.n_pairs = 0;
  CHECK_THROWS_AS(run_experiment(c, k, m), InvalidArgument);
  c = config(ExperimentKind::A1, 10);
  c.tau_r0 = -1.0;
  CHECK_THROWS_AS(run_experiment(c, k, m), InvalidArgument);
  c = config(ExperimentKind::A1, 10);
  c.tau_l_grid = {1.0, -2.0};
  CHECK_THROWS_AS(run_experiment(c, k, m), InvalidArgument);
  c = config(ExperimentKind::A1, 10);
  c.channel_filter = ChannelFilter::Semileptonic;
  CHECK_THROWS_AS(run_experiment(c, k, m), InvalidArgument);
  c = config(ExperimentKind::B, 10);
  c.partitions = 0;
  CHECK_THROWS_AS(run_experiment(c, k, m), InvalidArgument);
}

TEST_CASE("simulator: partitions cover the pair range") {
  std::uint64_t next = 0;
  for (unsigned p = 0; p < 7; ++p) {
    const auto [a, b] = partition_range(100, 7, p);
    CHECK(a == next);
    next = b;
  }
  CHECK(next == 100);
}

TEST_CASE("simulator: deterministic and identical to the serial reference") {
  for (auto kind : {ExperimentKind::A1, ExperimentKind::A2, ExperimentKind::B, ExperimentKind::C,
                    ExperimentKind::D}) {
    auto c = config(kind, 3000);
    c.partitions = 4;
    const auto a = run_experiment(c, k, m);
    const auto b = run_experiment(c, k, m);
    const auto serial = run_experiment_serial(c, k, m);
    CHECK(a.events == b.events);
    CHECK(a.events == serial.events);
    CHECK(serialize(a) == serialize(b));
    REQUIRE(a.events.size() == 3000);
    for (std::size_t i = 0; i < a.events.size(); ++i) CHECK(a.events[i].pair_id == i);
    c.seed = 100;
    CHECK_FALSE(run_experiment(c, k, m).events == a.events);
  }
}

TEST_CASE("simulator: experiment D never discards") {
  const auto set = run_experiment(config(ExperimentKind::D, 1000), k, m);
  CHECK(set.events.size() == 1000);
  for (const auto& e : set.events) {
    CHECK_FALSE(e.discarded());
    CHECK(e.left->procedure == Procedure::Passive);
    CHECK(e.right->procedure == Procedure::Passive);
    CHECK(e.left->channel.has_value());
    CHECK(tagged_outcome(*e.left->channel) == e.left->outcome);
  }
}

TEST_CASE("simulator: lifetime classification") {
  const MisidWindow w{4.8};
  CHECK(classify_lifetime(2.0 + 4.7, 2.0, w) == Outcome::KS);
  CHECK(classify_lifetime(2.0 + 4.9, 2.0, w) == Outcome::KL);
  RandomStream rng(5);
  const auto r = simulate_misid_rates(1000000, w, k, rng);
  const auto p = misid_probs(w, k);
  CHECK(within_sigma(r.wrong_short, p.first, r.n));
  CHECK(within_sigma(r.wrong_long, p.second, r.n));
}

TEST_CASE("simulator: active collapse") {
  RandomStream rng(11);
  const int n = 200000;
  int k0 = 0;
  for (int i = 0; i < n; ++i) {
    const auto c = active_measure_and_collapse(initial_pair(), Side::Left, Observable::Strangeness, rng);
    if (c.outcome == Outcome::K0) {
      ++k0;
      CHECK(joint_projective_prob(c.state, {Outcome::K0, Outcome::K0bar}) == Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(within_sigma(static_cast<double>(k0) / n, 0.5, n));

  // after a left K0, the right side at the same time is K0bar with certainty
  const auto after = active_measure_and_collapse(initial_pair(), Side::Left, Observable::Strangeness, rng);
  for (int i = 0; i < 1000; ++i) {
    const auto r = active_measure_and_collapse(after.state, Side::Right, Observable::Strangeness, rng);
    CHECK(r.outcome != after.outcome);
  }
}

TEST_CASE("simulator: sequential collapse reproduces joint probabilities") {
  const auto s = normalized_pair(1.5, k);
  RandomStream rng(12);
  const std::uint64_t n = 1000000;
  std::array<std::uint64_t, 4> counts{};
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto l = active_measure_and_collapse(s, Side::Left, Observable::Strangeness, rng);
    const auto r = active_measure_and_collapse(l.state, Side::Right, Observable::Lifetime, rng);
    counts[(l.outcome == Outcome::K0 ? 0 : 2) + (r.outcome == Outcome::KS ? 0 : 1)]++;
  }
  const JointProjector ps[4] = {{Outcome::K0, Outcome::KS}, {Outcome::K0, Outcome::KL},
                                {Outcome::K0bar, Outcome::KS}, {Outcome::K0bar, Outcome::KL}};
  for (int i = 0; i < 4; ++i) {
    CHECK(within_sigma(static_cast<double>(counts[i]) / n, joint_projective_prob(s, ps[i]), n));
  }
}

TEST_CASE("simulator: passive pair sampler") {
  const PassivePairSampler sampler(k, m);
  const auto& w = sampler.channel_weights();
  CHECK(w[0][0] == 0.0);
  CHECK(w[1][1] == 0.0);
  double sum = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      sum += w[a][b];
      CHECK(w[a][b] == Approx(integrated_joint_decay(kAllChannels[a], kAllChannels[b], k, m)).epsilon(1e-12));
    }
  CHECK(sum == Approx(1.0).epsilon(1e-14));

  RandomStream rng(13);
  const std::uint64_t n = 1000000;
  std::array<std::array<std::uint64_t, 4>, 4> counts{};
  double mean_min = 0.0, mean_max = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto p = sampler(rng);
    counts[static_cast<int>(p.left.channel)][static_cast<int>(p.right.channel)]++;
    mean_min += std::min(p.left.time, p.right.time);
    mean_max += std::max(p.left.time, p.right.time);
  }
  CHECK(counts[0][0] == 0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(within_sigma(static_cast<double>(counts[a][b]) / n, w[a][b], n));
  CHECK(mean_min / n < 2.0);
  CHECK(mean_max / n > 100.0);
}

TEST_CASE("simulator: passive time distribution") {
  // P(tau_l < 1, tau_r < 1) for the (2pi, pi- l+ nu) channel pair, integrated by quadrature
  const PassivePairSampler sampler(k, m);
  RandomStream rng(14);
  const std::uint64_t n = 400000;
  std::uint64_t total = 0, hit = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto p = sampler(rng);
    if (p.left.channel != DecayChannel::TwoPi || p.right.channel != DecayChannel::SemileptonicPlus) continue;
    ++total;
    hit += (p.left.time < 1.0 && p.right.time < 1.0) ? 1 : 0;
  }
  double inside = 0.0;
  const int g = 400;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      inside += joint_decay_rate(DecayChannel::TwoPi, (i + 0.5) / g, DecayChannel::SemileptonicPlus,
                                 (j + 0.5) / g, k, m) / (g * g);
  const double p = inside / integrated_joint_decay(DecayChannel::TwoPi, DecayChannel::SemileptonicPlus, k, m);
  CHECK(within_sigma(static_cast<double>(hit) / total, p, total));
}

TEST_CASE("simulator: single passive decay") {
  RandomStream rng(15);
  const auto s = make_state(Outcome::K0);
  const std::uint64_t n = 400000;
  std::array<std::uint64_t, 4> counts{};
  std::uint64_t early_2pi = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto d = sample_single_decay(s, k, m, rng);
    counts[static_cast<int>(d.channel)]++;
    if (d.channel == DecayChannel::TwoPi && d.time < 1.0) ++early_2pi;
  }
  for (int c = 0; c < 4; ++c)
    CHECK(within_sigma(static_cast<double>(counts[c]) / n, integrated_state_decay(s, kAllChannels[c], k, m), n));
  // the 2pi channel is pure K_S: its decay times are exponential with rate Gamma_S
  CHECK(within_sigma(static_cast<double>(early_2pi) / counts[0], 1.0 - std::exp(-1.0), counts[0]));
}

TEST_CASE("simulator: A1 at equal times has no like-strangeness events") {
  auto c = config(ExperimentKind::A1, 100000);
  c.tau_l_grid = {1.0};
  c.tau_r0 = 1.0;
  const auto set = run_experiment(c, k, m);
  std::uint64_t kept = 0, unlike = 0;
  for (const auto& e : set.events) {
    if (e.discarded()) continue;
    ++kept;
    CHECK(e.left->outcome != e.right->outcome);
    unlike += e.left->outcome == Outcome::K0 ? 1 : 0;
  }
  CHECK(within_sigma(static_cast<double>(kept) / c.n_pairs, pair_survival(1.0, 1.0, k), c.n_pairs));
  CHECK(within_sigma(static_cast<double>(unlike) / kept, 0.5, kept));
}

TEST_CASE("simulator: experiment B splits at the detector") {
  auto c = config(ExperimentKind::B, 200000);
  c.tau_r0 = 4.8;
  const auto set = run_experiment(c, k, m);
  std::uint64_t early = 0;
  for (const auto& e : set.events) {
    REQUIRE(e.right);
    if (e.right->observable == Observable::Lifetime) {
      ++early;
      CHECK(e.right->time == 0.0);
    } else {
      CHECK(e.right->time == 4.8);
    }
  }
  CHECK(within_sigma(static_cast<double>(early) / c.n_pairs, 1.0 - beam_survival(4.8, k), c.n_pairs));
}

TEST_CASE("simulator: A2 lifetime meter shows no interference") {
  auto c = config(ExperimentKind::A2, 300000);
  c.tau_l_grid = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  c.tau_r0 = 0.0;
  const auto set = run_experiment(c, k, m);
  Binning b;
  for (Outcome meter : {Outcome::KS, Outcome::KL}) {
    for (const auto& a : object_asymmetry(set.events, b, meter)) {
      if (a.n < 100) continue;
      CHECK(std::abs(a.asymmetry) <= 4.0 * std::sqrt(1.0 / a.n));
    }
  }
}

namespace {
// Goodness of fit of the unlike-strangeness count per delta_tau bin against
// the closed form summed over each event's own delta_tau. Returns the number
// of bins tested.
int check_ss_counts(const std::vector<EventRecord>& events, double width) {
  struct Acc {
    double unlike = 0.0, expected = 0.0, variance = 0.0;
  };
  std::map<long, Acc> bins;
  for (const auto& e : events) {
    if (e.discarded() || e.left->observable != Observable::Strangeness ||
        e.right->observable != Observable::Strangeness)
      continue;
    const double dt = e.left->time - e.right->time;
    if (std::abs(dt) > 6.0) continue;
    auto& a = bins[std::lround(dt / width)];
    const double p = 2.0 * closed_form_joint(JointKind::StrangenessUnlike, dt, k);
    a.expected += p;
    a.variance += p * (1.0 - p);
    a.unlike += e.left->outcome != e.right->outcome ? 1.0 : 0.0;
  }
  int dof = 0;
  double chi2 = 0.0;
  for (const auto& [bin, a] : bins) {
    if (a.variance < 10.0) continue;
    const double z = (a.unlike - a.expected) / std::sqrt(a.variance);
    CHECK(std::abs(z) < 5.0);
    chi2 += z * z;
    ++dof;
  }
  CHECK(chi2 < dof + 5.0 * std::sqrt(2.0 * dof));
  return dof;
}
}  // namespace

TEST_CASE("simulator: experiment C strangeness correlations follow the closed forms") {
  auto c = config(ExperimentKind::C, 600000);
  c.tau_l_grid = {0.0, 0.5, 1.0};
  c.channel_filter = ChannelFilter::Semileptonic;
  const auto set = run_experiment(c, k, m);
  for (const auto& e : set.events) {
    if (!e.discarded()) CHECK(e.right->observable == Observable::Strangeness);
  }
  CHECK(check_ss_counts(set.events, 0.5) >= 10);
}

TEST_CASE("simulator: experiment D strangeness correlations follow the closed forms") {
  auto c = config(ExperimentKind::D, 200000);
  c.channel_filter = ChannelFilter::Semileptonic;
  const auto set = run_experiment(c, k, m);
  CHECK(check_ss_counts(set.events, 0.5) >= 10);
}
