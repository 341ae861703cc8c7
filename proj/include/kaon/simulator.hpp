#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kaon/decay_model.hpp"
#include "kaon/pair.hpp"
#include "kaon/rng.hpp"
#include "kaon/single_kaon.hpp"

namespace kaon {

/// A1: active strangeness on both sides. A2: left active strangeness, right
/// active lifetime from tau_r0. B: right strangeness detector at tau_r0 with
/// earlier right decays kept as lifetime measurements. C: left active
/// strangeness, right fully passive. D: both sides passive.
enum class ExperimentKind { A1, A2, B, C, D };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view s);

/// Which passive decays are kept. `Semileptonic` conditions the passive
/// side(s) on semileptonic modes, i.e. on passive strangeness measurements.
enum class ChannelFilter { All, Semileptonic };

std::string_view to_string(ChannelFilter f);
ChannelFilter parse_channel_filter(std::string_view s);

struct MeasurementRecord {
  Procedure procedure = Procedure::Active;
  Observable observable = Observable::Strangeness;
  Outcome outcome = Outcome::K0;
  // Active strangeness: detector time. Active lifetime: start of the
  // classification window. Passive: decay time.
  double time = 0.0;
  std::optional<DecayChannel> channel;

  bool operator==(const MeasurementRecord&) const = default;
};

struct EventRecord {
  std::uint64_t pair_id = 0;
  // nullopt marks a kaon that decayed before its active detector.
  std::optional<MeasurementRecord> left;
  std::optional<MeasurementRecord> right;

  bool discarded() const { return !left || !right; }
  bool operator==(const EventRecord&) const = default;
};

struct SimulationConfig {
  ExperimentKind kind = ExperimentKind::A1;
  std::uint64_t n_pairs = 1000;
  // Left detector time: uniform choice from the grid, or uniform on the
  // range when one is given.
  std::vector<double> tau_l_grid = {0.0};
  std::optional<std::pair<double, double>> tau_l_range;
  double tau_r0 = 0.0;
  MisidWindow window;
  std::uint64_t seed = 1;
  unsigned partitions = 1;
  ChannelFilter channel_filter = ChannelFilter::All;

  /// Throws InvalidArgument before any sampling happens.
  void validate() const;
};

struct EventSet {
  SimulationConfig config;
  std::string rng_scheme{kRngScheme};
  std::vector<EventRecord> events;
};

/// OpenMP-parallel over partitions; output is ordered by pair_id and depends
/// only on (config, seed, partitions).
EventSet run_experiment(const SimulationConfig& cfg, const PhysicalConstants& k,
                        const AmplitudeModel& model);

/// Single-threaded reference producing the same event set.
EventSet run_experiment_serial(const SimulationConfig& cfg, const PhysicalConstants& k,
                               const AmplitudeModel& model);

/// Contiguous pair-id range [first, second) handled by a partition.
std::pair<std::uint64_t, std::uint64_t> partition_range(std::uint64_t n_pairs,
                                                        unsigned partitions, unsigned p);

struct PassiveDecay {
  DecayChannel channel;
  double time;
};

struct PassivePair {
  PassiveDecay left;
  PassiveDecay right;
};

/// Draws (channel_l, tau_l, channel_r, tau_r) from the joint decay density of
/// the initial pair. The channel pair comes from closed-form integrated
/// weights; the times from rejection against a mixture of products of
/// exponentials that bounds the density everywhere.
class PassivePairSampler {
 public:
  PassivePairSampler(const PhysicalConstants& k, const AmplitudeModel& model,
                     ChannelFilter filter = ChannelFilter::All);

  PassivePair operator()(RandomStream& rng) const;

  /// Normalized probability of each (left, right) channel pair, indexed by
  /// [left][right] in kAllChannels order.
  const std::array<std::array<double, 4>, 4>& channel_weights() const { return weights_; }

 private:
  PhysicalConstants k_;
  AmplitudeModel model_;
  std::array<std::array<double, 4>, 4> weights_{};
};

PassivePair sample_passive_pair(const PhysicalConstants& k, const AmplitudeModel& model,
                                RandomStream& rng);

/// Channel and decay time of a single kaon prepared in `s` at the origin,
/// drawn from its decay density. `s` must be normalized.
PassiveDecay sample_single_decay(const SingleKaonState& s, const PhysicalConstants& k,
                                 const AmplitudeModel& model, RandomStream& rng);

struct Collapse {
  Outcome outcome;
  TwoKaonState state;
};

/// Draws an outcome of `observable` on one side of a normalized pair state
/// from its marginal and returns the normalized post-measurement state.
Collapse active_measure_and_collapse(const TwoKaonState& s, Side side, Observable observable,
                                     RandomStream& rng);

/// K_S when the decay falls within the window after measure_time, else K_L.
Outcome classify_lifetime(double decay_time, double measure_time, const MisidWindow& window);

struct MisidRates {
  double wrong_short;  // true K_S read as K_L
  double wrong_long;   // true K_L read as K_S
  std::uint64_t n;
};

/// Classifies n pure K_S and n pure K_L decays with the window rule.
MisidRates simulate_misid_rates(std::uint64_t n, const MisidWindow& window,
                                const PhysicalConstants& k, RandomStream& rng);

}  // namespace kaon
