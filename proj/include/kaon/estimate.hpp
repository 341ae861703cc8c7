#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kaon/pair.hpp"
#include "kaon/simulator.hpp"

namespace kaon {

/// Bins are centered on integer multiples of `width`. DeltaTau bins
/// tau_l - tau_r over [lo, hi]; TimePair bins tau_l and tau_r separately.
struct Binning {
  enum class Mode { DeltaTau, TimePair };
  Mode mode = Mode::DeltaTau;
  double width = 0.5;
  double lo = -10.0;
  double hi = 10.0;

  void validate() const;
  /// Bin index of x, or nullopt outside [lo, hi] (DeltaTau mode only).
  std::optional<int> index_of(double x) const;
  double center(int index) const { return index * width; }
};

struct BinKey {
  Observable left_observable;
  Observable right_observable;
  int index_a = 0;  // delta_tau bin, or tau_l bin
  int index_b = 0;  // tau_r bin (TimePair only)

  auto operator<=>(const BinKey&) const = default;
};

struct Estimate {
  BinKey bin;
  double center_a = 0.0;
  double center_b = 0.0;
  double mean_delta_tau = 0.0;  // over the events of the bin
  JointProjector outcomes{Outcome::K0, Outcome::K0};
  std::uint64_t count = 0;
  std::uint64_t n = 0;
  double delta_tau_center = 0.0;
  double p_hat = 0.0;
  double std_err = 0.0;  // sqrt(p_hat (1 - p_hat) / n)
};

/// Frequencies per (bin, observable pair, ordered outcome pair) among
/// non-discarded events. Every outcome pair of an observable class is
/// reported once the bin holds at least one event; empty bins are omitted.
std::vector<Estimate> estimate_probs(const std::vector<EventRecord>& events, const Binning& binning);

struct VisibilityPoint {
  double delta_tau = 0.0;       // bin center
  double mean_delta_tau = 0.0;  // event average used for the cosine
  std::uint64_t n = 0;
  double asymmetry = 0.0;
  double asymmetry_stderr = 0.0;
  double v_hat = 0.0;
  double std_err = 0.0;
  bool excluded = false;  // |cos(dm dtau)| < 0.1
};

/// Strangeness-strangeness asymmetry (unlike - like)/(unlike + like) per
/// delta_tau bin, divided by cos(dm dtau) to give the visibility.
std::vector<VisibilityPoint> fit_visibility(const std::vector<Estimate>& estimates,
                                            const PhysicalConstants& k);

struct AsymmetryPoint {
  double delta_tau = 0.0;
  std::uint64_t n = 0;
  double asymmetry = 0.0;
  double std_err = 0.0;
};

/// (N[K0] - N[K0bar]) / N of the left strangeness, restricted to events
/// whose right record has outcome `meter`, per delta_tau bin.
std::vector<AsymmetryPoint> object_asymmetry(const std::vector<EventRecord>& events,
                                             const Binning& binning, Outcome meter);

}  // namespace kaon
