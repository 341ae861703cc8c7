#include "kaon/estimate.hpp"

#include <array>
#include <cmath>
#include <map>

namespace kaon {

namespace {

constexpr double kExcludeCosine = 0.1;

std::array<Outcome, 2> outcomes_of(Observable o) {
  if (o == Observable::Strangeness) return {Outcome::K0, Outcome::K0bar};
  return {Outcome::KS, Outcome::KL};
}

int slot(Outcome o) {
  return (o == Outcome::K0 || o == Outcome::KS) ? 0 : 1;
}

struct BinAccumulator {
  std::array<std::array<std::uint64_t, 2>, 2> counts{};
  std::uint64_t n = 0;
  double delta_sum = 0.0;
};

double binomial_stderr(double p, std::uint64_t n) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

}  // namespace

void Binning::validate() const {
  if (!(width > 0.0)) throw InvalidArgument("binning width must be positive");
  if (mode == Mode::DeltaTau && !(hi >= lo)) throw InvalidArgument("binning requires lo <= hi");
}

std::optional<int> Binning::index_of(double x) const {
  const int index = static_cast<int>(std::lround(x / width));
  if (mode == Mode::DeltaTau) {
    const double c = center(index);
    if (c < lo - 1e-12 || c > hi + 1e-12) return std::nullopt;
  }
  return index;
}

std::vector<Estimate> estimate_probs(const std::vector<EventRecord>& events, const Binning& binning) {
  binning.validate();
  if (events.empty()) throw InvalidArgument("estimate_probs: empty event set");

  std::map<BinKey, BinAccumulator> bins;
  for (const EventRecord& ev : events) {
    if (ev.discarded()) continue;
    const MeasurementRecord& l = *ev.left;
    const MeasurementRecord& r = *ev.right;
    BinKey key{l.observable, r.observable, 0, 0};
    const double delta = l.time - r.time;
    if (binning.mode == Binning::Mode::DeltaTau) {
      const auto idx = binning.index_of(delta);
      if (!idx) continue;
      key.index_a = *idx;
    } else {
      key.index_a = *binning.index_of(l.time);
      key.index_b = *binning.index_of(r.time);
    }
    BinAccumulator& acc = bins[key];
    ++acc.counts[slot(l.outcome)][slot(r.outcome)];
    ++acc.n;
    acc.delta_sum += delta;
  }

  std::vector<Estimate> out;
  for (const auto& [key, acc] : bins) {
    const auto left = outcomes_of(key.left_observable);
    const auto right = outcomes_of(key.right_observable);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        Estimate e;
        e.bin = key;
        e.center_a = binning.center(key.index_a);
        e.center_b = binning.mode == Binning::Mode::TimePair ? binning.center(key.index_b) : 0.0;
        e.delta_tau_center = binning.mode == Binning::Mode::DeltaTau ? e.center_a
                                                                      : e.center_a - e.center_b;
        e.mean_delta_tau = acc.delta_sum / static_cast<double>(acc.n);
        e.outcomes = {left[i], right[j]};
        e.count = acc.counts[i][j];
        e.n = acc.n;
        e.p_hat = static_cast<double>(e.count) / static_cast<double>(e.n);
        e.std_err = binomial_stderr(e.p_hat, e.n);
        out.push_back(e);
      }
    }
  }
  return out;
}

std::vector<VisibilityPoint> fit_visibility(const std::vector<Estimate>& estimates,
                                            const PhysicalConstants& k) {
  struct Counts {
    std::uint64_t like = 0;
    std::uint64_t unlike = 0;
    double center = 0.0;
    double mean_delta = 0.0;
  };
  std::map<BinKey, Counts> bins;
  for (const Estimate& e : estimates) {
    if (e.bin.left_observable != Observable::Strangeness ||
        e.bin.right_observable != Observable::Strangeness) {
      continue;
    }
    Counts& c = bins[e.bin];
    c.center = e.delta_tau_center;
    c.mean_delta = e.mean_delta_tau;
    if (e.outcomes.left == e.outcomes.right) {
      c.like += e.count;
    } else {
      c.unlike += e.count;
    }
  }

  std::vector<VisibilityPoint> out;
  for (const auto& [key, c] : bins) {
    const std::uint64_t n = c.like + c.unlike;
    if (n == 0) continue;
    VisibilityPoint v;
    v.delta_tau = c.center;
    v.mean_delta_tau = c.mean_delta;
    v.n = n;
    const double p_unlike = static_cast<double>(c.unlike) / static_cast<double>(n);
    v.asymmetry = 2.0 * p_unlike - 1.0;
    v.asymmetry_stderr = 2.0 * binomial_stderr(p_unlike, n);
    const double cosine = std::cos(k.delta_m * c.mean_delta);
    v.excluded = std::abs(cosine) < kExcludeCosine;
    v.v_hat = v.asymmetry / cosine;
    v.std_err = v.asymmetry_stderr / std::abs(cosine);
    out.push_back(v);
  }
  return out;
}

std::vector<AsymmetryPoint> object_asymmetry(const std::vector<EventRecord>& events,
                                             const Binning& binning, Outcome meter) {
  binning.validate();
  std::map<int, std::array<std::uint64_t, 2>> bins;
  for (const EventRecord& ev : events) {
    if (ev.discarded()) continue;
    if (ev.left->observable != Observable::Strangeness || ev.right->outcome != meter) continue;
    const auto idx = binning.index_of(ev.left->time - ev.right->time);
    if (!idx) continue;
    ++bins[*idx][slot(ev.left->outcome)];
  }
  std::vector<AsymmetryPoint> out;
  for (const auto& [idx, counts] : bins) {
    AsymmetryPoint a;
    a.delta_tau = binning.center(idx);
    a.n = counts[0] + counts[1];
    const double p = static_cast<double>(counts[0]) / static_cast<double>(a.n);
    a.asymmetry = 2.0 * p - 1.0;
    a.std_err = 2.0 * binomial_stderr(p, a.n);
    out.push_back(a);
  }
  return out;
}

}  // namespace kaon
