// Serial reference vs OpenMP run of every experiment kind.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "kaon/simulator.hpp"

using namespace kaon;

int main(int argc, char** argv) {
  const std::uint64_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200000;
  const PhysicalConstants k;
  const AmplitudeModel model = build_amplitude_model(k);
  const unsigned partitions = 8;
  std::printf("pairs %llu, partitions %u, threads %d\n", static_cast<unsigned long long>(n), partitions,
              omp_get_max_threads());
  std::printf("%-4s %12s %12s %8s %s\n", "kind", "serial[s]", "openmp[s]", "speedup", "identical");
  bool all_same = true;
  for (auto kind : {ExperimentKind::A1, ExperimentKind::A2, ExperimentKind::B, ExperimentKind::C,
                    ExperimentKind::D}) {
    SimulationConfig c;
    c.kind = kind;
    c.n_pairs = n;
    c.tau_l_grid = {0.0, 1.0, 2.0, 4.0};
    c.tau_r0 = 4.8;
    c.partitions = partitions;
    c.seed = 77;
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    const auto serial = run_experiment_serial(c, k, model);
    auto t1 = clock::now();
    const auto parallel = run_experiment(c, k, model);
    auto t2 = clock::now();
    const double ts = std::chrono::duration<double>(t1 - t0).count();
    const double tp = std::chrono::duration<double>(t2 - t1).count();
    const bool same = serial.events == parallel.events;
    all_same = all_same && same;
    std::printf("%-4s %12.3f %12.3f %8.2f %s\n", std::string(to_string(kind)).c_str(), ts, tp, ts / tp,
                same ? "yes" : "NO");
  }
  return all_same ? 0 : 1;
}
