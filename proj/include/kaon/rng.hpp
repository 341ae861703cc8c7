#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace kaon {

/// Identifier written into run metadata. Partition p of a run with master
/// seed s draws from mt19937_64 seeded with splitmix64(s ^ splitmix64(p + 1)).
inline constexpr std::string_view kRngScheme = "splitmix64-partition-mt19937_64/v1";

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream for_partition(std::uint64_t master_seed, std::uint64_t partition) {
    return RandomStream(splitmix64(master_seed ^ splitmix64(partition + 1)));
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  std::uint64_t index(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * n); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kaon
