#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace morpho {

// Deterministic random stream. Every draw goes through explicit helpers so
// the produced sequence depends only on the seed and this code, never on the
// standard library's distribution implementations (which differ between
// toolchains). All variation operators and experiment drivers take one of
// these by reference; there is no global random state anywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], both ends inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(next_u64() % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Index drawn from the discrete distribution `probs` (must sum to ~1;
  // the last index absorbs any rounding slack).
  int pick_weighted(std::span<const double> probs) {
    const double u = uniform();
    double acc = 0.0;
    for (size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  std::mt19937_64 engine_;
};

// Stable sub-stream derivation (splitmix64 finalizer). Used for per-episode
// seeds, per-run seeds and similar: the derived seeds are decorrelated from
// the base seed and from each other.
inline uint64_t derive_seed(uint64_t base, uint64_t index) {
  uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace morpho
