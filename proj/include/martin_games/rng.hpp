#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace martin_games {

// splitmix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_seed(seed ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

// Portable generator: mt19937_64 output is fixed by the standard, and the
// conversions below avoid the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_seed(seed, stream));
  }

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

  // Index drawn from a probability vector; falls back to the last positive entry.
  int categorical(std::span<const double> probs) {
    double u = uniform();
    int last = 0;
    for (int k = 0; k < static_cast<int>(probs.size()); ++k) {
      if (probs[k] <= 0.0) continue;
      last = k;
      if (u < probs[k]) return k;
      u -= probs[k];
    }
    return last;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace martin_games
