#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace clsbm {

// splitmix64 finalizer; the mixing primitive behind all seed derivation.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from (master, a, b). The constants are
// fixed so results reproduce across runs, releases and schedules.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = mix64(master ^ 0xa0761d6478bd642fULL);
  h = mix64(h ^ mix64(a ^ 0xe7037ed1a0b428dbULL));
  h = mix64(h ^ mix64(b ^ 0x8ebc6af09c88c6e3ULL));
  return h;
}

// Stream tags used for domain separation between sub-samplers.
enum SeedTag : std::uint64_t {
  kSeedAssignment = 1,
  kSeedGraph = 2,
  kSeedAttributes = 3,
  kSeedWeights = 4,
  kSeedKMeans = 5,
  kSeedDetect = 6,
};

// Deterministic RNG: mt19937_64 core with explicit uniform/normal transforms.
// std::*_distribution is implementation-defined, so draws are produced here
// directly and depend only on the seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), bound >= 1, rejection sampled.
  std::uint64_t uniform_int(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // Standard normal via Marsaglia's polar method (pairs are cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace clsbm
