#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cofo {

// Thin wrapper around mt19937_64 with hand-rolled draws. std:: distributions
// are implementation-defined, which would break byte-stable outputs across
// toolchains; these are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // inclusive range, rejection sampled
  long uniform_int(long lo, long hi) {
    if (hi <= lo) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return lo + static_cast<long>(v % span);
  }

  double uniform_real(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  // Box-Muller, one value per call
  double normal(double mean = 0.0, double std_dev = 1.0) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + std_dev * spare_;
    }
    double u1, u2;
    do {
      u1 = uniform_real(0.0, 1.0);
    } while (u1 <= 0.0);
    u2 = uniform_real(0.0, 1.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return mean + std_dev * r * std::cos(2.0 * M_PI * u2);
  }

  bool bernoulli(double p) { return uniform_real(0.0, 1.0) < p; }

  /// Derives an independent stream, e.g. one per benchmark run.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 on the pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace cofo
