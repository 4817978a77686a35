#pragma once

#include <cstdint>

namespace gbh {

/// splitmix64: tiny deterministic generator so runs are reproducible across
/// platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// uniform in [-1, 1)
  double sym() { return 2.0 * uniform() - 1.0; }

 private:
  uint64_t state_;
};

}  // namespace gbh
