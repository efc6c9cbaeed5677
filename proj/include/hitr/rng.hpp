#pragma once

#include <cstdint>
#include <random>

namespace hitr {

// SplitMix64 finalizer (Steele, Lea & Flood 2014). Used only to derive
// well-spread seeds for independent streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Portable random stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Stream k of seed s is seeded with
//   splitmix64(s ^ splitmix64(k)),
// so stream k produces the same numbers no matter which thread draws from
// it. Standard distributions are avoided because their algorithms are
// implementation-defined; doubles come from the top 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(splitmix64(seed ^ splitmix64(stream))) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), n > 0. Lemire's nearly-divisionless method
  // would be faster; rejection keeps it obviously unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hitr
