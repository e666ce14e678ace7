#pragma once

#include <cstdint>
#include <limits>

namespace boxlab {

// SplitMix64 (Steele/Lea/Flood; Vigna's fixed-increment variant).
// Satisfies std::uniform_random_bit_generator, so the <random>
// distributions work on top of it.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Derives an independent substream from (seed, a, b). Used to give every
// (trial, policy) pair its own generator so results do not depend on the
// number of worker threads or on which policies share an experiment.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = detail::mix64(seed ^ 0xA0761D6478BD642FULL);
  s = detail::mix64(s ^ (a + 0x9E3779B97F4A7C15ULL));
  s = detail::mix64(s ^ (b + 0xE7037ED1A0B428DBULL));
  return SplitMix64(s);
}

}  // namespace boxlab
