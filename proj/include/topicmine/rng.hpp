#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace topicmine {

// Seeded generator whose output is fully specified: mt19937_64's sequence is
// fixed by the standard, and the mappings to [0,1) and [0,n) are our own
// rather than the implementation-defined std distributions.
class Rng {
 public:
  static constexpr std::string_view kGeneratorId = "mt19937_64/u53-lemire/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound); bound must be > 0. Lemire's multiply-shift with
  // rejection, so the result is unbiased.
  std::uint64_t uniform_below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace topicmine
