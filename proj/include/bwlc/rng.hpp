#pragma once

#include <cstdint>
#include <random>

namespace bwlc {

using Rng = std::mt19937_64;

// Independent random streams derived from one master seed. Environment noise
// lives on its own stream so swapping the learner leaves it untouched.
enum class Stream : std::uint32_t {
  kPrimal = 1,
  kEnvironmentNoise = 2,
  kContexts = 3,
  kInstanceGeneration = 4,
};

inline Rng make_stream(std::uint64_t master_seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed & 0xffffffffu),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x6277u};
  return Rng(seq);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace bwlc
