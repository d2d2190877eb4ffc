#pragma once

#include <cstdint>
#include <random>

namespace fcg {

// All randomness in the library flows through this stream: std::mt19937_64
// (bit-exact across standard libraries) seeded through std::seed_seq, with a
// hand-rolled 53-bit mapping to [-1, 1]. std::uniform_real_distribution is not
// used because its output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}

  // Independent substream, e.g. one per trial.
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  // Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [-1, 1).
  double symmetric() { return 2.0 * unit() - 1.0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fcg
