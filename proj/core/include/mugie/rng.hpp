// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace mugie {

// Portable random source. The engine is MT19937-64, whose output sequence
// is fixed by the C++ standard; bounded integers use rejection sampling and
// unit doubles take the top 53 bits, so every draw is identical on every
// platform (std::uniform_*_distribution is not).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). n must be positive.
  std::size_t below(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
      std::uint64_t r = engine_();
      if (r >= threshold)
        return static_cast<std::size_t>(r % bound);
    }
  }

  // Uniform in [0, 1).
  double unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

private:
  std::mt19937_64 engine_;
};

} // namespace mugie
