// Copyright 2026 The nvclock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Counter-based random numbers: the n-th draw of a stream is a pure
// function of (seed, stream, n), so draws can be made in any order or on any
// thread without changing the values.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace nvclock {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

  [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t counter) const { return mix(key_, counter); }

  /// Uniform on (0, 1).
  [[nodiscard]] double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on counters 2n and 2n + 1.
  [[nodiscard]] double normal(std::uint64_t n) const {
    const double u1 = uniform(2 * n);
    const double u2 = uniform(2 * n + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Adapter for <random> distributions: draws counters sequentially.
  class Engine {
   public:
    using result_type = std::uint64_t;
    Engine(std::uint64_t key, std::uint64_t start) : key_(key), next_(start) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return mix(key_, next_++); }

   private:
    std::uint64_t key_;
    std::uint64_t next_;
  };

  [[nodiscard]] Engine engine(std::uint64_t start = 0) const { return Engine(key_, start); }

 private:
  static constexpr std::uint64_t mix(std::uint64_t key, std::uint64_t counter) {
    return splitmix64(key + counter * 0x9E3779B97F4A7C15ULL);
  }

  std::uint64_t key_;
};

}  // namespace nvclock
