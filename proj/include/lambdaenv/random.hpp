// Copyright 2026 The lambdaenv Authors.
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

#include <cstdint>
#include <random>
#include <span>

namespace lambdaenv {

// splitmix64 finalizer. Used to derive independent stream seeds from a
// (seed, counter) pair.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based seed derivation: derive_seed(master, i) is the seed of the
// i-th child stream. Stable across platforms and releases.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index * 0xd1b54a32d192ed03ULL + 1));
}

// Stream tags for the random streams owned by one session.
enum class Stream : std::uint64_t {
  kSpace = 1,
  kPlacement = 2,
  kDynamics = 3,
  kAgentBase = 1000,  // agent slot j uses kAgentBase + j
};

constexpr std::uint64_t stream_seed(std::uint64_t env_seed, Stream s,
                                    std::uint64_t offset = 0) noexcept {
  return derive_seed(env_seed, static_cast<std::uint64_t>(s) + offset);
}

// Seeded random stream. The engine is std::mt19937_64 (bit-exact by the
// standard); the distributions are implemented here because the standard
// library's distributions are implementation-defined.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    // Lemire's nearly-divisionless method.
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  int below(int bound) {
    return static_cast<int>(below(static_cast<std::uint64_t>(bound)));
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  bool coin() { return (next() >> 63) != 0; }

  template <typename T>
  const T& pick(std::span<const T> items) {
    return items[below(static_cast<std::uint64_t>(items.size()))];
  }

  bool operator==(const Rng& other) const = default;

  // UniformRandomBitGenerator, for std::shuffle and friends.
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return next(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lambdaenv
