// Copyright 2026 The Colift Authors
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

#ifndef COLIFT_RNG_HPP_
#define COLIFT_RNG_HPP_

#include <cstdint>

namespace colift {

// Portable counter-based generator (splitmix64). Sampling helpers are
// hand-rolled so that streams are bit-identical across standard libraries;
// reproducibility of runs is part of the output contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [0, n). Rejection-free Lemire reduction with a
  /// correction loop to keep the distribution exact.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    std::uint64_t lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  int next_int(int n) { return static_cast<int>(next_below(static_cast<std::uint64_t>(n))); }

  /// Derives an independent child stream. Used to give each
  /// (generation, member) pair its own stream so parallel evaluation order
  /// cannot change results.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    Rng mix(seed ^ (0x517cc1b727220a95ULL + a * 0x2545f4914f6cdd1dULL));
    mix.next_u64();
    std::uint64_t s = mix.next_u64() ^ (b * 0x9e3779b97f4a7c15ULL);
    Rng mix2(s);
    return mix2.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace colift

#endif  // COLIFT_RNG_HPP_
