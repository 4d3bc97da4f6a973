// Copyright 2026 The tokenbudget Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded random streams. std::mt19937_64 output is fully specified by the
// standard; the std:: distributions are not, so conversions to doubles and
// bounded integers are done here to keep results identical across platforms.

#ifndef TOKENBUDGET_RNG_H_
#define TOKENBUDGET_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace tokenbudget {

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream key for (seed, label, counter), e.g. (run seed, document id, token).
inline std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label,
                                std::uint64_t counter) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return SplitMix64(SplitMix64(seed ^ h) + counter);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t Next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  // Uniform on [0, n); n > 0.
  std::uint64_t Below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = Next();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller.
  double Normal() {
    double u1;
    do {
      u1 = Uniform();
    } while (u1 == 0.0);
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tokenbudget

#endif  // TOKENBUDGET_RNG_H_
