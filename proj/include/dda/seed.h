// Copyright 2026 The DDA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DDA_SEED_H_
#define DDA_SEED_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace dda {

// A master seed from which every randomized operation derives its own
// stream. Derivation is a pure function of (seed, label), so identical
// inputs under the same master seed give bit-identical outputs regardless
// of the order in which operations run.
class Seed {
 public:
  constexpr explicit Seed(std::uint64_t value) : value_(value) {}

  constexpr std::uint64_t value() const { return value_; }

  Seed Derive(std::string_view label) const;
  Seed Derive(std::uint64_t index) const;

  std::mt19937_64 Engine() const { return std::mt19937_64(value_); }

  friend bool operator==(const Seed&, const Seed&) = default;

 private:
  std::uint64_t value_;
};

// 64-bit FNV-1a. Stable across platforms and runs, unlike std::hash.
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// Uniform double in [0, 1) from the top 53 bits of the engine output.
inline double UniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Lemire's method is overkill here; modulo bias
// at n << 2^64 is below 2^-40.
inline std::uint64_t UniformIndex(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

}  // namespace dda

#endif  // DDA_SEED_H_
