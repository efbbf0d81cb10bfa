/* Copyright 2026 The decode-lab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

// Seedable generator used by every stochastic step in the lab.
//
// The algorithm is fixed so that any implementation reproduces identical
// selections from identical seeds (see docs/rng.md):
//   - seeding: four successive splitmix64 outputs fill the xoshiro256** state
//   - uniform01: top 53 bits of one xoshiro256** output, times 2^-53
//   - normal: Box-Muller, cosine branch only, two uniforms per draw
//   - derive_seed(base, stream) = mix64(base ^ mix64(stream))
//   - id hashing: 64-bit FNV-1a over the UTF-8 bytes

#include <array>
#include <cstdint>
#include <string_view>

namespace decode_lab {

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer applied to (x + gamma).
constexpr std::uint64_t mix64(std::uint64_t x) {
  std::uint64_t z = x + kSplitMixGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base ^ mix64(stream));
}

constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();

  // [0, 1)
  double uniform01();

  // Standard normal via Box-Muller.
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace decode_lab
