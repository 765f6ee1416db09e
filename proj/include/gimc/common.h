// Copyright 2026 The GIMC Authors
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

#ifndef GIMC_COMMON_H_
#define GIMC_COMMON_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace gimc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Input that violates a documented file schema or data invariant.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values or ill-defined arithmetic (e.g. log of a non-positive).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags, unknown subcommands, inconsistent configuration.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 64-bit FNV-1a. Stable across platforms; used for vocabulary hashing and
// seed derivation.
inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

// Uniform index in [0, n). Rejection sampling keeps the draw unbiased and
// independent of the standard library's distribution implementation.
inline size_t uniform_index(Rng& rng, size_t n) {
  if (n <= 1) return 0;
  const uint64_t limit = Rng::max() - Rng::max() % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<size_t>(x % n);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string lowercase(std::string_view s);

}  // namespace gimc

#endif  // GIMC_COMMON_H_
