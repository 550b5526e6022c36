// Copyright 2026 the amredit authors
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

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace amredit {

// All sampling is hand-rolled on top of std::mt19937_64 so that a given seed
// produces the same stream on every standard library. std::*_distribution is
// implementation-defined and would break byte-identical reruns.

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection sampling, no modulo bias.
inline std::uint64_t bounded_uint(std::mt19937_64& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

// One draw from Normal(mean, variance) via Box-Muller. Consumes exactly two
// engine outputs per call.
inline double sample_normal(std::mt19937_64& rng, double mean, double variance) {
  double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  double u2 = uniform_unit(rng);
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  return mean + std::sqrt(variance) * z;
}

// Gaussian draw clamped to [0, 1]; used for the deletion rate and mix gate,
// both of which are proportions.
inline double sample_clamped_normal(std::mt19937_64& rng, double mean, double variance) {
  double x = sample_normal(rng, mean, variance);
  if (x < 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  return x;
}

// Draws k distinct indices from [0, n) in random order (partial Fisher-Yates).
inline std::vector<std::size_t> sample_without_replacement(std::mt19937_64& rng,
                                                           std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  if (k > n) k = n;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(bounded_uint(rng, n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

template <typename T>
void shuffle_in_place(std::mt19937_64& rng, std::vector<T>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(bounded_uint(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

// Per-(record, round) seed derivation: FNV-1a over the global seed, the
// record id, and the round index, so a record's outputs do not depend on
// corpus order.
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view record_id,
                                 std::uint64_t round) {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](std::uint64_t byte) {
    h ^= byte;
    h *= 1099511628211ULL;
  };
  for (int i = 0; i < 8; ++i) mix((global_seed >> (8 * i)) & 0xff);
  for (unsigned char c : record_id) mix(c);
  for (int i = 0; i < 8; ++i) mix((round >> (8 * i)) & 0xff);
  return h;
}

}  // namespace amredit
