// Copyright 2026 The bellsim Authors
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

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>

namespace bellsim {

/// Seeded random stream. Uniform and normal variates are produced from the raw
/// 64-bit engine output so sequences do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal (Box-Muller, caches the second variate).
  double normal();

  /// Index drawn from a normalized discrete distribution.
  std::size_t categorical(std::span<const double> probs);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of the independent stream with the given index under a root seed.
std::uint64_t stream_seed(std::uint64_t root, std::uint64_t index);

/// Fixed chunk size for partitioned sampling; results never depend on the
/// worker count because chunk boundaries and streams are fixed.
inline constexpr std::uint64_t kChunkSize = 1ULL << 15;

/// Runs `body(rng, begin, count, chunk_index)` over [0, total) split into
/// fixed-size chunks, each with its own stream derived from `root`. Chunks are
/// distributed over `workers` threads; callers aggregate per chunk.
void for_each_chunk(std::uint64_t total, std::uint64_t root, unsigned workers,
                    const std::function<void(Rng&, std::uint64_t, std::uint64_t,
                                             std::uint64_t)>& body);

inline std::uint64_t chunk_count(std::uint64_t total) {
  return (total + kChunkSize - 1) / kChunkSize;
}

}  // namespace bellsim
