// Copyright 2026 The kacs Authors
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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace kacs {

/// 256-bit master seed. Words are little-endian: word 0 holds the lowest 64
/// bits of the hex form.
struct Seed256 {
  std::array<uint64_t, 4> words{};

  static Seed256 from_u64(uint64_t seed);
  /// Parses exactly 64 hex digits (most significant first).
  static Seed256 from_hex(std::string_view hex);
  std::string to_hex() const;

  friend bool operator==(const Seed256&, const Seed256&) = default;
};

/// Philox4x64-10 block function (Salmon et al., SC'11).
std::array<uint64_t, 4> philox4x64_10(std::array<uint64_t, 4> counter,
                                      std::array<uint64_t, 2> key);

/// Counter-based random stream.
///
/// Every output word is a pure function of (seed, stream_id, counter): word
/// `c` of the stream is word `c % 4` of the Philox block evaluated at
/// counter = (c / 4, stream_id, seed[2], seed[3]) under key (seed[0], seed[1]).
/// Streams never share state, so trials can be evaluated in any order or on
/// any thread and still reproduce bit-for-bit.
class RngStream {
 public:
  explicit RngStream(Seed256 seed, uint64_t stream_id = 0, uint64_t counter = 0);

  uint64_t next_u64();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform angle in [0, 2pi).
  double uniform_angle();
  /// Standard normal draw (Box-Muller, consumes two words).
  double normal();
  /// Unbiased integer in [0, bound). bound must be positive.
  uint64_t below(uint64_t bound);

  /// Independent child stream. Same seed, stream id derived from
  /// (stream_id, lane); the parent is not advanced.
  RngStream fork(uint64_t lane) const;

  /// Random access to one 4-word block without touching the cursor.
  std::array<uint64_t, 4> block(uint64_t index) const;

  const Seed256& seed() const { return seed_; }
  uint64_t stream_id() const { return stream_id_; }
  uint64_t counter() const { return counter_; }

 private:
  Seed256 seed_;
  uint64_t stream_id_;
  uint64_t counter_;
  std::array<uint64_t, 4> cache_{};
  uint64_t cached_block_ = ~uint64_t{0};
};

/// Maps a raw 64-bit word to [0, 1) using its top 53 bits.
inline double to_unit_interval(uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

}  // namespace kacs
