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

#include "kacs/rng.hpp"

#include <cmath>
#include <numbers>

#include "kacs/errors.hpp"

namespace kacs {

namespace {

constexpr uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
constexpr uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(uint64_t a, uint64_t b, uint64_t& lo, uint64_t& hi) {
  const unsigned __int128 product = static_cast<unsigned __int128>(a) * b;
  lo = static_cast<uint64_t>(product);
  hi = static_cast<uint64_t>(product >> 64);
}

// SplitMix64 finalizer; used only to derive child stream ids.
inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::array<uint64_t, 4> philox4x64_10(std::array<uint64_t, 4> ctr,
                                      std::array<uint64_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    uint64_t lo0, hi0, lo1, hi1;
    mulhilo(kPhiloxM0, ctr[0], lo0, hi0);
    mulhilo(kPhiloxM1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

Seed256 Seed256::from_u64(uint64_t seed) {
  Seed256 s;
  uint64_t state = seed;
  for (auto& w : s.words) {
    state += 0x9E3779B97F4A7C15ULL;
    w = mix64(state);
  }
  return s;
}

Seed256 Seed256::from_hex(std::string_view hex) {
  if (hex.size() != 64) {
    throw ParameterError("seed hex must have 64 digits, got " +
                         std::to_string(hex.size()));
  }
  Seed256 s;
  for (size_t i = 0; i < 64; ++i) {
    const int v = hex_value(hex[i]);
    if (v < 0) throw ParameterError("invalid hex digit in seed");
    const size_t bit = 4 * (63 - i);
    s.words[bit / 64] |= static_cast<uint64_t>(v) << (bit % 64);
  }
  return s;
}

std::string Seed256::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(64, '0');
  for (size_t i = 0; i < 64; ++i) {
    const size_t bit = 4 * (63 - i);
    out[i] = kDigits[(words[bit / 64] >> (bit % 64)) & 0xF];
  }
  return out;
}

RngStream::RngStream(Seed256 seed, uint64_t stream_id, uint64_t counter)
    : seed_(seed), stream_id_(stream_id), counter_(counter) {}

std::array<uint64_t, 4> RngStream::block(uint64_t index) const {
  return philox4x64_10({index, stream_id_, seed_.words[2], seed_.words[3]},
                       {seed_.words[0], seed_.words[1]});
}

uint64_t RngStream::next_u64() {
  const uint64_t b = counter_ >> 2;
  if (b != cached_block_) {
    cache_ = block(b);
    cached_block_ = b;
  }
  return cache_[counter_++ & 3];
}

double RngStream::uniform() { return to_unit_interval(next_u64()); }

double RngStream::uniform_angle() {
  return 2.0 * std::numbers::pi * uniform();
}

double RngStream::normal() {
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

uint64_t RngStream::below(uint64_t bound) {
  if (bound == 0) throw ParameterError("below(0) is empty");
  // Lemire's nearly-divisionless method.
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
  uint64_t low = static_cast<uint64_t>(m);
  if (low < bound) {
    const uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * bound;
      low = static_cast<uint64_t>(m);
    }
  }
  return static_cast<uint64_t>(m >> 64);
}

RngStream RngStream::fork(uint64_t lane) const {
  const uint64_t child = mix64(stream_id_ ^ mix64(lane + 0x632BE59BD9B4E019ULL));
  return RngStream(seed_, child, 0);
}

}  // namespace kacs
