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

// Keyed parameter sources for the scrambler: a SHAKE256-based keyed
// function, a Feistel permutation on n-bit strings built from it, per-step
// key schedules, and the three encryption modes.
//
// These are classical stand-ins for the quantum-secure primitives the
// construction assumes; no security claim is made for them.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kacs/circuit.hpp"

namespace kacs {

using Key32 = std::array<uint8_t, 32>;

std::string to_hex(std::span<const uint8_t> bytes);
std::vector<uint8_t> from_hex(std::string_view hex);
Key32 key_from_hex(std::string_view hex);
Key32 random_key(RngStream& rng);

/// SHAKE256 of `input`, `out_len` bytes.
std::vector<uint8_t> shake256(std::span<const uint8_t> input, size_t out_len);

/// 64 pseudorandom bits: the first 8 output bytes (big-endian) of
/// SHAKE256(key || domain || x as 8 little-endian bytes).
uint64_t prf_u64(const Key32& key, uint8_t domain, uint64_t x);
/// 32 pseudorandom bytes from SHAKE256(key || label || data).
Key32 prf_key(const Key32& key, std::string_view label, std::span<const uint8_t> data);

/// Four-round Feistel permutation of {0,1}^n. The string is split into a
/// left part of ceil(n/2) bits and a right part of floor(n/2) bits; each
/// round maps (L, R) to (R, L xor F_r(R)), so the part widths swap between
/// rounds and the construction works for odd n (including n = 1).
class FeistelPermutation {
 public:
  static constexpr int kRounds = 4;

  FeistelPermutation(int n, const Key32& key);

  int n() const { return n_; }
  uint64_t forward(uint64_t x) const;
  uint64_t inverse(uint64_t y) const;
  /// Evaluates every input into a Permutation.
  Permutation table() const;

 private:
  uint64_t round_function(int round, uint64_t half, int out_bits) const;

  int n_;
  Key32 key_;
};

/// Subkeys for each step. Real steps use two subkeys (permutation, f);
/// complex steps use four (permutation, f, g, h).
class ScramblerKey {
 public:
  enum Role { kPermutation = 0, kF = 1, kG = 2, kH = 3 };

  ScramblerKey(Field field, std::vector<std::array<Key32, 4>> steps);

  /// Subkey (t, role) = SHAKE256(master || "expand" || t || role).
  static ScramblerKey expand(const Key32& master, size_t steps, Field field);
  static ScramblerKey random(size_t steps, Field field, RngStream& rng);

  Field field() const { return field_; }
  size_t steps() const { return steps_.size(); }
  size_t roles() const { return field_ == Field::Real ? 2 : 4; }
  const Key32& subkey(size_t t, Role role) const;

  /// Concatenated subkeys, step by step, in role order.
  std::string to_hex() const;
  static ScramblerKey from_hex(std::string_view hex, Field field);

  friend bool operator==(const ScramblerKey&, const ScramblerKey&) = default;

 private:
  Field field_;
  std::vector<std::array<Key32, 4>> steps_;
};

// ---------------------------------------------------------------------------
// Parameter sources and scrambling

struct ScrambleConfig {
  int n = 1;
  size_t steps = 0;
  Field field = Field::Real;
  AngleMode mode = AngleMode::Discrete;
  int d = 20;
};

/// Where gate parameters come from. TrueRandom step t uses s = rng.fork(t):
/// sigma is a Fisher-Yates shuffle driven by s.fork(0), and entry y of the
/// tables reads word block y of s.fork(1) (f, g, h from words 0, 1, 2; the
/// top d bits in discrete mode). Keyed step t uses the step's subkeys: sigma
/// is the Feistel permutation, f(y) (g, h) the top bits of prf_u64.
class ParamSource {
 public:
  enum class Kind { TrueRandom, Keyed };

  static ParamSource true_random(RngStream rng);
  static ParamSource keyed(ScramblerKey key);

  Kind kind() const { return kind_; }
  GateParams derive(size_t t, const ScrambleConfig& config) const;

 private:
  ParamSource(Kind kind, std::optional<RngStream> rng, std::optional<ScramblerKey> key)
      : kind_(kind), rng_(std::move(rng)), key_(std::move(key)) {}

  Kind kind_;
  std::optional<RngStream> rng_;
  std::optional<ScramblerKey> key_;
};

struct ScrambleResult {
  StateVector state;
  std::vector<GateParams> trace;
};

/// Applies config.steps gates with parameters from `source`. The trace is
/// kept when `record` is set.
ScrambleResult scramble(const StateVector& state, const ScrambleConfig& config,
                        const ParamSource& source, bool record = true);
/// Applies the inverse gates in reverse order.
StateVector unscramble(const StateVector& state, const std::vector<GateParams>& trace);

// ---------------------------------------------------------------------------
// Encryption

enum class EncryptionMode { Direct, PrgExpanded, PrfRandomized };

std::string_view to_string(EncryptionMode mode);
EncryptionMode parse_encryption_mode(std::string_view text);

/// Direct mode uses `full`; the other modes derive a ScramblerKey from
/// `master` (PrfRandomized first replaces master by prf_key(master, nonce)).
struct PrssKey {
  EncryptionMode mode = EncryptionMode::PrgExpanded;
  Key32 master{};
  std::optional<ScramblerKey> full;
};

struct Ciphertext {
  StateVector state;
  std::optional<Key32> nonce;
};

/// Scrambles `plain` under the key. PrfRandomized draws a fresh 32-byte
/// nonce from `rng` (required in that mode) and returns it with the state.
Ciphertext prss_encrypt(const StateVector& plain, const PrssKey& key, const ScrambleConfig& config,
                        RngStream* rng = nullptr);
StateVector prss_decrypt(const Ciphertext& cipher, const PrssKey& key, const ScrambleConfig& config);

/// The ScramblerKey a mode uses (nonce only for PrfRandomized).
ScramblerKey derive_scrambler_key(const PrssKey& key, const ScrambleConfig& config,
                                  const std::optional<Key32>& nonce);

}  // namespace kacs
