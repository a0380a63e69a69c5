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

#include "kacs/keyed.hpp"

#include <memory>

#include <openssl/evp.h>

#include "kacs/errors.hpp"

namespace kacs {

namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

EVP_MD_CTX* thread_ctx() {
  thread_local std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
  if (!ctx) throw std::runtime_error("EVP_MD_CTX_new failed");
  return ctx.get();
}

// Fetched once; initializing from the legacy EVP_shake256() handle repeats
// the provider lookup on every call.
const EVP_MD* shake_md() {
  static const std::unique_ptr<EVP_MD, decltype(&EVP_MD_free)> md(EVP_MD_fetch(nullptr, "SHAKE256", nullptr),
                                                                   &EVP_MD_free);
  if (!md) throw std::runtime_error("SHAKE256 is unavailable");
  return md.get();
}

// Incremental SHAKE256 over the thread's context.
class Shake {
 public:
  Shake() : ctx_(thread_ctx()) {
    if (EVP_DigestInit_ex2(ctx_, shake_md(), nullptr) != 1) {
      throw std::runtime_error("SHAKE256 init failed");
    }
  }
  Shake& absorb(const void* data, size_t len) {
    if (EVP_DigestUpdate(ctx_, data, len) != 1) throw std::runtime_error("SHAKE256 update failed");
    return *this;
  }
  Shake& absorb_u64(uint64_t x) {
    uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(x >> (8 * i));
    return absorb(b, 8);
  }
  void squeeze(uint8_t* out, size_t len) {
    if (EVP_DigestFinalXOF(ctx_, out, len) != 1) throw std::runtime_error("SHAKE256 squeeze failed");
  }

 private:
  EVP_MD_CTX* ctx_;
};

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

constexpr uint8_t kTableDomain[3] = {0x20, 0x21, 0x22};

}  // namespace

std::string to_hex(std::span<const uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * bytes.size());
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

std::vector<uint8_t> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw ParameterError("hex string has odd length");
  std::vector<uint8_t> out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_digit(hex[2 * i]);
    const int lo = hex_digit(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw ParameterError("invalid hex digit");
    out[i] = static_cast<uint8_t>(hi << 4 | lo);
  }
  return out;
}

Key32 key_from_hex(std::string_view hex) {
  const auto bytes = from_hex(hex);
  if (bytes.size() != 32) throw ParameterError("keys are 32 bytes (64 hex digits)");
  Key32 k;
  std::copy(bytes.begin(), bytes.end(), k.begin());
  return k;
}

Key32 random_key(RngStream& rng) {
  Key32 k;
  for (size_t i = 0; i < 32; i += 8) {
    const uint64_t w = rng.next_u64();
    for (size_t b = 0; b < 8; ++b) k[i + b] = static_cast<uint8_t>(w >> (8 * b));
  }
  return k;
}

std::vector<uint8_t> shake256(std::span<const uint8_t> input, size_t out_len) {
  std::vector<uint8_t> out(out_len);
  Shake().absorb(input.data(), input.size()).squeeze(out.data(), out_len);
  return out;
}

uint64_t prf_u64(const Key32& key, uint8_t domain, uint64_t x) {
  uint8_t out[8];
  Shake().absorb(key.data(), key.size()).absorb(&domain, 1).absorb_u64(x).squeeze(out, 8);
  uint64_t v = 0;
  for (uint8_t b : out) v = v << 8 | b;
  return v;
}

Key32 prf_key(const Key32& key, std::string_view label, std::span<const uint8_t> data) {
  Key32 out;
  Shake()
      .absorb(key.data(), key.size())
      .absorb(label.data(), label.size())
      .absorb(data.data(), data.size())
      .squeeze(out.data(), out.size());
  return out;
}

// ---------------------------------------------------------------------------
// Feistel permutation

FeistelPermutation::FeistelPermutation(int n, const Key32& key) : n_(n), key_(key) {
  if (n < 1 || n > 30) throw DimensionError("Feistel permutation needs 1 <= n <= 30");
}

uint64_t FeistelPermutation::round_function(int round, uint64_t half, int out_bits) const {
  if (out_bits == 0) return 0;
  return prf_u64(key_, static_cast<uint8_t>(round), half) >> (64 - out_bits);
}

uint64_t FeistelPermutation::forward(uint64_t x) const {
  int wl = (n_ + 1) / 2;
  int wr = n_ / 2;
  uint64_t l = x >> wr;
  uint64_t r = x & ((uint64_t{1} << wr) - 1);
  for (int round = 0; round < kRounds; ++round) {
    const uint64_t next_r = l ^ round_function(round, r, wl);
    l = r;
    r = next_r;
    std::swap(wl, wr);
  }
  return l << wr | r;
}

uint64_t FeistelPermutation::inverse(uint64_t y) const {
  // An even number of rounds restores the original split.
  int wl = (n_ + 1) / 2;
  int wr = n_ / 2;
  uint64_t l = y >> wr;
  uint64_t r = y & ((uint64_t{1} << wr) - 1);
  for (int round = kRounds - 1; round >= 0; --round) {
    const uint64_t prev_r = l;
    const uint64_t prev_l = r ^ round_function(round, prev_r, wr);
    l = prev_l;
    r = prev_r;
    std::swap(wl, wr);
  }
  return l << wr | r;
}

Permutation FeistelPermutation::table() const {
  std::vector<uint32_t> f(size_t{1} << n_);
  for (size_t x = 0; x < f.size(); ++x) f[x] = static_cast<uint32_t>(forward(x));
  return Permutation::from_forward(n_, std::move(f));
}

// ---------------------------------------------------------------------------
// ScramblerKey

ScramblerKey::ScramblerKey(Field field, std::vector<std::array<Key32, 4>> steps)
    : field_(field), steps_(std::move(steps)) {
  if (field_ == Field::Real) {
    for (auto& s : steps_) s[2] = s[3] = Key32{};
  }
}

ScramblerKey ScramblerKey::expand(const Key32& master, size_t steps, Field field) {
  std::vector<std::array<Key32, 4>> keys(steps);
  const size_t roles = field == Field::Real ? 2 : 4;
  for (size_t t = 0; t < steps; ++t) {
    for (size_t role = 0; role < roles; ++role) {
      uint8_t data[9];
      for (int i = 0; i < 8; ++i) data[i] = static_cast<uint8_t>(t >> (8 * i));
      data[8] = static_cast<uint8_t>(role);
      keys[t][role] = prf_key(master, "expand", data);
    }
  }
  return ScramblerKey(field, std::move(keys));
}

ScramblerKey ScramblerKey::random(size_t steps, Field field, RngStream& rng) {
  std::vector<std::array<Key32, 4>> keys(steps);
  const size_t roles = field == Field::Real ? 2 : 4;
  for (auto& k : keys) {
    for (size_t role = 0; role < roles; ++role) k[role] = random_key(rng);
  }
  return ScramblerKey(field, std::move(keys));
}

const Key32& ScramblerKey::subkey(size_t t, Role role) const {
  if (t >= steps_.size()) throw ParameterError("key schedule has no subkeys for step " + std::to_string(t));
  if (static_cast<size_t>(role) >= roles()) throw ParameterError("real keys have no g/h subkeys");
  return steps_[t][role];
}

std::string ScramblerKey::to_hex() const {
  std::string out;
  for (const auto& s : steps_) {
    for (size_t role = 0; role < roles(); ++role) out += kacs::to_hex(s[role]);
  }
  return out;
}

ScramblerKey ScramblerKey::from_hex(std::string_view hex, Field field) {
  const size_t roles = field == Field::Real ? 2 : 4;
  const size_t per_step = 64 * roles;
  if (hex.size() % per_step != 0) {
    throw ParameterError("key length must be a multiple of " + std::to_string(per_step) + " hex digits");
  }
  std::vector<std::array<Key32, 4>> keys(hex.size() / per_step);
  for (size_t t = 0; t < keys.size(); ++t) {
    for (size_t role = 0; role < roles; ++role) {
      keys[t][role] = key_from_hex(hex.substr(t * per_step + 64 * role, 64));
    }
  }
  return ScramblerKey(field, std::move(keys));
}

// ---------------------------------------------------------------------------
// Parameter sources

ParamSource ParamSource::true_random(RngStream rng) {
  return ParamSource(Kind::TrueRandom, std::move(rng), std::nullopt);
}

ParamSource ParamSource::keyed(ScramblerKey key) {
  return ParamSource(Kind::Keyed, std::nullopt, std::move(key));
}

namespace {

AngleTable table_from_words(const ScrambleConfig& c, const std::vector<uint64_t>& words) {
  if (c.mode == AngleMode::Discrete) {
    std::vector<uint64_t> v(words.size());
    for (size_t y = 0; y < v.size(); ++y) v[y] = words[y] >> (64 - c.d);
    return AngleTable::discrete(c.n, c.d, std::move(v));
  }
  std::vector<double> v(words.size());
  for (size_t y = 0; y < v.size(); ++y) v[y] = to_unit_interval(words[y]);
  return AngleTable::continuous(c.n, std::move(v));
}

void check_config(const ScrambleConfig& c) {
  if (c.n < 1 || c.n > 30) throw DimensionError("qubit count must be in [1, 30]");
  if (c.mode == AngleMode::Discrete) {
    if (c.d < 1) throw ParameterError("precision must be at least one bit");
    if (c.d > kMaxPrecisionBits) throw PrecisionError("precision is capped at 52 bits");
  }
}

}  // namespace

GateParams ParamSource::derive(size_t t, const ScrambleConfig& config) const {
  check_config(config);
  const size_t half = size_t{1} << (config.n - 1);
  const int tables = config.field == Field::Real ? 1 : 3;
  std::vector<std::vector<uint64_t>> words(tables, std::vector<uint64_t>(half));
  std::optional<Permutation> sigma;

  if (kind_ == Kind::TrueRandom) {
    const RngStream s = rng_->fork(t);
    RngStream pick = s.fork(0);
    sigma = Permutation::random(config.n, pick);
    const RngStream lane = s.fork(1);
    for (size_t y = 0; y < half; ++y) {
      const auto b = lane.block(y);
      for (int k = 0; k < tables; ++k) words[k][y] = b[k];
    }
  } else {
    if (key_->field() != config.field) throw ParameterError("key field differs from the scramble field");
    sigma = FeistelPermutation(config.n, key_->subkey(t, ScramblerKey::kPermutation)).table();
    const ScramblerKey::Role roles[3] = {ScramblerKey::kF, ScramblerKey::kG, ScramblerKey::kH};
    for (int k = 0; k < tables; ++k) {
      const Key32& sub = key_->subkey(t, roles[k]);
      for (size_t y = 0; y < half; ++y) words[k][y] = prf_u64(sub, kTableDomain[k], y);
    }
  }

  if (config.field == Field::Real) return GateParams::real(std::move(*sigma), table_from_words(config, words[0]));
  return GateParams::complex(std::move(*sigma), table_from_words(config, words[0]),
                             table_from_words(config, words[1]), table_from_words(config, words[2]));
}

ScrambleResult scramble(const StateVector& state, const ScrambleConfig& config,
                        const ParamSource& source, bool record) {
  check_config(config);
  if (state.dim() != (size_t{1} << config.n)) throw DimensionError("state dimension must be 2^n");
  if (state.field() != config.field) throw ParameterError("state field differs from the scramble field");
  ScrambleResult out{state, {}};
  for (size_t t = 0; t < config.steps; ++t) {
    GateParams p = source.derive(t, config);
    apply_gate(out.state, p);
    if (record) out.trace.push_back(std::move(p));
  }
  return out;
}

StateVector unscramble(const StateVector& state, const std::vector<GateParams>& trace) {
  StateVector out = state;
  for (size_t k = trace.size(); k-- > 0;) apply_gate_inverse(out, trace[k]);
  return out;
}

// ---------------------------------------------------------------------------
// Encryption

std::string_view to_string(EncryptionMode mode) {
  switch (mode) {
    case EncryptionMode::Direct: return "direct";
    case EncryptionMode::PrgExpanded: return "prg_expanded";
    default: return "prf_randomized";
  }
}

EncryptionMode parse_encryption_mode(std::string_view text) {
  if (text == "direct") return EncryptionMode::Direct;
  if (text == "prg_expanded") return EncryptionMode::PrgExpanded;
  if (text == "prf_randomized") return EncryptionMode::PrfRandomized;
  throw ParameterError("unknown encryption mode '" + std::string(text) + "'");
}

ScramblerKey derive_scrambler_key(const PrssKey& key, const ScrambleConfig& config,
                                  const std::optional<Key32>& nonce) {
  switch (key.mode) {
    case EncryptionMode::Direct:
      if (!key.full) throw ParameterError("direct mode needs a full key schedule");
      if (key.full->steps() < config.steps) throw ParameterError("key schedule is shorter than T");
      return *key.full;
    case EncryptionMode::PrgExpanded:
      return ScramblerKey::expand(key.master, config.steps, config.field);
    default:
      if (!nonce) throw ParameterError("randomized mode needs a nonce");
      return ScramblerKey::expand(prf_key(key.master, "nonce", *nonce), config.steps, config.field);
  }
}

Ciphertext prss_encrypt(const StateVector& plain, const PrssKey& key, const ScrambleConfig& config,
                        RngStream* rng) {
  std::optional<Key32> nonce;
  if (key.mode == EncryptionMode::PrfRandomized) {
    if (!rng) throw ParameterError("randomized mode needs an rng for the nonce");
    nonce = random_key(*rng);
  }
  const auto source = ParamSource::keyed(derive_scrambler_key(key, config, nonce));
  return {scramble(plain, config, source, false).state, nonce};
}

StateVector prss_decrypt(const Ciphertext& cipher, const PrssKey& key, const ScrambleConfig& config) {
  const auto source = ParamSource::keyed(derive_scrambler_key(key, config, cipher.nonce));
  std::vector<GateParams> trace;
  trace.reserve(config.steps);
  for (size_t t = 0; t < config.steps; ++t) trace.push_back(source.derive(t, config));
  return unscramble(cipher.state, trace);
}

}  // namespace kacs
