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

// Foundational value types shared by every module: states, matchings,
// partitions, angle tables and binary fractions.
//
// Indices are 0-based throughout. A circuit index x in [0, 2^n) is read as
// the bit string x_1 x_2 ... x_n with x_1 the most significant bit, so the
// "first qubit" of a gate is the top bit of the index.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kacs/rng.hpp"

namespace kacs {

using Complex = std::complex<double>;

enum class Field { Real, Complex };

std::string_view to_string(Field field);
Field parse_field(std::string_view text);

inline bool is_power_of_two(uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }
/// log2 of a power of two; throws DimensionError otherwise.
int exact_log2(uint64_t x);

// ---------------------------------------------------------------------------
// StateVector

/// Unit vector in R^W or C^W.
///
/// Factories normalize or validate, and every library operation is an
/// isometry, so the 2-norm stays within 1e-9 of one.
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-9;

  /// Basis vector e_index.
  static StateVector basis(Field field, size_t dim, size_t index);
  /// Takes ownership of `amps`; throws DomainError unless the 2-norm is 1
  /// within kNormTolerance.
  static StateVector from_real(std::vector<double> amps);
  static StateVector from_complex(std::vector<Complex> amps);
  /// Rescales `amps` to unit norm; throws DomainError on a zero vector.
  static StateVector normalized_real(std::vector<double> amps);
  static StateVector normalized_complex(std::vector<Complex> amps);

  Field field() const { return std::holds_alternative<RealAmps>(amps_) ? Field::Real : Field::Complex; }
  bool is_real() const { return field() == Field::Real; }
  size_t dim() const;

  /// Amplitude views; throw ParameterError when the field does not match.
  std::span<double> real();
  std::span<const double> real() const;
  std::span<Complex> complex();
  std::span<const Complex> complex() const;

  /// Amplitude i as a complex number (imaginary part zero for real states).
  Complex amplitude(size_t i) const;
  /// |amp_i|^2.
  double weight(size_t i) const;
  double norm() const;

  /// Same vector viewed in C^W.
  StateVector to_complex() const;

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  using RealAmps = std::vector<double>;
  using ComplexAmps = std::vector<Complex>;
  explicit StateVector(std::variant<RealAmps, ComplexAmps> amps) : amps_(std::move(amps)) {}

  std::variant<RealAmps, ComplexAmps> amps_;
};

/// Largest |a_i - b_i| over all amplitudes; dimensions must agree.
double max_amplitude_difference(const StateVector& a, const StateVector& b);
/// ||a - b||_2.
double distance(const StateVector& a, const StateVector& b);
/// <a, b> (conjugate-linear in a).
Complex inner_product(const StateVector& a, const StateVector& b);

// ---------------------------------------------------------------------------
// Binary fractions

/// A d-bit string x_1 ... x_d stored as an integer whose most significant of
/// the d bits is x_1, i.e. bits / 2^d == val(x).
struct BitString {
  uint64_t bits = 0;
  int width = 0;

  static BitString parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;
};

inline constexpr int kMaxPrecisionBits = 52;

/// val(x) = sum_i 2^-i x_i, exact for width <= 52.
double val(const BitString& x);
/// First d binary digits of x in [0, 1) (truncation).
BitString round_to_d_bits(double x, int d);

// ---------------------------------------------------------------------------
// Angle tables

enum class AngleMode { Discrete, Continuous };

/// A function {0,1}^(n-1) -> {0,1}^d (Discrete) or -> [0,1) (Continuous),
/// stored densely by the integer value of the (n-1)-bit argument.
///
/// Continuous entries may also equal 1: the steering construction needs
/// sin^2 = 1 exactly for a quarter turn. Truncation maps 1 to the all-ones
/// string.
class AngleTable {
 public:
  static AngleTable discrete(int n, int d, std::vector<uint64_t> values);
  static AngleTable continuous(int n, std::vector<double> values);
  static AngleTable zeros(int n, AngleMode mode, int d = 1);

  int n() const { return n_; }
  int d() const { return d_; }
  AngleMode mode() const { return mode_; }
  size_t size() const { return size_t{1} << (n_ - 1); }

  /// val(f(y)) in discrete mode, f~(y) in continuous mode.
  double fraction(size_t y) const;
  BitString bits(size_t y) const;

  /// Discrete table whose entries are the first d digits of this table's
  /// fractions.
  AngleTable truncated(int d) const;

  const std::vector<uint64_t>& discrete_values() const { return discrete_; }
  const std::vector<double>& continuous_values() const { return continuous_; }

  friend bool operator==(const AngleTable&, const AngleTable&) = default;

 private:
  AngleTable(int n, int d, AngleMode mode) : n_(n), d_(d), mode_(mode) {}

  int n_;
  int d_;
  AngleMode mode_;
  std::vector<uint64_t> discrete_;
  std::vector<double> continuous_;
};

// ---------------------------------------------------------------------------
// Matchings

class Matching {
 public:
  using Pair = std::pair<uint32_t, uint32_t>;

  /// Validates that `pairs` is a perfect matching of {0, ..., dim-1}.
  static Matching from_pairs(size_t dim, std::vector<Pair> pairs);

  size_t dim() const { return dim_; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  size_t size() const { return pairs_.size(); }
  const Pair& operator[](size_t k) const { return pairs_[k]; }

  /// Same matching with each pair ordered (i < j) and pairs sorted; used to
  /// compare matchings as sets.
  Matching canonical() const;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  Matching(size_t dim, std::vector<Pair> pairs) : dim_(dim), pairs_(std::move(pairs)) {}

  size_t dim_;
  std::vector<Pair> pairs_;
};

/// Fisher-Yates shuffle of 0..size-1 driven by `rng`.
std::vector<uint32_t> random_permutation(size_t size, RngStream& rng);

/// Uniform perfect matching of {0, ..., W-1}: shuffle, then pair consecutive
/// entries. Each matching arises from exactly 2^(W/2) (W/2)! orderings.
Matching sample_matching(size_t dim, RngStream& rng);

// ---------------------------------------------------------------------------
// Partitions

/// Partition of {0, ..., W-1}, stored as one label per element. The label of
/// an element is the smallest member of its block, which makes equal
/// partitions compare equal.
class Partition {
 public:
  static Partition singletons(size_t dim);
  static Partition whole(size_t dim);
  /// Builds from explicit blocks; validates disjointness and coverage.
  static Partition from_blocks(size_t dim, const std::vector<std::vector<uint32_t>>& blocks);

  size_t dim() const { return labels_.size(); }
  uint32_t label(size_t i) const { return labels_[i]; }
  bool same_block(size_t i, size_t j) const { return labels_[i] == labels_[j]; }
  bool is_whole() const;
  size_t num_blocks() const;
  /// Blocks ordered by label, members ascending.
  std::vector<std::vector<uint32_t>> blocks() const;
  std::vector<uint32_t> block_of(size_t i) const;

  /// Partition with the blocks of i and j merged (copy).
  Partition merged(size_t i, size_t j) const;
  /// True when every block of *this lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const;

  const std::vector<uint32_t>& labels() const { return labels_; }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  explicit Partition(std::vector<uint32_t> labels) : labels_(std::move(labels)) {}

  std::vector<uint32_t> labels_;
};

}  // namespace kacs
