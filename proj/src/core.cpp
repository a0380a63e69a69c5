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

#include "kacs/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kacs/errors.hpp"

namespace kacs {

std::string_view to_string(Field field) {
  return field == Field::Real ? "real" : "complex";
}

Field parse_field(std::string_view text) {
  if (text == "real") return Field::Real;
  if (text == "complex") return Field::Complex;
  throw ParameterError("unknown field '" + std::string(text) + "' (expected real|complex)");
}

int exact_log2(uint64_t x) {
  if (!is_power_of_two(x)) {
    throw DimensionError("dimension " + std::to_string(x) + " is not a power of two");
  }
  int n = 0;
  while ((uint64_t{1} << n) != x) ++n;
  return n;
}

// ---------------------------------------------------------------------------
// StateVector

namespace {

template <class T>
double sum_of_squares(const std::vector<T>& v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return s;
}

void check_unit(double norm_sq) {
  if (!(std::abs(std::sqrt(norm_sq) - 1.0) <= StateVector::kNormTolerance)) {
    throw DomainError("state is not normalized (norm " + std::to_string(std::sqrt(norm_sq)) + ")");
  }
}

}  // namespace

StateVector StateVector::basis(Field field, size_t dim, size_t index) {
  if (dim == 0) throw DimensionError("state dimension must be positive");
  if (index >= dim) throw IndexError("basis index out of range");
  if (field == Field::Real) {
    RealAmps v(dim, 0.0);
    v[index] = 1.0;
    return StateVector(std::move(v));
  }
  ComplexAmps v(dim, Complex{});
  v[index] = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::from_real(std::vector<double> amps) {
  if (amps.empty()) throw DimensionError("state dimension must be positive");
  check_unit(sum_of_squares(amps));
  return StateVector(std::move(amps));
}

StateVector StateVector::from_complex(std::vector<Complex> amps) {
  if (amps.empty()) throw DimensionError("state dimension must be positive");
  check_unit(sum_of_squares(amps));
  return StateVector(std::move(amps));
}

StateVector StateVector::normalized_real(std::vector<double> amps) {
  if (amps.empty()) throw DimensionError("state dimension must be positive");
  const double n = std::sqrt(sum_of_squares(amps));
  if (n == 0.0) throw DomainError("cannot normalize the zero vector");
  for (auto& a : amps) a /= n;
  return StateVector(std::move(amps));
}

StateVector StateVector::normalized_complex(std::vector<Complex> amps) {
  if (amps.empty()) throw DimensionError("state dimension must be positive");
  const double n = std::sqrt(sum_of_squares(amps));
  if (n == 0.0) throw DomainError("cannot normalize the zero vector");
  for (auto& a : amps) a /= n;
  return StateVector(std::move(amps));
}

size_t StateVector::dim() const {
  return std::visit([](const auto& v) { return v.size(); }, amps_);
}

std::span<double> StateVector::real() {
  auto* v = std::get_if<RealAmps>(&amps_);
  if (!v) throw ParameterError("expected a real state");
  return *v;
}

std::span<const double> StateVector::real() const {
  const auto* v = std::get_if<RealAmps>(&amps_);
  if (!v) throw ParameterError("expected a real state");
  return *v;
}

std::span<Complex> StateVector::complex() {
  auto* v = std::get_if<ComplexAmps>(&amps_);
  if (!v) throw ParameterError("expected a complex state");
  return *v;
}

std::span<const Complex> StateVector::complex() const {
  const auto* v = std::get_if<ComplexAmps>(&amps_);
  if (!v) throw ParameterError("expected a complex state");
  return *v;
}

Complex StateVector::amplitude(size_t i) const {
  return std::visit([i](const auto& v) { return Complex(v.at(i)); }, amps_);
}

double StateVector::weight(size_t i) const {
  return std::visit([i](const auto& v) { return std::norm(v.at(i)); }, amps_);
}

double StateVector::norm() const {
  return std::sqrt(std::visit([](const auto& v) { return sum_of_squares(v); }, amps_));
}

StateVector StateVector::to_complex() const {
  if (!is_real()) return *this;
  const auto& v = std::get<RealAmps>(amps_);
  return StateVector(ComplexAmps(v.begin(), v.end()));
}

double max_amplitude_difference(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("state dimensions differ");
  double m = 0.0;
  for (size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a.amplitude(i) - b.amplitude(i)));
  return m;
}

double distance(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("state dimensions differ");
  double s = 0.0;
  for (size_t i = 0; i < a.dim(); ++i) s += std::norm(a.amplitude(i) - b.amplitude(i));
  return std::sqrt(s);
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("state dimensions differ");
  if (a.is_real() && b.is_real()) {
    const auto x = a.real();
    const auto y = b.real();
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  }
  Complex s{};
  for (size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amplitude(i)) * b.amplitude(i);
  return s;
}

// ---------------------------------------------------------------------------
// Binary fractions

BitString BitString::parse(std::string_view text) {
  if (text.empty()) throw ParameterError("bit string must be nonempty");
  if (text.size() > kMaxPrecisionBits) {
    throw PrecisionError("bit strings are limited to 52 bits");
  }
  BitString out;
  out.width = static_cast<int>(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw ParameterError("bit string may only contain 0 and 1");
    out.bits = (out.bits << 1) | static_cast<uint64_t>(c == '1');
  }
  return out;
}

std::string BitString::to_string() const {
  std::string s(static_cast<size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((bits >> (width - 1 - i)) & 1) s[static_cast<size_t>(i)] = '1';
  }
  return s;
}

double val(const BitString& x) {
  if (x.width < 1) throw ParameterError("val of an empty bit string");
  if (x.width > kMaxPrecisionBits) throw PrecisionError("val is exact only up to 52 bits");
  if (x.width < 64 && (x.bits >> x.width) != 0) throw ParameterError("bit string has stray high bits");
  return std::ldexp(static_cast<double>(x.bits), -x.width);
}

BitString round_to_d_bits(double x, int d) {
  if (d < 1) throw ParameterError("precision must be at least one bit");
  if (d > kMaxPrecisionBits) throw PrecisionError("precision is capped at 52 bits");
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("binary fraction must lie in [0, 1)");
  // Scaling by a power of two is exact; floor gives the leading d digits.
  return BitString{static_cast<uint64_t>(std::floor(std::ldexp(x, d))), d};
}

// ---------------------------------------------------------------------------
// AngleTable

namespace {

void check_table_shape(int n, size_t size) {
  if (n < 1 || n > 30) throw ParameterError("angle tables need 1 <= n <= 30");
  if (size != (size_t{1} << (n - 1))) {
    throw ParameterError("angle table needs 2^(n-1) entries");
  }
}

}  // namespace

AngleTable AngleTable::discrete(int n, int d, std::vector<uint64_t> values) {
  check_table_shape(n, values.size());
  if (d < 1) throw ParameterError("precision must be at least one bit");
  if (d > kMaxPrecisionBits) throw PrecisionError("precision is capped at 52 bits");
  for (uint64_t v : values) {
    if ((v >> d) != 0) throw ParameterError("table entry wider than d bits");
  }
  AngleTable t(n, d, AngleMode::Discrete);
  t.discrete_ = std::move(values);
  return t;
}

AngleTable AngleTable::continuous(int n, std::vector<double> values) {
  check_table_shape(n, values.size());
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("continuous table entries must lie in [0, 1]");
  }
  AngleTable t(n, 0, AngleMode::Continuous);
  t.continuous_ = std::move(values);
  return t;
}

AngleTable AngleTable::zeros(int n, AngleMode mode, int d) {
  const size_t size = size_t{1} << (n - 1);
  if (mode == AngleMode::Discrete) return discrete(n, d, std::vector<uint64_t>(size, 0));
  return continuous(n, std::vector<double>(size, 0.0));
}

double AngleTable::fraction(size_t y) const {
  if (mode_ == AngleMode::Discrete) return std::ldexp(static_cast<double>(discrete_[y]), -d_);
  return continuous_[y];
}

BitString AngleTable::bits(size_t y) const {
  if (mode_ != AngleMode::Discrete) throw ParameterError("continuous tables have no bit strings");
  return BitString{discrete_[y], d_};
}

AngleTable AngleTable::truncated(int d) const {
  std::vector<uint64_t> out(size());
  const uint64_t all_ones = (uint64_t{1} << d) - 1;
  for (size_t y = 0; y < size(); ++y) {
    const double x = fraction(y);
    out[y] = x >= 1.0 ? all_ones : round_to_d_bits(x, d).bits;
  }
  return discrete(n_, d, std::move(out));
}

// ---------------------------------------------------------------------------
// Matching

Matching Matching::from_pairs(size_t dim, std::vector<Pair> pairs) {
  if (dim < 2 || dim % 2 != 0) {
    throw DimensionError("perfect matchings need an even dimension >= 2, got " + std::to_string(dim));
  }
  if (pairs.size() != dim / 2) throw ParameterError("a perfect matching has W/2 pairs");
  std::vector<bool> seen(dim, false);
  for (const auto& [i, j] : pairs) {
    if (i >= dim || j >= dim) throw IndexError("matching index out of range");
    if (i == j || seen[i] || seen[j]) throw ParameterError("matching pairs must be disjoint");
    seen[i] = seen[j] = true;
  }
  return Matching(dim, std::move(pairs));
}

Matching Matching::canonical() const {
  auto pairs = pairs_;
  for (auto& p : pairs) {
    if (p.first > p.second) std::swap(p.first, p.second);
  }
  std::sort(pairs.begin(), pairs.end());
  return Matching(dim_, std::move(pairs));
}

std::vector<uint32_t> random_permutation(size_t size, RngStream& rng) {
  std::vector<uint32_t> perm(size);
  std::iota(perm.begin(), perm.end(), 0u);
  for (size_t i = size; i > 1; --i) {
    const size_t j = rng.below(i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

Matching sample_matching(size_t dim, RngStream& rng) {
  if (dim < 2 || dim % 2 != 0) {
    throw DimensionError("perfect matchings need an even dimension >= 2, got " + std::to_string(dim));
  }
  const auto perm = random_permutation(dim, rng);
  std::vector<Matching::Pair> pairs(dim / 2);
  for (size_t k = 0; k < dim / 2; ++k) pairs[k] = {perm[2 * k], perm[2 * k + 1]};
  return Matching::from_pairs(dim, std::move(pairs));
}

// ---------------------------------------------------------------------------
// Partition

Partition Partition::singletons(size_t dim) {
  std::vector<uint32_t> labels(dim);
  std::iota(labels.begin(), labels.end(), 0u);
  return Partition(std::move(labels));
}

Partition Partition::whole(size_t dim) { return Partition(std::vector<uint32_t>(dim, 0)); }

Partition Partition::from_blocks(size_t dim, const std::vector<std::vector<uint32_t>>& blocks) {
  std::vector<uint32_t> labels(dim, UINT32_MAX);
  for (const auto& block : blocks) {
    if (block.empty()) throw ParameterError("partition blocks must be nonempty");
    const uint32_t label = *std::min_element(block.begin(), block.end());
    for (uint32_t i : block) {
      if (i >= dim) throw IndexError("partition element out of range");
      if (labels[i] != UINT32_MAX) throw ParameterError("partition blocks overlap");
      labels[i] = label;
    }
  }
  if (std::find(labels.begin(), labels.end(), UINT32_MAX) != labels.end()) {
    throw ParameterError("partition does not cover every index");
  }
  return Partition(std::move(labels));
}

bool Partition::is_whole() const {
  return std::all_of(labels_.begin(), labels_.end(), [](uint32_t l) { return l == 0; });
}

size_t Partition::num_blocks() const {
  size_t count = 0;
  for (size_t i = 0; i < labels_.size(); ++i) count += labels_[i] == i;
  return count;
}

std::vector<std::vector<uint32_t>> Partition::blocks() const {
  std::vector<std::vector<uint32_t>> out;
  std::vector<size_t> slot(labels_.size(), SIZE_MAX);
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == i) {
      slot[i] = out.size();
      out.emplace_back();
    }
  }
  for (size_t i = 0; i < labels_.size(); ++i) out[slot[labels_[i]]].push_back(static_cast<uint32_t>(i));
  return out;
}

std::vector<uint32_t> Partition::block_of(size_t i) const {
  std::vector<uint32_t> out;
  const uint32_t l = labels_.at(i);
  for (size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k] == l) out.push_back(static_cast<uint32_t>(k));
  }
  return out;
}

Partition Partition::merged(size_t i, size_t j) const {
  const uint32_t a = labels_.at(i);
  const uint32_t b = labels_.at(j);
  if (a == b) return *this;
  const uint32_t keep = std::min(a, b);
  const uint32_t drop = std::max(a, b);
  auto labels = labels_;
  for (auto& l : labels) {
    if (l == drop) l = keep;
  }
  return Partition(std::move(labels));
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.dim() != dim()) throw DimensionError("partition dimensions differ");
  // Every element must share its coarse block with its own block's label.
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (coarser.labels_[i] != coarser.labels_[labels_[i]]) return false;
  }
  return true;
}

}  // namespace kacs
