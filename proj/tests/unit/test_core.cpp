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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "kacs/analysis.hpp"
#include "kacs/core.hpp"
#include "kacs/errors.hpp"

using namespace kacs;

namespace {

// All perfect matchings of {0..dim-1}, each as a canonical pair list.
void enumerate_matchings(std::vector<uint32_t> left, std::vector<Matching::Pair>& cur,
                         std::vector<std::vector<Matching::Pair>>& out) {
  if (left.empty()) {
    auto sorted = cur;
    std::sort(sorted.begin(), sorted.end());
    out.push_back(sorted);
    return;
  }
  const uint32_t a = left[0];
  for (size_t k = 1; k < left.size(); ++k) {
    std::vector<uint32_t> rest;
    for (size_t m = 1; m < left.size(); ++m) {
      if (m != k) rest.push_back(left[m]);
    }
    cur.emplace_back(a, left[k]);
    enumerate_matchings(rest, cur, out);
    cur.pop_back();
  }
}

double matching_uniformity_p(size_t dim, size_t draws, uint64_t seed) {
  std::vector<uint32_t> all(dim);
  for (size_t i = 0; i < dim; ++i) all[i] = uint32_t(i);
  std::vector<Matching::Pair> cur;
  std::vector<std::vector<Matching::Pair>> list;
  enumerate_matchings(all, cur, list);
  std::map<std::vector<Matching::Pair>, size_t> index;
  for (size_t i = 0; i < list.size(); ++i) index[list[i]] = i;
  std::vector<size_t> counts(list.size(), 0);
  RngStream rng(Seed256::from_u64(seed));
  for (size_t t = 0; t < draws; ++t) {
    const Matching m = sample_matching(dim, rng).canonical();
    ++counts.at(index.at(m.pairs()));
  }
  return chi_square_p_value(counts, std::vector<double>(list.size(), 1.0 / double(list.size())));
}

}  // namespace

TEST(StateVector, FactoriesAndInvariants) {
  const StateVector e = StateVector::basis(Field::Real, 4, 2);
  EXPECT_EQ(e.dim(), 4u);
  EXPECT_DOUBLE_EQ(e.weight(2), 1.0);
  EXPECT_THROW(StateVector::from_real({1.0, 1.0}), DomainError);
  EXPECT_THROW(StateVector::normalized_real({0.0, 0.0}), DomainError);
  const StateVector n = StateVector::normalized_complex({{1, 1}, {1, -1}});
  EXPECT_NEAR(n.norm(), 1.0, 1e-15);
  EXPECT_THROW(n.real(), ParameterError);
  EXPECT_EQ(e.to_complex().amplitude(2), Complex(1, 0));
  EXPECT_THROW(StateVector::basis(Field::Real, 4, 4), IndexError);
}

TEST(StateVector, DistancesAndInnerProduct) {
  const StateVector a = StateVector::basis(Field::Real, 2, 0);
  const StateVector b = StateVector::basis(Field::Real, 2, 1);
  EXPECT_NEAR(distance(a, b), std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(max_amplitude_difference(a, b), 1.0);
  const StateVector c = StateVector::from_complex({{0, 1}, {0, 0}});
  EXPECT_EQ(inner_product(c, a.to_complex()), Complex(0, -1));
}

TEST(Matching, SingleMatchingAtTwo) {
  RngStream rng(Seed256::from_u64(1));
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(sample_matching(2, rng).canonical().pairs(), (std::vector<Matching::Pair>{{0, 1}}));
  }
}

TEST(Matching, UniformAtFour) {
  RngStream rng(Seed256::from_u64(2));
  std::map<std::vector<Matching::Pair>, int> freq;
  for (int i = 0; i < 30000; ++i) ++freq[sample_matching(4, rng).canonical().pairs()];
  ASSERT_EQ(freq.size(), 3u);
  for (const auto& [m, c] : freq) EXPECT_NEAR(c / 30000.0, 1.0 / 3.0, 0.02);
  EXPECT_GT(matching_uniformity_p(4, 30000, 3), 0.01);
}

TEST(Matching, UniformAtSixAndEight) {
  EXPECT_GT(matching_uniformity_p(6, 100000, 4), 0.01);
  EXPECT_GT(matching_uniformity_p(8, 105000, 5), 0.01);  // 105 matchings
}

TEST(Matching, RejectsInvalidPairs) {
  EXPECT_THROW(Matching::from_pairs(4, {{0, 1}, {1, 2}}), ParameterError);
  EXPECT_THROW(Matching::from_pairs(3, {{0, 1}}), DimensionError);
  EXPECT_THROW(Matching::from_pairs(4, {{0, 1}, {2, 4}}), std::exception);
  RngStream rng(Seed256::from_u64(0));
  EXPECT_THROW(sample_matching(5, rng), DimensionError);
}

TEST(Bits, ValExamples) {
  EXPECT_DOUBLE_EQ(val(BitString::parse("0000")), 0.0);
  EXPECT_DOUBLE_EQ(val(BitString::parse("1000")), 0.5);
  EXPECT_DOUBLE_EQ(val(BitString::parse("0110")), 0.375);
  EXPECT_THROW(BitString::parse("0120"), ParameterError);
  EXPECT_THROW(BitString::parse(std::string(53, '1')), PrecisionError);
}

TEST(Bits, RoundExamples) {
  EXPECT_EQ(round_to_d_bits(0.5, 3).to_string(), "100");
  EXPECT_EQ(round_to_d_bits(1.0 / 3.0, 4).to_string(), "0101");
  EXPECT_DOUBLE_EQ(val(round_to_d_bits(1.0 / 3.0, 4)), 0.3125);
  EXPECT_EQ(round_to_d_bits(0.999999, 2).to_string(), "11");
  EXPECT_THROW(round_to_d_bits(1.0, 4), DomainError);
  EXPECT_THROW(round_to_d_bits(0.5, 0), ParameterError);
}

TEST(Bits, RoundMatchesBinaryExpansion) {
  RngStream rng(Seed256::from_u64(6));
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform();
    const int d = 1 + int(rng.below(40));
    // Digit-by-digit doubling oracle.
    double r = x;
    std::string digits;
    for (int k = 0; k < d; ++k) {
      r *= 2;
      digits += r >= 1.0 ? '1' : '0';
      if (r >= 1.0) r -= 1.0;
    }
    EXPECT_EQ(round_to_d_bits(x, d).to_string(), digits);
    EXPECT_LE(x - val(round_to_d_bits(x, d)), std::ldexp(1.0, -d));
  }
}

TEST(AngleTable, ShapesAndTruncation) {
  const AngleTable t = AngleTable::continuous(2, {0.0, 0.7});
  EXPECT_EQ(t.size(), 2u);
  const AngleTable d = t.truncated(3);
  EXPECT_EQ(d.mode(), AngleMode::Discrete);
  EXPECT_EQ(d.bits(1).to_string(), "101");
  EXPECT_DOUBLE_EQ(d.fraction(1), 0.625);
  EXPECT_THROW(AngleTable::discrete(2, 3, {0, 8}), ParameterError);
  EXPECT_THROW(AngleTable::continuous(2, {0.1}), std::exception);
  // A continuous value of exactly 1 truncates to all ones.
  EXPECT_EQ(AngleTable::continuous(1, {1.0}).truncated(4).bits(0).to_string(), "1111");
}

TEST(Partition, MergeAndRefine) {
  const Partition s = Partition::singletons(4);
  EXPECT_EQ(s.num_blocks(), 4u);
  const Partition m = s.merged(0, 2).merged(1, 3);
  EXPECT_EQ(m.num_blocks(), 2u);
  EXPECT_TRUE(m.same_block(0, 2));
  EXPECT_FALSE(m.same_block(0, 1));
  EXPECT_TRUE(s.refines(m));
  EXPECT_FALSE(m.refines(s));
  EXPECT_TRUE(m.merged(0, 1).is_whole());
  EXPECT_EQ(Partition::from_blocks(4, {{0, 2}, {1, 3}}), m);
  EXPECT_THROW(Partition::from_blocks(4, {{0, 1}, {1, 2, 3}}), std::exception);
}

TEST(Field, Parse) {
  EXPECT_EQ(parse_field("real"), Field::Real);
  EXPECT_EQ(parse_field("complex"), Field::Complex);
  EXPECT_THROW(parse_field("quaternion"), ParameterError);
}
