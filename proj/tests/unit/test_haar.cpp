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

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "kacs/analysis.hpp"
#include "kacs/haar.hpp"

using namespace kacs;

namespace {

double det_abs_diff_one(const Mat2& m) { return std::abs(m[0][0] * m[1][1] - m[0][1] * m[1][0] - 1.0); }

// Uniform point on the real unit sphere by rejection from the cube.
std::vector<double> rejection_sphere(size_t dim, RngStream& rng) {
  for (;;) {
    std::vector<double> v(dim);
    double r2 = 0;
    for (auto& x : v) {
      x = 2 * rng.uniform() - 1;
      r2 += x * x;
    }
    if (r2 > 1e-6 && r2 <= 1.0) {
      for (auto& x : v) x /= std::sqrt(r2);
      return v;
    }
  }
}

}  // namespace

TEST(HaarSphere, UnitNormAndSecondMoment) {
  RngStream rng(Seed256::from_u64(1));
  RunningStats s;
  for (int i = 0; i < 100000; ++i) {
    const StateVector v = haar_sphere_sample(8, Field::Real, rng);
    ASSERT_NEAR(v.norm(), 1.0, 1e-12);
    s.add(v.weight(0));
  }
  EXPECT_NEAR(s.mean(), 1.0 / 8.0, 0.003);
  const StateVector c = haar_sphere_sample(5, Field::Complex, rng);
  EXPECT_NEAR(c.norm(), 1.0, 1e-12);
}

TEST(HaarSphere, FourthMomentMatchesRejectionSampler) {
  RngStream rng(Seed256::from_u64(2));
  RngStream oracle(Seed256::from_u64(3));
  RunningStats lib, ref;
  for (int i = 0; i < 100000; ++i) {
    const double x = haar_sphere_sample(4, Field::Real, rng).real()[0];
    lib.add(x * x * x * x);
    const double y = rejection_sphere(4, oracle)[0];
    ref.add(y * y * y * y);
  }
  EXPECT_LE(std::abs(lib.mean() - ref.mean()), 3 * std::hypot(lib.std_error(), ref.std_error()));
}

TEST(Su2, UnitaryWithUnitDeterminant) {
  RngStream rng(Seed256::from_u64(4));
  for (int i = 0; i < 1000; ++i) {
    const Mat2 m = su2_matrix(su2_haar_sample(rng));
    ASSERT_LT(det_abs_diff_one(m), 1e-12);
    // Columns orthonormal.
    const Complex dot = std::conj(m[0][0]) * m[0][1] + std::conj(m[1][0]) * m[1][1];
    ASSERT_LT(std::abs(dot), 1e-12);
    ASSERT_NEAR(std::norm(m[0][0]) + std::norm(m[1][0]), 1.0, 1e-12);
  }
  // Reading off U(0, 0, pi/2): e_0 goes to e_1.
  const Mat2 q = su2_matrix({0.0, 0.0, std::numbers::pi / 2});
  EXPECT_NEAR(std::abs(q[1][0] - Complex(1, 0)), 0.0, 1e-15);
}

TEST(Su2, HaarMomentsAgainstGramSchmidtOracle) {
  RngStream rng(Seed256::from_u64(5));
  RngStream oracle(Seed256::from_u64(6));
  RunningStats u11, cos2, ref;
  for (int i = 0; i < 100000; ++i) {
    const Su2Params p = su2_haar_sample(rng);
    u11.add(std::norm(su2_matrix(p)[0][0]));
    cos2.add(std::cos(p.theta) * std::cos(p.theta));
    // First column of a Haar unitary: normalized complex Gaussian vector.
    const Complex a(oracle.normal(), oracle.normal());
    const Complex b(oracle.normal(), oracle.normal());
    ref.add(std::norm(a) / (std::norm(a) + std::norm(b)));
  }
  EXPECT_NEAR(u11.mean(), 0.5, 0.005);
  EXPECT_NEAR(ref.mean(), 0.5, 0.005);
  EXPECT_NEAR(cos2.mean(), 0.5, 0.005);
  EXPECT_LE(std::abs(u11.mean() - ref.mean()), 3 * std::hypot(u11.std_error(), ref.std_error()));
}

TEST(Su2, FromUniformsRanges) {
  const Su2Params p = su2_from_uniforms(0.25, 0.5, 0.5);
  EXPECT_NEAR(p.alpha, std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(p.beta, std::numbers::pi, 1e-15);
  EXPECT_NEAR(std::sin(p.theta) * std::sin(p.theta), 0.5, 1e-15);
}

TEST(HaarTail, WithinStatedBounds) {
  const auto r = haar_tail_probability(16, 2.0, Field::Real, 100000, RngStream(Seed256::from_u64(7)));
  EXPECT_DOUBLE_EQ(r.bound, 0.125);
  EXPECT_LE(r.probability, r.bound + 3 * r.std_error);
  const auto c = haar_tail_probability(16, 2.0, Field::Complex, 100000, RngStream(Seed256::from_u64(8)));
  EXPECT_DOUBLE_EQ(c.bound, 0.0625);
  EXPECT_LE(c.probability, c.bound + 3 * c.std_error);
}

TEST(HaarTail, MatchesQuadratureOfTheMarginalDensity) {
  // |Y_0|^2 for real Haar in R^8 has density x^(-1/2) (1-x)^(5/2) / B(1/2, 7/2).
  const auto r = haar_tail_probability(8, 4.0, Field::Real, 100000, RngStream(Seed256::from_u64(9)));
  const double beta = std::tgamma(0.5) * std::tgamma(3.5) / std::tgamma(4.0);
  // Substituting x = u^2 removes the endpoint singularity.
  const double mass = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [](double u) { return 2.0 * std::pow(1.0 - u * u, 2.5); }, 0.0, std::sqrt(r.threshold));
  const double expected = mass / beta;
  EXPECT_LE(std::abs(r.probability - expected), 3 * r.std_error + 1e-12);
  EXPECT_NEAR(haar_first_weight_cdf(8, Field::Real, r.threshold), expected, 1e-9);
  // Complex marginal: 1 - (1 - s)^(W-1).
  EXPECT_NEAR(haar_first_weight_cdf(4, Field::Complex, 0.5), 1.0 - 0.125, 1e-15);
}

TEST(HaarTail, SampledWeightsPassKs) {
  RngStream rng(Seed256::from_u64(10));
  for (Field f : {Field::Real, Field::Complex}) {
    std::vector<double> w;
    for (int i = 0; i < 20000; ++i) w.push_back(haar_sphere_sample(6, f, rng).weight(0));
    EXPECT_GT(ks_test(w, [f](double s) { return haar_first_weight_cdf(6, f, s); }), 0.01);
  }
}
