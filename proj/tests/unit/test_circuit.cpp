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

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "kacs/analysis.hpp"
#include "kacs/circuit.hpp"
#include "kacs/errors.hpp"
#include "kacs/haar.hpp"
#include "kacs/keyed.hpp"
#include "kacs/walk.hpp"

using namespace kacs;
constexpr double kPi = std::numbers::pi;

namespace {

GateParams random_gate(int n, Field field, AngleMode mode, int d, RngStream& rng) {
  const ScrambleConfig sc{n, 1, field, mode, d};
  return ParamSource::true_random(rng.fork(rng.next_u64())).derive(0, sc);
}

// Dense operator built straight from the 2x2 blocks
// U(a, b, t) = [[e^{ia} cos t, -e^{ib} sin t], [e^{-ib} sin t, e^{-ia} cos t]]
// placed on rows (sigma^-1(y), sigma^-1(half + y)).
Eigen::MatrixXcd dense_from_formula(const GateParams& g) {
  const size_t dim = g.sigma.size(), half = dim / 2;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (size_t y = 0; y < half; ++y) {
    double a = 0, b = 0, t;
    const double vf = g.f.fraction(y);
    if (g.field() == Field::Real) {
      t = 2 * kPi * vf;
    } else if (g.mode() == AngleMode::Continuous) {
      a = 2 * kPi * g.g->fraction(y);
      b = 2 * kPi * g.h->fraction(y);
      t = std::asin(std::sqrt(vf));
    } else {
      const int d = g.d();
      const double scale = std::ldexp(1.0, d);
      const double xi = std::floor(scale * (2 / kPi) * std::asin(std::sqrt(vf))) / scale;
      const double gp = std::floor(scale * (g.g->fraction(y) + g.h->fraction(y)) / 2) / scale;
      const double gm = std::floor(scale * (g.g->fraction(y) - g.h->fraction(y)) / 2) / scale;
      a = 2 * kPi * (gp + gm);
      b = 2 * kPi * (gp - gm);
      t = kPi / 2 * xi;
    }
    const size_t i = g.sigma.inverse(y), j = g.sigma.inverse(half + y);
    m(i, i) = std::polar(1.0, a) * std::cos(t);
    m(i, j) = -std::polar(1.0, b) * std::sin(t);
    m(j, i) = std::polar(1.0, -b) * std::sin(t);
    m(j, j) = std::polar(1.0, -a) * std::cos(t);
  }
  return m;
}

Eigen::VectorXcd to_eigen(const StateVector& s) {
  Eigen::VectorXcd v(s.dim());
  for (size_t i = 0; i < s.dim(); ++i) v(i) = s.amplitude(i);
  return v;
}

Eigen::MatrixXcd dense_by_columns(const GateParams& g) {
  const size_t dim = g.sigma.size();
  Eigen::MatrixXcd m(dim, dim);
  for (size_t x = 0; x < dim; ++x) {
    StateVector e = StateVector::basis(g.field(), dim, x);
    apply_gate(e, g);
    m.col(x) = to_eigen(e);
  }
  return m;
}

}  // namespace

TEST(Permutation, ValidationAndInverse) {
  EXPECT_THROW(Permutation::from_forward(2, {0, 1, 1, 3}), ParameterError);
  RngStream rng(Seed256::from_u64(1));
  const Permutation p = Permutation::random(5, rng);
  for (size_t x = 0; x < 32; ++x) EXPECT_EQ(p.inverse(p(x)), x);
}

TEST(RealGate, Examples) {
  StateVector s = StateVector::basis(Field::Real, 8, 3);
  apply_gate(s, GateParams::real(Permutation::identity(3), AngleTable::zeros(3, AngleMode::Discrete, 4)));
  EXPECT_EQ(s, StateVector::basis(Field::Real, 8, 3));
  // n = 1, val f = 1/4: quarter turn.
  StateVector e = StateVector::basis(Field::Real, 2, 0);
  apply_gate(e, GateParams::real(Permutation::identity(1), AngleTable::discrete(1, 2, {1})));
  EXPECT_NEAR(e.real()[0], 0.0, 1e-15);
  EXPECT_NEAR(e.real()[1], 1.0, 1e-15);
}

TEST(RealGate, MatchesParallelStepOnInducedMatching) {
  RngStream rng(Seed256::from_u64(2));
  for (int t = 0; t < 100; ++t) {
    const GateParams g = random_gate(3, Field::Real, t % 2 ? AngleMode::Discrete : AngleMode::Continuous, 12, rng);
    std::vector<Matching::Pair> pairs;
    std::vector<Su2Params> angles;
    for (size_t y = 0; y < 4; ++y) {
      pairs.emplace_back(g.sigma.inverse(y), g.sigma.inverse(4 + y));
      angles.push_back({0, 0, 2 * kPi * g.f.fraction(y)});
    }
    const StateVector psi = haar_sphere_sample(8, Field::Real, rng);
    StateVector a = psi, b = psi;
    apply_gate(a, g);
    parallel_step(b, Matching::from_pairs(8, pairs), angles);
    EXPECT_LT(max_amplitude_difference(a, b), 1e-13);
  }
}

TEST(ComplexGate, IdentityAndDenseOracle) {
  const auto zero = AngleTable::zeros(3, AngleMode::Continuous);
  StateVector s = StateVector::basis(Field::Complex, 8, 5);
  apply_gate(s, GateParams::complex(Permutation::identity(3), zero, zero, zero));
  EXPECT_EQ(s, StateVector::basis(Field::Complex, 8, 5));

  RngStream rng(Seed256::from_u64(3));
  for (int t = 0; t < 100; ++t) {
    const AngleMode mode = t % 2 ? AngleMode::Discrete : AngleMode::Continuous;
    const GateParams g = random_gate(3, Field::Complex, mode, 10, rng);
    const StateVector psi = haar_sphere_sample(8, Field::Complex, rng);
    StateVector out = psi;
    apply_gate(out, g);
    const Eigen::VectorXcd expected = dense_from_formula(g) * to_eigen(psi);
    EXPECT_LT((to_eigen(out) - expected).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(ComplexGate, PrecisionResiduals) {
  RngStream rng(Seed256::from_u64(4));
  for (int d : {4, 8, 12, 20}) {
    for (int t = 0; t < 2000; ++t) {
      const double vf = std::ldexp(double(rng.below(uint64_t{1} << d)), -d);
      const double vg = std::ldexp(double(rng.below(uint64_t{1} << d)), -d);
      const double vh = std::ldexp(double(rng.below(uint64_t{1} << d)), -d);
      const auto a = complex_discrete_angles(vf, vg, vh, d);
      const double theta = std::asin(std::sqrt(vf));
      const double alpha = 2 * kPi * vg, beta = 2 * kPi * vh;
      ASSERT_LE(std::abs(kPi / 2 * a.xi - theta), std::ldexp(kPi, -d - 1));
      ASSERT_LE(std::abs(2 * kPi * a.gamma_plus - (alpha + beta) / 2), std::ldexp(kPi, 1 - d));
      ASSERT_LE(std::abs(2 * kPi * a.gamma_minus - (alpha - beta) / 2), std::ldexp(kPi, 1 - d));
    }
  }
}

TEST(GateInverse, RoundTrip) {
  RngStream rng(Seed256::from_u64(5));
  for (Field f : {Field::Real, Field::Complex}) {
    for (AngleMode mode : {AngleMode::Discrete, AngleMode::Continuous}) {
      const GateParams g = random_gate(4, f, mode, 20, rng);
      const StateVector psi = haar_sphere_sample(16, f, rng);
      StateVector s = psi;
      apply_gate(s, g);
      apply_gate_inverse(s, g);
      EXPECT_LT(max_amplitude_difference(s, psi), 1e-14);
    }
  }
}

TEST(GateDistance, DyadicTablesGiveZero) {
  RngStream rng(Seed256::from_u64(6));
  const GateParams g = random_gate(4, Field::Real, AngleMode::Discrete, 8, rng);
  EXPECT_EQ(gate_operator_distance(g.truncated(8), g), 0.0);
  const GateParams c = random_gate(4, Field::Complex, AngleMode::Continuous, 8, rng).truncated(8);
  EXPECT_EQ(gate_operator_distance(c.truncated(8), c), 0.0);
}

TEST(GateDistance, BoundsAndDenseSvd) {
  RngStream rng(Seed256::from_u64(7));
  for (int d : {4, 8, 12}) {
    for (int t = 0; t < 100; ++t) {
      const GateParams real = random_gate(5, Field::Real, AngleMode::Continuous, d, rng);
      EXPECT_LE(gate_operator_distance(real.truncated(d), real), std::ldexp(kPi, 1 - d));
    }
  }
  for (int t = 0; t < 50; ++t) {
    const GateParams c = random_gate(4, Field::Complex, AngleMode::Continuous, 8, rng);
    const GateParams cd = c.truncated(8);
    const double closed = gate_operator_distance(cd, c);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dense_by_columns(cd) - dense_by_columns(c));
    EXPECT_NEAR(closed, svd.singularValues()(0), 1e-12);
    EXPECT_LE(closed, std::pow(2.0, 6.0 - 4.0));
  }
}

TEST(SpectralNorm, MatchesSvd) {
  RngStream rng(Seed256::from_u64(8));
  for (int t = 0; t < 200; ++t) {
    Mat2 m;
    Eigen::Matrix2cd e;
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        m[r][c] = Complex(rng.normal(), rng.normal());
        e(r, c) = m[r][c];
      }
    }
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(e);
    EXPECT_NEAR(spectral_norm_2x2(m), svd.singularValues()(0), 1e-12);
  }
}

TEST(Steering, TrivialAndUniformTargets) {
  for (Field f : {Field::Real, Field::Complex}) {
    const StateVector e0 = StateVector::basis(f, 16, 0);
    StateVector s = e0;
    const auto gates = steer_to_target(e0, e0, AngleMode::Continuous);
    EXPECT_EQ(gates.size(), f == Field::Real ? 4u : 5u);
    apply_gates(s, gates);
    EXPECT_LT(max_amplitude_difference(s, e0), 1e-12);

    std::vector<double> flat(16, 0.25);
    StateVector target = f == Field::Real ? StateVector::from_real(flat) : StateVector::from_real(flat).to_complex();
    StateVector u = e0;
    apply_gates(u, steer_to_target(e0, target, AngleMode::Continuous));
    EXPECT_LT(max_amplitude_difference(u, target), 1e-9);
  }
}

TEST(Steering, RandomTargets) {
  RngStream rng(Seed256::from_u64(9));
  for (Field f : {Field::Real, Field::Complex}) {
    const size_t gates = f == Field::Real ? 4 : 5;
    const double bound = steer_error_bound(f, gates, 20);
    EXPECT_DOUBLE_EQ(bound, f == Field::Real ? 4 * std::ldexp(kPi, -19) : 5 * std::pow(2.0, -4.0));
    for (int t = 0; t < 50; ++t) {
      const StateVector eta = haar_sphere_sample(16, f, rng);
      const StateVector xi = haar_sphere_sample(16, f, rng);
      StateVector a = eta, b = eta;
      apply_gates(a, steer_to_target(eta, xi, AngleMode::Continuous));
      apply_gates(b, steer_to_target(eta, xi, AngleMode::Discrete, 20));
      EXPECT_LT(max_amplitude_difference(a, xi), 1e-9);
      EXPECT_LE(distance(b, xi), bound);
    }
  }
}

TEST(Steering, BitToFrontMovesBit) {
  const Permutation p = bit_to_front(4, 3);
  for (size_t x = 0; x < 16; ++x) {
    // Bit t (1-based from the most significant end) becomes the leading bit.
    const size_t bit = (x >> (4 - 3)) & 1;
    EXPECT_EQ((p(x) >> 3) & 1, bit);
  }
  EXPECT_EQ(bit_to_front(4, 1), Permutation::identity(4));
  EXPECT_THROW(bit_to_front(4, 5), ParameterError);
}

TEST(Padding, EmbedAndRecover) {
  RngStream rng(Seed256::from_u64(10));
  const StateVector psi = haar_sphere_sample(8, Field::Complex, rng);
  const StateVector padded = pad_state(psi, 5);
  EXPECT_EQ(padded.dim(), 32u);
  for (size_t x = 0; x < 8; ++x) EXPECT_EQ(padded.amplitude(x << 2), psi.amplitude(x));
  EXPECT_EQ(unpad_state(padded, 3), psi);
  EXPECT_THROW(unpad_state(haar_sphere_sample(32, Field::Complex, rng), 3), std::exception);
}
