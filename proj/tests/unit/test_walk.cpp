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
#include <numbers>

#include "kacs/analysis.hpp"
#include "kacs/haar.hpp"
#include "kacs/walk.hpp"

using namespace kacs;
constexpr double kPi = std::numbers::pi;

TEST(KacRotate, Examples) {
  StateVector s = StateVector::from_real({0.6, 0.8});
  kac_rotate_pair(s, 0, 1, 0.0);
  EXPECT_EQ(s.real()[0], 0.6);
  kac_rotate_pair(s, 0, 1, kPi / 4);
  EXPECT_NEAR(s.real()[0], -0.1414213562373095, 1e-15);
  EXPECT_NEAR(s.real()[1], 0.9899494936611666, 1e-15);

  StateVector e = StateVector::basis(Field::Real, 2, 0);
  kac_rotate_pair(e, 0, 1, kPi / 2);
  EXPECT_NEAR(e.real()[0], 0.0, 1e-15);
  EXPECT_NEAR(e.real()[1], 1.0, 1e-15);
}

TEST(KacRotate, ComplexMatchesDenseMultiply) {
  StateVector e = StateVector::basis(Field::Complex, 2, 0);
  kac_rotate_pair_complex(e, 0, 1, {0, 0, 0});
  EXPECT_EQ(e, StateVector::basis(Field::Complex, 2, 0));
  kac_rotate_pair_complex(e, 0, 1, {0, 0, kPi / 2});
  EXPECT_NEAR(std::abs(e.complex()[1] - Complex(1, 0)), 0.0, 1e-15);

  RngStream rng(Seed256::from_u64(1));
  for (int t = 0; t < 200; ++t) {
    const StateVector psi = haar_sphere_sample(6, Field::Complex, rng);
    const Su2Params u = su2_haar_sample(rng);
    const size_t i = rng.below(6);
    const size_t j = (i + 1 + rng.below(5)) % 6;
    // U = [[e^{ia} cos, -e^{ib} sin], [e^{-ib} sin, e^{-ia} cos]].
    const Complex ea = std::polar(1.0, u.alpha), eb = std::polar(1.0, u.beta);
    const double c = std::cos(u.theta), s = std::sin(u.theta);
    const Complex a = psi.amplitude(i), b = psi.amplitude(j);
    const Complex ni = ea * c * a - eb * s * b;
    const Complex nj = std::conj(eb) * s * a + std::conj(ea) * c * b;
    StateVector out = psi;
    kac_rotate_pair_complex(out, i, j, u);
    EXPECT_LT(std::abs(out.amplitude(i) - ni), 1e-15);
    EXPECT_LT(std::abs(out.amplitude(j) - nj), 1e-15);
    EXPECT_NEAR(out.norm(), 1.0, 1e-12);
  }
}

TEST(ParallelStep, QuarterTurnExample) {
  StateVector s = StateVector::basis(Field::Real, 4, 0);
  const Matching m = Matching::from_pairs(4, {{0, 1}, {2, 3}});
  parallel_step(s, m, {{0, 0, kPi / 2}, {0, 0, kPi}});
  EXPECT_NEAR(s.real()[0], 0.0, 1e-15);
  EXPECT_NEAR(s.real()[1], 1.0, 1e-15);
  StateVector z = StateVector::basis(Field::Real, 4, 3);
  parallel_step(z, m, {{}, {}});
  EXPECT_EQ(z, StateVector::basis(Field::Real, 4, 3));
}

TEST(ParallelStep, EqualsSequentialCompositionInAnyOrder) {
  RngStream rng(Seed256::from_u64(2));
  for (Field f : {Field::Real, Field::Complex}) {
    for (int t = 0; t < 50; ++t) {
      const StateVector psi = haar_sphere_sample(8, f, rng);
      const Matching m = sample_matching(8, rng);
      std::vector<Su2Params> angles;
      for (int k = 0; k < 4; ++k) angles.push_back(su2_haar_sample(rng));
      if (f == Field::Real) {
        for (auto& a : angles) a.alpha = a.beta = 0;
      }
      StateVector par = psi;
      parallel_step(par, m, angles);
      auto order = random_permutation(4, rng);
      StateVector seq = psi;
      for (uint32_t k : order) {
        if (f == Field::Real) {
          kac_rotate_pair(seq, m[k].first, m[k].second, angles[k].theta);
        } else {
          kac_rotate_pair_complex(seq, m[k].first, m[k].second, angles[k]);
        }
      }
      EXPECT_LT(max_amplitude_difference(par, seq), 1e-15);
    }
  }
}

TEST(RunWalk, ZeroStepsAndTraceReplay) {
  const StateVector e0 = StateVector::basis(Field::Complex, 8, 0);
  const RngStream rng(Seed256::from_u64(3));
  const auto none = run_walk(e0, 0, rng, true);
  EXPECT_EQ(none.state, e0);
  EXPECT_TRUE(none.trace.empty());

  const auto run = run_walk(e0, 5, rng, true);
  ASSERT_EQ(run.trace.size(), 5u);
  StateVector replay = e0;
  for (size_t t = 0; t < 5; ++t) {
    const auto rec = sample_step(8, Field::Complex, rng, t);
    EXPECT_EQ(rec.matching, run.trace[t].matching);
    parallel_step(replay, rec.matching, rec.angles);
    for (const auto& a : rec.angles) {
      EXPECT_GE(a.theta, 0.0);
      EXPECT_LE(a.theta, kPi / 2);
    }
  }
  EXPECT_EQ(replay, run.state);
  EXPECT_EQ(run_walk(e0, 5, rng).state, run.state);
}

TEST(RunWalk, CircleIsHaarAfterOneStep) {
  const StateVector e0 = StateVector::basis(Field::Real, 2, 0);
  std::vector<double> w;
  const RngStream rng(Seed256::from_u64(4));
  for (uint64_t i = 0; i < 20000; ++i) w.push_back(run_walk(e0, 7, rng.fork(i)).state.weight(0));
  EXPECT_GT(ks_test(w, [](double s) { return haar_first_weight_cdf(2, Field::Real, s); }), 0.01);
}

TEST(RunWalk, FirstWeightMixesAtPresetSteps) {
  const size_t steps = 10 * 3 * 6;
  const StateVector e0 = StateVector::basis(Field::Real, 64, 0);
  const RngStream rng(Seed256::from_u64(5));
  const auto w = run_trials(10000, [&](size_t i) { return run_walk(e0, steps, rng.fork(i)).state.weight(0); });
  RunningStats s;
  for (double x : w) s.add(x);
  EXPECT_LE(std::abs(s.mean() - 1.0 / 64), 3 * s.std_error());
}

TEST(RunWalk, RejectsOddDimension) {
  const StateVector e = StateVector::basis(Field::Real, 3, 0);
  EXPECT_THROW(run_walk(e, 1, RngStream(Seed256::from_u64(0))), std::exception);
}
