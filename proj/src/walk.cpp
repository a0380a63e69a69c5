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

#include "kacs/walk.hpp"

#include <cmath>
#include <numbers>

#include "kacs/errors.hpp"

namespace kacs {

namespace {

void check_pair(const StateVector& state, size_t i, size_t j) {
  if (i >= state.dim() || j >= state.dim()) throw IndexError("pair index out of range");
  if (i == j) throw IndexError("a rotation needs two distinct coordinates");
}

}  // namespace

void kac_rotate_pair(StateVector& state, size_t i, size_t j, double theta) {
  check_pair(state, i, j);
  auto v = state.real();
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double a = v[i];
  const double b = v[j];
  v[i] = c * a - s * b;
  v[j] = s * a + c * b;
}

void kac_rotate_pair_complex(StateVector& state, size_t i, size_t j, const Su2Params& u) {
  check_pair(state, i, j);
  auto v = state.complex();
  const Mat2 m = su2_matrix(u);
  const Complex a = v[i];
  const Complex b = v[j];
  v[i] = m[0][0] * a + m[0][1] * b;
  v[j] = m[1][0] * a + m[1][1] * b;
}

void parallel_step(StateVector& state, const Matching& matching,
                   const std::vector<Su2Params>& angles) {
  if (matching.dim() != state.dim()) throw DimensionError("matching and state dimensions differ");
  if (angles.size() != matching.size()) throw ParameterError("need one angle set per matched pair");
  const bool real = state.is_real();
  for (size_t k = 0; k < matching.size(); ++k) {
    const auto [i, j] = matching[k];
    if (real) {
      kac_rotate_pair(state, i, j, angles[k].theta);
    } else {
      kac_rotate_pair_complex(state, i, j, angles[k]);
    }
  }
}

Su2Params pair_angles(Field field, const RngStream& lane, size_t k) {
  const auto w = lane.block(k);
  if (field == Field::Real) return {0.0, 0.0, 2.0 * std::numbers::pi * to_unit_interval(w[0])};
  return su2_from_uniforms(to_unit_interval(w[0]), to_unit_interval(w[1]), to_unit_interval(w[2]));
}

WalkStepRecord sample_step(size_t dim, Field field, const RngStream& rng, size_t t) {
  const RngStream s = rng.fork(t);
  RngStream pick = s.fork(0);
  WalkStepRecord rec{t, sample_matching(dim, pick), {}};
  const RngStream lane = s.fork(1);
  rec.angles.resize(dim / 2);
  for (size_t k = 0; k < dim / 2; ++k) rec.angles[k] = pair_angles(field, lane, k);
  return rec;
}

WalkResult run_walk(const StateVector& state0, size_t steps, const RngStream& rng, bool record) {
  WalkResult out{state0, {}};
  for (size_t t = 0; t < steps; ++t) {
    WalkStepRecord rec = sample_step(state0.dim(), state0.field(), rng, t);
    parallel_step(out.state, rec.matching, rec.angles);
    if (record) out.trace.push_back(std::move(rec));
  }
  return out;
}

}  // namespace kacs
