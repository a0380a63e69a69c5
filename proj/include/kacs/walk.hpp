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

// The parallel Kac walk: each step draws a uniform perfect matching and
// rotates every matched coordinate pair by an independent random angle.

#include <vector>

#include "kacs/core.hpp"
#include "kacs/haar.hpp"

namespace kacs {

/// One step of the walk. Real steps use only `theta` of each entry (a plane
/// rotation, which is U(0, 0, theta)); complex steps use all three.
struct WalkStepRecord {
  size_t step = 0;
  Matching matching;
  std::vector<Su2Params> angles;
};

/// (v[i], v[j]) <- (cos t v[i] - sin t v[j], sin t v[i] + cos t v[j]).
void kac_rotate_pair(StateVector& state, size_t i, size_t j, double theta);
/// (v[i], v[j]) <- U(alpha, beta, theta) (v[i], v[j]).
void kac_rotate_pair_complex(StateVector& state, size_t i, size_t j, const Su2Params& u);

/// Rotates every pair of `matching`; angles[k] drives pair k.
void parallel_step(StateVector& state, const Matching& matching,
                   const std::vector<Su2Params>& angles);

/// Angle for pair k of a step, read from word block k of `lane` so the
/// draw does not depend on the order pairs are visited.
Su2Params pair_angles(Field field, const RngStream& lane, size_t k);

/// Matching and angles of step t. Layout: s = rng.fork(t), matching from
/// s.fork(0), angles from s.fork(1).block(k).
WalkStepRecord sample_step(size_t dim, Field field, const RngStream& rng, size_t t);

struct WalkResult {
  StateVector state;
  std::vector<WalkStepRecord> trace;
};

/// T independent steps starting at state0. The trace is only filled when
/// `record` is set.
WalkResult run_walk(const StateVector& state0, size_t steps, const RngStream& rng,
                    bool record = false);

}  // namespace kacs
