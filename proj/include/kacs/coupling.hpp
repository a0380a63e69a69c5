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

// Couplings of two parallel Kac walks X and Y driven by shared matchings.
//
// Proportional couplings rotate both chains so that every updated pair of Y
// points in the same direction as the matching pair of X; they contract the
// squared-amplitude difference in expectation. The non-Markovian coupling
// looks ahead at a pre-sampled block of matchings, builds partitions of the
// coordinates backwards from the last step, and at each "merge point"
// couples the angles so block weights agree exactly. Once every coordinate
// has had its final update the two chains coincide.

#include <cstdint>
#include <optional>
#include <vector>

#include "kacs/core.hpp"
#include "kacs/walk.hpp"

namespace kacs {

struct CoupledPair {
  StateVector x;
  StateVector y;
};

/// sum_i (|x_i|^2 - |y_i|^2)^2.
double contraction_statistic(const StateVector& x, const StateVector& y);
/// sum_i | |x_i|^2 - |y_i|^2 |.
double weight_l1(const StateVector& x, const StateVector& y);

// ---------------------------------------------------------------------------
// Proportional couplings

/// Real pair update: X's pair is rotated by theta; Y's pair is placed on
/// the same ray with its own length. A zero X pair gets the direction theta
/// directly, which is again uniform when theta is.
void proportional_pair_real(CoupledPair& pair, size_t i, size_t j, double theta);
/// Complex pair update: both pairs are first aligned to (l, 0) and then
/// hit by the same U(alpha, beta, theta).
void proportional_pair_complex(CoupledPair& pair, size_t i, size_t j, const Su2Params& u);

/// One coupled step; pair k draws its angle with pair_angles(field, lane, k).
void proportional_step(CoupledPair& pair, const Matching& matching, const RngStream& lane);

/// Runs `steps` proportional steps with the walk's RNG layout (so X alone
/// follows exactly the trajectory run_walk would produce in law). When
/// `stats` is given, stats[l] receives the contraction statistic after l
/// steps (entry 0 = before any step).
void run_proportional(CoupledPair& pair, size_t steps, const RngStream& rng,
                      std::vector<double>* stats = nullptr);

// ---------------------------------------------------------------------------
// Good-distance couplings

struct GoodDistDraw {
  double first = 0.0;   // theta (real) or zeta (complex) for X
  double second = 0.0;  // theta' or zeta' for Y
  bool coalesced = false;  // S == S' exactly
};

/// Couples theta, theta' uniform on [0, 2pi) so that
/// S = A + B cos^2 theta and S' = C + D cos^2 theta' agree as often as
/// possible (maximal coupling of the two arcsine laws). theta' always lies
/// in the same quadrant as theta, so cos and sin agree in sign.
/// Throws ParameterError unless B, D > 0.
GoodDistDraw good_dist_couple_real(double a, double b, double c, double d, RngStream& rng);

/// Couples zeta, zeta' uniform on [0, 1) so that A + B zeta = C + D zeta'
/// as often as possible. Throws ParameterError unless B, D > 0.
GoodDistDraw good_dist_couple_complex(double a, double b, double c, double d, RngStream& rng);

// ---------------------------------------------------------------------------
// Partition schedules

/// Update positions p = (t - T0) * W/2 + k enumerate the pair updates of the
/// steps T0..T-1 in order. partition(p) is the partition attached to the
/// state just before update p; partition(N) is all singletons.
class PartitionSchedule {
 public:
  /// Matchings for t in [T0, T) drawn as in sample_step(W, field, rng, t).
  static PartitionSchedule build(size_t dim, size_t t0, size_t t1, const RngStream& rng);
  static PartitionSchedule from_matchings(size_t dim, size_t t0, std::vector<Matching> matchings);

  size_t dim() const { return dim_; }
  size_t t0() const { return t0_; }
  size_t t1() const { return t0_ + matchings_.size(); }
  size_t steps() const { return matchings_.size(); }
  size_t positions() const { return matchings_.size() * (dim_ / 2); }
  const std::vector<Matching>& matchings() const { return matchings_; }
  const Matching::Pair& pair_at(size_t p) const;

  const Partition& partition(size_t p) const { return partitions_.at(p); }
  bool is_merge(size_t p) const { return merge_.at(p) != 0; }
  size_t merge_count() const;
  /// True when the first partition is the whole index set.
  bool good_start() const { return partitions_.front().is_whole(); }

 private:
  PartitionSchedule(size_t dim, size_t t0, std::vector<Matching> matchings);

  size_t dim_;
  size_t t0_;
  std::vector<Matching> matchings_;
  std::vector<Partition> partitions_;
  std::vector<uint8_t> merge_;
};

// ---------------------------------------------------------------------------
// Non-Markovian run

/// Per-position record of the run. Index p refers to the state before
/// update p; index N is the final state.
struct EventLedger {
  /// A(p): block weights of X and Y agree to kEventTolerance on every block
  /// of partition(p) (and, for real chains, the pair just updated has
  /// matching signs).
  std::vector<uint8_t> events;
  /// max over blocks S of partition(p) of sum_{i in S} | |X_i|^2 - |Y_i|^2 |.
  std::vector<double> max_block_l1;
  double initial_l1 = 0.0;
  size_t merges = 0;
  size_t merges_coupled = 0;
  /// |X_i|^2 and |Y_i|^2 at every position (only when requested).
  std::vector<std::vector<double>> weights_x;
  std::vector<std::vector<double>> weights_y;

  static constexpr double kEventTolerance = 1e-9;

  /// Positions whose event chain 0..p is intact.
  size_t intact_prefix() const;
  bool all_events() const { return intact_prefix() == events.size(); }
  /// Positions p in the intact prefix where some block's L1 weight gap
  /// exceeds the initial total gap by more than `slack`.
  size_t never_drift_violations(double slack = 1e-12) const;
};

struct NonMarkovianResult {
  CoupledPair pair;
  EventLedger ledger;
  bool good_start = false;
  bool coalesced = false;
};

/// Couples the chains over the schedule. At non-merge positions the
/// proportional coupling is used; at merge positions the good-distance
/// coupling matches the weight of the block containing i (real) or j
/// (complex). Whenever the event chain is intact and the angles coalesced,
/// a coordinate reaching its final update is copied from X to Y so equality
/// is exact in floating point. Without a good start both chains receive
/// identical rotations instead.
NonMarkovianResult non_markovian_run(const CoupledPair& start, const PartitionSchedule& schedule,
                                     const RngStream& rng, bool record_weights = false);

}  // namespace kacs
