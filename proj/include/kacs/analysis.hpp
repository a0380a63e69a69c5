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

// Monte Carlo estimators and tests that turn walk, coupling and circuit
// runs into verdicts.
//
// Trial i of every estimator draws its randomness from rng.fork(i) and
// results are reduced in trial order, so estimates are identical for any
// thread count.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kacs/core.hpp"

namespace kacs {

// ---------------------------------------------------------------------------
// Reports

enum class BoundKind { None, Upper, Lower, Equality };
enum class Verdict { Within, Violated, Inconclusive };

std::string_view to_string(Verdict v);

struct EstimateReport {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  size_t trials = 0;
  std::optional<double> bound;
  /// Monte Carlo error of the bound itself when it is an estimate (0 for
  /// exact bounds); folded into the verdict tolerance.
  double bound_std_error = 0.0;
  BoundKind kind = BoundKind::None;
  Verdict verdict = Verdict::Inconclusive;

  /// Upper: within iff estimate <= bound + 3 sigma. Lower: estimate >=
  /// bound - 3 sigma. Equality: |estimate - bound| <= 3 sigma. sigma
  /// combines both standard errors.
  void recompute_verdict();
};

EstimateReport make_report(std::string name, double estimate, double std_error, size_t trials,
                           std::optional<double> bound, BoundKind kind, double bound_std_error = 0.0);

std::string reports_to_csv(const std::vector<EstimateReport>& reports);
std::string reports_to_json(const std::vector<EstimateReport>& reports);
bool all_within(const std::vector<EstimateReport>& reports);

// ---------------------------------------------------------------------------
// Accumulation and parallel trials

/// Welford mean/variance accumulator.
class RunningStats {
 public:
  void add(double x);
  size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance (0 with fewer than two samples).
  double variance() const;
  double std_error() const;

 private:
  size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Worker count: KACS_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
size_t worker_count();
/// Calls body(i) for i in [0, count) on up to worker_count() threads.
/// Exceptions are rethrown on the calling thread.
void parallel_for(size_t count, const std::function<void(size_t)>& body);

/// Runs `trial` for every index in parallel and returns the results in
/// index order.
template <class Fn>
auto run_trials(size_t count, Fn trial) -> std::vector<decltype(trial(size_t{}))> {
  std::vector<decltype(trial(size_t{}))> out(count);
  parallel_for(count, [&](size_t i) { out[i] = trial(i); });
  return out;
}

// ---------------------------------------------------------------------------
// Distribution tests

/// Kolmogorov-Smirnov statistic sup |F_n - F| of the samples against cdf.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Asymptotic p-value of the one-sample KS test (Kolmogorov distribution
/// with the usual small-sample correction).
double ks_p_value(double statistic, size_t n);
double ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Two-sample KS p-value.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
/// Pearson chi-square p-value of `counts` against `expected` probabilities.
double chi_square_p_value(const std::vector<size_t>& counts, const std::vector<double>& expected);

// ---------------------------------------------------------------------------
// Estimators

using StateSampler = std::function<StateVector(RngStream&)>;

/// Mean contraction statistic after l = 0..l_max proportional steps from
/// (e_0, Haar), with bound 2 (3/4)^l (real) or 2 (2/3)^l (complex).
std::vector<EstimateReport> contraction_curve(size_t dim, Field field, size_t l_max, size_t trials,
                                              const RngStream& rng);

/// Frame potentials E |<psi, phi>|^(2t) for each order in `orders`, over
/// independent pairs from `sampler`. The bound is the same estimate for
/// Haar states drawn with rng.fork(1) (the ensemble uses rng.fork(0)).
std::vector<EstimateReport> frame_potentials(const StateSampler& sampler, size_t dim, Field field,
                                             const std::vector<int>& orders, size_t pair_trials,
                                             const RngStream& rng, const std::string& name = "frame_potential");

/// Trace distance between the l-copy average states of the ensemble and of
/// Haar, both estimated from `trials` samples; the standard error comes from
/// `bootstrap` resamples. The bound is the same statistic for two
/// independent Haar sample sets (the Monte Carlo noise floor), so a
/// matching ensemble is "within". Throws FeasibilityError when W^l > 4096.
EstimateReport average_state_distance(const StateSampler& sampler, size_t dim, Field field, int copies,
                                      size_t trials, const RngStream& rng, size_t bootstrap = 16);

/// Mean ||X_T - Y_T||_2 under the proportional coupling from (e_0, Haar),
/// an upper bound on the W1 distance to Haar. Bound W^(-c).
EstimateReport w1_upper_bound(size_t dim, Field field, size_t steps, double c, size_t trials,
                              const RngStream& rng);

/// Frequency that the union of l uniform perfect matchings on W vertices is
/// disconnected. Bound 2 W^(-c).
EstimateReport connectivity_probability(size_t dim, size_t l, double c, size_t trials,
                                        const RngStream& rng);
/// True when the union graph of the matchings is connected.
bool matchings_connected(size_t dim, const std::vector<Matching>& matchings);

/// Pr[|Y_0|^2 <= threshold] for Haar Y, bound 2 W^(1-c) or 2 (2W)^(1-c).
EstimateReport haar_tail_report(size_t dim, double c, Field field, size_t trials, const RngStream& rng);

struct CoalescenceSummary {
  size_t trials = 0;
  size_t coalesced = 0;
  size_t good_starts = 0;
  /// Coalesced trials whose event chain is broken somewhere (must be 0).
  size_t coalesced_without_chain = 0;
  /// Positions violating the per-block drift bound, summed over trials.
  size_t never_drift_violations = 0;
  /// Trials with an intact event chain at every position.
  size_t full_chains = 0;
  double mean_initial_l1 = 0.0;

  double frequency() const { return trials ? double(coalesced) / double(trials) : 0.0; }
  /// 1 - frequency as an EstimateReport with upper bound `max_failure`.
  EstimateReport failure_report(double max_failure) const;
};

/// Two-phase coupling: `phase1` proportional steps from (e_0, Haar), then
/// the non-Markovian coupling over `phase2` steps. With `identical_start`
/// the second chain starts at e_0 too.
CoalescenceSummary coalescence_experiment(size_t dim, Field field, size_t phase1, size_t phase2,
                                          size_t trials, const RngStream& rng, bool identical_start = false);

struct GoodDistSummary {
  size_t draws = 0;
  double collision_frequency = 0.0;
  double collision_std_error = 0.0;
  double ks_first = 0.0;   // KS p-value of theta (zeta) against uniform
  double ks_second = 0.0;  // KS p-value of theta' (zeta')
};

/// Repeated good-distance couplings at fixed (A, B, C, D); draw i uses
/// rng.fork(i).
GoodDistSummary good_dist_experiment(Field field, double a, double b, double c, double d, size_t draws,
                                     const RngStream& rng);

}  // namespace kacs
