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

#include "kacs/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kacs/errors.hpp"

namespace kacs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_pair(const CoupledPair& pair) {
  if (pair.x.field() != pair.y.field()) throw ParameterError("coupled chains must share a field");
  if (pair.x.dim() != pair.y.dim()) throw DimensionError("coupled chains must share a dimension");
}

// Point on the circle of radius l at angle phi.
inline void place_real(std::span<double> v, size_t i, size_t j, double l, double phi) {
  v[i] = l * std::cos(phi);
  v[j] = l * std::sin(phi);
}

// l (e^{i alpha} cos theta, e^{-i beta} sin theta), the image of (l, 0)
// under U(alpha, beta, theta). Callers pass cos/sin directly.
inline void place_complex(std::span<Complex> v, size_t i, size_t j, double l, double alpha,
                          double beta, double cos_t, double sin_t) {
  v[i] = std::polar(l * cos_t, alpha);
  v[j] = std::polar(l * sin_t, -beta);
}

int quadrant(double theta) {
  return std::clamp(static_cast<int>(theta / (0.5 * std::numbers::pi)), 0, 3);
}

// Angle in the given quadrant with cos^2 = x.
double angle_in_quadrant(double x, int q) {
  const double phi = std::acos(std::sqrt(std::clamp(x, 0.0, 1.0)));
  switch (q) {
    case 0: return phi;
    case 1: return std::numbers::pi - phi;
    case 2: return std::numbers::pi + phi;
    default: return kTwoPi - phi;
  }
}

}  // namespace

double contraction_statistic(const StateVector& x, const StateVector& y) {
  if (x.dim() != y.dim()) throw DimensionError("state dimensions differ");
  double s = 0.0;
  for (size_t i = 0; i < x.dim(); ++i) {
    const double d = x.weight(i) - y.weight(i);
    s += d * d;
  }
  return s;
}

double weight_l1(const StateVector& x, const StateVector& y) {
  if (x.dim() != y.dim()) throw DimensionError("state dimensions differ");
  double s = 0.0;
  for (size_t i = 0; i < x.dim(); ++i) s += std::abs(x.weight(i) - y.weight(i));
  return s;
}

// ---------------------------------------------------------------------------
// Proportional couplings

void proportional_pair_real(CoupledPair& pair, size_t i, size_t j, double theta) {
  auto x = pair.x.real();
  auto y = pair.y.real();
  const double lx = std::hypot(x[i], x[j]);
  const double ly = std::hypot(y[i], y[j]);
  // atan2(0, 0) = 0, so a zero pair simply gets the uniform direction.
  const double phi = std::atan2(x[j], x[i]) + theta;
  place_real(x, i, j, lx, phi);
  place_real(y, i, j, ly, phi);
}

void proportional_pair_complex(CoupledPair& pair, size_t i, size_t j, const Su2Params& u) {
  auto x = pair.x.complex();
  auto y = pair.y.complex();
  const double lx = std::sqrt(std::norm(x[i]) + std::norm(x[j]));
  const double ly = std::sqrt(std::norm(y[i]) + std::norm(y[j]));
  const double c = std::cos(u.theta);
  const double s = std::sin(u.theta);
  place_complex(x, i, j, lx, u.alpha, u.beta, c, s);
  place_complex(y, i, j, ly, u.alpha, u.beta, c, s);
}

void proportional_step(CoupledPair& pair, const Matching& matching, const RngStream& lane) {
  check_pair(pair);
  if (matching.dim() != pair.x.dim()) throw DimensionError("matching and state dimensions differ");
  const Field field = pair.x.field();
  for (size_t k = 0; k < matching.size(); ++k) {
    const auto [i, j] = matching[k];
    const Su2Params a = pair_angles(field, lane, k);
    if (field == Field::Real) {
      proportional_pair_real(pair, i, j, a.theta);
    } else {
      proportional_pair_complex(pair, i, j, a);
    }
  }
}

void run_proportional(CoupledPair& pair, size_t steps, const RngStream& rng,
                      std::vector<double>* stats) {
  check_pair(pair);
  const size_t dim = pair.x.dim();
  if (stats) {
    stats->assign(steps + 1, 0.0);
    (*stats)[0] = contraction_statistic(pair.x, pair.y);
  }
  for (size_t t = 0; t < steps; ++t) {
    const RngStream s = rng.fork(t);
    RngStream pick = s.fork(0);
    proportional_step(pair, sample_matching(dim, pick), s.fork(1));
    if (stats) (*stats)[t + 1] = contraction_statistic(pair.x, pair.y);
  }
}

// ---------------------------------------------------------------------------
// Good-distance couplings
//
// Both are maximal couplings realized by rejection: draw S from its law p;
// keep S' = S with probability min(1, q(S)/p(S)); otherwise draw S' from
// the residual of q by rejection against p.

GoodDistDraw good_dist_couple_real(double a, double b, double c, double d, RngStream& rng) {
  if (!(b > 0.0) || !(d > 0.0)) throw ParameterError("good-distance coupling needs B, D > 0");
  const double theta = rng.uniform_angle();
  if (a == c && b == d) return {theta, theta, true};
  const int q = quadrant(theta);
  const double ct = std::cos(theta);
  const double s = a + b * ct * ct;

  // The arcsine density on [lo, lo + w] is 1 / (pi sqrt((s - lo)(lo + w - s))),
  // so density ratios reduce to ratios of these products.
  const auto span = [](double v, double lo, double w) { return (v - lo) * (lo + w - v); };

  const double pa = span(s, a, b);
  const double qb = span(s, c, d);
  const double w = rng.uniform();
  if (pa > 0.0 && qb > 0.0 && w * w * qb <= pa) {
    return {theta, angle_in_quadrant((s - c) / d, q), true};
  }
  while (true) {
    const double cand = rng.uniform_angle();
    const double cc = std::cos(cand);
    const double s2 = c + d * cc * cc;
    const double p2 = span(s2, a, b);
    const double q2 = span(s2, c, d);
    const double w2 = rng.uniform();
    bool accept;
    if (p2 < 0.0) {
      accept = true;  // outside the support of p
    } else if (p2 == 0.0) {
      accept = false;  // p is infinite at its endpoints
    } else if (q2 <= 0.0) {
      accept = true;
    } else {
      accept = w2 * w2 * p2 > q2;
    }
    if (accept) return {theta, angle_in_quadrant((s2 - c) / d, q), false};
  }
}

GoodDistDraw good_dist_couple_complex(double a, double b, double c, double d, RngStream& rng) {
  if (!(b > 0.0) || !(d > 0.0)) throw ParameterError("good-distance coupling needs B, D > 0");
  const double zeta = rng.uniform();
  if (a == c && b == d) return {zeta, zeta, true};
  const double below_one = std::nextafter(1.0, 0.0);
  const double s = a + b * zeta;
  const double w = rng.uniform();
  if (s >= c && s < c + d && w * d <= b) {
    return {zeta, std::clamp((s - c) / d, 0.0, below_one), true};
  }
  while (true) {
    const double z2 = rng.uniform();
    const double s2 = c + d * z2;
    const double w2 = rng.uniform();
    if (s2 < a || s2 >= a + b || w2 * b > d) return {zeta, z2, false};
  }
}

// ---------------------------------------------------------------------------
// Partition schedules

PartitionSchedule::PartitionSchedule(size_t dim, size_t t0, std::vector<Matching> matchings)
    : dim_(dim), t0_(t0), matchings_(std::move(matchings)) {
  const size_t n = positions();
  partitions_.assign(n + 1, Partition::singletons(dim));
  merge_.assign(n, 0);
  for (size_t p = n; p-- > 0;) {
    const auto [i, j] = pair_at(p);
    const Partition& next = partitions_[p + 1];
    if (next.same_block(i, j)) {
      partitions_[p] = next;
    } else {
      partitions_[p] = next.merged(i, j);
      merge_[p] = 1;
    }
  }
}

PartitionSchedule PartitionSchedule::from_matchings(size_t dim, size_t t0,
                                                    std::vector<Matching> matchings) {
  if (dim < 2 || dim % 2 != 0) throw DimensionError("schedules need an even dimension >= 2");
  for (const auto& m : matchings) {
    if (m.dim() != dim) throw DimensionError("matching dimension differs from schedule");
  }
  return PartitionSchedule(dim, t0, std::move(matchings));
}

PartitionSchedule PartitionSchedule::build(size_t dim, size_t t0, size_t t1, const RngStream& rng) {
  if (t1 < t0) throw ParameterError("schedule end precedes its start");
  std::vector<Matching> ms;
  ms.reserve(t1 - t0);
  for (size_t t = t0; t < t1; ++t) {
    RngStream pick = rng.fork(t).fork(0);
    ms.push_back(sample_matching(dim, pick));
  }
  return from_matchings(dim, t0, std::move(ms));
}

const Matching::Pair& PartitionSchedule::pair_at(size_t p) const {
  const size_t m = dim_ / 2;
  return matchings_.at(p / m)[p % m];
}

size_t PartitionSchedule::merge_count() const {
  return static_cast<size_t>(std::count(merge_.begin(), merge_.end(), 1));
}

// ---------------------------------------------------------------------------
// Non-Markovian run

size_t EventLedger::intact_prefix() const {
  size_t p = 0;
  while (p < events.size() && events[p]) ++p;
  return p;
}

size_t EventLedger::never_drift_violations(double slack) const {
  size_t bad = 0;
  const size_t n = intact_prefix();
  for (size_t p = 0; p < n; ++p) bad += max_block_l1[p] > initial_l1 + slack;
  return bad;
}

namespace {

struct BlockAudit {
  bool weights_agree = true;
  double max_l1 = 0.0;
};

BlockAudit audit_blocks(const CoupledPair& pair, const Partition& part) {
  const size_t w = part.dim();
  std::vector<double> sx(w, 0.0), sy(w, 0.0), l1(w, 0.0);
  for (size_t i = 0; i < w; ++i) {
    const double a = pair.x.weight(i);
    const double b = pair.y.weight(i);
    const uint32_t l = part.label(i);
    sx[l] += a;
    sy[l] += b;
    l1[l] += std::abs(a - b);
  }
  BlockAudit out;
  for (size_t l = 0; l < w; ++l) {
    if (part.label(l) != l) continue;
    out.weights_agree &= std::abs(sx[l] - sy[l]) <= EventLedger::kEventTolerance;
    out.max_l1 = std::max(out.max_l1, l1[l]);
  }
  return out;
}

double block_weight_excluding(const StateVector& v, const Partition& part, size_t member) {
  double s = 0.0;
  const uint32_t l = part.label(member);
  for (size_t k = 0; k < part.dim(); ++k) {
    if (k != member && part.label(k) == l) s += v.weight(k);
  }
  return s;
}

bool is_singleton(const Partition& part, size_t i) {
  const uint32_t l = part.label(i);
  for (size_t k = 0; k < part.dim(); ++k) {
    if (k != i && part.label(k) == l) return false;
  }
  return true;
}

// Returns whether the angles coalesced (S == S').
bool merge_update_real(CoupledPair& pair, const Partition& next, size_t i, size_t j,
                       RngStream& r) {
  auto x = pair.x.real();
  auto y = pair.y.real();
  const double b = x[i] * x[i] + x[j] * x[j];
  const double d = y[i] * y[i] + y[j] * y[j];
  if (b > 0.0 && d > 0.0) {
    const double a = block_weight_excluding(pair.x, next, i);
    const double c = block_weight_excluding(pair.y, next, i);
    const GoodDistDraw g = good_dist_couple_real(a, b, c, d, r);
    place_real(x, i, j, std::sqrt(b), g.first);
    place_real(y, i, j, std::sqrt(d), g.second);
    return g.coalesced;
  }
  const double t1 = r.uniform_angle();
  place_real(x, i, j, std::sqrt(b), t1);
  place_real(y, i, j, std::sqrt(d), r.uniform_angle());
  return false;
}

bool merge_update_complex(CoupledPair& pair, const Partition& next, size_t i, size_t j,
                          RngStream& r) {
  auto x = pair.x.complex();
  auto y = pair.y.complex();
  const double b = std::norm(x[i]) + std::norm(x[j]);
  const double d = std::norm(y[i]) + std::norm(y[j]);
  const double alpha = r.uniform_angle();
  const double beta = r.uniform_angle();
  double zx, zy;
  bool coalesced = false;
  if (b > 0.0 && d > 0.0) {
    const double a = block_weight_excluding(pair.x, next, j);
    const double c = block_weight_excluding(pair.y, next, j);
    const GoodDistDraw g = good_dist_couple_complex(a, b, c, d, r);
    zx = g.first;
    zy = g.second;
    coalesced = g.coalesced;
  } else {
    zx = r.uniform();
    zy = r.uniform();
  }
  place_complex(x, i, j, std::sqrt(b), alpha, beta, std::sqrt(1.0 - zx), std::sqrt(zx));
  place_complex(y, i, j, std::sqrt(d), alpha, beta, std::sqrt(1.0 - zy), std::sqrt(zy));
  return coalesced;
}

void copy_coordinate(CoupledPair& pair, size_t i) {
  if (pair.x.is_real()) {
    pair.y.real()[i] = pair.x.real()[i];
  } else {
    pair.y.complex()[i] = pair.x.complex()[i];
  }
}

void snapshot(EventLedger& ledger, const CoupledPair& pair) {
  std::vector<double> a(pair.x.dim()), b(pair.x.dim());
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = pair.x.weight(i);
    b[i] = pair.y.weight(i);
  }
  ledger.weights_x.push_back(std::move(a));
  ledger.weights_y.push_back(std::move(b));
}

}  // namespace

NonMarkovianResult non_markovian_run(const CoupledPair& start, const PartitionSchedule& schedule,
                                     const RngStream& rng, bool record_weights) {
  check_pair(start);
  if (start.x.dim() != schedule.dim()) throw DimensionError("schedule and state dimensions differ");
  const bool real = start.x.is_real();
  const size_t n = schedule.positions();

  NonMarkovianResult out{start, {}, schedule.good_start(), false};
  CoupledPair& pair = out.pair;
  EventLedger& ledger = out.ledger;
  ledger.events.reserve(n + 1);
  ledger.max_block_l1.reserve(n + 1);
  ledger.initial_l1 = weight_l1(pair.x, pair.y);

  const auto record = [&](size_t p, bool extra_ok) {
    const BlockAudit audit = audit_blocks(pair, schedule.partition(p));
    ledger.events.push_back(audit.weights_agree && extra_ok);
    ledger.max_block_l1.push_back(audit.max_l1);
    if (record_weights) snapshot(ledger, pair);
  };
  record(0, true);
  bool intact = ledger.events[0] != 0;

  for (size_t p = 0; p < n; ++p) {
    const auto [i, j] = schedule.pair_at(p);
    const Partition& next = schedule.partition(p + 1);
    RngStream r = rng.fork(p);

    if (!out.good_start) {
      // Identical rotations for both chains.
      if (real) {
        const double theta = r.uniform_angle();
        kac_rotate_pair(pair.x, i, j, theta);
        kac_rotate_pair(pair.y, i, j, theta);
      } else {
        const Su2Params u = su2_haar_sample(r);
        kac_rotate_pair_complex(pair.x, i, j, u);
        kac_rotate_pair_complex(pair.y, i, j, u);
      }
    } else if (!schedule.is_merge(p)) {
      if (real) {
        proportional_pair_real(pair, i, j, r.uniform_angle());
      } else {
        proportional_pair_complex(pair, i, j, su2_haar_sample(r));
      }
    } else {
      ++ledger.merges;
      const bool coalesced = real ? merge_update_real(pair, next, i, j, r)
                                  : merge_update_complex(pair, next, i, j, r);
      ledger.merges_coupled += coalesced;
      if (intact && coalesced) {
        if (is_singleton(next, i)) copy_coordinate(pair, i);
        if (is_singleton(next, j)) copy_coordinate(pair, j);
      }
    }

    bool signs_ok = true;
    if (real) {
      const auto x = pair.x.real();
      const auto y = pair.y.real();
      signs_ok = x[i] * y[i] >= 0.0 && x[j] * y[j] >= 0.0;
    }
    record(p + 1, signs_ok);
    intact = intact && ledger.events.back();
  }
  out.coalesced = pair.x == pair.y;
  return out;
}

}  // namespace kacs
