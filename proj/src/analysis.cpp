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

#include "kacs/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "json.hpp"
#include "kacs/coupling.hpp"
#include "kacs/errors.hpp"
#include "kacs/haar.hpp"

namespace kacs {

// ---------------------------------------------------------------------------
// Reports

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Within: return "within";
    case Verdict::Violated: return "violated";
    default: return "inconclusive";
  }
}

void EstimateReport::recompute_verdict() {
  if (!bound || kind == BoundKind::None || !std::isfinite(estimate) || !std::isfinite(*bound)) {
    verdict = Verdict::Inconclusive;
    return;
  }
  const double tol = 3.0 * std::hypot(std_error, bound_std_error);
  bool ok;
  switch (kind) {
    case BoundKind::Upper: ok = estimate <= *bound + tol; break;
    case BoundKind::Lower: ok = estimate >= *bound - tol; break;
    default: ok = std::abs(estimate - *bound) <= tol; break;
  }
  verdict = ok ? Verdict::Within : Verdict::Violated;
}

EstimateReport make_report(std::string name, double estimate, double std_error, size_t trials,
                           std::optional<double> bound, BoundKind kind, double bound_std_error) {
  EstimateReport r{std::move(name), estimate, std_error, trials, bound, bound_std_error, kind,
                   Verdict::Inconclusive};
  r.recompute_verdict();
  return r;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string reports_to_csv(const std::vector<EstimateReport>& reports) {
  std::ostringstream out;
  out << "name,estimate,stderr,trials,bound,verdict\n";
  for (const auto& r : reports) {
    out << r.name << ',' << fmt(r.estimate) << ',' << fmt(r.std_error) << ',' << r.trials << ','
        << (r.bound ? fmt(*r.bound) : "") << ',' << to_string(r.verdict) << '\n';
  }
  return out.str();
}

std::string reports_to_json(const std::vector<EstimateReport>& reports) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["estimate"] = r.estimate;
    j["stderr"] = r.std_error;
    j["trials"] = r.trials;
    j["bound"] = r.bound ? nlohmann::ordered_json(*r.bound) : nlohmann::ordered_json(nullptr);
    j["verdict"] = std::string(to_string(r.verdict));
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

bool all_within(const std::vector<EstimateReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const EstimateReport& r) { return r.verdict != Verdict::Violated; });
}

// ---------------------------------------------------------------------------
// Accumulation and parallel trials

void RunningStats::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / double(n_);
  m2_ += delta * (x - mean_);
}

double RunningStats::variance() const { return n_ > 1 ? m2_ / double(n_ - 1) : 0.0; }

double RunningStats::std_error() const { return n_ > 0 ? std::sqrt(variance() / double(n_)) : 0.0; }

size_t worker_count() {
  if (const char* env = std::getenv("KACS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<size_t>(v);
  }
  return std::max<size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(size_t count, const std::function<void(size_t)>& body) {
  const size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Distribution tests

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ParameterError("KS test needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, double(i + 1) / n - f, f - double(i) / n});
  }
  return d;
}

namespace {

// Kolmogorov survival function Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

double ks_p_value(double statistic, size_t n) {
  const double en = std::sqrt(double(n));
  return kolmogorov_q((en + 0.12 + 0.11 / en) * statistic);
}

double ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  const size_t n = samples.size();
  return ks_p_value(ks_statistic(std::move(samples), cdf), n);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ParameterError("KS test needs samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / double(a.size()) - double(j) / double(b.size())));
  }
  const double en = std::sqrt(double(a.size()) * double(b.size()) / double(a.size() + b.size()));
  return kolmogorov_q((en + 0.12 + 0.11 / en) * d);
}

double chi_square_p_value(const std::vector<size_t>& counts, const std::vector<double>& expected) {
  if (counts.size() != expected.size() || counts.size() < 2) {
    throw ParameterError("chi-square test needs matching count and probability vectors");
  }
  const double total = double(std::accumulate(counts.begin(), counts.end(), size_t{0}));
  double x2 = 0.0;
  for (size_t k = 0; k < counts.size(); ++k) {
    const double e = total * expected[k];
    if (!(e > 0.0)) throw ParameterError("expected counts must be positive");
    x2 += (double(counts[k]) - e) * (double(counts[k]) - e) / e;
  }
  return boost::math::gamma_q(0.5 * double(counts.size() - 1), 0.5 * x2);
}

// ---------------------------------------------------------------------------
// Estimators

std::vector<EstimateReport> contraction_curve(size_t dim, Field field, size_t l_max, size_t trials,
                                              const RngStream& rng) {
  const auto curves = run_trials(trials, [&](size_t i) {
    const RngStream tr = rng.fork(i);
    RngStream init = tr.fork(0);
    CoupledPair pair{StateVector::basis(field, dim, 0), haar_sphere_sample(dim, field, init)};
    std::vector<double> stats;
    run_proportional(pair, l_max, tr.fork(1), &stats);
    return stats;
  });
  const double rate = field == Field::Real ? 0.75 : 2.0 / 3.0;
  std::vector<EstimateReport> out;
  for (size_t l = 0; l <= l_max; ++l) {
    RunningStats s;
    for (const auto& c : curves) s.add(c[l]);
    out.push_back(make_report("contraction_l" + std::to_string(l), s.mean(), s.std_error(), trials,
                              2.0 * std::pow(rate, double(l)), BoundKind::Upper));
  }
  return out;
}

namespace {

std::vector<std::vector<double>> overlap_powers(const StateSampler& sampler, const std::vector<int>& orders,
                                                size_t pairs, const RngStream& rng) {
  return run_trials(pairs, [&](size_t i) {
    const RngStream tr = rng.fork(i);
    RngStream ra = tr.fork(0);
    RngStream rb = tr.fork(1);
    const StateVector a = sampler(ra);
    const StateVector b = sampler(rb);
    const double o = std::norm(inner_product(a, b));
    std::vector<double> v;
    for (int t : orders) v.push_back(std::pow(o, t));
    return v;
  });
}

}  // namespace

std::vector<EstimateReport> frame_potentials(const StateSampler& sampler, size_t dim, Field field,
                                             const std::vector<int>& orders, size_t pair_trials,
                                             const RngStream& rng, const std::string& name) {
  for (int t : orders) {
    if (t < 1) throw ParameterError("frame potential order must be >= 1");
  }
  const StateSampler haar = [dim, field](RngStream& r) { return haar_sphere_sample(dim, field, r); };
  const auto ens = overlap_powers(sampler, orders, pair_trials, rng.fork(0));
  const auto ref = overlap_powers(haar, orders, pair_trials, rng.fork(1));
  std::vector<EstimateReport> out;
  for (size_t k = 0; k < orders.size(); ++k) {
    RunningStats se, sr;
    for (const auto& v : ens) se.add(v[k]);
    for (const auto& v : ref) sr.add(v[k]);
    out.push_back(make_report(name + "_t" + std::to_string(orders[k]), se.mean(), se.std_error(),
                              pair_trials, sr.mean(), BoundKind::Equality, sr.std_error()));
  }
  return out;
}

namespace {

// Columns are the l-fold tensor powers of the sampled states.
Eigen::MatrixXcd tensor_power_samples(const StateSampler& sampler, int copies, size_t dim_total,
                                      size_t trials, const RngStream& rng) {
  Eigen::MatrixXcd cols(static_cast<Eigen::Index>(dim_total), static_cast<Eigen::Index>(trials));
  parallel_for(trials, [&](size_t i) {
    RngStream r = rng.fork(i);
    const StateVector s = sampler(r);
    std::vector<Complex> v{Complex(1.0)};
    for (int c = 0; c < copies; ++c) {
      std::vector<Complex> next;
      next.reserve(v.size() * s.dim());
      for (Complex a : v) {
        for (size_t k = 0; k < s.dim(); ++k) next.push_back(a * s.amplitude(k));
      }
      v = std::move(next);
    }
    for (size_t k = 0; k < v.size(); ++k) cols(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = v[k];
  });
  return cols;
}

Eigen::MatrixXcd average_state(const Eigen::MatrixXcd& cols, const Eigen::VectorXd& weights) {
  const Eigen::MatrixXcd weighted = cols * weights.cast<Complex>().asDiagonal();
  return weighted * cols.adjoint() / weights.sum();
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Eigen::VectorXd bootstrap_weights(size_t n, RngStream& rng) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (size_t k = 0; k < n; ++k) w(static_cast<Eigen::Index>(rng.below(n))) += 1.0;
  return w;
}

}  // namespace

EstimateReport average_state_distance(const StateSampler& sampler, size_t dim, Field field, int copies,
                                      size_t trials, const RngStream& rng, size_t bootstrap) {
  if (copies < 1) throw ParameterError("need at least one copy");
  if (trials < 2) throw ParameterError("need at least two samples");
  double total = 1.0;
  for (int c = 0; c < copies; ++c) total *= double(dim);
  if (total > 4096.0) {
    throw FeasibilityError("W^l = " + fmt(total) + " exceeds the dense limit of 4096");
  }
  const size_t dt = static_cast<size_t>(total);
  const StateSampler haar = [dim, field](RngStream& r) { return haar_sphere_sample(dim, field, r); };
  const auto ens = tensor_power_samples(sampler, copies, dt, trials, rng.fork(0));
  const auto ref = tensor_power_samples(haar, copies, dt, trials, rng.fork(1));
  const auto floor_set = tensor_power_samples(haar, copies, dt, trials, rng.fork(2));

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(trials));
  const Eigen::MatrixXcd rho_ref = average_state(ref, ones);
  const double estimate = trace_distance(average_state(ens, ones), rho_ref);
  const double noise_floor = trace_distance(average_state(floor_set, ones), rho_ref);

  RunningStats boot_est, boot_floor;
  const RngStream boot_rng = rng.fork(3);
  for (size_t b = 0; b < bootstrap; ++b) {
    RngStream r = boot_rng.fork(b);
    const Eigen::VectorXd we = bootstrap_weights(trials, r);
    const Eigen::VectorXd wr = bootstrap_weights(trials, r);
    const Eigen::VectorXd wf = bootstrap_weights(trials, r);
    const Eigen::MatrixXcd rr = average_state(ref, wr);
    boot_est.add(trace_distance(average_state(ens, we), rr));
    boot_floor.add(trace_distance(average_state(floor_set, wf), rr));
  }
  const double se = std::sqrt(boot_est.variance());
  const double se_floor = std::sqrt(boot_floor.variance());
  return make_report("average_state_distance_l" + std::to_string(copies), estimate, se, trials, noise_floor,
                     BoundKind::Upper, se_floor);
}

EstimateReport w1_upper_bound(size_t dim, Field field, size_t steps, double c, size_t trials,
                              const RngStream& rng) {
  const auto dists = run_trials(trials, [&](size_t i) {
    const RngStream tr = rng.fork(i);
    RngStream init = tr.fork(0);
    CoupledPair pair{StateVector::basis(field, dim, 0), haar_sphere_sample(dim, field, init)};
    run_proportional(pair, steps, tr.fork(1));
    return distance(pair.x, pair.y);
  });
  RunningStats s;
  for (double d : dists) s.add(d);
  return make_report("w1_upper_bound_T" + std::to_string(steps), s.mean(), s.std_error(), trials,
                     std::pow(double(dim), -c), BoundKind::Upper);
}

bool matchings_connected(size_t dim, const std::vector<Matching>& matchings) {
  std::vector<size_t> parent(dim);
  std::iota(parent.begin(), parent.end(), size_t{0});
  const auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  size_t components = dim;
  for (const auto& m : matchings) {
    for (const auto& [i, j] : m.pairs()) {
      const size_t a = find(i), b = find(j);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
  }
  return components == 1;
}

EstimateReport connectivity_probability(size_t dim, size_t l, double c, size_t trials,
                                        const RngStream& rng) {
  const auto disconnected = run_trials(trials, [&](size_t i) {
    const RngStream tr = rng.fork(i);
    std::vector<Matching> ms;
    for (size_t s = 0; s < l; ++s) {
      RngStream r = tr.fork(s);
      ms.push_back(sample_matching(dim, r));
    }
    return matchings_connected(dim, ms) ? 0.0 : 1.0;
  });
  RunningStats s;
  for (double x : disconnected) s.add(x);
  return make_report("disconnected_l" + std::to_string(l), s.mean(), s.std_error(), trials,
                     2.0 * std::pow(double(dim), -c), BoundKind::Upper);
}

EstimateReport haar_tail_report(size_t dim, double c, Field field, size_t trials, const RngStream& rng) {
  const TailEstimate t = haar_tail_probability(dim, c, field, trials, rng);
  return make_report(std::string("haar_tail_") + std::string(to_string(field)), t.probability, t.std_error,
                     trials, t.bound, BoundKind::Upper);
}

EstimateReport CoalescenceSummary::failure_report(double max_failure) const {
  const double p = 1.0 - frequency();
  const double se = trials ? std::sqrt(p * (1.0 - p) / double(trials)) : 0.0;
  return make_report("non_coalescence", p, se, trials, max_failure, BoundKind::Upper);
}

CoalescenceSummary coalescence_experiment(size_t dim, Field field, size_t phase1, size_t phase2,
                                          size_t trials, const RngStream& rng, bool identical_start) {
  struct Outcome {
    bool coalesced = false, good_start = false, full_chain = false;
    size_t drift = 0;
    double initial_l1 = 0.0;
  };
  const auto outcomes = run_trials(trials, [&](size_t i) {
    const RngStream tr = rng.fork(i);
    RngStream init = tr.fork(0);
    CoupledPair pair{StateVector::basis(field, dim, 0),
                     identical_start ? StateVector::basis(field, dim, 0) : haar_sphere_sample(dim, field, init)};
    run_proportional(pair, phase1, tr.fork(1));
    const auto schedule = PartitionSchedule::build(dim, phase1, phase1 + phase2, tr.fork(2));
    const auto run = non_markovian_run(pair, schedule, tr.fork(3));
    return Outcome{run.coalesced, run.good_start, run.ledger.all_events(), run.ledger.never_drift_violations(),
                   run.ledger.initial_l1};
  });
  CoalescenceSummary s;
  s.trials = trials;
  RunningStats l1;
  for (const auto& o : outcomes) {
    s.coalesced += o.coalesced;
    s.good_starts += o.good_start;
    s.full_chains += o.full_chain;
    s.coalesced_without_chain += o.coalesced && !o.full_chain;
    s.never_drift_violations += o.drift;
    l1.add(o.initial_l1);
  }
  s.mean_initial_l1 = l1.mean();
  return s;
}

GoodDistSummary good_dist_experiment(Field field, double a, double b, double c, double d, size_t draws,
                                     const RngStream& rng) {
  const auto results = run_trials(draws, [&](size_t i) {
    RngStream r = rng.fork(i);
    return field == Field::Real ? good_dist_couple_real(a, b, c, d, r) : good_dist_couple_complex(a, b, c, d, r);
  });
  std::vector<double> first, second;
  RunningStats hits;
  for (const auto& g : results) {
    first.push_back(g.first);
    second.push_back(g.second);
    hits.add(g.coalesced ? 1.0 : 0.0);
  }
  const double span = field == Field::Real ? 2.0 * std::numbers::pi : 1.0;
  const auto cdf = [span](double x) { return std::clamp(x / span, 0.0, 1.0); };
  return {draws, hits.mean(), hits.std_error(), ks_test(std::move(first), cdf), ks_test(std::move(second), cdf)};
}

}  // namespace kacs
