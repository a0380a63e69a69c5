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

#include "kacs/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"
#include "kacs/circuit.hpp"
#include "kacs/coupling.hpp"
#include "kacs/errors.hpp"
#include "kacs/haar.hpp"
#include "kacs/keyed.hpp"
#include "kacs/state_io.hpp"
#include "kacs/walk.hpp"

namespace kacs::cli {

namespace {

Seed256 parse_seed(const std::string& text) {
  if (text.empty()) throw ParameterError("a seed is required (--seed)");
  if (text.size() == 64) return Seed256::from_hex(text);
  size_t used = 0;
  unsigned long long v;
  try {
    v = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    throw ParameterError("seed must be a decimal integer or 64 hex digits");
  }
  if (used != text.size()) throw ParameterError("seed must be a decimal integer or 64 hex digits");
  return Seed256::from_u64(v);
}

size_t log2_ceil(size_t w) {
  size_t k = 0;
  while ((size_t{1} << k) < w) ++k;
  return k;
}

size_t check_even_dim(size_t w) {
  if (w < 2 || w % 2 != 0) throw DimensionError("W must be even and at least 2");
  return w;
}

// 10 (c + 1) log2 W, the mixing preset.
size_t mixing_steps(double c, size_t log_w) {
  return static_cast<size_t>(std::ceil(10.0 * (c + 1.0) * double(log_w)));
}

AngleMode mode_for(const std::optional<int>& d) { return d && *d == 0 ? AngleMode::Continuous : AngleMode::Discrete; }

// --- experiments -----------------------------------------------------------

std::vector<EstimateReport> walk_mix(const ExperimentConfig& c, const RngStream& rng) {
  const size_t w = check_even_dim(c.W.value_or(64));
  const Field field = parse_field(c.field);
  const size_t steps = c.T.value_or(mixing_steps(c.c.value_or(2.0), log2_ceil(w)));
  const size_t trials = c.trials.value_or(10000);
  const StateVector e0 = StateVector::basis(field, w, 0);
  const StateSampler walk = [&](RngStream& r) { return run_walk(e0, steps, r).state; };
  auto reports = frame_potentials(walk, w, field, {1, 2}, trials, rng.fork(0), "walk_frame_potential");

  const auto weights = run_trials(trials, [&](size_t i) {
    RngStream r = rng.fork(1).fork(i);
    return walk(r).weight(0);
  });
  RunningStats s;
  for (double x : weights) s.add(x);
  reports.push_back(make_report("walk_first_weight", s.mean(), s.std_error(), trials, 1.0 / double(w),
                                BoundKind::Equality));
  return reports;
}

std::vector<EstimateReport> couple_contract(const ExperimentConfig& c, const RngStream& rng) {
  const size_t w = check_even_dim(c.W.value_or(64));
  return contraction_curve(w, parse_field(c.field), c.l_max.value_or(20), c.trials.value_or(10000), rng);
}

std::vector<EstimateReport> couple_coalesce(const ExperimentConfig& c, const RngStream& rng) {
  const size_t w = check_even_dim(c.W.value_or(16));
  const auto s = coalescence_experiment(w, parse_field(c.field), c.T0.value_or(100), c.T1.value_or(20),
                                        c.trials.value_or(500), rng);
  const double f = s.frequency();
  const double se = std::sqrt(f * (1.0 - f) / double(s.trials));
  return {make_report("coalescence_frequency", f, se, s.trials, 1.0 - c.max_failure, BoundKind::Lower),
          make_report("good_start_frequency", double(s.good_starts) / double(s.trials), 0.0, s.trials,
                      std::nullopt, BoundKind::None),
          make_report("never_drift_violations", double(s.never_drift_violations), 0.0, s.trials, 0.0,
                      BoundKind::Upper),
          make_report("coalesced_without_event_chain", double(s.coalesced_without_chain), 0.0, s.trials, 0.0,
                      BoundKind::Upper)};
}

std::vector<EstimateReport> scramble_stats(const ExperimentConfig& c, const RngStream& rng) {
  ScrambleConfig sc;
  sc.n = c.n.value_or(6);
  sc.field = parse_field(c.field);
  sc.steps = c.T.value_or(mixing_steps(c.c.value_or(2.0), size_t(sc.n)));
  sc.mode = mode_for(c.d);
  sc.d = c.d.value_or(20);
  const size_t dim = size_t{1} << sc.n;
  const bool keyed = c.source == "keyed";
  if (!keyed && c.source != "true_random") throw ParameterError("source must be true_random or keyed");
  const StateVector e0 = StateVector::basis(sc.field, dim, 0);
  const StateSampler sampler = [&](RngStream& r) {
    if (keyed) {
      const Key32 master = random_key(r);
      return scramble(e0, sc, ParamSource::keyed(ScramblerKey::expand(master, sc.steps, sc.field)), false).state;
    }
    return scramble(e0, sc, ParamSource::true_random(r), false).state;
  };
  const size_t trials = c.trials.value_or(10000);
  auto out = frame_potentials(sampler, dim, sc.field, {1, 2}, trials, rng,
                              keyed ? "keyed_scramble_frame_potential" : "scramble_frame_potential");
  // --l asks for the l-copy average-state distance as well.
  if (c.l) out.push_back(average_state_distance(sampler, dim, sc.field, int(*c.l), trials, rng.fork(2)));
  return out;
}

std::vector<EstimateReport> steer(const ExperimentConfig& c, const RngStream& rng) {
  const int n = c.n.value_or(4);
  const Field field = parse_field(c.field);
  const int d = c.d.value_or(20);
  const size_t trials = c.trials.value_or(100);
  const size_t dim = size_t{1} << n;
  struct Errors {
    double continuous, discrete;
  };
  const auto errs = run_trials(trials, [&](size_t i) {
    RngStream r = rng.fork(i);
    const StateVector eta = haar_sphere_sample(dim, field, r);
    const StateVector xi = haar_sphere_sample(dim, field, r);
    StateVector a = eta;
    apply_gates(a, steer_to_target(eta, xi, AngleMode::Continuous));
    StateVector b = eta;
    apply_gates(b, steer_to_target(eta, xi, AngleMode::Discrete, d));
    return Errors{max_amplitude_difference(a, xi), distance(b, xi)};
  });
  double worst_c = 0.0, worst_d = 0.0;
  for (const auto& e : errs) {
    worst_c = std::max(worst_c, e.continuous);
    worst_d = std::max(worst_d, e.discrete);
  }
  const size_t gates = field == Field::Real ? size_t(n) : size_t(n) + 1;
  return {make_report("steer_continuous_max_error", worst_c, 0.0, trials, 1e-9, BoundKind::Upper),
          make_report("steer_discrete_max_distance", worst_d, 0.0, trials, steer_error_bound(field, gates, d),
                      BoundKind::Upper)};
}

std::vector<EstimateReport> stats(const ExperimentConfig& c, const RngStream& rng) {
  const size_t w = c.W.value_or(16);
  const double cc = c.c.value_or(2.0);
  const size_t trials = c.trials.value_or(100000);
  std::vector<EstimateReport> out{haar_tail_report(w, cc, Field::Real, trials, rng.fork(0)),
                                  haar_tail_report(w, cc, Field::Complex, trials, rng.fork(1))};

  // Shifts of exactly W^-q with both scales at least W^-p.
  const double wd = double(w);
  const double b = 2.0 * std::pow(wd, -c.p);
  const double shift = std::pow(wd, -c.q);
  const double a = 0.25;
  for (Field f : {Field::Real, Field::Complex}) {
    const auto g = good_dist_experiment(f, a, b, a + shift, b - shift, trials, rng.fork(f == Field::Real ? 2 : 3));
    const std::string tag = f == Field::Real ? "real" : "complex";
    const double bound = f == Field::Real
                             ? 1.0 - 6e3 * std::pow(wd, -std::min(c.q_prime / 2.0, c.q - 2.0 * c.q_prime))
                             : 1.0 - 3.0 * std::pow(wd, -(c.q - c.p));
    out.push_back(make_report("good_dist_collision_" + tag, g.collision_frequency, g.collision_std_error,
                              g.draws, bound, BoundKind::Lower));
    out.push_back(make_report("good_dist_ks_first_" + tag, g.ks_first, 0.0, g.draws, 0.01, BoundKind::Lower));
    out.push_back(make_report("good_dist_ks_second_" + tag, g.ks_second, 0.0, g.draws, 0.01, BoundKind::Lower));
  }
  return out;
}

std::vector<EstimateReport> enc_demo(const ExperimentConfig& c, const RngStream& rng) {
  ScrambleConfig sc;
  sc.n = c.n.value_or(4);
  sc.field = parse_field(c.field);
  sc.steps = c.T.value_or(50);
  sc.mode = mode_for(c.d);
  sc.d = c.d.value_or(20);
  const size_t dim = size_t{1} << sc.n;

  PrssKey key;
  key.mode = parse_encryption_mode(c.mode);
  RngStream key_rng = rng.fork(0);
  key.master = c.key.empty() ? random_key(key_rng) : key_from_hex(c.key);
  if (key.mode == EncryptionMode::Direct) key.full = ScramblerKey::expand(key.master, sc.steps, sc.field);

  RngStream plain_rng = rng.fork(1);
  const StateVector plain = haar_sphere_sample(dim, sc.field, plain_rng);
  RngStream nonce_rng = rng.fork(2);
  const Ciphertext c1 = prss_encrypt(plain, key, sc, &nonce_rng);
  const Ciphertext c2 = prss_encrypt(plain, key, sc, &nonce_rng);
  const double roundtrip = max_amplitude_difference(prss_decrypt(c1, key, sc), plain);
  if (!c.state_out.empty()) save_state(c.state_out, c1.state, sc.mode == AngleMode::Discrete ? sc.d : 0);

  std::vector<EstimateReport> out{
      make_report("roundtrip_max_error", roundtrip, 0.0, 1, 1e-9, BoundKind::Upper)};
  if (key.mode != EncryptionMode::PrfRandomized) {
    out.push_back(make_report("reencryption_max_difference", max_amplitude_difference(c1.state, c2.state), 0.0,
                              1, 0.0, BoundKind::Upper));
    return out;
  }
  // Fresh nonces give ciphertexts whose overlaps look like Haar overlaps.
  const size_t trials = c.trials.value_or(2000);
  const StateSampler cipher = [&](RngStream& r) { return prss_encrypt(plain, key, sc, &r).state; };
  auto fp = frame_potentials(cipher, dim, sc.field, {1}, trials, rng.fork(3), "nonce_overlap");
  out.insert(out.end(), fp.begin(), fp.end());
  return out;
}

std::vector<EstimateReport> connectivity(const ExperimentConfig& c, const RngStream& rng) {
  const size_t w = check_even_dim(c.W.value_or(16));
  const double cc = c.c.value_or(2.0);
  const size_t l = c.l.value_or(static_cast<size_t>(std::ceil(5.0 * (1.0 + cc) * std::log2(double(w)))));
  return {connectivity_probability(w, l, cc, c.trials.value_or(10000), rng)};
}

std::vector<EstimateReport> gate_error(const ExperimentConfig& c, const RngStream& rng) {
  const int n = c.n.value_or(4);
  const Field field = parse_field(c.field);
  const int d = c.d.value_or(8);
  if (d < 1) throw ParameterError("gate-error needs d >= 1");
  const size_t trials = c.trials.value_or(100);
  ScrambleConfig sc{n, 1, field, AngleMode::Continuous, d};
  const auto dist = run_trials(trials, [&](size_t i) {
    const GateParams cont = ParamSource::true_random(rng.fork(i)).derive(0, sc);
    return gate_operator_distance(cont.truncated(d), cont);
  });
  double worst = 0.0;
  for (double x : dist) worst = std::max(worst, x);
  const double bound = field == Field::Real ? std::ldexp(std::numbers::pi, 1 - d) : std::pow(2.0, 6.0 - 0.5 * d);
  return {make_report("gate_max_operator_distance", worst, 0.0, trials, bound, BoundKind::Upper)};
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"walk-mix", "couple-contract", "couple-coalesce",
                                                 "scramble", "steer",           "stats",
                                                 "enc-demo", "connectivity",    "gate-error"};
  return names;
}

std::vector<EstimateReport> run_experiment(const ExperimentConfig& config) {
  const RngStream rng(parse_seed(config.seed));
  const std::string& e = config.experiment;
  if (e == "walk-mix") return walk_mix(config, rng);
  if (e == "couple-contract") return couple_contract(config, rng);
  if (e == "couple-coalesce") return couple_coalesce(config, rng);
  if (e == "scramble") return scramble_stats(config, rng);
  if (e == "steer") return steer(config, rng);
  if (e == "stats") return stats(config, rng);
  if (e == "enc-demo") return enc_demo(config, rng);
  if (e == "connectivity") return connectivity(config, rng);
  if (e == "gate-error") return gate_error(config, rng);
  throw ParameterError("unknown experiment '" + e + "'");
}

std::string render(const std::vector<EstimateReport>& reports, const std::string& format) {
  if (format == "csv") return reports_to_csv(reports);
  if (format == "json") return reports_to_json(reports) + "\n";
  throw ParameterError("format must be csv or json");
}

int main(int argc, char** argv) {
  CLI::App app{"Parallel Kac walk and scrambler experiments"};
  app.set_config("--config", "", "TOML/INI file with option values (command-line flags override it)");
  ExperimentConfig c;
  app.add_option("experiment", c.experiment, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(experiment_names()));
  app.add_option("--seed", c.seed, "Master seed: decimal integer or 64 hex digits")->required();
  app.add_option("--W", c.W, "Vector dimension for walk/coupling experiments");
  app.add_option("--n", c.n, "Qubit count for circuit experiments");
  app.add_option("--field", c.field, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  app.add_option("--T", c.T, "Number of steps");
  app.add_option("--T0", c.T0, "Proportional-coupling steps before the non-Markovian phase");
  app.add_option("--T1", c.T1, "Steps of the non-Markovian phase");
  app.add_option("--l", c.l, "Number of matchings (connectivity) or copies (scramble)");
  app.add_option("--l-max", c.l_max, "Largest step count of the contraction curve");
  app.add_option("--d", c.d, "Precision bits (0 = continuous angles)");
  app.add_option("--c", c.c, "Exponent c of the bounds");
  app.add_option("--p", c.p, "Scale exponent p of the good-distance check");
  app.add_option("--q", c.q, "Shift exponent q of the good-distance check");
  app.add_option("--q-prime", c.q_prime, "Exponent q' of the real good-distance bound");
  app.add_option("--trials", c.trials, "Monte Carlo trials");
  app.add_option("--source", c.source, "true_random or keyed")->check(CLI::IsMember({"true_random", "keyed"}));
  app.add_option("--key", c.key, "Master key, 64 hex digits");
  app.add_option("--mode", c.mode, "direct, prg_expanded or prf_randomized")
      ->check(CLI::IsMember({"direct", "prg_expanded", "prf_randomized"}));
  app.add_option("--max-failure", c.max_failure, "Largest acceptable non-coalescence frequency");
  app.add_option("--out", c.out, "Output file (default: stdout)");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--state-out", c.state_out, "enc-demo: write the ciphertext state here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto reports = run_experiment(c);
    const std::string text = render(reports, c.format);
    if (c.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + c.out);
      f << text;
    }
    return all_within(reports) ? kExitOk : kExitViolated;
  } catch (const FeasibilityError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace kacs::cli
