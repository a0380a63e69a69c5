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

// Experiment runner behind the `kacs` command.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kacs/analysis.hpp"

namespace kacs::cli {

/// Every knob of every experiment. Unset optionals take per-experiment
/// defaults (see README).
struct ExperimentConfig {
  std::string experiment;
  std::string seed;  // decimal or 64 hex digits; required
  std::optional<size_t> W;
  std::optional<int> n;
  std::string field = "real";
  std::optional<size_t> T;
  std::optional<size_t> T0;
  std::optional<size_t> T1;
  std::optional<size_t> l;
  std::optional<size_t> l_max;
  std::optional<int> d;
  std::optional<double> c;
  double p = 2.0;
  double q = 4.0;
  double q_prime = 1.5;
  std::optional<size_t> trials;
  std::string source = "true_random";
  std::string key;  // 64 hex digits (master key)
  std::string mode = "prg_expanded";
  double max_failure = 0.1;
  std::string out;
  std::string format = "csv";
  std::string state_out;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolated = 2;

const std::vector<std::string>& experiment_names();

/// Runs the experiment and returns its reports. Throws ParameterError (and
/// the other library errors) on invalid combinations.
std::vector<EstimateReport> run_experiment(const ExperimentConfig& config);

/// Serializes reports in config.format.
std::string render(const std::vector<EstimateReport>& reports, const std::string& format);

/// Full command-line entry point; returns the process exit code.
int main(int argc, char** argv);

}  // namespace kacs::cli
