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

// State files.
//
// Binary layout (all integers and floats little-endian):
//   bytes 0..7   magic "KACSSTV1"
//   u32          field (0 = real, 1 = complex)
//   u32          n (the state has 2^n amplitudes)
//   u32          d (precision bits of the producing circuit; 0 if none)
//   f64 ...      amplitudes; complex states interleave re, im
//
// JSON layout: {"field": "real"|"complex", "n": n, "d": d,
//               "amplitudes": [a, ...] or [[re, im], ...]}

#include <iosfwd>
#include <string>

#include "kacs/core.hpp"

namespace kacs {

struct StateFile {
  StateVector state;
  int d = 0;
};

void write_state_binary(std::ostream& out, const StateVector& state, int d = 0);
StateFile read_state_binary(std::istream& in);

std::string state_to_json(const StateVector& state, int d = 0);
StateFile state_from_json(const std::string& text);

void save_state(const std::string& path, const StateVector& state, int d = 0);
/// Chooses the format from the extension (.json or anything else = binary).
StateFile load_state(const std::string& path);

}  // namespace kacs
