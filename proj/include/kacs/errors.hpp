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

#include <stdexcept>

namespace kacs {

/// Raised when a vector, matching or circuit has an unusable dimension
/// (odd where an even one is needed, not a power of two, mismatched sizes).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for malformed parameters: wrong table sizes, bad key lengths,
/// out-of-range constants.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Value outside the mathematical domain of an operation (e.g. x >= 1 for a
/// binary fraction).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bit precision that cannot be represented exactly in a 64-bit float.
class PrecisionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A request that is well-formed but too large to evaluate densely.
class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kacs
