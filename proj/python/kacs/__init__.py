# Copyright 2026 The kacs Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Parallel Kac walks, their couplings, and the Kac-walk state scrambler."""

from ._core import (
    DimensionError,
    DomainError,
    FeasibilityError,
    Field,
    ParameterError,
    Rng,
    contraction_curve,
    decrypt,
    encrypt,
    experiment_names,
    good_dist_couple,
    haar_state,
    philox4x64_10,
    proportional_coupling,
    random_key,
    run_experiment,
    run_walk,
    scramble,
    steer,
    walk_trace,
)

__all__ = [
    "DimensionError",
    "DomainError",
    "FeasibilityError",
    "Field",
    "ParameterError",
    "Rng",
    "contraction_curve",
    "decrypt",
    "encrypt",
    "experiment_names",
    "good_dist_couple",
    "haar_state",
    "philox4x64_10",
    "proportional_coupling",
    "random_key",
    "run_experiment",
    "run_walk",
    "scramble",
    "steer",
    "walk_trace",
]
