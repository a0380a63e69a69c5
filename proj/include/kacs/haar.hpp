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

// Exact samplers for the uniform (Haar) measure on real and complex unit
// spheres and on SU(2).

#include <array>

#include "kacs/core.hpp"

namespace kacs {

/// Parameters of the SU(2) element
///
///   U(alpha, beta, theta) = [ e^{i alpha} cos theta   -e^{i beta} sin theta  ]
///                           [ e^{-i beta} sin theta    e^{-i alpha} cos theta ]
struct Su2Params {
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
};

using Mat2 = std::array<std::array<Complex, 2>, 2>;

Mat2 su2_matrix(const Su2Params& p);

/// Normalized vector of i.i.d. standard Gaussians (2W real Gaussians for the
/// complex sphere).
StateVector haar_sphere_sample(size_t dim, Field field, RngStream& rng);

/// alpha, beta uniform on [0, 2pi), theta = arcsin(sqrt(zeta)) with zeta
/// uniform on [0, 1).
Su2Params su2_haar_sample(RngStream& rng);

/// Same law, from an explicit uniform triple (u_alpha, u_beta, zeta).
Su2Params su2_from_uniforms(double u_alpha, double u_beta, double zeta);

struct TailEstimate {
  double probability = 0.0;
  double std_error = 0.0;
  size_t trials = 0;
  double threshold = 0.0;  // |Y[0]|^2 cut-off
  double bound = 0.0;      // 2 W^(1-c) or 2 (2W)^(1-c)
};

/// Monte Carlo estimate of Pr[|Y[0]|^2 <= W^(-3c)] (real) or
/// Pr[|Y[0]|^2 <= (2W)^(-3c)] (complex) for Y Haar. Trial i uses
/// rng.fork(i). Requires c > 1.
TailEstimate haar_tail_probability(size_t dim, double c, Field field, size_t trials,
                                   const RngStream& rng);

/// Exact Pr[|Y[0]|^2 <= s] for Y Haar on the sphere. |Y[0]|^2 is
/// Beta(1/2, (W-1)/2) (real) or Beta(1, W-1) (complex).
double haar_first_weight_cdf(size_t dim, Field field, double s);

}  // namespace kacs
