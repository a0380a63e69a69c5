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

#include "kacs/haar.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "kacs/errors.hpp"

namespace kacs {

Mat2 su2_matrix(const Su2Params& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  const Complex ea = std::polar(1.0, p.alpha);
  const Complex eb = std::polar(1.0, p.beta);
  return {{{ea * c, -eb * s}, {std::conj(eb) * s, std::conj(ea) * c}}};
}

StateVector haar_sphere_sample(size_t dim, Field field, RngStream& rng) {
  if (dim < 1) throw DimensionError("sphere dimension must be at least 1");
  if (field == Field::Real) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.normal();
    return StateVector::normalized_real(std::move(v));
  }
  std::vector<Complex> v(dim);
  for (auto& z : v) {
    const double re = rng.normal();
    z = Complex(re, rng.normal());
  }
  return StateVector::normalized_complex(std::move(v));
}

Su2Params su2_from_uniforms(double u_alpha, double u_beta, double zeta) {
  return {2.0 * std::numbers::pi * u_alpha, 2.0 * std::numbers::pi * u_beta,
          std::asin(std::sqrt(zeta))};
}

Su2Params su2_haar_sample(RngStream& rng) {
  const double a = rng.uniform();
  const double b = rng.uniform();
  return su2_from_uniforms(a, b, rng.uniform());
}

TailEstimate haar_tail_probability(size_t dim, double c, Field field, size_t trials,
                                   const RngStream& rng) {
  if (!(c > 1.0)) throw ParameterError("tail exponent c must exceed 1");
  if (trials < 1) throw ParameterError("need at least one trial");
  const double base = field == Field::Real ? double(dim) : 2.0 * double(dim);
  TailEstimate out;
  out.trials = trials;
  out.threshold = std::pow(base, -3.0 * c);
  out.bound = 2.0 * std::pow(base, 1.0 - c);
  size_t hits = 0;
  for (size_t i = 0; i < trials; ++i) {
    RngStream r = rng.fork(i);
    hits += haar_sphere_sample(dim, field, r).weight(0) <= out.threshold;
  }
  const double p = double(hits) / double(trials);
  out.probability = p;
  out.std_error = std::sqrt(p * (1.0 - p) / double(trials));
  return out;
}

double haar_first_weight_cdf(size_t dim, Field field, double s) {
  if (dim < 2) throw DimensionError("marginal law needs W >= 2");
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  if (field == Field::Real) return boost::math::ibeta(0.5, 0.5 * double(dim - 1), s);
  return 1.0 - std::pow(1.0 - s, double(dim - 1));
}

}  // namespace kacs
