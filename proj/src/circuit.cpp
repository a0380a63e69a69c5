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

#include "kacs/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kacs/errors.hpp"

namespace kacs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// x mod 1 in [0, 1).
double frac(double x) {
  const double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double floor_to_bits(double x, int d) { return std::ldexp(std::floor(std::ldexp(x, d)), -d); }

void check_state(const StateVector& state, const GateParams& params) {
  if (state.dim() != params.sigma.size()) {
    throw DimensionError("gate acts on 2^" + std::to_string(params.n()) + " amplitudes, state has " +
                         std::to_string(state.dim()));
  }
  if (state.field() != params.field()) throw ParameterError("gate and state fields differ");
}

}  // namespace

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(int n, std::vector<uint32_t> forward)
    : n_(n), forward_(std::move(forward)), inverse_(forward_.size()) {
  for (size_t x = 0; x < forward_.size(); ++x) inverse_[forward_[x]] = static_cast<uint32_t>(x);
}

Permutation Permutation::identity(int n) {
  if (n < 1 || n > 30) throw DimensionError("qubit count must be in [1, 30]");
  std::vector<uint32_t> f(size_t{1} << n);
  for (size_t x = 0; x < f.size(); ++x) f[x] = static_cast<uint32_t>(x);
  return Permutation(n, std::move(f));
}

Permutation Permutation::from_forward(int n, std::vector<uint32_t> forward) {
  if (n < 1 || n > 30) throw DimensionError("qubit count must be in [1, 30]");
  if (forward.size() != (size_t{1} << n)) throw DimensionError("permutation table needs 2^n entries");
  std::vector<bool> hit(forward.size(), false);
  for (uint32_t v : forward) {
    if (v >= forward.size() || hit[v]) throw ParameterError("permutation table is not a bijection");
    hit[v] = true;
  }
  return Permutation(n, std::move(forward));
}

Permutation Permutation::random(int n, RngStream& rng) {
  if (n < 1 || n > 30) throw DimensionError("qubit count must be in [1, 30]");
  return Permutation(n, random_permutation(size_t{1} << n, rng));
}

// ---------------------------------------------------------------------------
// GateParams

GateParams GateParams::real(Permutation sigma, AngleTable f) {
  if (f.n() != sigma.n()) throw ParameterError("table and permutation disagree on n");
  return GateParams{std::move(sigma), std::move(f), std::nullopt, std::nullopt};
}

GateParams GateParams::complex(Permutation sigma, AngleTable f, AngleTable g, AngleTable h) {
  if (f.n() != sigma.n() || g.n() != sigma.n() || h.n() != sigma.n()) {
    throw ParameterError("table and permutation disagree on n");
  }
  if (f.mode() != g.mode() || f.mode() != h.mode() || f.d() != g.d() || f.d() != h.d()) {
    throw ParameterError("f, g and h must share mode and precision");
  }
  return GateParams{std::move(sigma), std::move(f), std::move(g), std::move(h)};
}

GateParams GateParams::truncated(int d) const {
  if (!g) return real(sigma, f.truncated(d));
  return complex(sigma, f.truncated(d), g->truncated(d), h->truncated(d));
}

Matching gate_matching(const Permutation& sigma) {
  const size_t half = sigma.size() / 2;
  std::vector<Matching::Pair> pairs(half);
  for (size_t y = 0; y < half; ++y) pairs[y] = {sigma.inverse(y), sigma.inverse(half + y)};
  return Matching::from_pairs(sigma.size(), std::move(pairs));
}

DiscreteComplexAngles complex_discrete_angles(double vf, double vg, double vh, int d) {
  return {floor_to_bits((2.0 / kPi) * std::asin(std::sqrt(vf)), d),
          floor_to_bits(0.5 * (vg + vh), d), floor_to_bits(0.5 * (vg - vh), d)};
}

std::vector<Su2Params> gate_angles(const GateParams& params) {
  const size_t half = params.f.size();
  std::vector<Su2Params> out(half);
  if (params.field() == Field::Real) {
    for (size_t y = 0; y < half; ++y) out[y].theta = kTwoPi * params.f.fraction(y);
    return out;
  }
  const AngleTable& g = *params.g;
  const AngleTable& h = *params.h;
  for (size_t y = 0; y < half; ++y) {
    const double vf = params.f.fraction(y);
    const double vg = g.fraction(y);
    const double vh = h.fraction(y);
    if (params.mode() == AngleMode::Continuous) {
      out[y] = {kTwoPi * vg, kTwoPi * vh, std::asin(std::sqrt(vf))};
    } else {
      const auto a = complex_discrete_angles(vf, vg, vh, params.d());
      out[y] = {kTwoPi * (a.gamma_plus + a.gamma_minus), kTwoPi * (a.gamma_plus - a.gamma_minus),
                0.5 * kPi * a.xi};
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Application

void apply_kac_gate_real(StateVector& state, const GateParams& params) {
  check_state(state, params);
  auto v = state.real();
  const size_t half = v.size() / 2;
  for (size_t y = 0; y < half; ++y) {
    const double theta = kTwoPi * params.f.fraction(y);
    const size_t i = params.sigma.inverse(y);
    const size_t j = params.sigma.inverse(half + y);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double a = v[i];
    const double b = v[j];
    v[i] = c * a - s * b;
    v[j] = s * a + c * b;
  }
}

void apply_kac_gate_complex(StateVector& state, const GateParams& params) {
  if (!params.g || !params.h) throw ParameterError("complex gates need g and h tables");
  check_state(state, params);
  auto v = state.complex();
  const size_t half = v.size() / 2;
  const auto angles = gate_angles(params);
  for (size_t y = 0; y < half; ++y) {
    const Mat2 m = su2_matrix(angles[y]);
    const size_t i = params.sigma.inverse(y);
    const size_t j = params.sigma.inverse(half + y);
    const Complex a = v[i];
    const Complex b = v[j];
    v[i] = m[0][0] * a + m[0][1] * b;
    v[j] = m[1][0] * a + m[1][1] * b;
  }
}

void apply_gate(StateVector& state, const GateParams& params) {
  if (params.field() == Field::Real) {
    apply_kac_gate_real(state, params);
  } else {
    apply_kac_gate_complex(state, params);
  }
}

void apply_gate_inverse(StateVector& state, const GateParams& params) {
  check_state(state, params);
  const size_t half = state.dim() / 2;
  const auto angles = gate_angles(params);
  if (params.field() == Field::Real) {
    auto v = state.real();
    for (size_t y = 0; y < half; ++y) {
      const size_t i = params.sigma.inverse(y);
      const size_t j = params.sigma.inverse(half + y);
      const double c = std::cos(angles[y].theta);
      const double s = std::sin(angles[y].theta);
      const double a = v[i];
      const double b = v[j];
      v[i] = c * a + s * b;
      v[j] = -s * a + c * b;
    }
    return;
  }
  auto v = state.complex();
  for (size_t y = 0; y < half; ++y) {
    const Mat2 m = su2_matrix(angles[y]);
    const size_t i = params.sigma.inverse(y);
    const size_t j = params.sigma.inverse(half + y);
    const Complex a = v[i];
    const Complex b = v[j];
    v[i] = std::conj(m[0][0]) * a + std::conj(m[1][0]) * b;
    v[j] = std::conj(m[0][1]) * a + std::conj(m[1][1]) * b;
  }
}

void apply_gates(StateVector& state, const std::vector<GateParams>& params) {
  for (const auto& p : params) apply_gate(state, p);
}

double spectral_norm_2x2(const Mat2& m) {
  // Largest eigenvalue of M M^H = [[p, g], [g*, q]]. The discriminant is
  // taken as a hypot so differences of nearby unitaries keep full accuracy.
  const double p = std::norm(m[0][0]) + std::norm(m[0][1]);
  const double q = std::norm(m[1][0]) + std::norm(m[1][1]);
  const double g = std::abs(m[0][0] * std::conj(m[1][0]) + m[0][1] * std::conj(m[1][1]));
  return std::sqrt(0.5 * (p + q) + std::hypot(0.5 * (p - q), g));
}

double gate_operator_distance(const GateParams& a, const GateParams& b) {
  if (!(a.sigma == b.sigma)) throw ParameterError("gates must share the permutation");
  if (a.field() != b.field()) throw ParameterError("gates must share the field");
  const auto ua = gate_angles(a);
  const auto ub = gate_angles(b);
  double worst = 0.0;
  for (size_t y = 0; y < ua.size(); ++y) {
    double dist;
    if (a.field() == Field::Real) {
      // R(x) - R(y) is sqrt(2 - 2 cos(x - y)) times a rotation.
      dist = 2.0 * std::abs(std::sin(0.5 * (ua[y].theta - ub[y].theta)));
    } else {
      const Mat2 ma = su2_matrix(ua[y]);
      const Mat2 mb = su2_matrix(ub[y]);
      Mat2 diff;
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) diff[r][c] = ma[r][c] - mb[r][c];
      }
      dist = spectral_norm_2x2(diff);
    }
    worst = std::max(worst, dist);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Steering

Permutation bit_to_front(int n, int t) {
  if (t < 1 || t > n) throw ParameterError("bit position out of range");
  const size_t size = size_t{1} << n;
  const int shift = n - t;  // position of x_t counted from the least significant end
  std::vector<uint32_t> f(size);
  for (size_t x = 0; x < size; ++x) {
    const size_t bit = (x >> shift) & 1;
    const size_t high = x >> (shift + 1);             // x_1..x_{t-1}
    const size_t low = x & ((size_t{1} << shift) - 1);  // x_{t+1}..x_n
    f[x] = static_cast<uint32_t>((bit << (n - 1)) | (high << shift) | low);
  }
  return Permutation::from_forward(n, std::move(f));
}

namespace {

// sqrt of the weight of amplitudes [start, start + len).
double block_length(const StateVector& v, size_t start, size_t len) {
  double s = 0.0;
  for (size_t k = start; k < start + len; ++k) s += v.weight(k);
  return std::sqrt(s);
}

double acos_ratio(double num, double den) {
  return den > 0.0 ? std::acos(std::clamp(num / den, 0.0, 1.0)) : 0.0;
}

double arg_fraction(Complex z) { return frac(std::arg(z) / kTwoPi); }

std::vector<GateParams> steer_real(const StateVector& eta, const StateVector& xi, int n) {
  std::vector<GateParams> out;
  StateVector cur = eta;
  const size_t half = size_t{1} << (n - 1);
  for (int t = 1; t <= n; ++t) {
    const size_t z_count = size_t{1} << (n - t);  // |{0,1}^(n-t)|
    const size_t y_count = size_t{1} << (t - 1);
    std::vector<double> table(half);
    const auto x = xi.real();
    const auto e = cur.real();
    for (size_t y = 0; y < y_count; ++y) {
      const size_t base = y * 2 * z_count;
      double alpha;
      if (t < n) {
        alpha = acos_ratio(block_length(xi, base, z_count), block_length(xi, base, 2 * z_count));
      } else {
        alpha = std::atan2(x[base + 1], x[base]);
      }
      for (size_t z = 0; z < z_count; ++z) {
        const size_t i0 = base + z;
        const size_t i1 = base + z_count + z;
        const double beta = std::atan2(e[i1], e[i0]);
        table[y * z_count + z] = frac((alpha - beta) / kTwoPi);
      }
    }
    out.push_back(GateParams::real(bit_to_front(n, t), AngleTable::continuous(n, std::move(table))));
    apply_gate(cur, out.back());
  }
  return out;
}

std::vector<GateParams> steer_complex(const StateVector& eta, const StateVector& xi, int n) {
  std::vector<GateParams> out;
  StateVector cur = eta;
  const size_t half = size_t{1} << (n - 1);
  const auto push = [&](int t, std::vector<double> f, std::vector<double> g, std::vector<double> h) {
    out.push_back(GateParams::complex(bit_to_front(n, t), AngleTable::continuous(n, std::move(f)),
                                      AngleTable::continuous(n, std::move(g)),
                                      AngleTable::continuous(n, std::move(h))));
    apply_gate(cur, out.back());
  };

  // Steps 1..n-1 fix the weight of every prefix block.
  for (int t = 1; t < n; ++t) {
    const size_t z_count = size_t{1} << (n - t);
    const size_t y_count = size_t{1} << (t - 1);
    std::vector<double> f(half), g(half), h(half);
    const auto e = cur.complex();
    for (size_t y = 0; y < y_count; ++y) {
      const size_t base = y * 2 * z_count;
      const double alpha =
          acos_ratio(block_length(xi, base, z_count), block_length(xi, base, 2 * z_count));
      for (size_t z = 0; z < z_count; ++z) {
        const Complex a = e[base + z];
        const Complex b = e[base + z_count + z];
        const double rho = acos_ratio(std::abs(a), std::hypot(std::abs(a), std::abs(b)));
        const double s = std::sin(alpha - rho);
        const size_t k = y * z_count + z;
        f[k] = s * s;
        // Rotating by |alpha - rho| goes the wrong way when alpha < rho; a
        // half-turn on the e^{i alpha} phase flips the rotation direction.
        g[k] = frac(std::arg(b) / kTwoPi + (alpha < rho ? 0.5 : 0.0));
        h[k] = arg_fraction(a);
      }
    }
    push(t, std::move(f), std::move(g), std::move(h));
  }

  // Step n sends every last-bit pair to (R, 0); step n + 1 to its target.
  std::vector<double> f(half), g(half), h(half);
  {
    const auto e = cur.complex();
    for (size_t y = 0; y < half; ++y) {
      const Complex a = e[2 * y];
      const Complex b = e[2 * y + 1];
      const double r2 = std::norm(a) + std::norm(b);
      f[y] = r2 > 0.0 ? std::norm(b) / r2 : 0.0;
      g[y] = frac(-std::arg(a) / kTwoPi);
      h[y] = frac((kPi - std::arg(b)) / kTwoPi);
    }
  }
  push(n, std::move(f), std::move(g), std::move(h));

  f.assign(half, 0.0);
  g.assign(half, 0.0);
  h.assign(half, 0.0);
  const auto x = xi.complex();
  for (size_t y = 0; y < half; ++y) {
    const Complex a = x[2 * y];
    const Complex b = x[2 * y + 1];
    const double r2 = std::norm(a) + std::norm(b);
    f[y] = r2 > 0.0 ? std::norm(b) / r2 : 0.0;
    g[y] = arg_fraction(a);
    h[y] = frac(-std::arg(b) / kTwoPi);
  }
  push(n, std::move(f), std::move(g), std::move(h));
  return out;
}

}  // namespace

std::vector<GateParams> steer_to_target(const StateVector& eta, const StateVector& xi,
                                        AngleMode mode, int d) {
  if (eta.dim() != xi.dim()) throw DimensionError("steering endpoints differ in dimension");
  if (eta.field() != xi.field()) throw ParameterError("steering endpoints differ in field");
  const int n = exact_log2(eta.dim());
  if (n < 1) throw DimensionError("steering needs at least one qubit");
  auto gates = eta.is_real() ? steer_real(eta, xi, n) : steer_complex(eta, xi, n);
  if (mode == AngleMode::Discrete) {
    for (auto& gp : gates) gp = gp.truncated(d);
  }
  return gates;
}

double steer_error_bound(Field field, size_t gates, int d) {
  const double per_gate =
      field == Field::Real ? std::ldexp(kPi, 1 - d) : std::pow(2.0, 6.0 - 0.5 * d);
  return double(gates) * per_gate;
}

// ---------------------------------------------------------------------------
// Padding

StateVector pad_state(const StateVector& state, int m) {
  const int n = exact_log2(state.dim());
  if (m < n) throw DimensionError("cannot pad to fewer qubits");
  const int shift = m - n;
  if (state.is_real()) {
    std::vector<double> out(size_t{1} << m, 0.0);
    const auto v = state.real();
    for (size_t x = 0; x < v.size(); ++x) out[x << shift] = v[x];
    return StateVector::from_real(std::move(out));
  }
  std::vector<Complex> out(size_t{1} << m, Complex{});
  const auto v = state.complex();
  for (size_t x = 0; x < v.size(); ++x) out[x << shift] = v[x];
  return StateVector::from_complex(std::move(out));
}

StateVector unpad_state(const StateVector& state, int n, double tol) {
  const int m = exact_log2(state.dim());
  if (n > m) throw DimensionError("cannot unpad to more qubits");
  const int shift = m - n;
  const size_t mask = (size_t{1} << shift) - 1;
  for (size_t x = 0; x < state.dim(); ++x) {
    if ((x & mask) != 0 && std::abs(state.amplitude(x)) > tol) {
      throw DomainError("ancilla qubits are not in |0>");
    }
  }
  if (state.is_real()) {
    std::vector<double> out(size_t{1} << n);
    for (size_t x = 0; x < out.size(); ++x) out[x] = state.real()[x << shift];
    return StateVector::normalized_real(std::move(out));
  }
  std::vector<Complex> out(size_t{1} << n);
  for (size_t x = 0; x < out.size(); ++x) out[x] = state.complex()[x << shift];
  return StateVector::normalized_complex(std::move(out));
}

}  // namespace kacs
