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

// Scrambler gates on n-qubit statevectors.
//
// A gate K = U_{sigma^-1} W U_sigma permutes basis states by sigma, applies
// an independent 2x2 block to every pair (0y, 1y) that differs only in the
// first (most significant) bit, and permutes back. In terms of amplitudes it
// acts on the pairs (sigma^-1(0y), sigma^-1(1y)), y in {0,1}^(n-1), which is
// one step of the parallel Kac walk on the induced matching.

#include <optional>
#include <vector>

#include "kacs/core.hpp"
#include "kacs/haar.hpp"

namespace kacs {

class Permutation {
 public:
  static Permutation identity(int n);
  /// Validates that `forward` is a bijection on {0, ..., 2^n - 1}.
  static Permutation from_forward(int n, std::vector<uint32_t> forward);
  static Permutation random(int n, RngStream& rng);

  int n() const { return n_; }
  size_t size() const { return forward_.size(); }
  uint32_t operator()(size_t x) const { return forward_[x]; }
  uint32_t inverse(size_t y) const { return inverse_[y]; }
  const std::vector<uint32_t>& forward_table() const { return forward_; }
  const std::vector<uint32_t>& inverse_table() const { return inverse_; }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.n_ == b.n_ && a.forward_ == b.forward_;
  }

 private:
  Permutation(int n, std::vector<uint32_t> forward);

  int n_;
  std::vector<uint32_t> forward_;
  std::vector<uint32_t> inverse_;
};

/// Parameters of one gate. Real gates carry f only; complex gates carry
/// f, g and h. All tables share one mode (and d when discrete).
struct GateParams {
  Permutation sigma;
  AngleTable f;
  std::optional<AngleTable> g;
  std::optional<AngleTable> h;

  Field field() const { return g ? Field::Complex : Field::Real; }
  int n() const { return sigma.n(); }
  AngleMode mode() const { return f.mode(); }
  int d() const { return f.d(); }

  static GateParams real(Permutation sigma, AngleTable f);
  static GateParams complex(Permutation sigma, AngleTable f, AngleTable g, AngleTable h);

  /// Same sigma with every table truncated to d bits.
  GateParams truncated(int d) const;

  friend bool operator==(const GateParams&, const GateParams&) = default;
};

/// {(sigma^-1(0y), sigma^-1(1y))}_y, pair y at position y.
Matching gate_matching(const Permutation& sigma);

/// Per-pair unitary parameters. Real: theta_y = 2 pi val(f(y)) (or 2 pi
/// f~(y)). Complex continuous: theta = arcsin sqrt f~, alpha = 2 pi g~,
/// beta = 2 pi h~. Complex discrete: the three-factor product
/// diag(e^{2 pi i g+}) R(pi/2 xi) diag(e^{2 pi i g-}) written as
/// U(2 pi (g+ + g-), 2 pi (g+ - g-), pi/2 xi), with xi, g+ and g- computed
/// to d fractional bits (see complex_discrete_angles).
std::vector<Su2Params> gate_angles(const GateParams& params);

struct DiscreteComplexAngles {
  double xi = 0.0;          // trunc_d((2/pi) arcsin sqrt val f)
  double gamma_plus = 0.0;  // floor_d((val g + val h) / 2)
  double gamma_minus = 0.0; // floor_d((val g - val h) / 2), may be negative
};
DiscreteComplexAngles complex_discrete_angles(double vf, double vg, double vh, int d);

void apply_kac_gate_real(StateVector& state, const GateParams& params);
void apply_kac_gate_complex(StateVector& state, const GateParams& params);
/// Dispatches on params.field(); the state field must match.
void apply_gate(StateVector& state, const GateParams& params);
void apply_gate_inverse(StateVector& state, const GateParams& params);
void apply_gates(StateVector& state, const std::vector<GateParams>& params);

/// Operator norm of K - K~ for two gates sharing sigma. Both are block
/// diagonal in the same basis, so the norm is the largest 2x2 block norm
/// (closed form for each block).
double gate_operator_distance(const GateParams& a, const GateParams& b);

/// Largest singular value of a 2x2 complex matrix.
double spectral_norm_2x2(const Mat2& m);

// ---------------------------------------------------------------------------
// Steering

/// Gates mapping eta to xi (both unit vectors of dimension 2^n, same
/// field). Real: n gates, the t-th rotates pairs that differ in bit t and
/// fixes the weight of every prefix block; complex: n + 1 gates, the last
/// two aligning every pair to (R, 0) and then to its target. In discrete
/// mode the continuous tables are truncated to d bits.
std::vector<GateParams> steer_to_target(const StateVector& eta, const StateVector& xi,
                                        AngleMode mode, int d = 0);

/// The permutation moving bit t (1-based, t = 1 is the most significant)
/// to the front: x_1..x_n -> x_t x_1..x_{t-1} x_{t+1}..x_n.
Permutation bit_to_front(int n, int t);

/// Worst-case 2-norm error of a discrete steer with `gates` gates.
double steer_error_bound(Field field, size_t gates, int d);

// ---------------------------------------------------------------------------
// Padding

/// psi (x) |0^(m-n)>: the input qubits are the leading ones.
StateVector pad_state(const StateVector& state, int m);
/// Inverse of pad_state; throws DomainError when the ancilla amplitudes
/// are not zero within `tol`.
StateVector unpad_state(const StateVector& state, int n, double tol = 1e-9);

}  // namespace kacs
