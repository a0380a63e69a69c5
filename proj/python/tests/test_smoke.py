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

import math

import numpy as np
import pytest

import kacs


def test_philox_known_answer():
    out = kacs.philox4x64_10([0, 0, 0, 0], [0, 0])
    assert out[0] == 0x16554D9ECA36314C


def test_rng_replay_and_fork():
    a, b = kacs.Rng(5), kacs.Rng(5)
    assert [a.next_u64() for _ in range(4)] == [b.next_u64() for _ in range(4)]
    assert kacs.Rng("00" * 32).fork(1).next_u64() != kacs.Rng("00" * 32).fork(2).next_u64()


def test_walk_preserves_norm_and_is_deterministic():
    rng = kacs.Rng(1)
    e0 = np.zeros(16)
    e0[0] = 1.0
    out = kacs.run_walk(e0, 20, rng)
    assert out.dtype == np.float64
    assert abs(np.linalg.norm(out) - 1.0) < 1e-12
    assert np.array_equal(out, kacs.run_walk(e0, 20, kacs.Rng(1)))
    trace = kacs.walk_trace(e0, 3, rng)
    assert len(trace) == 3 and len(trace[0][0]) == 8


def test_complex_walk_and_haar_state():
    psi = kacs.haar_state(8, kacs.Field.COMPLEX, kacs.Rng(2))
    assert psi.dtype == np.complex128
    out = kacs.run_walk(psi, 5, kacs.Rng(3))
    assert abs(np.linalg.norm(out) - 1.0) < 1e-12


def test_proportional_coupling_contracts():
    rng = kacs.Rng(4)
    x = np.zeros(32)
    x[0] = 1.0
    y = kacs.haar_state(32, kacs.Field.REAL, rng.fork(0))
    _, _, stats = kacs.proportional_coupling(x, y, 60, rng.fork(1))
    assert len(stats) == 61
    assert stats[-1] < stats[0]


def test_good_dist_identical_parameters():
    theta, theta2, hit = kacs.good_dist_couple(kacs.Field.REAL, 0.2, 0.3, 0.2, 0.3, kacs.Rng(6))
    assert hit and theta == theta2


def test_steer_reaches_target():
    for field in (kacs.Field.REAL, kacs.Field.COMPLEX):
        eta = kacs.haar_state(16, field, kacs.Rng(7))
        xi = kacs.haar_state(16, field, kacs.Rng(8))
        assert np.max(np.abs(kacs.steer(eta, xi) - xi)) < 1e-9
        assert np.linalg.norm(kacs.steer(eta, xi, d=20) - xi) < 0.5


@pytest.mark.parametrize("mode", ["direct", "prg_expanded", "prf_randomized"])
def test_encrypt_round_trip(mode):
    key = kacs.random_key(kacs.Rng(9))
    psi = kacs.haar_state(16, kacs.Field.COMPLEX, kacs.Rng(10))
    cipher, nonce = kacs.encrypt(psi, key, mode, rng=kacs.Rng(11))
    assert (nonce is not None) == (mode == "prf_randomized")
    plain = kacs.decrypt(cipher, key, mode, nonce=nonce)
    assert np.max(np.abs(plain - psi)) < 1e-9
    if mode != "prf_randomized":
        again, _ = kacs.encrypt(psi, key, mode)
        assert np.array_equal(cipher, again)


def test_scramble_is_keyed_and_unitary():
    psi = np.full(8, 1 / math.sqrt(8))
    key = "ab" * 32
    a = kacs.scramble(psi, key, 10)
    assert np.array_equal(a, kacs.scramble(psi, key, 10))
    assert not np.array_equal(a, kacs.scramble(psi, "cd" * 32, 10))
    assert abs(np.linalg.norm(a) - 1.0) < 1e-12


def test_run_experiment_reports():
    assert "couple-contract" in kacs.experiment_names()
    reports = kacs.run_experiment("couple-contract", 7, W=16, l_max=5, trials=500)
    assert len(reports) == 6
    assert all(r["verdict"] == "within" for r in reports)
    assert reports == kacs.run_experiment("couple-contract", 7, W=16, l_max=5, trials=500)
    curve = kacs.contraction_curve(16, kacs.Field.COMPLEX, 3, 200, kacs.Rng(1))
    assert curve[0]["bound"] == 2.0


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        kacs.run_walk(np.array([1.0, 1.0]), 1, kacs.Rng(0))
    with pytest.raises(ValueError):
        kacs.run_experiment("nope", 1)
    with pytest.raises(RuntimeError):
        kacs.run_experiment("scramble", 1, n=4, l=4, trials=4)
