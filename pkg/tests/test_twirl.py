from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from definetti.exceptions import ArgumentError, SingularScalingError
from definetti.linalg import random_unitary, tensor_power
from definetti.permutations import Permutation, permutation_unitary
from definetti.symmetric import sym_dim, sym_projector
from definetti.twirl import (
    QuadratureScheme,
    build_quadrature,
    fibonacci_sphere,
    gamma_operator,
    haar_average_pure_power,
    haar_random_states,
    symmetric_trace,
    twirl,
)


def ket(*bits):
    v = np.zeros(2 ** len(bits))
    v[int("".join(map(str, bits)), 2)] = 1
    return v


def test_twirl_of_01_projector():
    a = np.outer(ket(0, 1), ket(0, 1))
    swap = permutation_unitary(Permutation((1, 0)), 2)
    assert np.allclose(twirl(a, 2), np.eye(4) / 3 - swap / 6)


@pytest.mark.parametrize("d", [2, 3])
def test_two_copy_twirl_decomposes_into_sym_and_antisym(d, rng):
    a = rng.standard_normal((d * d, d * d)) + 1j * rng.standard_normal((d * d, d * d))
    ps = sym_projector(2, d).matrix
    pa = np.eye(d * d) - ps
    da = d * (d - 1) // 2
    expected = np.trace(ps @ a) / sym_dim(2, d) * ps + np.trace(pa @ a) / da * pa
    assert np.allclose(twirl(a, d), expected)


def test_twirl_monte_carlo_cross_check(rng):
    a = np.outer(ket(0, 1, 1), ket(0, 1, 1))
    acc = np.zeros((8, 8), dtype=complex)
    m = 4000
    for _ in range(m):
        u3 = tensor_power(random_unitary(2, rng), 3)
        acc += u3 @ a @ u3.conj().T
    assert np.max(np.abs(acc / m - twirl(a, 2))) < 0.02


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.integers(2, 3), st.integers(0, 10**6))
def test_twirl_is_invariant_projection(n, d, seed):
    rng = np.random.default_rng(seed)
    dim = d**n
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    t = twirl(a, d)
    u = tensor_power(random_unitary(d, rng), n)
    assert np.allclose(u @ t @ u.conj().T, t, atol=1e-10)
    assert np.allclose(twirl(t, d), t, atol=1e-10)
    assert np.isclose(np.trace(t), np.trace(a))


@pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (2, 3), (4, 2)])
def test_gamma_fixes_symmetric_projector(n, d, rng):
    p = sym_projector(n, d).matrix
    for _ in range(3):
        a = rng.standard_normal((d**n,) * 2) + 1j * rng.standard_normal((d**n,) * 2)
        assert np.allclose(gamma_operator(a, d) @ p, p, atol=1e-9)


def test_gamma_singular_on_antisymmetric():
    pa = np.eye(4) - sym_projector(2, 2).matrix
    assert abs(symmetric_trace(pa, 2)) < 1e-12
    with pytest.raises(SingularScalingError):
        gamma_operator(pa, 2)


def test_haar_average_of_pure_powers_matches_grid():
    q = build_quadrature(2, 2000)
    approx = q.integrate(lambda v: tensor_power(np.outer(v, v.conj()), 2))
    assert np.allclose(approx, haar_average_pure_power(2, 2), atol=1e-4)
    assert np.isclose(np.trace(haar_average_pure_power(3, 3)), 1)


def test_fibonacci_points_on_sphere():
    pts = fibonacci_sphere(500)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1)
    assert np.allclose(pts.mean(axis=0), 0, atol=1e-2)


def test_haar_states_seeded():
    a = haar_random_states(3, 10, seed=4)
    assert np.array_equal(a, haar_random_states(3, 10, seed=4))
    assert np.allclose(np.linalg.norm(a, axis=1), 1)


def test_quadrature_schemes():
    q = build_quadrature(2, 100)
    assert q.kind == "sphere-grid"
    assert np.isclose(q.weights.sum(), 1)
    assert QuadratureScheme.from_json(q.to_json()).to_json() == q.to_json()
    assert q.doubled().resolution == 200
    mc = build_quadrature(3, 50, seed=2)
    assert mc.kind == "monte-carlo"
    # the doubled Monte Carlo scheme extends the original one
    assert np.array_equal(mc.doubled().vectors[:50], mc.vectors)
    assert len(mc.nodes) == 50


@pytest.mark.parametrize("args", [(2, 1), (3, 10, "sphere-grid"), (2, 10, "simpson")])
def test_quadrature_errors(args):
    with pytest.raises(ArgumentError):
        build_quadrature(*args)
