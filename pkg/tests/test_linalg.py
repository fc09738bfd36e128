from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from definetti.exceptions import DimensionLimitError, PreconditionError, ShapeError, SymmetryError
from definetti.linalg import (
    DensityOperator,
    apply_local,
    hermitian_eig,
    kron_all,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    projector_from_span,
    psd_factor,
    psd_sqrt,
    random_density,
    random_unitary,
    subsystem_count,
    tensor,
    tensor_power,
    trace_norm,
    trace_norm_product,
    unitary_completion,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def test_pauli_kron_oracle():
    xx = tensor(X, X)
    # σx⊗σx swaps |00> <-> |11> and |01> <-> |10>
    expected = np.fliplr(np.eye(4))
    assert np.array_equal(xx, expected)


def test_kron_is_associative(rng):
    a, b, c = (rng.standard_normal((2, 2)) for _ in range(3))
    assert np.allclose(kron_all(a, b, c), tensor(a, tensor(b, c)))


def test_tensor_power_zero_is_scalar_one():
    assert tensor_power(X, 0).shape == (1, 1)
    assert tensor_power(np.ones(3), 0).tolist() == [1.0]


def test_tensor_cap():
    with pytest.raises(DimensionLimitError):
        tensor(np.eye(64), np.eye(64), max_entries=1000)


@pytest.mark.parametrize("dim,d,n", [(8, 2, 3), (1, 2, 0), (27, 3, 3), (16, 4, 2)])
def test_subsystem_count(dim, d, n):
    assert subsystem_count(dim, d) == n


@pytest.mark.parametrize("dim,d", [(6, 2), (10, 3)])
def test_subsystem_count_rejects(dim, d):
    with pytest.raises(ShapeError):
        subsystem_count(dim, d)


def test_partial_trace_of_product(rng):
    a = random_density(2, rng)
    b = random_density(4, rng)
    assert np.allclose(partial_trace(tensor(a, b), 2, 1), a)
    assert np.allclose(partial_trace(tensor(a, b), 2, 3), tensor(a, b))
    assert np.isclose(partial_trace(tensor(a, b), 2, 0)[0, 0], 1)


def test_partial_trace_of_bell_state():
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.allclose(partial_trace(np.outer(bell, bell), 2, 1), np.eye(2) / 2)


def test_partial_trace_shape_errors():
    with pytest.raises(ShapeError):
        partial_trace(np.eye(4)[:3], 2, 1)
    with pytest.raises(ShapeError):
        partial_trace(np.eye(4), 2, 3)


def test_trace_norm_hermitian_and_general(rng):
    assert np.isclose(trace_norm(Z), 2)
    a = rng.standard_normal((5, 5))
    assert np.isclose(trace_norm(a), np.linalg.svd(a, compute_uv=False).sum())


def test_trace_norm_of_orthogonal_pure_states():
    # full trace norm, not half of it
    assert np.isclose(trace_norm(np.diag([1.0, 0]) - np.diag([0, 1.0])), 2)


def test_trace_norm_product_matches_dense(rng):
    a = rng.standard_normal((30, 4)) + 1j * rng.standard_normal((30, 4))
    b = rng.standard_normal((30, 4)) + 1j * rng.standard_normal((30, 4))
    assert np.isclose(trace_norm_product(a, b), trace_norm(a @ b.conj().T))


def test_hermitian_eig_descending(rng):
    rho = random_density(4, rng)
    w, v = hermitian_eig(rho)
    assert np.all(np.diff(w) <= 0)
    assert np.allclose((v * w) @ v.conj().T, rho)
    with pytest.raises(SymmetryError):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_psd_sqrt_and_factor(rng):
    rho = random_density(5, rng, rank=3)
    root = psd_sqrt(rho)
    assert np.allclose(root @ root, rho)
    f = psd_factor(rho)
    assert f.shape == (5, 3)
    assert np.allclose(f @ f.conj().T, rho)
    with pytest.raises(PreconditionError):
        psd_sqrt(-np.eye(2))


def test_projector_from_span():
    p = projector_from_span([[1, 0, 0], [1, 0, 0], [1, 1, 0]])
    assert p.rank == 2
    assert np.allclose(p.matrix, np.diag([1, 1, 0]))
    empty = projector_from_span([], dim=3)
    assert empty.rank == 0 and not empty.matrix.any()
    with pytest.raises(ShapeError):
        projector_from_span([])


def test_apply_local_matches_kron(rng):
    u = random_unitary(2, rng)
    v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    assert np.allclose(apply_local(v, u, 3), tensor_power(u, 3) @ v)


def test_unitary_completion(rng):
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    u = unitary_completion(v)
    assert np.allclose(u[:, 0], v)
    assert np.allclose(u.conj().T @ u, np.eye(4))


def test_density_operator_validation():
    DensityOperator(np.eye(4) / 4, 2, 2).validate()
    with pytest.raises(ShapeError):
        DensityOperator(np.eye(4) / 4, 2, 3)
    with pytest.raises(PreconditionError):
        DensityOperator(np.eye(2), 2, 1).validate()
    with pytest.raises(PreconditionError):
        DensityOperator(np.diag([1.5, -0.5]), 2, 1).validate()
    with pytest.raises(SymmetryError):
        DensityOperator(np.array([[0.5, 0.1], [0.0, 0.5]]), 2, 1).validate()


def test_matrix_json_roundtrip(rng):
    m = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    assert np.array_equal(matrix_from_json(matrix_to_json(m)), m)
    with pytest.raises(ShapeError):
        matrix_from_json({"rows": 2, "cols": 2, "entries": [[1, 0]]})


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(2, 3), st.integers(0, 10**6))
def test_partial_trace_preserves_trace_and_positivity(keep, d, seed):
    rng = np.random.default_rng(seed)
    rho = random_density(d**3, rng)
    red = partial_trace(rho, d, keep)
    assert np.isclose(np.trace(red), 1)
    assert np.linalg.eigvalsh(red).min() > -1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_trace_norm_triangle_and_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    u = random_unitary(4, rng)
    assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-10
    assert np.isclose(trace_norm(u @ a @ u.conj().T), trace_norm(a))
