from __future__ import annotations


import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from definetti.exceptions import EnumerationLimitError, UnitarityError
from definetti.iid import (
    Prototype,
    apply_iid_projector,
    check_unitary,
    iid_generators,
    iid_mask,
    iid_projector,
    is_iid_vector,
    rotate_iid_projector,
)
from definetti.linalg import kron_all, random_pure_state, random_unitary


def expected_rank(n, r, d):
    # strings with at most r letters different from the prototype letter
    from math import comb

    return sum(comb(n, j) * (d - 1) ** j for j in range(r + 1))


@pytest.mark.parametrize("n,r,d", [(2, 1, 2), (3, 1, 2), (3, 2, 2), (4, 1, 3), (4, 0, 2)])
def test_rank_matches_counting(n, r, d):
    p = iid_projector(n, r, Prototype.basis(d))
    assert p.rank == expected_rank(n, r, d)


def test_rank_by_brute_force_span():
    # rank of the raw generating set, computed independently of the projector
    gens = iid_generators(3, 1, Prototype(np.array([1, 1j]) / np.sqrt(2)))
    assert np.linalg.matrix_rank(gens, tol=1e-9) == 4


def test_full_r_is_identity():
    p = iid_projector(3, 3, Prototype.basis(2))
    assert np.allclose(p.matrix, np.eye(8))


def test_basis_prototype_is_diagonal_mask():
    p = iid_projector(3, 1, Prototype.basis(3))
    assert np.allclose(p.matrix, np.diag(iid_mask(3, 1, 3).astype(float)))


@pytest.mark.parametrize("n,r,d", [(3, 1, 2), (4, 2, 2), (3, 1, 3)])
def test_apply_matches_dense(n, r, d, rng):
    proto = Prototype(random_pure_state(d, rng))
    dense = iid_projector(n, r, proto).matrix
    v = rng.standard_normal((d**n, 3)) + 1j * rng.standard_normal((d**n, 3))
    assert np.allclose(apply_iid_projector(v, n, r, proto), dense @ v, atol=1e-12)


def test_rotation_covariance(rng):
    u = random_unitary(2, rng)
    base = iid_projector(3, 1, Prototype.basis(2))
    rotated = rotate_iid_projector(base, u)
    direct = iid_projector(3, 1, Prototype(u[:, 0]))
    assert np.allclose(rotated.matrix, direct.matrix, atol=1e-12)
    with pytest.raises(UnitarityError):
        check_unitary(np.ones((2, 2)))


def test_is_iid_vector_examples():
    e0, e1 = np.eye(2)
    nu = Prototype.basis(2)
    assert is_iid_vector(kron_all(e0, e1, e0), 2, nu)
    assert not is_iid_vector(kron_all(e1, e1, e0), 2, nu)
    w = (kron_all(e1, e0, e0) + kron_all(e0, e1, e0)) / np.sqrt(2)
    assert not is_iid_vector(w, 2, nu)
    assert is_iid_vector(w, 1, nu)


def test_cap():
    with pytest.raises(EnumerationLimitError):
        iid_projector(15, 1, Prototype.basis(2))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.data(), st.integers(0, 10**6))
def test_generators_lie_in_range(n, data, seed):
    r = data.draw(st.integers(0, n - 1))
    rng = np.random.default_rng(seed)
    proto = Prototype(random_pure_state(2, rng))
    p = iid_projector(n, r, proto)
    gens = iid_generators(n, r, proto).T
    assert np.allclose(p.matrix @ gens, gens, atol=1e-10)
    assert np.allclose(p.matrix @ p.matrix, p.matrix, atol=1e-10)
    # every generator is ν on n - r slots
    for g in gens.T[:5]:
        assert is_iid_vector(g, n - r, proto)


def test_projector_nested_in_r():
    proto = Prototype.basis(2)
    small, big = iid_projector(4, 1, proto).matrix, iid_projector(4, 2, proto).matrix
    assert np.allclose(big @ small, small)
