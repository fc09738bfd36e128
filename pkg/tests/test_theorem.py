from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_symmetric_state
from definetti.catalog import build
from definetti.config import RunConfig
from definetti.exceptions import ArgumentError, PreconditionError
from definetti.iid import Prototype, iid_projector
from definetti.linalg import psd_factor, random_pure_state, tensor_power
from definetti.symmetric import sym_dim
from definetti.theorem import (
    TheoremParams,
    conditional_state,
    decomposition_defect,
    error_bound,
    gamma_bound_check,
    gamma_bruteforce,
    gamma_exact,
    gamma_exact_fraction,
    gentle_lemma_check,
    haar_conditional_average,
    haar_consistency,
    main_text_bound,
    truncated_state,
    verify_theorem,
)
from definetti.twirl import build_quadrature


def test_gamma_hand_value():
    # n = k = 1, r = 0, d = 2: only the composition with the single letter
    # of the first factor different from ν contributes
    p = TheoremParams(1, 1, 0, 2)
    assert gamma_exact_fraction(p) == Fraction(1, 6)
    assert math.isclose(gamma_bruteforce(p), 1 / 6, abs_tol=1e-12)


@pytest.mark.parametrize("n,k,r,d", [(2, 1, 0, 2), (2, 2, 1, 2), (3, 2, 1, 2), (2, 2, 0, 3), (3, 1, 2, 3)])
def test_gamma_routes_agree(n, k, r, d):
    p = TheoremParams(n, k, r, d)
    assert math.isclose(gamma_exact(p), gamma_bruteforce(p), abs_tol=1e-10)


def test_gamma_vanishes_at_r_equal_n():
    assert gamma_exact(TheoremParams(3, 2, 3, 2)) == 0


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(2, 5), st.data())
def test_gamma_bound_chain(n, k, d, data):
    r = data.draw(st.integers(0, n))
    chk = gamma_bound_check(TheoremParams(n, k, r, d))
    assert chk["gamma_le_factorial"] and chk["factorial_le_power"]
    assert chk["gamma_le_power"] and chk["power_le_exp"]


def test_params_validation():
    with pytest.raises(ArgumentError):
        TheoremParams(3, 0, 1, 2)
    with pytest.raises(ArgumentError):
        TheoremParams(3, 1, 4, 2)
    with pytest.raises(ArgumentError):
        TheoremParams(3, 1, 1, 1)


def test_error_bound_values():
    p = TheoremParams(20, 5, 3, 2)
    assert math.isclose(error_bound(p), 3 * math.exp(-5 * 4 / 25 + 2 * math.log(5)))
    assert error_bound(TheoremParams(4, 1, 1, 2)) == 3.0
    assert math.isclose(error_bound(TheoremParams(4, 1, 1, 2), trivial_k1=False), 3 * math.exp(-2 / 5))


def test_main_text_bound_shifts_r():
    assert math.isclose(main_text_bound(25, 20, 4, 2), error_bound(TheoremParams(20, 5, 3, 2)))
    with pytest.raises(ArgumentError):
        main_text_bound(5, 5, 1, 2)


def test_gentle_lemma_closed_form():
    plus = np.array([1, 1]) / np.sqrt(2)
    lhs, rhs, ok = gentle_lemma_check([(np.outer(plus, plus), np.diag([1.0, 0.0]), 1.0)])
    assert math.isclose(lhs, math.sqrt(5) / 2)
    assert math.isclose(rhs, 3 / math.sqrt(2))
    assert ok


def test_gentle_lemma_projector_fixing_state_is_tight():
    rho = np.diag([1.0, 0.0])
    lhs, rhs, ok = gentle_lemma_check([(rho, np.diag([1.0, 0.0]), 1.0)])
    assert lhs == 0 and rhs == 0 and ok


def test_conditional_state_of_iid_pure_state(rng):
    psi = random_pure_state(2, rng)
    nu = Prototype(random_pure_state(2, rng))
    p = TheoremParams(2, 2, 1, 2)
    rho = np.outer(tensor_power(psi, 4), tensor_power(psi, 4).conj())
    overlap = abs(np.vdot(nu.vector, psi)) ** 2
    expected = sym_dim(2, 2) * overlap**2 * np.outer(tensor_power(psi, 2), tensor_power(psi, 2).conj())
    assert np.allclose(conditional_state(rho, nu, p), expected)


def test_conditional_state_needs_symmetric_support():
    with pytest.raises(PreconditionError):
        conditional_state(np.eye(8) / 8, Prototype.basis(2), TheoremParams(2, 1, 1, 2))


def test_truncated_state_is_compressed(rng):
    rho = random_symmetric_state(4, 2, rng)
    p = TheoremParams(3, 1, 1, 2)
    nu = Prototype(random_pure_state(2, rng))
    cond = conditional_state(rho, nu, p)
    trunc = truncated_state(cond, nu, p)
    proj = iid_projector(3, 1, nu).matrix
    assert np.allclose(trunc, proj @ cond @ proj)
    assert np.allclose(truncated_state(cond, nu, TheoremParams(3, 1, 3, 2)), cond)


@pytest.mark.parametrize("n,k,d", [(2, 1, 2), (3, 2, 2), (2, 2, 3)])
def test_haar_consistency_exact(n, k, d, rng):
    rho = random_symmetric_state(n + k, d, rng, rank=3)
    f = psd_factor(rho)
    p = TheoremParams(n, k, 0, d)
    assert haar_consistency(f, p) < 1e-12
    assert np.isclose(np.trace(haar_conditional_average(f, p)), 1)


def test_haar_average_against_quadrature(rng):
    rho = random_symmetric_state(4, 2, rng)
    p = TheoremParams(2, 2, 2, 2)
    q = build_quadrature(2, 3000)
    approx = q.integrate(lambda v: conditional_state(rho, Prototype(v), p))
    assert np.allclose(approx, haar_conditional_average(psd_factor(rho), p), atol=1e-4)


@pytest.mark.parametrize("family", ["random", "Ex5"])
def test_defect_vanishes_without_truncation(family, rng):
    rho = random_symmetric_state(5, 2, rng) if family == "random" else build("Ex5", 5).state.matrix
    delta, diag = decomposition_defect(rho, TheoremParams(3, 2, 3, 2), build_quadrature(2, 1000))
    assert delta < 1e-3 and diag < 1e-3


def test_defect_is_not_zero_for_iid_input():
    # an i.i.d. pure input is not reproduced exactly once r < n: each node
    # only keeps the part of σ^{⊗n} within r letters of ν
    psi = np.array([1.0, 0.0])
    rho = np.outer(tensor_power(psi, 6), tensor_power(psi, 6))
    p = TheoremParams(4, 2, 1, 2)
    delta, _ = decomposition_defect(rho, p, build_quadrature(2, 1000))
    assert 0.2 < delta <= 3 * sym_dim(2, 2) * gamma_exact(p)


def test_verify_theorem_report(rng):
    rho = random_symmetric_state(5, 2, rng)
    cfg = RunConfig().replace(quadrature={"resolution": 400})
    rep = verify_theorem(rho, 2, 3, 2, 1, cfg)
    assert rep.status == "pass"
    assert not rep.purified and rep.effective_d == 2
    assert rep.delta <= rep.bound_intermediate <= rep.bound_final
    assert rep.haar_consistency < 1e-10
    assert rep.max_truncated_rank <= rep.input_rank
    data = json.loads(rep.to_json())
    assert data["config"]["quadrature"]["resolution"] == 400
    assert data["provenance"]["seed"] == 0
    assert rep.to_json() == verify_theorem(rho, 2, 3, 2, 1, cfg).to_json()


def test_verify_theorem_purifies_mixed_symmetric_states():
    rho = build("Ex2", 4).state.matrix
    cfg = RunConfig().replace(quadrature={"resolution": 200})
    rep = verify_theorem(rho, 2, 2, 2, 1, cfg)
    assert rep.purified and rep.effective_d == 4
    assert rep.quadrature["kind"] == "monte-carlo"
    assert rep.inequalities["haar_consistency"]


def test_verify_theorem_rejects_non_invariant():
    rho = np.zeros((8, 8))
    rho[1, 1] = 1
    with pytest.raises(PreconditionError):
        verify_theorem(rho, 2, 2, 1, 1)
