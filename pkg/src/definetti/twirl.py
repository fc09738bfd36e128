"""Exact Haar twirling through the permutation commutant, plus pure-state quadrature.

By Schur–Weyl duality the operators commuting with every ``V^{⊗n}`` are
spanned by the permutation unitaries, and ``A ↦ ∫ U^{⊗n} A (U†)^{⊗n} dU`` is
the Hilbert–Schmidt orthogonal projection onto that span.  The projection is
obtained from the Gram system ``G c = b`` with
``G_{πσ} = tr(U(π)† U(σ)) = d^{#cycles(π⁻¹σ)}`` and ``b_π = tr(U(π)† A)``.
For ``d < n`` the permutation operators are linearly dependent, so the
system is solved with a pseudo-inverse; the projection itself is unique.

Quadrature is only used for integrands that are not fixed-degree polynomials
in ``U``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import MAX_PERM_N
from .exceptions import ArgumentError, ShapeError, SingularScalingError
from .iid import Prototype
from .linalg import subsystem_count
from .permutations import cycle_count, enumerate_symmetric_group, index_map, permutation_trace
from .symmetric import sym_basis, sym_dim, sym_projector

PINV_CUTOFF = 1e-10


def twirl(a, d: int, cap: int = MAX_PERM_N, cutoff: float = PINV_CUTOFF) -> np.ndarray:
    """``∫ U^{⊗n} A (U†)^{⊗n} dU`` computed exactly."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError("twirl needs a square operator")
    n = subsystem_count(a.shape[0], d)
    perms = list(enumerate_symmetric_group(n, cap))
    inv = [p.inverse() for p in perms]
    gram = np.array(
        [[float(d) ** cycle_count(pi @ s) for s in perms] for pi in inv]
    )
    rhs = np.array([permutation_trace(p, a, d) for p in perms])
    coeffs = np.linalg.pinv(gram, rcond=cutoff, hermitian=True) @ rhs
    dim = a.shape[0]
    out = np.zeros((dim, dim), dtype=complex)
    rows = np.arange(dim)
    for p, c in zip(perms, coeffs):
        out[rows, index_map(p, d)] += c
    return out


def symmetric_trace(a, d: int) -> complex:
    """``tr(P_Sym A)``."""
    a = np.asarray(a)
    n = subsystem_count(a.shape[0], d)
    b = sym_basis(n, d)
    return complex(np.trace(b.conj().T @ a @ b))


def gamma_operator(a, d: int, cap: int = MAX_PERM_N, tol: float = 1e-12) -> np.ndarray:
    """``dim(Sym^n) / tr(P_Sym A) · ∫ U^{⊗n} A (U†)^{⊗n} dU``.

    Satisfies ``Γ P_Sym = P_Sym``.
    """
    a = np.asarray(a)
    n = subsystem_count(a.shape[0], d)
    st = symmetric_trace(a, d)
    if abs(st) <= tol:
        raise SingularScalingError(f"tr(P_Sym A) = {st:.3e} vanishes")
    return sym_dim(n, d) / st * twirl(a, d, cap)


def haar_average_pure_power(k: int, d: int) -> np.ndarray:
    """``∫ ν^{⊗k} dν = P_Sym / dim(Sym^k)`` over Haar-random pure ``ν``."""
    return sym_projector(k, d).matrix / sym_dim(k, d)


def fibonacci_sphere(m: int) -> np.ndarray:
    """``m`` near-uniform unit vectors on ``S^2`` (golden-angle spiral)."""
    j = np.arange(m)
    z = 1 - (2 * j + 1) / m
    rho = np.sqrt(1 - z**2)
    phi = j * math.pi * (3 - math.sqrt(5))
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def bloch_to_state(bloch) -> np.ndarray:
    """Qubit state vectors ``cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`` (one per row)."""
    bloch = np.atleast_2d(bloch)
    x, y, z = bloch.T
    theta = np.arccos(np.clip(z, -1, 1))
    phi = np.arctan2(y, x)
    return np.column_stack([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def haar_random_states(d: int, m: int, seed: int) -> np.ndarray:
    """``m`` Haar-random pure states of ``C^d`` (rows), seeded."""
    rng = np.random.default_rng(seed)
    # one row of 2d normals per state, so a longer draw extends a shorter one
    g = rng.standard_normal((m, 2 * d))
    z = g[:, :d] + 1j * g[:, d:]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


@dataclass(frozen=True)
class QuadratureScheme:
    """Equal-weight node set approximating integration over pure prototypes."""

    d: int
    kind: str
    resolution: int
    seed: int
    vectors: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def nodes(self) -> list[tuple[Prototype, float]]:
        return [(Prototype(v), float(w)) for v, w in zip(self.vectors, self.weights)]

    def to_json(self) -> dict:
        return {"d": self.d, "kind": self.kind, "resolution": self.resolution, "seed": self.seed}

    @classmethod
    def from_json(cls, obj: dict) -> "QuadratureScheme":
        return build_quadrature(obj["d"], obj["resolution"], obj["kind"], obj.get("seed", 0))

    def integrate(self, f) -> np.ndarray:
        """``Σ_j w_j f(v_j)`` for a function of the node vector."""
        return sum(w * f(v) for v, w in zip(self.vectors, self.weights))

    def doubled(self) -> "QuadratureScheme":
        return build_quadrature(self.d, 2 * self.resolution, self.kind, self.seed)


def build_quadrature(d: int, resolution: int, kind: str = "auto", seed: int = 0) -> QuadratureScheme:
    """Fibonacci sphere grid for qubits, seeded Haar sampling otherwise.

    With Monte Carlo nodes the first ``m`` nodes of a ``2m`` scheme coincide
    with the ``m`` scheme of the same seed.
    """
    if resolution < 2:
        raise ArgumentError("quadrature resolution must be at least 2")
    if kind == "auto":
        kind = "sphere-grid" if d == 2 else "monte-carlo"
    if kind == "sphere-grid":
        if d != 2:
            raise ArgumentError("the sphere grid is only available for d = 2")
        vectors = bloch_to_state(fibonacci_sphere(resolution))
    elif kind == "monte-carlo":
        vectors = haar_random_states(d, resolution, seed)
    else:
        raise ArgumentError(f"unknown quadrature kind {kind!r}")
    weights = np.full(resolution, 1.0 / resolution)
    return QuadratureScheme(d, kind, resolution, seed, vectors, weights)
