"""Prototypes and projectors onto spans of ``(n choose n-r)``-i.i.d. vectors."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .config import MAX_IID_N, TOL_RANK
from .exceptions import ArgumentError, EnumerationLimitError, UnitarityError
from .linalg import Projector, apply_local, check_pure_vector, kron_all, projector_from_span, \
    unitary_completion


@dataclass(frozen=True)
class Prototype:
    """Rank-one projector ``ν = |v⟩⟨v|`` on ``C^d``."""

    vector: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vector", check_pure_vector(self.vector))

    @classmethod
    def basis(cls, d: int, index: int = 0) -> "Prototype":
        v = np.zeros(d, dtype=complex)
        v[index] = 1
        return cls(v)

    @property
    def d(self) -> int:
        return self.vector.size

    @property
    def projector(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())

    def rotated(self, u) -> "Prototype":
        return Prototype(np.asarray(u) @ self.vector)


@dataclass(frozen=True)
class IidProjector:
    n: int
    r: int
    prototype: Prototype
    projector: Projector

    @property
    def rank(self) -> int:
        return self.projector.rank

    @property
    def matrix(self) -> np.ndarray:
        return self.projector.matrix


def _nu_on(vec, nu, positions, d: int, n: int) -> np.ndarray:
    """Apply ``ν`` to the tensor factors listed in ``positions``."""
    t = vec.reshape((d,) * n)
    for ax in positions:
        t = np.moveaxis(np.tensordot(nu, t, axes=([1], [ax])), 0, ax)
    return t.reshape(-1)


def is_iid_vector(psi, m: int, prototype: Prototype, tol: float = 1e-10) -> bool:
    """Whether ``psi`` equals ``ν`` on at least ``m`` of its subsystems.

    Searching over permutations only matters through which ``m`` slots are
    moved to the front, so the ``(n choose m)`` subsets are enumerated.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    d = prototype.d
    n = round(np.log(psi.size) / np.log(d))
    if d**n != psi.size:
        raise ArgumentError(f"vector length {psi.size} is not a power of {d}")
    if not 0 <= m <= n:
        raise ArgumentError(f"m={m} must lie in [0, {n}]")
    nu = prototype.projector
    scale = max(np.linalg.norm(psi), 1.0)
    return any(
        np.linalg.norm(_nu_on(psi, nu, subset, d, n) - psi) <= tol * scale
        for subset in itertools.combinations(range(n), m)
    )


def iid_generators(n: int, r: int, prototype: Prototype) -> np.ndarray:
    """``ν``-vector on ``n-r`` slots tensored with every basis string elsewhere.

    Rows are the generating vectors (duplicates included).
    """
    d = prototype.d
    eye = np.eye(d, dtype=complex)
    rows = []
    for subset in itertools.combinations(range(n), n - r):
        free = [j for j in range(n) if j not in subset]
        for letters in itertools.product(range(d), repeat=len(free)):
            factors = [prototype.vector] * n
            for j, b in zip(free, letters):
                factors[j] = eye[b]
            rows.append(kron_all(*factors) if n else np.ones(1, complex))
    return np.array(rows)


def iid_projector(n: int, r: int, prototype: Prototype, tol_rank: float = TOL_RANK,
                  max_n: int = MAX_IID_N) -> IidProjector:
    """Projector onto the span of all ``(n choose n-r)``-i.i.d. vectors in ``ν``."""
    if n > max_n:
        raise EnumerationLimitError(f"subset enumeration capped at n <= {max_n}")
    if r < 0:
        raise ArgumentError("r must be nonnegative")
    d = prototype.d
    if r >= n:
        return IidProjector(n, r, prototype, Projector.from_basis(np.eye(d**n, dtype=complex)))
    proj = projector_from_span(iid_generators(n, r, prototype), tol_rank)
    return IidProjector(n, r, prototype, proj)


def check_unitary(u, tol: float = 1e-9) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or np.max(
        np.abs(u.conj().T @ u - np.eye(u.shape[0]))
    ) > tol:
        raise UnitarityError("matrix is not unitary")
    return u


def rotate_iid_projector(p: IidProjector, u, tol: float = 1e-9) -> IidProjector:
    """``U^{⊗n} P (U†)^{⊗n}`` with the prototype replaced by ``UνU†``."""
    u = check_unitary(u, tol)
    basis = apply_local(p.projector.basis, u, p.n)
    return IidProjector(p.n, p.r, p.prototype.rotated(u), Projector.from_basis(basis))


def iid_mask(n: int, r: int, d: int) -> np.ndarray:
    """Diagonal of ``P^{n,r}`` for ``ν = |0⟩⟨0|``: strings with at most ``r`` nonzero letters."""
    digits = (np.arange(d**n)[:, None] // (d ** np.arange(n - 1, -1, -1))) % d
    return (digits != 0).sum(axis=1) <= r


def apply_iid_projector(vectors, n: int, r: int, prototype: Prototype) -> np.ndarray:
    """``P^{n,r}_ν v`` without forming the projector.

    Uses ``P^{n,r}_ν = U^{⊗n} P^{n,r}_{|0⟩} (U†)^{⊗n}`` for any unitary ``U``
    with ``U|0⟩ = v``; the inner projector is diagonal.
    """
    vectors = np.asarray(vectors, dtype=complex)
    if r >= n:
        return vectors.copy()
    u = unitary_completion(prototype.vector)
    x = apply_local(vectors, u.conj().T, n)
    mask = iid_mask(n, r, prototype.d)
    x[~mask] = 0
    return apply_local(x, u, n)
