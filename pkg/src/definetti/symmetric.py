"""The symmetric subspace ``Sym^n(C^d)`` and symmetric purification.

The occupation-number basis ``Φ_λ`` is indexed by compositions ``λ`` of
``n`` into ``d`` parts (``λ_b`` = number of letters equal to ``b``).  Since
``Φ_λ`` is the normalised uniform superposition over the class of basis
strings with letter-count profile ``λ``, the projector ``P_Sym`` acts on a
vector in the computational basis by replacing every amplitude with the mean
amplitude of its profile class.  :func:`project_symmetric` and
:func:`sym_coordinates` use this to avoid forming ``d^n x d^n`` matrices.

Symmetric purification
----------------------
For a permutation-invariant ``ρ`` on ``H^{⊗n}`` the vector
``Ψ = (√ρ ⊗ id) Ω`` with ``Ω = ⊗_j Σ_i |i⟩_{H_j}|i⟩_{K_j}`` satisfies
``tr_K |Ψ⟩⟨Ψ| = ρ``.  Permuting the pairs ``(H_j, K_j)`` simultaneously
leaves ``Ω`` fixed and maps ``√ρ`` to ``√(πρπ†) = √ρ`` (the PSD square root
is unique), so ``Ψ`` lies in ``Sym^n(H ⊗ K)`` once the factors are regrouped
as ``(H_1 K_1)(H_2 K_2)…``.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .config import MAX_PERM_N, TOL_HERM, TOL_PSD
from .exceptions import ArgumentError, PreconditionError, ShapeError
from .linalg import (
    Projector,
    matrix_to_json,
    psd_sqrt,
    subsystem_count,
    trace_norm,
    trace_norm_product,
)
from .permutations import (
    enumerate_symmetric_group,
    generators,
    permutation_unitary,
    permute_operator,
    permute_vector,
)


def enumerate_compositions(n: int, d: int) -> list[tuple[int, ...]]:
    """Compositions of ``n`` into ``d`` nonnegative parts.

    Ordered lexicographically from the largest first part down, so
    ``(2, 0), (1, 1), (0, 2)`` for ``n = d = 2``.
    """
    if n < 0 or d < 1:
        raise ArgumentError(f"invalid composition request n={n}, d={d}")
    if d == 1:
        return [(n,)]
    out = []
    for first in range(n, -1, -1):
        out.extend((first,) + rest for rest in enumerate_compositions(n - first, d - 1))
    return out


def sym_dim(n: int, d: int) -> int:
    return math.comb(n + d - 1, n)


def multinomial(parts) -> int:
    out, total = 1, 0
    for p in parts:
        total += p
        out *= math.comb(total, p)
    return out


@lru_cache(maxsize=64)
def _profile_classes(n: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Composition index of every basis string, and the class sizes.

    Strings are keyed by their letters sorted ascending and read in base
    ``d``, which identifies the letter-count profile and stays below ``d**n``.
    """
    comps = enumerate_compositions(n, d)
    idx = np.arange(d**n)
    dtype = np.int16 if d < 2**15 else np.int64
    digits = np.empty((idx.size, n), dtype=dtype)
    for j in range(n):
        digits[:, j] = (idx // d ** (n - 1 - j)) % d
    digits.sort(axis=1)
    powers = d ** np.arange(n - 1, -1, -1)
    keys = np.zeros(idx.size, dtype=np.int64)
    for j in range(n):
        keys += digits[:, j].astype(np.int64) * powers[j]
    del digits
    comp_keys = np.array(
        [int(np.repeat(np.arange(d), c) @ powers) if n else 0 for c in comps], dtype=np.int64
    )
    order = np.argsort(comp_keys)
    labels = order[np.searchsorted(comp_keys[order], keys)]
    sizes = np.array([multinomial(c) for c in comps])
    labels.setflags(write=False)
    sizes.setflags(write=False)
    return labels, sizes


def profile_labels(n: int, d: int) -> np.ndarray:
    """For each computational basis string, the index of its composition."""
    return _profile_classes(n, d)[0]


def sym_basis_vector(composition, d: int | None = None) -> np.ndarray:
    """``Φ_λ``: uniform superposition over strings with letter counts ``λ``."""
    composition = tuple(int(c) for c in composition)
    d = len(composition) if d is None else d
    if len(composition) != d or min(composition, default=0) < 0:
        raise ArgumentError(f"{composition} is not a composition into {d} parts")
    n = sum(composition)
    comps = enumerate_compositions(n, d)
    labels, sizes = _profile_classes(n, d)
    j = comps.index(composition)
    vec = np.zeros(d**n, dtype=complex)
    vec[labels == j] = 1 / math.sqrt(sizes[j])
    return vec


def sym_basis(n: int, d: int) -> np.ndarray:
    """Columns ``Φ_λ`` in composition order; shape ``(d**n, sym_dim(n, d))``."""
    labels, sizes = _profile_classes(n, d)
    basis = np.zeros((d**n, sizes.size), dtype=complex)
    basis[np.arange(d**n), labels] = 1 / np.sqrt(sizes[labels])
    return basis


def sym_projector(n: int, d: int) -> Projector:
    return Projector.from_basis(sym_basis(n, d))


def sym_projector_group_average(n: int, d: int, cap: int = MAX_PERM_N) -> np.ndarray:
    """``(1/n!) Σ_π U(π)``, the second route to ``P_Sym``."""
    acc = np.zeros((d**n, d**n))
    count = 0
    for p in enumerate_symmetric_group(n, cap):
        acc += permutation_unitary(p, d)
        count += 1
    return acc / count


def sym_coordinates(vectors, n: int, d: int) -> np.ndarray:
    """``B† v`` for the symmetric basis ``B`` (works column-wise)."""
    vectors = np.asarray(vectors)
    labels, sizes = _profile_classes(n, d)
    if vectors.shape[0] != labels.size:
        raise ShapeError(f"vector length {vectors.shape[0]} != {d}**{n}")
    x = vectors.reshape(labels.size, -1)
    out = np.zeros((sizes.size, x.shape[1]), dtype=complex)
    np.add.at(out, labels, x)
    out /= np.sqrt(sizes)[:, None]
    return out[:, 0] if vectors.ndim == 1 else out


def project_symmetric(vectors, n: int, d: int) -> np.ndarray:
    """``P_Sym v`` by averaging amplitudes within each profile class."""
    vectors = np.asarray(vectors)
    labels, sizes = _profile_classes(n, d)
    coords = sym_coordinates(vectors, n, d)
    coords = coords.reshape(sizes.size, -1) / np.sqrt(sizes)[:, None]
    out = coords[labels]
    return out[:, 0] if vectors.ndim == 1 else out


def symmetric_residual(vectors, n: int, d: int) -> float:
    """``max_j ‖(id − P_Sym) v_j‖`` over the columns."""
    vectors = np.asarray(vectors)
    diff = vectors - project_symmetric(vectors, n, d)
    return float(np.max(np.linalg.norm(diff.reshape(diff.shape[0], -1), axis=0), initial=0.0))


def is_permutation_invariant(rho, d: int, tol: float = 1e-10, cap: int = MAX_PERM_N,
                             exhaustive: bool = True) -> tuple[bool, float]:
    """Check ``π ρ π† = ρ``; returns the flag and ``max_π ‖πρπ† − ρ‖₁``.

    With ``exhaustive=False``, or for ``n`` above the enumeration cap, only a
    generating set is checked.  Deviations whose Frobenius bound
    ``√D ‖·‖_F`` is below ``tol / 1000`` are reported through that bound.
    """
    rho = np.asarray(rho)
    n = subsystem_count(rho.shape[0], d)
    use_all = exhaustive and n <= cap
    perms = enumerate_symmetric_group(n, cap) if use_all else generators(n)
    dev = 0.0
    root_dim = np.sqrt(rho.shape[0])
    for p in perms:
        diff = permute_operator(rho, p, d) - rho
        bound = root_dim * np.linalg.norm(diff)
        if bound > tol / 1000:
            bound = trace_norm(diff)
        dev = max(dev, float(bound))
    return dev <= tol, dev


def is_permutation_invariant_factor(factor, d: int, tol: float = 1e-10, cap: int = MAX_PERM_N,
                                    exhaustive: bool = True) -> tuple[bool, float]:
    """:func:`is_permutation_invariant` for ``ρ = F F†`` given the factor ``F``.

    ``πρπ† − ρ = [πF, F] [πF, −F]†``, so each deviation is a low-rank trace
    norm and no ``d^n x d^n`` matrix is formed.
    """
    factor = np.asarray(factor)
    if factor.ndim == 1:
        factor = factor[:, None]
    n = subsystem_count(factor.shape[0], d)
    use_all = exhaustive and n <= cap
    perms = enumerate_symmetric_group(n, cap) if use_all else generators(n)
    dev = 0.0
    for p in perms:
        moved = permute_vector(factor, p, d)
        dev = max(dev, trace_norm_product(np.hstack([moved, factor]), np.hstack([moved, -factor])))
    return dev <= tol, dev


def symmetric_purification(rho, d: int, tol: float = 1e-8, tol_psd: float = TOL_PSD,
                           tol_herm: float = TOL_HERM, cap: int = MAX_PERM_N,
                           exhaustive: bool = True) -> np.ndarray:
    """Purify a permutation-invariant ``ρ`` into ``Sym^n(H ⊗ K)``, ``K ≅ H``.

    The returned vector lives on ``(C^d ⊗ C^d)^{⊗n}`` with factor order
    ``H_1 K_1 H_2 K_2 …``, i.e. ``n`` subsystems of dimension ``d**2``.
    """
    rho = np.asarray(rho, dtype=complex)
    n = subsystem_count(rho.shape[0], d)
    ok, dev = is_permutation_invariant(rho, d, tol, cap, exhaustive)
    if not ok:
        raise PreconditionError(f"state is not permutation invariant (deviation {dev:.3e})")
    root = psd_sqrt(rho, tol_psd, tol_herm)
    t = root.reshape((d,) * (2 * n))
    axes = [ax for j in range(n) for ax in (j, n + j)]
    return np.transpose(t, axes).reshape(-1)


def purification_from_factor(factor, d: int) -> np.ndarray:
    """Same vector as :func:`symmetric_purification` for ``ρ = F F†``.

    With the thin SVD ``F = U S W†`` one has ``√ρ = U S U†`` and
    ``(√ρ ⊗ id) Ω = Σ_i s_i |u_i⟩|ū_i⟩``, so only ``D x R`` work is needed.
    Invariance of ``ρ`` is not checked here.
    """
    factor = np.asarray(factor, dtype=complex)
    if factor.ndim == 1:
        factor = factor[:, None]
    n = subsystem_count(factor.shape[0], d)
    u, sv, _ = np.linalg.svd(factor, full_matrices=False)
    keep = sv > 1e-14 * max(1.0, sv[0] if sv.size else 0.0)
    u, sv = u[:, keep], sv[keep]
    t = np.einsum("ai,bi,i->ab", u, u.conj(), sv).reshape((d,) * (2 * n))
    axes = [ax for j in range(n) for ax in (j, n + j)]
    return np.transpose(t, axes).reshape(-1)


def trace_out_ancillas(vec, d: int, n: int) -> np.ndarray:
    """``tr_{K^{⊗n}} |Ψ⟩⟨Ψ|`` for ``Ψ`` in ``H_1 K_1 … H_n K_n`` order."""
    t = np.asarray(vec).reshape((d,) * (2 * n))
    axes = [2 * j for j in range(n)] + [2 * j + 1 for j in range(n)]
    m = np.transpose(t, axes).reshape(d**n, d**n)
    return m @ m.conj().T


def sym_basis_to_json(n: int, d: int) -> list[dict]:
    """Fixture form: ``[{lambda: [...], vector: {rows, cols, entries}}, ...]``."""
    basis = sym_basis(n, d)
    return [
        {"lambda": list(comp), "vector": matrix_to_json(basis[:, j])}
        for j, comp in enumerate(enumerate_compositions(n, d))
    ]
