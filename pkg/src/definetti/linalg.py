"""Dense complex linear-algebra substrate.

Conventions used throughout the package:

* subsystem 0 is the leftmost tensor factor, so a basis string
  ``b_0 b_1 ... b_{n-1}`` has flat index ``sum(b_i * d**(n-1-i))``;
* :func:`partial_trace` always removes the trailing subsystems;
* ``||A||_1`` denotes the full trace norm (sum of singular values), not
  half of it.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .config import MAX_ENTRIES, TOL_HERM, TOL_NORM, TOL_PSD, TOL_RANK, TOL_TR
from .exceptions import DimensionLimitError, PreconditionError, ShapeError, SymmetryError


def check_size(rows: int, cols: int, max_entries: int = MAX_ENTRIES) -> None:
    if rows * cols > max_entries:
        raise DimensionLimitError(
            f"{rows}x{cols} matrix exceeds the cap of {max_entries} entries"
        )


def subsystem_count(dim: int, d: int) -> int:
    """Return n with ``d**n == dim`` or raise :class:`ShapeError`."""
    if d < 1:
        raise ShapeError("subsystem dimension must be positive")
    if d == 1:
        if dim != 1:
            raise ShapeError(f"dimension {dim} is not a power of 1")
        return 0
    n, acc = 0, 1
    while acc < dim:
        acc *= d
        n += 1
    if acc != dim:
        raise ShapeError(f"dimension {dim} is not a power of {d}")
    return n


def tensor(a, b, max_entries: int = MAX_ENTRIES) -> np.ndarray:
    """Kronecker product ``a ⊗ b``."""
    a = np.atleast_1d(np.asarray(a))
    b = np.atleast_1d(np.asarray(b))
    if a.ndim == 2 and b.ndim == 2:
        check_size(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1], max_entries)
    else:
        check_size(a.size * b.size, 1, max_entries)
    return np.kron(a, b)


def kron_all(*factors, max_entries: int = MAX_ENTRIES) -> np.ndarray:
    return reduce(lambda x, y: tensor(x, y, max_entries), factors)


def tensor_power(a, n: int, max_entries: int = MAX_ENTRIES) -> np.ndarray:
    """``a^{⊗n}``; for ``n == 0`` the 1x1 (or length-1) identity."""
    a = np.asarray(a)
    if n == 0:
        return np.ones((1, 1) if a.ndim == 2 else (1,), dtype=a.dtype)
    return kron_all(*([a] * n), max_entries=max_entries)


def partial_trace(op, d: int, keep: int) -> np.ndarray:
    """Trace out all but the first ``keep`` subsystems of a square operator.

    ``op`` acts on ``n`` subsystems of dimension ``d``; the result acts on the
    first ``keep`` of them.
    """
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ShapeError(f"partial_trace needs a square matrix, got shape {op.shape}")
    n = subsystem_count(op.shape[0], d)
    if not 0 <= keep <= n:
        raise ShapeError(f"cannot keep {keep} of {n} subsystems")
    a, b = d**keep, d ** (n - keep)
    return np.trace(op.reshape(a, b, a, b), axis1=1, axis2=3)


def is_hermitian(op, tol: float = TOL_HERM) -> bool:
    op = np.asarray(op)
    return op.ndim == 2 and op.shape[0] == op.shape[1] and np.max(
        np.abs(op - op.conj().T), initial=0.0
    ) <= tol


def trace_norm(op) -> float:
    """Sum of singular values; uses eigenvalues when ``op`` is Hermitian."""
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ShapeError(f"trace_norm needs a square matrix, got shape {op.shape}")
    if is_hermitian(op, 1e-13 * max(1.0, float(np.max(np.abs(op), initial=0.0)))):
        return float(np.sum(np.abs(np.linalg.eigvalsh((op + op.conj().T) / 2))))
    return float(np.sum(np.linalg.svd(op, compute_uv=False)))


def trace_norm_product(a, b) -> float:
    """``‖A B†‖₁`` through thin QR factors, for tall ``A`` and ``B``."""
    qa, ra = np.linalg.qr(np.asarray(a))
    qb, rb = np.linalg.qr(np.asarray(b))
    return float(np.sum(np.linalg.svd(ra @ rb.conj().T, compute_uv=False)))


def hermitian_eig(op, tol_herm: float = TOL_HERM) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending."""
    op = np.asarray(op)
    if not is_hermitian(op, tol_herm):
        raise SymmetryError("hermitian_eig called on a non-Hermitian matrix")
    w, v = np.linalg.eigh((op + op.conj().T) / 2)
    return w[::-1].copy(), v[:, ::-1].copy()


def psd_sqrt(op, tol_psd: float = TOL_PSD, tol_herm: float = TOL_HERM) -> np.ndarray:
    """Square root of a PSD matrix; eigenvalues in ``[-tol_psd, 0)`` are clamped."""
    w, v = hermitian_eig(op, tol_herm)
    if w.size and w[-1] < -tol_psd:
        raise PreconditionError(f"matrix has negative eigenvalue {w[-1]:.3e}")
    w = np.sqrt(np.clip(w, 0.0, None))
    return (v * w) @ v.conj().T


def psd_factor(op, tol: float = 1e-12, tol_herm: float = TOL_HERM) -> np.ndarray:
    """Return ``F`` with ``F F† = op`` keeping eigenvalues above ``tol``."""
    w, v = hermitian_eig(op, tol_herm)
    keep = w > tol
    return v[:, keep] * np.sqrt(w[keep])


@dataclass(frozen=True)
class Projector:
    """Orthogonal projector together with an orthonormal basis of its range."""

    matrix: np.ndarray
    rank: int
    basis: np.ndarray

    @classmethod
    def from_basis(cls, basis: np.ndarray) -> "Projector":
        basis = np.asarray(basis, dtype=complex)
        return cls(basis @ basis.conj().T, basis.shape[1], basis)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def projector_from_span(vectors, tol_rank: float = TOL_RANK, dim: int | None = None,
                        max_entries: int = MAX_ENTRIES) -> Projector:
    """Orthogonal projector onto the numerical span of ``vectors``.

    ``vectors`` is a sequence of equal-length vectors (or a 2-D array whose
    rows are the vectors).  Singular values above ``tol_rank`` are kept.  An
    empty sequence yields the zero projector; pass ``dim`` in that case.
    """
    vecs = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    if not vecs:
        if dim is None:
            raise ShapeError("dim is required for an empty span")
        return Projector(np.zeros((dim, dim), complex), 0, np.zeros((dim, 0), complex))
    length = vecs[0].size
    if any(v.size != length for v in vecs):
        raise ShapeError("all vectors must have the same length")
    check_size(length, length, max_entries)
    rows = np.unique(np.stack(vecs), axis=0)
    u, s, _ = np.linalg.svd(rows.T, full_matrices=False)
    basis = u[:, s > tol_rank]
    return Projector.from_basis(basis)


def apply_local(vectors, op, n: int) -> np.ndarray:
    """Apply ``op`` to every one of the ``n`` tensor factors of each column.

    ``vectors`` has shape ``(d**n,)`` or ``(d**n, m)``; ``op`` is ``d_out x d``.
    The result has leading dimension ``d_out**n``.
    """
    vectors = np.asarray(vectors)
    squeeze = vectors.ndim == 1
    x = vectors.reshape(vectors.shape[0], -1)
    d_out, d = op.shape
    m = x.shape[1]
    t = x.reshape((d,) * n + (m,))
    for axis in range(n):
        t = np.moveaxis(np.tensordot(op, t, axes=([1], [axis])), 0, axis)
    out = t.reshape(d_out**n, m)
    return out[:, 0] if squeeze else out


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary: QR of a Ginibre matrix with the phase fix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_pure_state(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def unitary_completion(vec) -> np.ndarray:
    """A unitary whose first column is the unit vector ``vec``."""
    vec = np.asarray(vec, dtype=complex).ravel()
    d = vec.size
    q, r = np.linalg.qr(np.column_stack([vec, np.eye(d, dtype=complex)]))
    # QR fixes the first column only up to a phase
    q[:, 0] = vec
    return q[:, :d]


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian PSD unit-trace matrix on ``n`` subsystems of dimension ``d``."""

    matrix: np.ndarray
    d: int
    n: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.d**self.n, self.d**self.n):
            raise ShapeError(
                f"matrix of shape {m.shape} does not act on {self.n} subsystems of dim {self.d}"
            )

    @classmethod
    def from_vector(cls, vec, d: int, n: int) -> "DensityOperator":
        vec = np.asarray(vec, dtype=complex).ravel()
        return cls(np.outer(vec, vec.conj()), d, n)

    def validate(self, tol_herm: float = TOL_HERM, tol_psd: float = TOL_PSD,
                 tol_tr: float = TOL_TR) -> "DensityOperator":
        if not is_hermitian(self.matrix, tol_herm):
            raise SymmetryError("density operator is not Hermitian")
        if abs(np.trace(self.matrix) - 1) > tol_tr:
            raise PreconditionError(f"trace {np.trace(self.matrix).real:.12g} != 1")
        lo = np.linalg.eigvalsh(self.matrix)[0]
        if lo < -tol_psd:
            raise PreconditionError(f"density operator has eigenvalue {lo:.3e}")
        return self

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def check_pure_vector(vec, tol_norm: float = TOL_NORM) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex).ravel()
    if abs(np.linalg.norm(vec) - 1) > tol_norm:
        raise PreconditionError(f"vector norm {np.linalg.norm(vec):.12g} != 1")
    return vec


def matrix_to_json(m) -> dict:
    """Serialise to ``{rows, cols, entries: [[re, im], ...]}`` (row-major)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    flat = m.ravel()
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = np.asarray(obj["entries"], dtype=float).reshape(-1, 2)
    if entries.shape[0] != rows * cols:
        raise ShapeError(f"expected {rows * cols} entries, got {entries.shape[0]}")
    m = (entries[:, 0] + 1j * entries[:, 1]).reshape(rows, cols)
    if not np.all(np.isfinite(m)):
        raise ShapeError("matrix entries must be finite")
    return m
