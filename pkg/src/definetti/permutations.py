"""Symmetric-group machinery and its action on ``H^{⊗n}``.

A permutation is stored zero-based by its image array, ``images[i] = π(i)``.
Its unitary ``U(π)`` sends ``φ_0 ⊗ … ⊗ φ_{n-1}`` to
``φ_{π⁻¹(0)} ⊗ … ⊗ φ_{π⁻¹(n-1)}``, i.e. the factor in slot ``j`` moves to
slot ``π(j)``.  With this convention ``U(p∘q) = U(p) U(q)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .config import MAX_PERM_N
from .exceptions import ArgumentError, EnumerationLimitError


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ArgumentError(f"{images} is not a permutation of 0..{len(images) - 1}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def cycle(cls, n: int) -> "Permutation":
        """The n-cycle ``i -> i+1 mod n``."""
        return cls(tuple((i + 1) % n for i in range(n)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        images = list(range(n))
        images[i], images[j] = images[j], images[i]
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Parse the text form ``"2 0 1"``."""
        return cls(tuple(int(tok) for tok in text.split()))

    def __str__(self) -> str:
        return " ".join(str(i) for i in self.images)

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self ∘ other``, i.e. apply ``other`` first."""
        if len(other) != len(self):
            raise ArgumentError("cannot compose permutations of different degree")
        return Permutation(tuple(self.images[j] for j in other.images))

    def __matmul__(self, other: "Permutation") -> "Permutation":
        return self.compose(other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def one_based(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in self.images)


def _as_perm(p) -> Permutation:
    return p if isinstance(p, Permutation) else Permutation(tuple(p))


def cycle_count(p) -> int:
    p = _as_perm(p)
    seen = [False] * len(p)
    count = 0
    for start in range(len(p)):
        if not seen[start]:
            count += 1
            j = start
            while not seen[j]:
                seen[j] = True
                j = p.images[j]
    return count


def sign(p) -> int:
    p = _as_perm(p)
    return -1 if (len(p) - cycle_count(p)) % 2 else 1


def enumerate_symmetric_group(n: int, cap: int = MAX_PERM_N) -> Iterator[Permutation]:
    """All ``n!`` permutations in lexicographic order of their image arrays."""
    if n > cap:
        raise EnumerationLimitError(f"refusing to enumerate S_{n} (cap {cap})")
    for images in itertools.permutations(range(n)):
        yield Permutation(images)


def generators(n: int) -> list[Permutation]:
    """Adjacent transpositions plus the n-cycle; together they generate S_n."""
    gens = [Permutation.transposition(n, i, i + 1) for i in range(n - 1)]
    if n > 2:
        gens.append(Permutation.cycle(n))
    return gens


def index_map(p, d: int) -> np.ndarray:
    """Flat-index map ``m`` with ``(U(π) v)[c] = v[m[c]]``."""
    p = _as_perm(p)
    n = len(p)
    idx = np.arange(d**n).reshape((d,) * n)
    return np.transpose(idx, p.inverse().images).ravel()


def permutation_unitary(p, d: int) -> np.ndarray:
    """The 0/1 permutation matrix ``U(π)`` on ``(C^d)^{⊗n}``."""
    m = index_map(p, d)
    u = np.zeros((m.size, m.size))
    u[np.arange(m.size), m] = 1.0
    return u


def permute_vector(vec, p, d: int) -> np.ndarray:
    """``U(π) vec`` for a vector or for each column of a matrix."""
    vec = np.asarray(vec)
    return vec[index_map(p, d)]


def permute_operator(op, p, d: int) -> np.ndarray:
    """``U(π) op U(π)†``."""
    m = index_map(p, d)
    return np.asarray(op)[np.ix_(m, m)]


def permutation_trace(p, op, d: int) -> complex:
    """``tr(U(π)† op)`` without forming ``U(π)``."""
    m = index_map(p, d)
    return complex(np.sum(np.asarray(op)[np.arange(m.size), m]))

