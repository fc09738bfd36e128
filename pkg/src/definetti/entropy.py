"""Channels, von Neumann entropy and extensive quantities on symmetric families.

``min_output_entropy`` searches pure inputs only.  That is enough: ``S`` is
concave and ``E`` is linear, so ``S(E(Σ p_i ψ_i)) ≥ Σ p_i S(E(ψ_i))`` and the
minimum over mixed inputs is attained at a pure one.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .config import OptimizerConfig
from .exceptions import ArgumentError, PreconditionError, ShapeError
from .linalg import matrix_from_json, matrix_to_json, subsystem_count, tensor_power
from .optim import multistart_minimize, pure_from_params

EIG_CUTOFF = 1e-12


@dataclass(frozen=True)
class QuantumChannel:
    """Trace-preserving CP map given by Kraus operators ``K_j`` (``d_out x d_in``)."""

    kraus: tuple
    tol: float = 1e-9

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise ArgumentError("a channel needs at least one Kraus operator")
        if any(k.ndim != 2 or k.shape != ops[0].shape for k in ops):
            raise ShapeError("Kraus operators must be matrices of one common shape")
        object.__setattr__(self, "kraus", ops)
        total = sum(k.conj().T @ k for k in ops)
        dev = np.max(np.abs(total - np.eye(self.d_in)))
        if dev > self.tol:
            raise PreconditionError(f"Kraus operators are not trace preserving (deviation {dev:.3e})")

    @property
    def d_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def d_out(self) -> int:
        return self.kraus[0].shape[0]

    @classmethod
    def identity(cls, d: int = 2) -> "QuantumChannel":
        return cls((np.eye(d),))

    @classmethod
    def unitary(cls, u) -> "QuantumChannel":
        return cls((np.asarray(u),))

    @classmethod
    def depolarizing(cls, p: float, d: int = 2) -> "QuantumChannel":
        """``ρ ↦ (1 − p) ρ + p tr(ρ) id/d``."""
        if not 0 <= p <= 1:
            raise ArgumentError("depolarizing parameter must lie in [0, 1]")
        ops = [math.sqrt(1 - p) * np.eye(d)]
        for i in range(d):
            for j in range(d):
                e = np.zeros((d, d))
                e[i, j] = math.sqrt(p / d)
                ops.append(e)
        return cls(tuple(ops))

    @classmethod
    def dephasing(cls, p: float = 1.0, d: int = 2) -> "QuantumChannel":
        """``ρ ↦ (1 − p) ρ + p Σ_i |i⟩⟨i| ρ |i⟩⟨i|``."""
        if not 0 <= p <= 1:
            raise ArgumentError("dephasing parameter must lie in [0, 1]")
        ops = [math.sqrt(1 - p) * np.eye(d)]
        for i in range(d):
            e = np.zeros((d, d))
            e[i, i] = math.sqrt(p)
            ops.append(e)
        return cls(tuple(ops))

    def to_json(self) -> list[dict]:
        return [matrix_to_json(k) for k in self.kraus]

    @classmethod
    def from_json(cls, obj) -> "QuantumChannel":
        if not isinstance(obj, list):
            raise ArgumentError("a channel file holds a JSON list of Kraus matrices")
        return cls(tuple(matrix_from_json(k) for k in obj))

    @classmethod
    def load(cls, path: str | Path) -> "QuantumChannel":
        return cls.from_json(json.loads(Path(path).read_text()))


def von_neumann_entropy(rho, base: float = math.e, cutoff: float = EIG_CUTOFF) -> float:
    """``−Σ λ log λ`` over eigenvalues above ``cutoff`` (natural log by default)."""
    w = np.linalg.eigvalsh(np.asarray(rho))
    w = w[w > cutoff]
    # eigenvalues a rounding error above 1 would give -0.0 or tiny negatives
    return max(0.0, float(-np.sum(w * np.log(w)) / math.log(base)))


def apply_channel(channel: QuantumChannel, rho) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.shape != (channel.d_in, channel.d_in):
        raise ShapeError(f"channel expects a {channel.d_in}x{channel.d_in} input")
    return sum(k @ rho @ k.conj().T for k in channel.kraus)


def apply_channel_power(channel: QuantumChannel, rho, n: int | None = None) -> np.ndarray:
    """``E^{⊗n}(ρ)``, applying the channel to one subsystem at a time."""
    rho = np.asarray(rho, dtype=complex)
    d_in, d_out = channel.d_in, channel.d_out
    if n is None:
        n = subsystem_count(rho.shape[0], d_in)
    if rho.shape != (d_in**n, d_in**n):
        raise ShapeError(f"input does not act on {n} subsystems of dimension {d_in}")
    t = rho.reshape((d_in,) * (2 * n))
    for j in range(n):
        out = 0
        for k in channel.kraus:
            s = np.moveaxis(np.tensordot(k, t, axes=([1], [j])), 0, j)
            s = np.moveaxis(np.tensordot(s, k.conj(), axes=([n + j], [1])), -1, n + j)
            out = out + s
        t = out
    return t.reshape(d_out**n, d_out**n)


@dataclass(frozen=True)
class MinEntropyResult:
    value: float
    argmin: np.ndarray = field(repr=False)
    certified: bool


def min_output_entropy(channel: QuantumChannel, cfg: OptimizerConfig | None = None,
                       base: float = math.e) -> MinEntropyResult:
    """``min_ψ S(E(ψ))`` over pure inputs, by seeded multi-start search."""
    cfg = cfg or OptimizerConfig()
    d = channel.d_in

    def f(x):
        v = pure_from_params(x, d)
        return von_neumann_entropy(apply_channel(channel, np.outer(v, v.conj())), base)

    # basis inputs are cheap extra starts and optimal for many standard channels
    seeds = []
    for i in range(d):
        x = np.zeros(2 * d)
        x[i] = 1
        seeds.append(x)
    res = multistart_minimize(f, 2 * d, cfg, seeds_x0=seeds, polish=f)
    return MinEntropyResult(max(res.value, 0.0), pure_from_params(res.x, d), res.certified)


def family_state(name: str, N: int) -> tuple[np.ndarray, int]:
    """Density matrix and local dimension of a named family member.

    Names: any catalog id, ``cat`` (alias of Ex5), ``iid0`` (``|0⟩^{⊗N}``),
    ``iidplus`` (``|+⟩^{⊗N}``) and ``mixed`` (``(id/2)^{⊗N}``).
    """
    from .catalog import CATALOG_IDS, build

    if name == "cat":
        name = "Ex5"
    if name in CATALOG_IDS:
        e = build(name, N)
        return e.state.matrix, e.d
    if name == "iid0":
        return tensor_power(np.diag([1.0, 0.0]).astype(complex), N), 2
    if name == "iidplus":
        return tensor_power(np.full((2, 2), 0.5, dtype=complex), N), 2
    if name == "mixed":
        return np.eye(2**N, dtype=complex) / 2**N, 2
    raise ArgumentError(f"unknown family {name!r}")


@dataclass(frozen=True)
class TrendRow:
    N: int
    value: float
    floor: float
    slack: float
    passed: bool

    def to_dict(self) -> dict:
        return {"N": self.N, "value": self.value, "floor": self.floor,
                "slack": self.slack, "pass": self.passed}


def _family_fn(family) -> Callable[[int], tuple[np.ndarray, int]]:
    if isinstance(family, str):
        return lambda N: family_state(family, N)
    return family


def extensivity_trend(channel: QuantumChannel, family, N_range, cfg: OptimizerConfig | None = None,
                      tol: float = 1e-9) -> list[TrendRow]:
    """Rows ``(N, S(E^{⊗N}(ρ^N))/N, min_σ S(E(σ)))`` with the inequality flag.

    ``family`` is a family name (see :func:`family_state`) or a callable
    ``N -> (matrix, d)``.
    """
    fn = _family_fn(family)
    floor = min_output_entropy(channel, cfg).value
    rows = []
    for N in N_range:
        rho, d = fn(N)
        if d != channel.d_in:
            raise ShapeError(f"family has local dimension {d}, channel expects {channel.d_in}")
        value = von_neumann_entropy(apply_channel_power(channel, rho, N)) / N
        rows.append(TrendRow(N, value, floor, 0.0, value >= floor - tol))
    return rows


@dataclass(frozen=True)
class ExtensiveQuantitySpec:
    """A quantity ``Q`` on states with its claimed robustness modulus.

    ``modulus`` is the constant ``c`` in ``|Q(ρ) − Q(ρ')| ≤ c·k`` for states
    differing on ``k`` subsystems; it is supplied, not inferred.
    """

    evaluator: Callable[[np.ndarray], float]
    concave: bool = True
    modulus: float = 1.0
    name: str = "Q"


def entropy_spec(d: int = 2) -> ExtensiveQuantitySpec:
    # replacing k subsystems changes S by at most 2 k ln d
    return ExtensiveQuantitySpec(von_neumann_entropy, True, 2 * math.log(d), "von Neumann entropy")


def proposition_floor(q: ExtensiveQuantitySpec, d: int, cfg: OptimizerConfig | None = None) -> float:
    """``min_σ Q(σ)`` over pure single-site ``σ``."""
    cfg = cfg or OptimizerConfig()

    def f(x):
        v = pure_from_params(x, d)
        return float(q.evaluator(np.outer(v, v.conj())))

    return multistart_minimize(f, 2 * d, cfg, method="Nelder-Mead").value


def proposition_check(q: ExtensiveQuantitySpec, family, N_range,
                      cfg: OptimizerConfig | None = None, floor: float | None = None) -> list[TrendRow]:
    """Compare ``Q(ρ^N)/N`` with the floor ``min_σ Q(σ)`` at finite ``N``.

    The statement is asymptotic, so each row allows the slack
    ``c (k + r) / N`` with ``k = r = N^{2/3}``, the number of subsystems the
    argument discards or perturbs.
    """
    if not q.concave:
        raise ArgumentError("the finite-size check assumes a concave quantity")
    fn = _family_fn(family)
    rows = []
    for N in N_range:
        rho, d = fn(N)
        if floor is None:
            floor = proposition_floor(q, d, cfg)
        k = r = N ** (2 / 3)
        slack = q.modulus * (k + r) / N
        value = float(q.evaluator(rho)) / N
        rows.append(TrendRow(N, value, floor, slack, value >= floor - slack))
    return rows
