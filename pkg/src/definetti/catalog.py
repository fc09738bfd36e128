"""The seven example families of symmetric states and checks of their stated properties.

Overlaps and distances to i.i.d. mixtures are optimisation outcomes: a
reported value is the best found by seeded multi-start local search, so
claims of the form "at least" are numerically supported, not proven.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .config import MAX_ANTISYM_D, OptimizerConfig
from .exceptions import ArgumentError, DimensionLimitError
from .iid import Prototype, is_iid_vector
from .linalg import DensityOperator, partial_trace, subsystem_count, tensor_power, trace_norm
from .optim import density_from_params, multistart_minimize, pure_from_params, softmax
from .permutations import Permutation, sign
from .symmetric import is_permutation_invariant_factor

CATALOG_IDS = ("Ex1", "Ex2", "Ex3", "Ex4", "Ex5", "Ex6", "Ex7")
CLAIM_TOL = 1e-10
OPT_TOL = 1e-3

CLAIMS = {
    "Ex1": "every reduction is the mixture of |0..0> and |1..1>",
    "Ex2": "every proper reduction equals (id/2)^n, the full state is not i.i.d.",
    "Ex3": "every proper reduction is the mixture of |+..+> and |-..->",
    "Ex4": "overlap with any i.i.d. state is at most 1/4",
    "Ex5": "overlap with any i.i.d. state is at most 1/2, reductions as in Ex1",
    "Ex6": "bipartite reductions are mixtures of singlets",
    "Ex7": "(N choose N-1)-i.i.d. in |0>, distance to i.i.d. mixtures at least 1/2",
}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    N: int
    d: int
    state: DensityOperator
    claim: str
    components: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def factor(self) -> np.ndarray:
        """``F`` with ``F F† = ρ``."""
        return self.components * np.sqrt(self.weights)

    @property
    def pure(self) -> bool:
        return self.weights.size == 1


def _basis_string(bits, d: int) -> np.ndarray:
    v = np.zeros(d ** len(bits), dtype=complex)
    v[sum(b * d ** (len(bits) - 1 - i) for i, b in enumerate(bits))] = 1
    return v


def _parity_strings(N: int, parity: int = 0) -> list[tuple[int, ...]]:
    return [b for b in itertools.product((0, 1), repeat=N) if sum(b) % 2 == parity]


def antisymmetric_vector(letters, d: int) -> np.ndarray:
    """``(1/√n!) Σ_π sign(π) π |l_0 l_1 … l_{n-1}⟩`` for distinct letters."""
    n = len(letters)
    v = np.zeros(d**n, dtype=complex)
    for images in itertools.permutations(range(n)):
        bits = [letters[j] for j in images]
        v += sign(Permutation(images)) * _basis_string(bits, d)
    return v / math.sqrt(math.factorial(n))


def antisymmetric_projector(n: int, d: int) -> np.ndarray:
    vecs = [antisymmetric_vector(s, d) for s in itertools.combinations(range(d), n)]
    if not vecs:
        return np.zeros((d**n, d**n), dtype=complex)
    b = np.column_stack(vecs)
    return b @ b.conj().T


def build(id: str, N: int, max_antisym_d: int = MAX_ANTISYM_D) -> CatalogEntry:
    """Construct example ``id`` on ``N`` subsystems.

    The state is stored together with a decomposition ``Σ w_j |c_j⟩⟨c_j|``
    into its defining pure components (columns of ``components``).
    """
    if id not in CATALOG_IDS:
        raise ArgumentError(f"unknown example {id!r}; choose from {', '.join(CATALOG_IDS)}")
    if N < 2:
        raise ArgumentError("examples need N >= 2")
    d = 2
    if id == "Ex1":
        comps = [_basis_string((0,) * N, d), _basis_string((1,) * N, d)]
    elif id == "Ex2":
        comps = [_basis_string(b, d) for b in _parity_strings(N)]
    elif id == "Ex3":
        v = sum(_basis_string(b, d) for b in _parity_strings(N))
        comps = [v / np.linalg.norm(v)]
    elif id == "Ex4":
        if N != 2:
            raise ArgumentError("the singlet example is defined for N = 2 only")
        comps = [antisymmetric_vector((0, 1), 2)]
    elif id == "Ex5":
        comps = [(_basis_string((0,) * N, d) + _basis_string((1,) * N, d)) / math.sqrt(2)]
    elif id == "Ex6":
        if N > max_antisym_d:
            raise DimensionLimitError(f"Ex6 needs d = N <= {max_antisym_d}")
        d = N
        comps = [antisymmetric_vector(tuple(range(N)), d)]
    else:
        comps = [_basis_string((0,) * (N - 1 - j) + (1,) + (0,) * j, d) for j in range(N)]
    c = np.column_stack(comps)
    w = np.full(c.shape[1], 1.0 / c.shape[1])
    state = DensityOperator((c * w) @ c.conj().T, d, N)
    return CatalogEntry(id, N, d, state, CLAIMS[id], c, w)


def reduced_target(entry: CatalogEntry, n: int) -> np.ndarray:
    """The stated form of ``tr_{N-n}`` of the example state."""
    N, d = entry.N, entry.d
    if not 1 <= n <= N:
        raise ArgumentError(f"n={n} must lie in [1, {N}]")
    if entry.id in ("Ex2", "Ex3", "Ex5") and n == N:
        raise ArgumentError(f"{entry.id} only makes a claim about proper reductions n < N")
    if entry.id in ("Ex1", "Ex5"):
        a, b = _basis_string((0,) * n, d), _basis_string((1,) * n, d)
        return (np.outer(a, a) + np.outer(b, b)) / 2
    if entry.id == "Ex2":
        return np.eye(2**n, dtype=complex) / 2**n
    if entry.id == "Ex3":
        plus = tensor_power(np.array([1, 1]) / math.sqrt(2), n).astype(complex)
        minus = tensor_power(np.array([1, -1]) / math.sqrt(2), n).astype(complex)
        return (np.outer(plus, plus) + np.outer(minus, minus)) / 2
    if entry.id == "Ex6":
        # tr_{N-n} of the fully antisymmetric state is P_anti / dim, which for
        # n = 2 is the uniform mixture of the singlets (|ij> - |ji>)/√2
        return antisymmetric_projector(n, d) / math.comb(d, n)
    raise ArgumentError(f"{entry.id} makes no claim about its reduced states")


@dataclass(frozen=True)
class ReducedCheck:
    id: str
    N: int
    n: int
    distance: float
    passed: bool


def reduced_claim_check(entry: CatalogEntry, n: int, tol: float = CLAIM_TOL) -> ReducedCheck:
    target = reduced_target(entry, n)
    reduced = partial_trace(entry.state.matrix, entry.d, n)
    dist = trace_norm(reduced - target)
    return ReducedCheck(entry.id, entry.N, n, dist, dist <= tol)


@dataclass(frozen=True)
class OverlapResult:
    value: float
    sigma: np.ndarray = field(repr=False)
    certified: bool
    pure: bool


def iid_overlap(rho, sigma, n: int) -> float:
    return float(np.real(np.trace(tensor_power(sigma, n) @ rho)))


def max_iid_overlap(rho, d: int, cfg: OptimizerConfig | None = None,
                    pure: bool = False) -> OverlapResult:
    """Maximise ``tr(σ^{⊗n} ρ)`` over density operators ``σ`` on ``C^d``.

    ``ρ`` may be any PSD operator on ``(C^d)^{⊗n}``.  With ``pure=True`` the
    search is restricted to rank-one ``σ``.  By linearity the maximum over
    mixtures of i.i.d. states is the same number.
    """
    cfg = cfg or OptimizerConfig()
    rho = np.asarray(rho, dtype=complex)
    n = subsystem_count(rho.shape[0], d)
    if pure:
        def to_sigma(x):
            v = pure_from_params(x, d)
            return np.outer(v, v.conj())
        dim = 2 * d
    else:
        def to_sigma(x):
            return density_from_params(x, d)
        dim = 2 * d * d
    res = multistart_minimize(lambda x: -iid_overlap(rho, to_sigma(x), n), dim, cfg)
    return OverlapResult(-res.value, to_sigma(res.x), res.certified, pure)


@dataclass(frozen=True)
class MixtureDistance:
    upper: float
    lower: float
    certified: bool
    mode: str
    weights: np.ndarray = field(repr=False)
    prototypes: tuple = field(repr=False)
    start_values: tuple[float, ...] = ()


def batched_tensor_power(mats, n: int) -> np.ndarray:
    """``σ_j^{⊗n}`` for a stack of square matrices of shape ``(M, d, d)``."""
    mats = np.asarray(mats)
    m, d, _ = mats.shape
    out = mats
    for _ in range(n - 1):
        size = out.shape[1]
        out = np.einsum("jab,jcd->jacbd", out, mats).reshape(m, size * d, size * d)
    return out


def _mixture(x, M: int, d: int, n: int, pure: bool):
    w = softmax(x[:M])
    size = 2 * d if pure else 2 * d * d
    sigmas = []
    for j in range(M):
        chunk = x[M + j * size: M + (j + 1) * size]
        if pure:
            v = pure_from_params(chunk, d)
            sigmas.append(np.outer(v, v.conj()))
        else:
            sigmas.append(density_from_params(chunk, d))
    tau = np.tensordot(w, batched_tensor_power(np.stack(sigmas), n), axes=1)
    return tau, w, sigmas


def support_projector(rho, tol: float = 1e-10) -> np.ndarray:
    w, v = np.linalg.eigh(np.asarray(rho))
    keep = v[:, w > tol]
    return keep @ keep.conj().T


def min_iid_mixture_distance(rho, d: int, M: int, cfg: OptimizerConfig | None = None,
                             modes=("pure", "mixed")) -> MixtureDistance:
    """Smallest ``‖ρ − Σ_j w_j σ_j^{⊗n}‖₁`` found over ``M``-term mixtures.

    Each start first fits the mixture in Hilbert–Schmidt norm (smooth), then
    polishes the trace norm with Nelder–Mead.  Pure and mixed prototypes are
    both searched and the better result kept.  ``lower`` is the witness bound
    ``2(1 − max_σ tr(Π σ^{⊗n}))`` with ``Π`` the support projector of ``ρ``:
    every i.i.d. mixture ``τ`` has ``tr(Πτ)`` at most that maximum while
    ``tr(Πρ) = 1``.  It is only as good as the overlap search behind it.
    """
    cfg = cfg or OptimizerConfig()
    rho = np.asarray(rho, dtype=complex)
    n = subsystem_count(rho.shape[0], d)
    if M < 1:
        raise ArgumentError("mixture size must be at least 1")
    best = None
    for mode in modes:
        pure = mode == "pure"
        dim = M + M * (2 * d if pure else 2 * d * d)

        def hs(x):
            return float(np.linalg.norm(rho - _mixture(x, M, d, n, pure)[0]) ** 2)

        def tn(x):
            return trace_norm(rho - _mixture(x, M, d, n, pure)[0])

        res = multistart_minimize(hs, dim, cfg, polish=tn)
        if best is None or res.value < best[0].value:
            best = (res, mode, pure)
    res, mode, pure = best
    _, w, sigmas = _mixture(res.x, M, d, n, pure)
    witness = max_iid_overlap(support_projector(rho), d, cfg)
    lower = max(0.0, 2 * (1 - witness.value))
    return MixtureDistance(res.value, lower, res.certified, mode, w, tuple(sigmas),
                           res.values)


@dataclass
class ExampleReport:
    id: str
    N: int
    n: int
    checks: list[dict]

    @property
    def status(self) -> str:
        return "pass" if all(c["passed"] for c in self.checks) else "fail"

    def to_dict(self) -> dict:
        return {"id": self.id, "N": self.N, "n": self.n, "status": self.status,
                "claim": CLAIMS[self.id], "checks": self.checks}


def _check(name: str, claim: str, value: float, passed: bool, kind: str = "exact") -> dict:
    return {"name": name, "claim": claim, "value": float(value), "passed": bool(passed),
            "kind": "exact" if kind == "exact" else "numerically supported"}


def verify_example(id: str, N: int, n: int | None = None,
                   cfg: OptimizerConfig | None = None) -> ExampleReport:
    """Run the checks that apply to example ``id``.

    ``n`` is the size of the reduction examined; it defaults to ``N - 1``
    (``2`` for Ex6).
    """
    cfg = cfg or OptimizerConfig()
    entry = build(id, N)
    if n is None:
        n = 2 if id == "Ex6" else max(1, N - 1)
    rho = entry.state.matrix
    checks = []
    ok, dev = is_permutation_invariant_factor(entry.factor, entry.d, tol=1e-12,
                                               exhaustive=N <= 5)
    checks.append(_check("permutation_invariant", "π ρ π† = ρ", dev, ok))
    if id in ("Ex1", "Ex2", "Ex3", "Ex5", "Ex6"):
        rc = reduced_claim_check(entry, n)
        checks.append(_check("reduced_state", f"tr_{N - n} matches the stated form",
                             rc.distance, rc.passed))
    if id == "Ex1":
        dist = min_iid_mixture_distance(rho, 2, 2, cfg, modes=("pure",))
        checks.append(_check("mixture_distance", "exact 2-term i.i.d. mixture",
                             dist.upper, dist.upper <= OPT_TOL, "numerical"))
    if id == "Ex2":
        dist = min_iid_mixture_distance(rho, 2, 6, cfg)
        checks.append(_check("mixture_distance", "full state is not an i.i.d. mixture (> 0.1)",
                             dist.upper, dist.upper > 0.1, "numerical"))
    if id in ("Ex4", "Ex5"):
        bound = 0.25 if id == "Ex4" else 0.5
        mixed = max_iid_overlap(rho, 2, cfg)
        pure = max_iid_overlap(rho, 2, cfg, pure=True)
        checks.append(_check("overlap_mixed", f"max overlap over mixed σ is {bound}",
                             mixed.value, abs(mixed.value - bound) <= OPT_TOL, "numerical"))
        checks.append(_check("overlap_pure", f"max overlap over pure σ is at most {bound}",
                             pure.value, pure.value <= bound + OPT_TOL, "numerical"))
    if id == "Ex6" and N == 2:
        diff = trace_norm(rho - build("Ex4", 2).state.matrix)
        checks.append(_check("equals_singlet", "Ex6(N=2) is the singlet", diff, diff <= 1e-14))
    if id == "Ex7":
        proto = Prototype.basis(2, 0)
        all_iid = all(is_iid_vector(c, N - 1, proto) for c in entry.components.T)
        checks.append(_check("iid_components", "every component is ν on N-1 slots",
                             float(all_iid), all_iid))
        dist = min_iid_mixture_distance(rho, 2, min(4, N + 1), cfg)
        checks.append(_check("mixture_distance", "distance to i.i.d. mixtures >= 1/2",
                             dist.upper, dist.upper >= 0.5 - OPT_TOL, "numerical"))
        checks.append(_check("mixture_distance_witness", "support witness bound >= 1/2",
                             dist.lower, dist.lower >= 0.5 - OPT_TOL, "numerical"))
    return ExampleReport(id, N, n, checks)
