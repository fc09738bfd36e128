"""Quantitative core of the global de Finetti representation.

For a state ``ρ`` on ``Sym^{n+k}(C^d)`` and a pure prototype ``ν``:

* ``ρ^n_ν = dim(Sym^k) · tr_k((id^{⊗n} ⊗ ν^{⊗k}) ρ)``  (conditional state),
* ``ρ̄^n_ν = P^{n,r}_ν ρ^n_ν P^{n,r}_ν``               (truncated state),
* ``δ = ‖tr_k ρ − ∫ ρ̄^n_ν dν‖₁``                       (decomposition defect),

and the chain ``δ ≤ 3 dim(Sym^k) γ ≤ 3 e^{-k(r+1)/(n+k) + d ln k}``.

``∫ ρ^n_ν dν`` is a degree-(k, k) polynomial in ``ν`` and is evaluated
exactly; ``∫ ρ̄^n_ν dν`` is evaluated by quadrature.  All operators in the
defect live on ``Sym^n``, so the quadrature accumulates in symmetric-basis
coordinates (dimension ``binom(n+d-1, n)``) rather than on ``H^{⊗n}``.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .config import MAX_PERM_N, RunConfig, TOL_PSD
from .exceptions import ArgumentError, PreconditionError, ShapeError
from .iid import Prototype, apply_iid_projector, iid_projector
from .linalg import (
    DensityOperator,
    psd_factor,
    subsystem_count,
    tensor_power,
    trace_norm,
    trace_norm_product,
)
from .symmetric import (
    enumerate_compositions,
    is_permutation_invariant,
    project_symmetric,
    sym_basis,
    sym_coordinates,
    sym_dim,
    purification_from_factor,
    symmetric_residual,
)
from .twirl import QuadratureScheme, build_quadrature

BRUTEFORCE_MAX_DIM = 2**13
SUPPORT_TOL = 1e-8


@dataclass(frozen=True)
class TheoremParams:
    n: int
    k: int
    r: int
    d: int

    def __post_init__(self):
        if min(self.n, self.k, self.r) < 0:
            raise ArgumentError("n, k, r must be nonnegative")
        if self.k < 1:
            raise ArgumentError("k must be at least 1")
        if self.r > self.n:
            raise ArgumentError(f"r={self.r} exceeds n={self.n}")
        if self.d < 2:
            raise ArgumentError("subsystem dimension must be at least 2")

    @property
    def total(self) -> int:
        return self.n + self.k


def error_bound(p: TheoremParams, trivial_k1: bool = True) -> float:
    """``ε = 3 exp(-k(r+1)/(n+k) + d ln k)``.

    For ``k = 1`` the constant 3 is returned unless ``trivial_k1`` is false;
    the derivation of the exponential form needs ``binom(k+d-1, k) ≤ k^d``,
    which only holds from ``k = 2`` on.
    """
    if p.k == 1 and trivial_k1:
        return 3.0
    return 3.0 * math.exp(-p.k * (p.r + 1) / (p.n + p.k) + p.d * math.log(p.k))


def main_text_bound(N: int, n: int, r: int, d: int) -> float:
    """``3 exp(-r (N-n)/N + d ln(N-n))``; equals :func:`error_bound` with ``r+1 → r``."""
    if not 0 <= n < N:
        raise ArgumentError(f"need 0 <= n < N, got n={n}, N={N}")
    return 3.0 * math.exp(-r * (N - n) / N + d * math.log(N - n))


# -- γ --------------------------------------------------------------------


def _gamma_term(n: int, k: int, r: int, s: int) -> Fraction:
    if s <= r or s > n:
        # 1/(n-s)! is taken as 0 for s > n
        return Fraction(0)
    return Fraction(math.factorial(n + k - s) * math.factorial(n),
                    math.factorial(n + k) * math.factorial(n - s))


def gamma_exact_fraction(p: TheoremParams) -> Fraction:
    comps = enumerate_compositions(p.total, p.d)
    # s counts letters other than the prototype letter, taken to be the last one
    total = sum(_gamma_term(p.n, p.k, p.r, sum(lam[:-1])) for lam in comps)
    return total / len(comps)


def gamma_exact(p: TheoremParams) -> float:
    """Closed-form ``γ`` averaged over the symmetric basis."""
    return float(gamma_exact_fraction(p))


def gamma_bruteforce(p: TheoremParams) -> float:
    """``γ = tr(P_Sym^{n+k} ((P^{n,r})^⊥ ⊗ P^{k,0})) / dim(Sym^{n+k})`` by matrices.

    Uses the symmetric basis vectors and the i.i.d. projector built from its
    generating span, with prototype ``|0⟩``.
    """
    d, n, k = p.d, p.n, p.k
    proto = Prototype.basis(d, 0)
    p_iid = iid_projector(n, p.r, proto).matrix
    complement = np.eye(d**n) - p_iid
    nu_k = tensor_power(proto.vector, k)
    basis = sym_basis(n + k, d)
    # (id ⊗ |ν^k⟩⟨ν^k|) Φ = w ⊗ ν^k with w = Φ contracted against ν^k
    w = np.einsum("abj,b->aj", basis.reshape(d**n, d**k, -1), nu_k.conj())
    total = np.einsum("aj,ab,bj->", w.conj(), complement, w)
    return float(total.real) / basis.shape[1]


def gamma_bound_check(p: TheoremParams, slack: float = 1e-12) -> dict:
    """Evaluate ``γ ≤ (n/(n+k))^{r+1} ≤ e^{-k(r+1)/(n+k)}``."""
    gamma = gamma_exact(p)
    factorial_bound = float(_gamma_term(p.n, p.k, -1, p.r + 1)) if p.r + 1 <= p.n else 0.0
    power = (p.n / p.total) ** (p.r + 1)
    expo = math.exp(-p.k * (p.r + 1) / p.total)
    return {
        "gamma": gamma,
        "factorial_bound": factorial_bound,
        "power_bound": power,
        "exp_bound": expo,
        "gamma_le_factorial": gamma <= factorial_bound + slack,
        "factorial_le_power": factorial_bound <= power + slack,
        "gamma_le_power": gamma <= power + slack,
        "power_le_exp": power <= expo + slack,
    }


# -- gentle measurement ------------------------------------------------------


def gentle_lemma_check(family, slack: float = 1e-10) -> tuple[float, float, bool]:
    """Check ``‖Σ w(ρ − PρP)‖₁ ≤ 3‖Σ w(id − P)ρ‖₁`` for ``(ρ, P, w)`` triples."""
    family = list(family)
    if not family:
        raise ArgumentError("empty family")
    dim = np.asarray(family[0][0]).shape[0]
    lhs_op = np.zeros((dim, dim), dtype=complex)
    rhs_op = np.zeros((dim, dim), dtype=complex)
    eye = np.eye(dim)
    for rho, proj, w in family:
        rho = np.asarray(rho)
        proj = np.asarray(getattr(proj, "matrix", proj))
        lhs_op += w * (rho - proj @ rho @ proj)
        rhs_op += w * ((eye - proj) @ rho)
    lhs, rhs = trace_norm(lhs_op), 3 * trace_norm(rhs_op)
    return lhs, rhs, lhs <= rhs + slack


# -- conditional and truncated states ---------------------------------------


def support_residual(rho, d: int) -> float:
    """``max`` column norm of ``(id − P_Sym) ρ``."""
    rho = np.asarray(rho)
    n = subsystem_count(rho.shape[0], d)
    return symmetric_residual(rho, n, d)


def _contract_tail(vectors, v, p: TheoremParams) -> np.ndarray:
    """``(id^{⊗n} ⊗ ⟨v|^{⊗k}) x`` for each column ``x``."""
    d = p.d
    vk = tensor_power(np.asarray(v, dtype=complex), p.k)
    x = np.asarray(vectors).reshape(d**p.n, d**p.k, -1)
    return np.einsum("abj,b->aj", x, vk.conj())


def conditional_state(rho, prototype: Prototype, p: TheoremParams,
                      tol: float = SUPPORT_TOL) -> np.ndarray:
    """``ρ^n_ν = dim(Sym^k) · tr_k((id^{⊗n} ⊗ ν^{⊗k}) ρ)`` (unnormalised, PSD)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (p.d**p.total,) * 2:
        raise ShapeError(f"state shape {rho.shape} does not match (n+k, d)=({p.total}, {p.d})")
    res = support_residual(rho, p.d)
    if res > tol:
        raise PreconditionError(
            f"state is not supported on Sym^{p.total} (residual {res:.3e}); purify it first"
        )
    a, b = p.d**p.n, p.d**p.k
    vk = tensor_power(prototype.vector, p.k)
    out = np.einsum("igjb,b,g->ij", rho.reshape(a, b, a, b), vk, vk.conj())
    return sym_dim(p.k, p.d) * out


def truncated_state(rho_n, prototype: Prototype, p: TheoremParams) -> np.ndarray:
    """``ρ̄^n_ν = P^{n,r}_ν ρ^n_ν P^{n,r}_ν``."""
    rho_n = np.asarray(rho_n, dtype=complex)
    left = apply_iid_projector(rho_n, p.n, p.r, prototype)
    return apply_iid_projector(left.conj().T, p.n, p.r, prototype).conj().T


def _tail_symmetrized(factor, p: TheoremParams) -> np.ndarray:
    """``(id^{⊗n} ⊗ P_Sym^k) x`` for each column, shape ``(d^n, d^k, R)``."""
    d = p.d
    x = np.asarray(factor).reshape(d**p.n, d**p.k, -1)
    y = np.moveaxis(x, 1, 0).reshape(d**p.k, -1)
    y = project_symmetric(y, p.k, d).reshape(d**p.k, d**p.n, -1)
    return np.moveaxis(y, 0, 1)


def haar_conditional_average(factor, p: TheoremParams) -> np.ndarray:
    """``∫ ρ^n_ν dν`` exactly: ``tr_k((id ⊗ P_Sym^k) ρ)`` for ``ρ = F F†``."""
    x = np.asarray(factor).reshape(p.d**p.n, p.d**p.k, -1)
    return np.einsum("abj,cbj->ac", _tail_symmetrized(factor, p), x.conj())


def reduced_from_factor(factor, p: TheoremParams) -> np.ndarray:
    x = np.asarray(factor).reshape(p.d**p.n, -1)
    return x @ x.conj().T


def haar_consistency(factor, p: TheoremParams) -> float:
    """``‖tr_k ρ − ∫ ρ^n_ν dν‖₁`` with the exact Haar integral.

    The difference equals ``(X − Y) X†`` with ``X`` the reshaped factor and
    ``Y = (id ⊗ P_Sym^k) X``, so its trace norm is taken in low-rank form.
    """
    factor = np.asarray(factor)
    if factor.ndim == 1:
        factor = factor[:, None]
    x = factor.reshape(p.d**p.n, -1)
    y = _tail_symmetrized(factor, p).reshape(p.d**p.n, -1)
    return trace_norm_product(x - y, x)


@dataclass
class DefectEstimate:
    delta: float
    resolution: int
    compression_residual: float
    max_truncated_rank: int
    integrated: np.ndarray = field(repr=False)


def _check_factor(factor, p: TheoremParams, tol: float = SUPPORT_TOL) -> np.ndarray:
    factor = np.asarray(factor, dtype=complex)
    if factor.ndim == 1:
        factor = factor[:, None]
    if factor.shape[0] != p.d**p.total:
        raise ShapeError(f"factor has {factor.shape[0]} rows, expected {p.d}**{p.total}")
    res = symmetric_residual(factor, p.total, p.d)
    if res > tol:
        raise PreconditionError(f"state is not supported on Sym^{p.total} (residual {res:.3e})")
    return factor


def defect_from_factor(factor, p: TheoremParams, q: QuadratureScheme) -> DefectEstimate:
    """Quadrature estimate of ``δ`` for ``ρ = F F†`` supported on ``Sym^{n+k}``."""
    if q.d != p.d:
        raise ArgumentError(f"quadrature is over C^{q.d} but the state has d={p.d}")
    factor = _check_factor(factor, p)
    d, n = p.d, p.n
    scale = sym_dim(p.k, d)
    reduced = sym_coordinates(factor.reshape(d**n, -1), n, d)
    target = reduced @ reduced.conj().T
    acc = np.zeros_like(target)
    residual, max_rank = 0.0, 0
    for v, w in zip(q.vectors, q.weights):
        g = _contract_tail(factor, v, p)
        g = apply_iid_projector(g, n, p.r, Prototype(v))
        c = sym_coordinates(g, n, d)
        residual = max(residual, float(np.linalg.norm(g - _lift(c, n, d))))
        sv = np.linalg.svd(c, compute_uv=False)
        max_rank = max(max_rank, int(np.sum(sv > 1e-10 * max(1.0, sv[0] if sv.size else 0))))
        acc += (w * scale) * (c @ c.conj().T)
    delta = trace_norm(target - acc)
    return DefectEstimate(delta, q.resolution, residual, max_rank, acc)


def _lift(coords, n: int, d: int) -> np.ndarray:
    """Inverse of :func:`sym_coordinates` on the symmetric subspace."""
    return sym_basis_cached(n, d) @ coords


_BASIS_CACHE: dict = {}


def sym_basis_cached(n: int, d: int) -> np.ndarray:
    key = (n, d)
    if key not in _BASIS_CACHE:
        _BASIS_CACHE[key] = sym_basis(n, d)
    return _BASIS_CACHE[key]


def decomposition_defect(rho, p: TheoremParams, q: QuadratureScheme) -> tuple[float, float]:
    """``δ`` at ``q`` and the doubling diagnostic ``|δ_m − δ_{2m}|``."""
    rho = np.asarray(rho, dtype=complex)
    factor = psd_factor(rho) if rho.ndim == 2 and rho.shape[0] == rho.shape[1] else rho
    coarse = defect_from_factor(factor, p, q)
    fine = defect_from_factor(factor, p, q.doubled())
    return coarse.delta, abs(coarse.delta - fine.delta)


# -- end-to-end report -------------------------------------------------------


@dataclass
class DecompositionReport:
    params: TheoremParams
    effective_d: int
    purified: bool
    delta: float
    delta_doubled: float
    delta_quadrature_error: float
    quadrature_conclusive: bool
    gamma_exact: float
    gamma_bruteforce: float | None
    bound_intermediate: float
    bound_final: float
    haar_consistency: float
    compression_residual: float
    max_truncated_rank: int
    input_rank: int
    inequalities: dict
    quadrature: dict
    config: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        hard = [v for key, v in self.inequalities.items() if not key.startswith("delta_")]
        soft = [v for key, v in self.inequalities.items() if key.startswith("delta_")]
        if not all(hard):
            return "fail"
        if not self.quadrature_conclusive:
            return "inconclusive"
        return "pass" if all(soft) else "fail"

    def to_dict(self) -> dict:
        out = asdict(self)
        out["status"] = self.status
        out["provenance"] = {
            "software": f"definetti {__version__}",
            "seed": self.quadrature["seed"],
            "resolution": self.quadrature["resolution"],
            "tolerances": self.config.get("tolerances", {}),
        }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def verify_theorem(rho, d: int, n: int, k: int, r: int,
                   config: RunConfig | None = None) -> DecompositionReport:
    """Run the full decomposition pipeline on a permutation-invariant state.

    ``rho`` is a density matrix on ``(C^d)^{⊗(n+k)}``.  States not supported
    on the symmetric subspace are first purified into ``Sym^{n+k}(C^d ⊗ C^d)``,
    in which case every quantity (including ``ε``) uses ``d**2``.
    """
    config = config or RunConfig()
    tol = config.tolerances
    if isinstance(rho, DensityOperator):
        rho = rho.matrix
    rho = DensityOperator(np.asarray(rho, dtype=complex), d, n + k).validate(
        tol.herm, tol.psd, tol.tr
    ).matrix
    # generators suffice for invariance under the whole group
    ok, dev = is_permutation_invariant(rho, d, tol=1e-8, exhaustive=False)
    if not ok:
        raise PreconditionError(f"state is not permutation invariant (deviation {dev:.3e})")

    factor = psd_factor(rho, tol=1e-12)
    purified = symmetric_residual(factor, n + k, d) > SUPPORT_TOL
    d_eff = d
    if purified:
        # invariance was checked above, so the factor form of the purification applies
        factor = purification_from_factor(factor, d)[:, None]
        d_eff = d * d
    p = TheoremParams(n, k, r, d_eff)

    qc = config.quadrature
    kind = "monte-carlo" if qc.kind == "sphere-grid" and d_eff != 2 else qc.kind
    q = build_quadrature(d_eff, qc.resolution, kind, qc.seed)
    coarse = defect_from_factor(factor, p, q)
    fine = defect_from_factor(factor, p, q.doubled())
    diag = abs(coarse.delta - fine.delta)
    conclusive = diag <= coarse.delta / 10

    g_exact = gamma_exact(p)
    g_brute = gamma_bruteforce(p) if d_eff ** p.total <= BRUTEFORCE_MAX_DIM else None
    intermediate = 3 * sym_dim(k, d_eff) * g_exact
    eps = error_bound(p)
    chain = gamma_bound_check(p)
    consistency = haar_consistency(factor, p)

    ineq = {
        "delta_le_intermediate": coarse.delta <= intermediate + 1e-12,
        "delta_le_epsilon": coarse.delta <= eps + 1e-12,
        "gamma_chain": chain["gamma_le_power"] and chain["power_le_exp"],
        "haar_consistency": consistency <= 1e-8,
        "rank_preserved": coarse.max_truncated_rank <= factor.shape[1],
    }
    if k >= 2:
        ineq["intermediate_le_epsilon"] = intermediate <= eps + 1e-12
    if g_brute is not None:
        ineq["gamma_routes_agree"] = abs(g_exact - g_brute) <= 1e-10

    return DecompositionReport(
        params=TheoremParams(n, k, r, d),
        effective_d=d_eff,
        purified=purified,
        delta=coarse.delta,
        delta_doubled=fine.delta,
        delta_quadrature_error=diag,
        quadrature_conclusive=bool(conclusive),
        gamma_exact=g_exact,
        gamma_bruteforce=g_brute,
        bound_intermediate=intermediate,
        bound_final=eps,
        haar_consistency=consistency,
        compression_residual=max(coarse.compression_residual, fine.compression_residual),
        max_truncated_rank=coarse.max_truncated_rank,
        input_rank=factor.shape[1],
        inequalities={key: bool(v) for key, v in ineq.items()},
        quadrature=q.to_json(),
        config=config.to_dict(),
    )
