"""Seeded multi-start local search and state parameterisations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .config import OptimizerConfig


def pure_from_params(x, d: int) -> np.ndarray:
    """Unit vector in ``C^d`` from ``2d`` real parameters."""
    x = np.asarray(x, dtype=float)
    v = x[:d] + 1j * x[d:2 * d]
    norm = np.linalg.norm(v)
    if norm < 1e-300:
        v = np.zeros(d, complex)
        v[0] = 1
        return v
    return v / norm


def density_from_params(x, d: int) -> np.ndarray:
    """``A A† / tr(A A†)`` from ``2d²`` real parameters (entries of ``A``)."""
    x = np.asarray(x, dtype=float)
    a = (x[: d * d] + 1j * x[d * d: 2 * d * d]).reshape(d, d)
    rho = a @ a.conj().T
    tr = np.trace(rho).real
    if tr < 1e-300:
        return np.eye(d, dtype=complex) / d
    return rho / tr


def softmax(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    e = np.exp(z - z.max())
    return e / e.sum()


@dataclass(frozen=True)
class SearchResult:
    value: float
    x: np.ndarray
    certified: bool
    values: tuple[float, ...]

    @property
    def worst(self) -> float:
        return max(self.values)


def multistart_minimize(fun, dim: int, cfg: OptimizerConfig, method: str = "L-BFGS-B",
                        seeds_x0=(), polish=None) -> SearchResult:
    """Minimise ``fun`` from ``seeds_x0`` plus ``cfg.starts`` random points.

    Start ``j`` draws its point from ``default_rng([cfg.seed, j])``, so results
    depend only on the seed and the start index.  ``polish`` is an optional
    second objective minimised with Nelder–Mead from each first-stage optimum.
    ``certified`` is the convergence flag of the best run.
    """
    starts = [np.asarray(x, dtype=float) for x in seeds_x0]
    for j in range(cfg.starts):
        starts.append(np.random.default_rng([cfg.seed, j]).standard_normal(dim))
    best = None
    values = []
    for x0 in starts:
        res = minimize(fun, x0, method=method, options={"maxiter": cfg.iterations})
        x, val, ok = res.x, float(res.fun), bool(res.success)
        if polish is not None:
            res2 = minimize(polish, x, method="Nelder-Mead",
                            options={"maxiter": cfg.iterations * 4, "xatol": 1e-9, "fatol": 1e-12})
            x, val, ok = res2.x, float(res2.fun), bool(res2.success)
        values.append(val)
        if best is None or val < best[1]:
            best = (x, val, ok)
    return SearchResult(best[1], best[0], best[2], tuple(values))
