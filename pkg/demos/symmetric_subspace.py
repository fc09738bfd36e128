"""Symmetric subspace basics: dimension, projector, and the twirl identity.

Run with ``python demos/symmetric_subspace.py``.
"""
from __future__ import annotations

import math

import numpy as np

from definetti import gamma_operator, sym_dim, sym_projector
from definetti.symmetric import sym_basis

# dim Sym^n(C^d) = binom(n+d-1, n); the type-class basis is orthonormal
for n, d in [(2, 2), (3, 2), (3, 3), (4, 3)]:
    b = sym_basis(n, d)
    gram = np.max(np.abs(b.conj().T @ b - np.eye(b.shape[1])))
    print(f"n={n} d={d}: dim={sym_dim(n, d)} binom={math.comb(n + d - 1, n)} |Gram - id|={gram:.1e}")

# averaging any operator over U^{⊗n} leaves P_Sym fixed under left multiplication
rng = np.random.default_rng(0)
n, d = 3, 2
p = sym_projector(n, d).matrix
a = rng.standard_normal((d**n, d**n)) + 1j * rng.standard_normal((d**n, d**n))
print(f"|Gamma(A) P - P| = {np.max(np.abs(gamma_operator(a, d) @ p - p)):.1e}")
