"""The sampling factor gamma and the final error bound.

``gamma`` is computed as an exact rational, checked against a brute-force sum
over permutations, and compared with the two analytic relaxations.
"""
from __future__ import annotations

from definetti import TheoremParams, error_bound, gamma_bound_check, gamma_bruteforce, gamma_exact
from definetti.theorem import gamma_exact_fraction

print(f"{'n':>3}{'k':>3}{'r':>3}  {'gamma':>22}  {'brute':>10}  {'(n/N)^(r+1)':>11}  {'eps':>10}")
for n, k, r in [(1, 1, 0), (2, 2, 0), (3, 2, 1), (4, 3, 2), (5, 3, 1)]:
    p = TheoremParams(n, k, r, 2)
    chk = gamma_bound_check(p)
    print(f"{n:>3}{k:>3}{r:>3}  {str(gamma_exact_fraction(p)):>12} = {gamma_exact(p):.5f}"
          f"  {gamma_bruteforce(p):>10.5f}  {chk['power_bound']:>11.5f}  {error_bound(p):>10.4g}")

# ε only drops below 1 once k is large and r grows like N^(2/3)
for N in (10**3, 10**4, 10**5, 10**6):
    r = round(N ** (2 / 3))
    print(f"N={N:>8}  r=k={r:>5}  eps={error_bound(TheoremParams(N - r, r, r, 2)):.3e}")
