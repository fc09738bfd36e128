from __future__ import annotations

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_symmetric_state(n: int, d: int, rng, rank: int = 2) -> np.ndarray:
    """A random density matrix supported on ``Sym^n(C^d)``."""
    from definetti.symmetric import sym_basis

    b = sym_basis(n, d)
    g = rng.standard_normal((b.shape[1], rank)) + 1j * rng.standard_normal((b.shape[1], rank))
    f = b @ g
    rho = f @ f.conj().T
    return rho / np.trace(rho).real


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
