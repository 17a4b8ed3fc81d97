"""Shared random generators for the test suite."""

import numpy as np

from leibcrit.bracket import Bracket


def random_bracket(n: int, rng: np.random.Generator, scale: float = 1.0) -> Bracket:
    c = rng.standard_normal((n, n, n)) + 1j * rng.standard_normal((n, n, n))
    return Bracket(n, scale * c)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (z + z.conj().T)


def random_invertible(n: int, rng: np.random.Generator, max_cond: float = 10.0) -> np.ndarray:
    """Random invertible matrix with condition number below max_cond."""
    while True:
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if np.linalg.cond(g) < max_cond:
            return g
