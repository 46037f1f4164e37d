"""Shared oracle helpers for the test suite.

The matrix-exponential oracle here sums the power series directly so it
stays independent of the spectral route the package uses.
"""

from __future__ import annotations

import numpy as np

from qwire.numerics import HERMITIAN, Operator


def random_hermitian(rng: np.random.Generator, d: int, scale: float = 1.0) -> Operator:
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return Operator(scale * (m + m.conj().T) / 2, tag=HERMITIAN)


def expm_series(m: np.ndarray, terms: int = 64) -> np.ndarray:
    """Plain power-series exp(M); adequate for the small norms used here."""
    result = np.eye(m.shape[0], dtype=complex)
    term = np.eye(m.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ m / k
        result = result + term
    return result
