"""Dense complex linear algebra kernel.

Everything downstream (shift/clock algebra, chain Hamiltonians, transfer
fidelities) is built on the three operations here: hermitian
eigendecomposition, unitary time evolution through the spectral theorem,
and matrix-vector application.  All values are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonHermitianInputError,
    NotNormalizedError,
)

# Tolerance policy: absolute for exact algebraic identities at small
# dimension, relative to the max entry for spectral reconstructions.
HERMITIAN_RTOL = 1e-12
UNITARY_ATOL = 1e-10
EIG_RTOL = 1e-10
STATE_NORM_ATOL = 1e-10

HERMITIAN = "hermitian"
UNITARY = "unitary"
GENERAL = "general"

_TAGS = (HERMITIAN, UNITARY, GENERAL)


def max_abs(matrix: np.ndarray) -> float:
    """Largest entry magnitude (the max norm used by all tolerances)."""
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Operator:
    """Dense complex square matrix with a declared structural tag.

    The tag is verified at construction: hermitian means
    max |M[i,j] - conj(M[j,i])| <= 1e-12 * (max entry magnitude), unitary
    means max |M^dag M - I| <= 1e-10.  Use GENERAL when neither structure
    is claimed.
    """

    matrix: np.ndarray
    tag: str = GENERAL

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"operator must be square, got shape {m.shape}")
        if m.shape[0] < 1:
            raise DimensionMismatchError("operator dimension must be >= 1")
        if self.tag not in _TAGS:
            raise ValueError(f"unknown operator tag {self.tag!r}")
        if self.tag == HERMITIAN:
            dev = max_abs(m - m.conj().T)
            if dev > HERMITIAN_RTOL * max_abs(m):
                raise NonHermitianInputError(
                    f"hermiticity violated: max |M - M^dag| = {dev:.3e}"
                )
        elif self.tag == UNITARY:
            dev = max_abs(m.conj().T @ m - np.eye(m.shape[0]))
            if dev > UNITARY_ATOL:
                raise ValueError(f"unitarity violated: max |M^dag M - I| = {dev:.3e}")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, tag=self.tag)

    def __matmul__(self, other: "Operator") -> "Operator":
        if self.dim != other.dim:
            raise DimensionMismatchError(f"cannot multiply dims {self.dim} and {other.dim}")
        tag = UNITARY if self.tag == UNITARY and other.tag == UNITARY else GENERAL
        return Operator(self.matrix @ other.matrix, tag=tag)


class StateVector:
    """Complex amplitude vector over basis states.

    Unit norm (within 1e-10) is enforced at construction; `apply` is the
    one producer of intentionally non-normalized vectors (a non-unitary
    operator may shrink or stretch its input) and bypasses the check.
    """

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes, *, check_norm: bool = True) -> None:
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        if amps.size < 1:
            raise DimensionMismatchError("state vector must have dimension >= 1")
        if check_norm:
            norm_sq = float(np.sum(np.abs(amps) ** 2))
            if abs(norm_sq - 1.0) > STATE_NORM_ATOL:
                raise NotNormalizedError(f"state norm^2 = {norm_sq!r}, expected 1")
        self.amplitudes = _freeze(amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim})"


def basis_state(dim: int, index: int) -> StateVector:
    """Computational basis state |index> in a dim-dimensional space."""
    if not 0 <= index < dim:
        raise DimensionMismatchError(f"index {index} outside dimension {dim}")
    amps = np.zeros(dim, dtype=complex)
    amps[index] = 1.0
    return StateVector(amps)


def identity(dim: int) -> Operator:
    """Identity operator (tagged unitary)."""
    return Operator(np.eye(dim, dtype=complex), tag=UNITARY)


@dataclass(frozen=True)
class EigenSystem:
    """Spectral decomposition H = V diag(values) V^dag.

    values ascend; eigenvector columns are phase-canonicalized so the
    largest-magnitude entry of each is real positive.
    """

    values: np.ndarray
    vectors: Operator = field(repr=False)

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1 or vals.shape[0] != self.vectors.dim:
            raise DimensionMismatchError("eigenvalue count must match vector dimension")
        if np.any(np.diff(vals) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        object.__setattr__(self, "values", _freeze(vals))


def _canonical_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        pivot = out[np.argmax(np.abs(out[:, k])), k]
        if pivot != 0:
            out[:, k] *= pivot.conjugate() / abs(pivot)
    return out


def hermitian_eig(operator: Operator) -> EigenSystem:
    """Eigendecomposition of a hermitian operator.

    Returns ascending eigenvalues and a unitary eigenvector matrix; the
    reconstruction residual ||H - V diag V^dag||_max is verified against
    1e-10 * max(1, ||H||_max).
    """
    if operator.tag != HERMITIAN:
        raise NonHermitianInputError("hermitian_eig requires a hermitian-tagged operator")
    values, raw = np.linalg.eigh(operator.matrix)
    vectors = _canonical_phases(raw)
    residual = max_abs(operator.matrix - (vectors * values) @ vectors.conj().T)
    bound = EIG_RTOL * max(1.0, max_abs(operator.matrix))
    if residual > bound:
        raise ArithmeticError(
            f"eigendecomposition residual {residual:.3e} exceeds {bound:.3e}"
        )
    return EigenSystem(values=values, vectors=Operator(vectors, tag=UNITARY))


def evolve(hamiltonian: Operator, t: float, hbar: float = 1.0) -> Operator:
    """Unitary time evolution exp(-i H t / hbar) via the spectral theorem."""
    if hamiltonian.tag != HERMITIAN:
        raise NonHermitianInputError("evolve requires a hermitian-tagged operator")
    if not math.isfinite(t):
        raise ValueError(f"evolution time must be finite, got {t!r}")
    if hbar <= 0 or not math.isfinite(hbar):
        raise ValueError(f"hbar must be positive and finite, got {hbar!r}")
    if t == 0.0:
        return identity(hamiltonian.dim)
    values, vectors = np.linalg.eigh(hamiltonian.matrix)
    phases = np.exp(-1j * values * (t / hbar))
    return Operator((vectors * phases) @ vectors.conj().T, tag=UNITARY)


def apply(operator: Operator, state: StateVector) -> StateVector:
    """Matrix-vector product M|v>.

    The result keeps whatever norm the product has; it is only guaranteed
    to be unit norm when M is unitary.
    """
    if operator.dim != state.dim:
        raise DimensionMismatchError(
            f"operator dim {operator.dim} does not match state dim {state.dim}"
        )
    return StateVector(operator.matrix @ state.amplitudes, check_norm=False)
