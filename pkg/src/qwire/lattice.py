"""Tight-binding ring and line chains: Hamiltonian builders, the closed-form
dispersion E_j = E0 - 2A cos(k_j b), and the ring position spread."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadCouplingCountError,
    DimensionTooSmallError,
    NotNormalizedError,
)
from .numerics import HERMITIAN, Operator, StateVector, hermitian_eig

RING = "ring"
LINE = "line"

DISPERSION_ATOL = 1e-10


@dataclass(frozen=True)
class ChainSpec:
    """Chain description: size, topology, on-site energy, and one coupling
    per bond (d-1 bonds on a line, d on a ring)."""

    d: int
    topology: str
    E0: float
    couplings: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.d < 2:
            raise DimensionTooSmallError(f"chain needs d >= 2, got {self.d}")
        if self.topology not in (RING, LINE):
            raise ValueError(f"topology must be 'ring' or 'line', got {self.topology!r}")
        couplings = tuple(float(a) for a in self.couplings)
        expected = self.d if self.topology == RING else self.d - 1
        if len(couplings) != expected:
            raise BadCouplingCountError(
                f"{self.topology} chain with d={self.d} needs {expected} couplings, "
                f"got {len(couplings)}"
            )
        if not all(np.isfinite(couplings)):
            raise ValueError("couplings must be finite")
        object.__setattr__(self, "couplings", couplings)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.couplings)) == 1


def uniform_chain(d: int, topology: str, E0: float = 0.0, A: float = 1.0) -> ChainSpec:
    """ChainSpec with every bond set to the same amplitude A."""
    n_bonds = d if topology == RING else d - 1
    return ChainSpec(d=d, topology=topology, E0=E0, couplings=(A,) * max(n_bonds, 0))


def build_hamiltonian(spec: ChainSpec) -> Operator:
    """Nearest-neighbor Hamiltonian: E0 on the diagonal, -A_l on bond l.

    Lines are tridiagonal; rings add the wraparound corner (for d=2 the
    two ring bonds share one matrix element and accumulate).
    """
    h = np.zeros((spec.d, spec.d), dtype=complex)
    np.fill_diagonal(h, spec.E0)
    for bond, amplitude in enumerate(spec.couplings):
        i, j = bond, (bond + 1) % spec.d
        h[i, j] += -amplitude
        h[j, i] += -amplitude
    return Operator(h, tag=HERMITIAN)


def dispersion(topology: str, d: int, E0: float, A: float) -> np.ndarray:
    """Closed-form single-particle energies E_j = E0 - 2A cos(k_j b).

    Ring wave numbers are k_j b = 2*pi*j/d for j = 0..d-1; line wave
    numbers are k_j b = pi*j/(d+1) for j = 1..d.  Values come back in j
    order, not sorted.
    """
    if d < 2:
        raise DimensionTooSmallError(f"dispersion needs d >= 2, got {d}")
    if topology == RING:
        kb = 2 * np.pi * np.arange(d) / d
    elif topology == LINE:
        kb = np.pi * np.arange(1, d + 1) / (d + 1)
    else:
        raise ValueError(f"topology must be 'ring' or 'line', got {topology!r}")
    return E0 - 2 * A * np.cos(kb)


def dispersion_check(spec: ChainSpec) -> float:
    """Max deviation between the eigenvalues of the built Hamiltonian and
    the closed-form dispersion, both sorted (uniform couplings only)."""
    if not spec.is_uniform:
        raise ValueError("dispersion_check requires uniform couplings")
    eigensystem = hermitian_eig(build_hamiltonian(spec))
    closed_form = np.sort(dispersion(spec.topology, spec.d, spec.E0, spec.couplings[0]))
    return float(np.max(np.abs(eigensystem.values - closed_form)))


def ring_position_spread(state: StateVector) -> float:
    """Standard deviation of the ring coordinate q_l = 2*pi*l/d under the
    state's site probabilities."""
    probabilities = np.abs(state.amplitudes) ** 2
    total = float(probabilities.sum())
    if abs(total - 1.0) > 1e-10:
        raise NotNormalizedError(f"state norm^2 = {total!r}, expected 1")
    coords = 2 * np.pi * np.arange(state.dim) / state.dim
    mean = float(np.dot(probabilities, coords))
    variance = float(np.dot(probabilities, (coords - mean) ** 2))
    return float(np.sqrt(variance))
