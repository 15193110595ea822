"""Lattice geometry, state vectors, and probability observables.

The simulation lives on a periodic L x L square lattice with N = L**2
vertices.  A state vector stores one real amplitude per vertex (plain
mode) or two (ancilla mode, sectors a=0 and a=1), flattened in the order
``a*N + x2*L + x1``.  Every operator applied by the search is a real
orthogonal matrix, so amplitudes stay real for the entire evolution; the
complex dense path in :mod:`latsearch.dense` certifies this choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Mode(str, Enum):
    """State-space layout: bare lattice or lattice plus ancilla qubit."""

    PLAIN = "plain"
    ANCILLA = "ancilla"


@dataclass(frozen=True)
class LatticeConfig:
    """Periodic square lattice with a single marked vertex.

    ``L`` must be even and at least 4 so that the two interleaved
    plaquette tilings are well defined and distinct; ``marked`` is the
    (x1, x2) coordinate pair of the vertex the search looks for.
    """

    L: int
    marked: tuple[int, int] = (0, 0)
    mode: Mode = Mode.PLAIN

    def __post_init__(self) -> None:
        if self.L % 2 != 0:
            raise ValueError(f"L must be even, got L={self.L}")
        if self.L < 4:
            raise ValueError(f"L must be >= 4, got L={self.L}")
        m1, m2 = self.marked
        if not (0 <= m1 < self.L and 0 <= m2 < self.L):
            raise ValueError(
                f"marked out of range: {self.marked} not inside [0, {self.L})^2"
            )
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "marked", (int(m1), int(m2)))

    @property
    def N(self) -> int:
        return self.L * self.L


@dataclass(frozen=True)
class WalkParams:
    """Kinetic parameter of the Trotterised walk and the step count t1.

    ``s`` is the sine of the per-step evolution angle; ``c = sqrt(1-s^2)``
    is the corresponding cosine, ``tau = sqrt(2)*asin(s)`` the evolution
    time per walk step, and ``theta = t1*tau`` the total rotation between
    consecutive oracle calls (the quantity tuned near pi).
    """

    s: float
    t1: int = 1

    def __post_init__(self) -> None:
        if not 0.0 < self.s < 1.0:
            raise ValueError(f"s must lie strictly inside (0, 1), got s={self.s}")
        if int(self.t1) != self.t1 or self.t1 < 1:
            raise ValueError(f"t1 must be a positive integer, got t1={self.t1}")
        object.__setattr__(self, "t1", int(self.t1))

    @property
    def c(self) -> float:
        return math.sqrt(1.0 - self.s * self.s)

    @property
    def tau(self) -> float:
        return math.sqrt(2.0) * math.asin(self.s)

    @property
    def theta(self) -> float:
        return self.t1 * self.tau


@dataclass
class StateVector:
    """Real amplitudes over (ancilla sector x) lattice sites.

    Flat layout: index = ``a*N + x2*L + x1`` (sector-major, row-major in
    x2, x1 fastest).  The four sites of any 2x2 plaquette then occupy two
    adjacent row segments, which keeps the stencil kernel cache friendly.
    """

    mode: Mode
    L: int
    amplitudes: np.ndarray

    @property
    def N(self) -> int:
        return self.L * self.L

    def sector(self, a: int | None = None) -> np.ndarray:
        """Return the (L, L) grid view of one sector, indexed [x2, x1].

        Plain states have a single anonymous sector (``a`` must be omitted
        or None); ancilla states require ``a`` in {0, 1}.
        """
        if self.mode is Mode.PLAIN:
            if a not in (None, 0):
                raise ValueError("plain state has no ancilla sectors")
            return self.amplitudes.reshape(self.L, self.L)
        if a is None:
            raise ValueError("ancilla state: sector index required")
        if a not in (0, 1):
            raise ValueError(f"sector must be 0 or 1, got {a}")
        return self.amplitudes.reshape(2, self.L, self.L)[a]

    def copy(self) -> "StateVector":
        return StateVector(self.mode, self.L, self.amplitudes.copy())


def uniform_state(config: LatticeConfig) -> StateVector:
    """Uniform superposition over all vertices.

    Plain mode: every amplitude equals 1/sqrt(N).  Ancilla mode: the a=1
    sector is uniform and the a=0 sector is all zero (the ancilla starts
    in |1>).
    """
    n = config.N
    amp = 1.0 / math.sqrt(n)
    if config.mode is Mode.PLAIN:
        v = np.full(n, amp)
    else:
        v = np.zeros(2 * n)
        v[n:] = amp
    return StateVector(config.mode, config.L, v)


def site_index(
    config: LatticeConfig, x1: int, x2: int, a: int | None = None
) -> int:
    """Flat index of site (x1, x2) in sector ``a``; bijective over the domain."""
    if not (0 <= x1 < config.L and 0 <= x2 < config.L):
        raise ValueError(f"site ({x1}, {x2}) out of range for L={config.L}")
    if config.mode is Mode.PLAIN:
        if a is not None:
            raise ValueError("plain mode takes no sector index")
        a = 0
    else:
        if a not in (0, 1):
            raise ValueError(f"ancilla mode requires sector 0 or 1, got {a}")
    return a * config.N + x2 * config.L + x1


def norm(state: StateVector) -> float:
    """Euclidean norm, accumulated in a fixed deterministic order."""
    v = state.amplitudes
    return math.sqrt(float(np.dot(v, v)))


def _check_modes(state: StateVector, config: LatticeConfig) -> None:
    if state.mode is not config.mode or state.L != config.L:
        raise ValueError(
            f"state ({state.mode.value}, L={state.L}) does not match "
            f"config ({config.mode.value}, L={config.L})"
        )


def marked_probability(state: StateVector, config: LatticeConfig) -> float:
    """Probability of finding the walker at the marked vertex.

    In ancilla mode both sectors contribute (the trap amplitude at a=0
    counts toward success).
    """
    _check_modes(state, config)
    m1, m2 = config.marked
    if state.mode is Mode.PLAIN:
        return float(state.sector()[m2, m1]) ** 2
    a0 = float(state.sector(0)[m2, m1])
    a1 = float(state.sector(1)[m2, m1])
    return a0 * a0 + a1 * a1


def projected_probability(
    state: StateVector, config: LatticeConfig, delta: float
) -> float:
    """Squared overlap with the rotated target direction at the marked vertex.

    The target direction is (sin(delta), cos(delta)) in the (a=0, a=1)
    basis; at delta=0 this is the bare a=1 amplitude, at delta=pi/2 the
    trap sector alone.
    """
    _check_modes(state, config)
    if state.mode is not Mode.ANCILLA:
        raise ValueError("projected_probability requires an ancilla state")
    m1, m2 = config.marked
    a0 = float(state.sector(0)[m2, m1])
    a1 = float(state.sector(1)[m2, m1])
    overlap = math.sin(delta) * a0 + math.cos(delta) * a1
    return overlap * overlap
