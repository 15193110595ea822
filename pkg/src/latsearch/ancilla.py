"""Sign-flip oracle and the ancilla-controlled search iteration.

One controlled iteration applies, in order: the ancilla rotation by
``delta``, the oracle controlled on ancilla=1, the inverse rotation, the
walk raised to ``t1`` on the ancilla=1 sector only, and the ancilla phase
``diag(-1, 1)``.  Away from the marked vertex the two rotations cancel
exactly, so the a=0 amplitudes there stay pinned at zero; at the marked
vertex the net ancilla map couples the sectors, and the stationary a=0
amplitude acts as a trap that accumulates success probability.  At
``delta = 0`` the whole iteration reduces to the plain search step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from numba import njit, prange

from .lattice import LatticeConfig, Mode, StateVector, WalkParams
from .walk import apply_walk_power


@dataclass(frozen=True)
class AncillaParams:
    """Control angle of the ancilla rotation."""

    delta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.delta <= math.pi / 2:
            raise ValueError(
                f"delta must lie in [0, pi/2], got delta={self.delta}"
            )

    @property
    def cos_delta(self) -> float:
        return math.cos(self.delta)

    @property
    def sin_delta(self) -> float:
        return math.sin(self.delta)


def _require_mode(state: StateVector, mode: Mode, op: str) -> None:
    if state.mode is not mode:
        raise ValueError(f"{op} requires a {mode.value} state, got {state.mode.value}")


def apply_oracle(state: StateVector, config: LatticeConfig) -> StateVector:
    """Negate the marked-vertex amplitude (plain mode)."""
    _require_mode(state, Mode.PLAIN, "apply_oracle")
    if config.mode is not Mode.PLAIN or config.L != state.L:
        raise ValueError("state and config disagree")
    m1, m2 = config.marked
    idx = m2 * config.L + m1
    state.amplitudes[idx] = -state.amplitudes[idx]
    return state


@njit(cache=True, parallel=True)
def _rotate_pairs(a0, a1, c, s):  # pragma: no cover - exercised via wrappers
    for i in prange(a0.size):
        x = a0[i]
        y = a1[i]
        a0[i] = c * x + s * y
        a1[i] = -s * x + c * y


def apply_x_delta(
    state: StateVector, params: AncillaParams, adjoint: bool = False
) -> StateVector:
    """Rotate every site's (a0, a1) pair by the control angle, in place."""
    _require_mode(state, Mode.ANCILLA, "apply_x_delta")
    n = state.N
    v = state.amplitudes
    s = -params.sin_delta if adjoint else params.sin_delta
    _rotate_pairs(v[:n], v[n:], params.cos_delta, s)
    return state


def apply_zbar(state: StateVector) -> StateVector:
    """Negate the whole a=0 sector, in place."""
    _require_mode(state, Mode.ANCILLA, "apply_zbar")
    n = state.N
    state.amplitudes[:n] *= -1.0
    return state


def apply_controlled_oracle(state: StateVector, config: LatticeConfig) -> StateVector:
    """Negate the |1> x |marked> amplitude only."""
    _require_mode(state, Mode.ANCILLA, "apply_controlled_oracle")
    if config.mode is not Mode.ANCILLA or config.L != state.L:
        raise ValueError("state and config disagree")
    m1, m2 = config.marked
    idx = config.N + m2 * config.L + m1
    state.amplitudes[idx] = -state.amplitudes[idx]
    return state


def apply_controlled_walk_power(
    state: StateVector, params: WalkParams
) -> StateVector:
    """Apply the walk ``t1`` times to the a=1 sector; a=0 is untouched."""
    _require_mode(state, Mode.ANCILLA, "apply_controlled_walk_power")
    return apply_walk_power(state, params, sector=1)


def tulsi_iteration(
    state: StateVector,
    config: LatticeConfig,
    wparams: WalkParams,
    aparams: AncillaParams,
) -> StateVector:
    """One full controlled iteration (one oracle call), in place."""
    apply_x_delta(state, aparams)
    apply_controlled_oracle(state, config)
    apply_x_delta(state, aparams, adjoint=True)
    apply_controlled_walk_power(state, wparams)
    apply_zbar(state)
    return state
