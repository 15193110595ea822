"""Plaquette rotations of the Trotterised Dirac walk and the stencil kernel.

The kinetic term of the lattice Dirac operator splits into two
block-diagonal halves living on the two interleaved tilings of the
periodic lattice by 2x2 plaquettes: the "odd" tiling anchored at
even-even corners and the "even" tiling anchored at odd-odd corners
(wrapping around the boundary).  Each half exponentiates to a real
orthogonal 4x4 rotation of the plaquette's four amplitudes, and one walk
step applies the odd rotation on its tiling followed by the even rotation
on its tiling.

Intra-plaquette convention: amplitudes are ordered by ``b = 2*u1 + u2``
where (u1, u2) in {0,1}^2 are the site's coordinate offsets inside the
plaquette, measured from the anchor for odd plaquettes and with both
coordinates flipped in sign (i.e. from the opposite, even-even corner)
for even plaquettes.  The sign flip reverses the intra-block index
(b -> 3-b), so in anchor-offset ordering the even rotation is the odd
one's transpose conjugated by the index reversal.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numba import njit, prange

from .lattice import Mode, StateVector, WalkParams

# Antisymmetric generator of the plaquette rotation in the b = 2*u1 + u2
# ordering: squares to -2*I, which together with c^2 + s^2 = 1 makes
# c*I + (s/sqrt(2))*G orthogonal.
GENERATOR = np.array(
    [
        [0.0, 1.0, 1.0, 0.0],
        [-1.0, 0.0, 0.0, -1.0],
        [-1.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, -1.0, 0.0],
    ]
)

# Index reversal b -> 3-b implementing the coordinate flip of even plaquettes.
_REVERSAL = np.eye(4)[::-1].copy()


class Parity(str, Enum):
    ODD = "odd"
    EVEN = "even"


#: Anchor offset of each tiling: odd plaquettes start at even-even sites,
#: even plaquettes at odd-odd sites.
TILING_OFFSET = {Parity.ODD: 0, Parity.EVEN: 1}


@dataclass(frozen=True)
class PlaquetteBlock:
    """One 4x4 real orthogonal plaquette rotation."""

    m: np.ndarray
    parity: Parity
    s: float


def build_block(s: float, parity: Parity | str) -> PlaquetteBlock:
    """Construct the plaquette rotation for kinetic parameter ``s``.

    Odd parity gives ``c*I + (s/sqrt(2))*G``; even parity gives the same
    matrix with opposite generator sign, conjugated by the index reversal
    that encodes the flipped intra-plaquette coordinates.
    """
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie strictly inside (0, 1), got s={s}")
    parity = Parity(parity)
    c = np.sqrt(1.0 - s * s)
    coupling = (s / np.sqrt(2.0)) * GENERATOR
    if parity is Parity.ODD:
        m = c * np.eye(4) + coupling
    else:
        m = _REVERSAL @ (c * np.eye(4) - coupling) @ _REVERSAL
    return PlaquetteBlock(m, parity, s)


@njit(cache=True, parallel=True)
def _tile_update(grid, u, off):  # pragma: no cover - exercised via wrappers
    """Apply the 4x4 rotation ``u`` to every plaquette of one tiling.

    Plaquettes of a single tiling are disjoint, so the update is done in
    place with a 4-element scratch per plaquette and rows may be processed
    in parallel; there are no reductions, so any schedule is bit-identical.
    """
    L = grid.shape[0]
    h = L // 2
    u00, u01, u02, u03 = u[0, 0], u[0, 1], u[0, 2], u[0, 3]
    u10, u11, u12, u13 = u[1, 0], u[1, 1], u[1, 2], u[1, 3]
    u20, u21, u22, u23 = u[2, 0], u[2, 1], u[2, 2], u[2, 3]
    u30, u31, u32, u33 = u[3, 0], u[3, 1], u[3, 2], u[3, 3]
    for j in prange(h):
        x2 = 2 * j + off
        x2n = x2 + 1
        if x2n == L:
            x2n = 0
        row0 = grid[x2]
        row1 = grid[x2n]
        for i in range(h):
            x1 = 2 * i + off
            x1n = x1 + 1
            if x1n == L:
                x1n = 0
            b0 = row0[x1]
            b1 = row1[x1]
            b2 = row0[x1n]
            b3 = row1[x1n]
            row0[x1] = u00 * b0 + u01 * b1 + u02 * b2 + u03 * b3
            row1[x1] = u10 * b0 + u11 * b1 + u12 * b2 + u13 * b3
            row0[x1n] = u20 * b0 + u21 * b1 + u22 * b2 + u23 * b3
            row1[x1n] = u30 * b0 + u31 * b1 + u32 * b2 + u33 * b3


def _target_grid(state: StateVector, sector: int | None) -> np.ndarray:
    if state.mode is Mode.PLAIN:
        if sector not in (None, 0):
            raise ValueError("plain state has no ancilla sectors")
        return state.sector()
    if sector is None:
        raise ValueError("ancilla state: walk operations need an explicit sector")
    return state.sector(sector)


def apply_half_step(
    state: StateVector, block: PlaquetteBlock, sector: int | None = None
) -> StateVector:
    """Apply one tiling's plaquette rotation in place; returns the state."""
    grid = _target_grid(state, sector)
    _tile_update(grid, block.m, TILING_OFFSET[block.parity])
    return state


def apply_walk(
    state: StateVector, params: WalkParams, sector: int | None = None
) -> StateVector:
    """One walk step: odd half-step followed by even half-step, in place."""
    grid = _target_grid(state, sector)
    odd = build_block(params.s, Parity.ODD)
    even = build_block(params.s, Parity.EVEN)
    _tile_update(grid, odd.m, 0)
    _tile_update(grid, even.m, 1)
    return state


def apply_walk_power(
    state: StateVector, params: WalkParams, sector: int | None = None
) -> StateVector:
    """Apply ``t1`` walk steps in place."""
    grid = _target_grid(state, sector)
    odd = build_block(params.s, Parity.ODD).m
    even = build_block(params.s, Parity.EVEN).m
    for _ in range(params.t1):
        _tile_update(grid, odd, 0)
        _tile_update(grid, even, 1)
    return state
