"""Dense complex-matrix reference for small lattices.

Everything here is deliberately independent of the optimised stencil
path: the plaquette rotations are rebuilt from Pauli-matrix tensor
products, the walk is materialised as a dense complex matrix by looping
over plaquette sites, and searches evolve by explicit matrix-vector
products.  Agreement between this path and the real-arithmetic kernel
certifies both; the complex arithmetic additionally certifies that the
evolution of a real initial state stays real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ancilla import AncillaParams
from .lattice import LatticeConfig, Mode, WalkParams

#: Largest lattice extent the dense path accepts (dimension cap 2*8**2 = 128).
MAX_DENSE_L = 8

_SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class DenseOperator:
    dim: int
    m: np.ndarray


def _check_small(config: LatticeConfig) -> None:
    if config.L > MAX_DENSE_L:
        raise ValueError(
            f"dense reference capped at L={MAX_DENSE_L}, got L={config.L}"
        )


def _kinetic_factors(s: float) -> tuple[np.ndarray, np.ndarray]:
    """Plaquette exponentials rebuilt from the Pauli tensor products.

    The first tensor factor acts on the u1 offset, the second on u2, with
    basis ordering b = 2*u1 + u2.
    """
    h_block = -0.5 * (np.kron(np.eye(2), _SIGMA2) + np.kron(_SIGMA2, _SIGMA3))
    c = math.sqrt(1.0 - s * s)
    u_odd = c * np.eye(4) - 1.0j * s * math.sqrt(2.0) * h_block
    u_even = c * np.eye(4) + 1.0j * s * math.sqrt(2.0) * h_block
    return u_odd, u_even


def _embed_tiling(L: int, block: np.ndarray, parity: str) -> np.ndarray:
    """Dense matrix applying ``block`` on every plaquette of one tiling.

    Odd plaquettes are anchored at even-even corners and label their sites
    by the coordinate offsets (u1, u2) from the anchor; even plaquettes
    are anchored at odd-odd corners and label their sites with both
    offset coordinates flipped in sign, i.e. by displacement from the
    opposite corner.
    """
    n = L * L
    w = np.eye(n, dtype=complex)
    for a2 in range(0 if parity == "odd" else 1, L, 2):
        for a1 in range(0 if parity == "odd" else 1, L, 2):
            sites = []
            for v1 in (0, 1):
                for v2 in (0, 1):
                    x1 = (a1 + v1) % L
                    x2 = (a2 + v2) % L
                    if parity == "odd":
                        b = 2 * v1 + v2
                    else:
                        b = 2 * (1 - v1) + (1 - v2)
                    sites.append((b, x2 * L + x1))
            sites.sort()
            idx = [g for _, g in sites]
            w[np.ix_(idx, idx)] = block
    return w


def dense_walk_matrix(config: LatticeConfig, wparams: WalkParams) -> DenseOperator:
    """Materialise one walk step as a dense complex matrix (small L only)."""
    _check_small(config)
    u_odd, u_even = _kinetic_factors(wparams.s)
    odd = _embed_tiling(config.L, u_odd, "odd")
    even = _embed_tiling(config.L, u_even, "even")
    w = even @ odd
    return DenseOperator(config.N, w)


def unitarity_check(op: DenseOperator) -> float:
    """Max absolute entry of m^dagger m - I."""
    dev = op.m.conj().T @ op.m - np.eye(op.dim)
    return float(np.abs(dev).max())


def dense_search(
    config: LatticeConfig,
    wparams: WalkParams,
    aparams: AncillaParams | None = None,
    t2: int = 0,
) -> list[tuple[int, float]]:
    """Evolve the search by explicit dense products; return the (t2, P) series."""
    _check_small(config)
    n = config.N
    m1, m2 = config.marked
    midx = m2 * config.L + m1
    walk_step = dense_walk_matrix(config, wparams).m
    wt1 = np.linalg.matrix_power(walk_step, wparams.t1)

    if config.mode is Mode.PLAIN:
        if aparams is not None:
            raise ValueError("plain config takes no ancilla parameters")
        oracle = np.eye(n, dtype=complex)
        oracle[midx, midx] = -1.0
        step = wt1 @ oracle
        psi = np.full(n, 1.0 / math.sqrt(n), dtype=complex)
        series = []
        for t in range(1, t2 + 1):
            psi = step @ psi
            series.append((t, float(np.abs(psi[midx]) ** 2)))
        return series

    if aparams is None:
        raise ValueError("ancilla config requires ancilla parameters")
    cd, sd = math.cos(aparams.delta), math.sin(aparams.delta)
    x_delta = np.kron(np.array([[cd, sd], [-sd, cd]], dtype=complex), np.eye(n))
    ctrl_oracle = np.eye(2 * n, dtype=complex)
    ctrl_oracle[n + midx, n + midx] = -1.0
    ctrl_walk = np.eye(2 * n, dtype=complex)
    ctrl_walk[n:, n:] = wt1
    zbar = np.kron(np.diag([-1.0, 1.0]).astype(complex), np.eye(n))
    step = zbar @ ctrl_walk @ x_delta.conj().T @ ctrl_oracle @ x_delta

    psi = np.zeros(2 * n, dtype=complex)
    psi[n:] = 1.0 / math.sqrt(n)
    series = []
    for t in range(1, t2 + 1):
        psi = step @ psi
        p = float(np.abs(psi[midx]) ** 2 + np.abs(psi[n + midx]) ** 2)
        series.append((t, p))
    return series
