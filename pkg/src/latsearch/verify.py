"""Built-in equivalence and invariant suite behind ``latsearch verify``.

Each check compares the optimised real-arithmetic path against the
independent dense complex reference, or asserts a structural invariant,
and reports its worst deviation.  ``inject_flip`` deliberately builds the
even plaquette rotation without the coordinate-flip index reversal; the
dense-equivalence checks must then fail, which guards the suite itself
against silently comparing nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dense, walk
from .ancilla import AncillaParams, tulsi_iteration
from .lattice import (
    LatticeConfig,
    Mode,
    StateVector,
    WalkParams,
    norm,
    uniform_state,
)
from .search import run_plain_search, run_tulsi_search
from .walk import GENERATOR, Parity, build_block


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation < self.tolerance


def _random_state(config: LatticeConfig, rng: np.random.Generator) -> StateVector:
    size = config.N if config.mode is Mode.PLAIN else 2 * config.N
    v = rng.standard_normal(size)
    v /= np.linalg.norm(v)
    return StateVector(config.mode, config.L, v)


def _walk_blocks(s: float, inject_flip: bool) -> tuple[np.ndarray, np.ndarray]:
    odd = build_block(s, Parity.ODD).m
    if inject_flip:
        # Wrong even rotation: transpose without the index reversal.
        even = odd.T.copy()
    else:
        even = build_block(s, Parity.EVEN).m
    return odd, even


def check_block_orthogonality() -> CheckResult:
    dev = 0.0
    for s in (0.1, 0.3, 1.0 / math.sqrt(2.0), 0.9):
        for parity in (Parity.ODD, Parity.EVEN):
            m = build_block(s, parity).m
            dev = max(dev, float(np.abs(m.T @ m - np.eye(4)).max()))
    return CheckResult("plaquette block orthogonality", dev, 1e-14)


def check_generator_square() -> CheckResult:
    dev = float(np.abs(GENERATOR @ GENERATOR + 2.0 * np.eye(4)).max())
    return CheckResult("generator squares to -2I", dev, 1e-14)


def check_sparse_dense_walk(inject_flip: bool = False) -> CheckResult:
    rng = np.random.default_rng(20240917)
    s = 1.0 / math.sqrt(2.0)
    odd, even = _walk_blocks(s, inject_flip)
    dev = 0.0
    for L in (4, 6, 8):
        config = LatticeConfig(L=L)
        wmat = dense.dense_walk_matrix(config, WalkParams(s=s)).m
        for _ in range(20):
            state = _random_state(config, rng)
            expected = (wmat @ state.amplitudes).real
            grid = state.sector()
            walk._tile_update(grid, odd, 0)
            walk._tile_update(grid, even, 1)
            dev = max(dev, float(np.abs(state.amplitudes - expected).max()))
    return CheckResult("sparse walk vs dense matrix (L=4,6,8)", dev, 1e-12)


def check_plain_series_vs_dense() -> CheckResult:
    config = LatticeConfig(L=4)
    wparams = WalkParams(s=1.0 / math.sqrt(2.0), t1=1)
    got = run_plain_search(config, wparams, 40).series
    want = dense.dense_search(config, wparams, t2=40)
    dev = max(abs(a[1] - b[1]) for a, b in zip(got, want))
    return CheckResult("plain search series vs dense (L=4, 40 steps)", dev, 1e-12)


def check_tulsi_series_vs_dense() -> CheckResult:
    config = LatticeConfig(L=4, mode=Mode.ANCILLA)
    wparams = WalkParams(s=1.0 / math.sqrt(2.0), t1=1)
    aparams = AncillaParams(delta=0.7)
    got = run_tulsi_search(config, wparams, aparams, 40).series
    want = dense.dense_search(config, wparams, aparams, t2=40)
    dev = max(abs(a[1] - b[1]) for a, b in zip(got, want))
    return CheckResult("controlled search series vs dense (L=4, 40 steps)", dev, 1e-12)


def check_dense_realness() -> CheckResult:
    config = LatticeConfig(L=4)
    wparams = WalkParams(s=1.0 / math.sqrt(2.0))
    wmat = dense.dense_walk_matrix(config, wparams).m
    psi = np.full(config.N, 1.0 / math.sqrt(config.N), dtype=complex)
    dev = 0.0
    for _ in range(100):
        psi = wmat @ psi
        dev = max(dev, float(np.abs(psi.imag).max()))
    return CheckResult("complex evolution of real state stays real", dev, 1e-13)


def check_zero_sector() -> CheckResult:
    config = LatticeConfig(L=8, mode=Mode.ANCILLA)
    wparams = WalkParams(s=1.0 / math.sqrt(2.0), t1=3)
    aparams = AncillaParams(delta=1.0)
    state = uniform_state(config)
    m1, m2 = config.marked
    dev = 0.0
    for _ in range(50):
        tulsi_iteration(state, config, wparams, aparams)
        sector0 = state.sector(0).copy()
        sector0[m2, m1] = 0.0
        dev = max(dev, float(np.abs(sector0).max()))
    return CheckResult("a=0 sector pinned at zero off the marked vertex (L=8)", dev, 1e-12)


def check_delta_zero_reduction() -> CheckResult:
    wparams = WalkParams(s=1.0 / math.sqrt(2.0), t1=3)
    plain = run_plain_search(LatticeConfig(L=8), wparams, 100).series
    ctrl = run_tulsi_search(
        LatticeConfig(L=8, mode=Mode.ANCILLA), wparams, AncillaParams(0.0), 100
    ).series
    dev = max(abs(a[1] - b[1]) for a, b in zip(plain, ctrl))
    return CheckResult("delta=0 reduces to the plain search (L=8)", dev, 1e-10)


def check_norm_drift() -> CheckResult:
    config = LatticeConfig(L=16, mode=Mode.ANCILLA)
    wparams = WalkParams(s=1.0 / math.sqrt(2.0), t1=3)
    aparams = AncillaParams(delta=1.2)
    state = uniform_state(config)
    for _ in range(500):
        tulsi_iteration(state, config, wparams, aparams)
    dev = abs(norm(state) - 1.0)
    return CheckResult("norm drift over 500 iterations (L=16)", dev, 1e-12)


def run_all(inject_flip: bool = False) -> list[CheckResult]:
    return [
        check_block_orthogonality(),
        check_generator_square(),
        check_sparse_dense_walk(inject_flip),
        check_plain_series_vs_dense(),
        check_tulsi_series_vs_dense(),
        check_dense_realness(),
        check_zero_sector(),
        check_delta_zero_reduction(),
        check_norm_drift(),
    ]
