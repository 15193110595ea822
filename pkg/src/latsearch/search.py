"""Search drivers: run full searches, locate the peak, scan parameters.

A search alternates oracle and walk, recording the marked-vertex
probability after every completed iteration (= one oracle call).  The
probability signal is close to periodic: a first principal peak around
which the paper's scaling laws are written, followed by revivals near odd
multiples of the peak time whose height differs from the first peak only
at the 1e-3 level.  Because a beat in that envelope can push a late
revival marginally above the first peak, ``SearchResult`` reports the
maximum of the *first principal lobe* (the first contiguous run of points
above half the global maximum); ``find_peak`` still exposes the plain
global maximum of a series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .ancilla import (
    AncillaParams,
    apply_oracle,
    tulsi_iteration,
)
from .lattice import (
    LatticeConfig,
    Mode,
    StateVector,
    WalkParams,
    marked_probability,
    projected_probability,
    uniform_state,
)
from .walk import apply_walk_power

#: Default window factor for ``default_t2_max``.
DEFAULT_KAPPA = 2.0

#: One automatic window regrowth by this factor when the peak sits at the edge.
REGROWTH_FACTOR = 1.5


@dataclass
class SearchResult:
    """Outcome of one full search run.

    ``series`` holds (t2, P) for every oracle call; ``t2_peak``/``P_peak``
    locate the first principal probability peak (see module docstring);
    ``complexity`` is t2_peak/sqrt(P_peak), the effective number of oracle
    calls once amplitude amplification would boost success to order one.
    ``normalized`` packs (P_peak*log2 N, t2_peak/sqrt(N log2 N),
    complexity/sqrt(N log2 N)), the combinations the scaling fits use.
    """

    config: LatticeConfig
    wparams: WalkParams
    delta: float | None
    series: list[tuple[int, float]]
    t2_peak: int
    P_peak: float
    complexity: float
    normalized: tuple[float, float, float]
    peak_at_edge: bool
    #: Ancilla runs also record the squared overlap with the rotated target
    #: direction at the marked vertex; the two-sector sum above is the
    #: default success measure.
    projected_series: list[tuple[int, float]] | None = None


def find_peak(series: Sequence[tuple[int, float]]) -> tuple[int, float, bool]:
    """Global maximum of a (t2, P) series, first-attaining index on ties.

    The edge flag is set when the maximum sits at the last entry.
    """
    if len(series) == 0:
        raise ValueError("find_peak: empty series")
    probs = np.asarray([p for _, p in series])
    k = int(np.argmax(probs))
    return int(series[k][0]), float(probs[k]), k == len(series) - 1


def find_first_peak(series: Sequence[tuple[int, float]]) -> tuple[int, float]:
    """Maximum of the first principal lobe of a (t2, P) series.

    The lobe is the first contiguous run of points at or above half the
    global maximum; revivals of near-equal height at later times are
    ignored.  Falls back to the global maximum for structureless series.
    """
    if len(series) == 0:
        raise ValueError("find_first_peak: empty series")
    probs = np.asarray([p for _, p in series])
    k = _principal_peak_index(probs)
    return int(series[k][0]), float(probs[k])


def _principal_peak_index(probs: np.ndarray) -> int:
    half = 0.5 * probs.max()
    above = probs >= half
    start = int(np.argmax(above))
    below_after = probs[start:] < half
    stop = start + (int(np.argmax(below_after)) if below_after.any() else len(below_after))
    return start + int(np.argmax(probs[start:stop]))


def default_t2_max(
    config: LatticeConfig,
    aparams: AncillaParams | None = None,
    kappa: float = DEFAULT_KAPPA,
) -> int:
    """Window size ceil(kappa * sqrt(N log2 N)), divided by cos(delta) with ancilla."""
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    w = kappa * math.sqrt(config.N * math.log2(config.N))
    if config.mode is Mode.ANCILLA:
        if aparams is None:
            raise ValueError("ancilla window needs ancilla parameters")
        if aparams.cos_delta == 0.0:
            raise ValueError("cos(delta) = 0 gives an unbounded window")
        w /= aparams.cos_delta
    return math.ceil(w)


def cos_delta_rule(N: int, coeff: float) -> AncillaParams:
    """Control angle from cos(delta) = sqrt(coeff / ln N).

    Rejects coefficients that would push cos(delta) above 1; no silent
    clamping.
    """
    if coeff <= 0:
        raise ValueError(f"coefficient must be positive, got {coeff}")
    ln_n = math.log(N)
    if coeff / ln_n > 1.0:
        raise ValueError(
            f"coeff/ln(N) = {coeff / ln_n:.4f} exceeds 1; cos(delta) would leave [0, 1]"
        )
    return AncillaParams(math.acos(math.sqrt(coeff / ln_n)))


def effective_complexity(result: SearchResult) -> float:
    """Oracle calls over root success probability, t2_peak/sqrt(P_peak)."""
    if result.P_peak <= 0.0:
        raise ValueError("effective complexity undefined at zero peak probability")
    return result.t2_peak / math.sqrt(result.P_peak)


def _evolve_plain(
    state: StateVector,
    config: LatticeConfig,
    wparams: WalkParams,
    count: int,
) -> np.ndarray:
    probs = np.empty(count)
    for t in range(count):
        apply_oracle(state, config)
        apply_walk_power(state, wparams)
        probs[t] = marked_probability(state, config)
    return probs


def _evolve_tulsi(
    state: StateVector,
    config: LatticeConfig,
    wparams: WalkParams,
    aparams: AncillaParams,
    count: int,
) -> tuple[np.ndarray, np.ndarray]:
    probs = np.empty(count)
    projected = np.empty(count)
    for t in range(count):
        tulsi_iteration(state, config, wparams, aparams)
        probs[t] = marked_probability(state, config)
        projected[t] = projected_probability(state, config, aparams.delta)
    return probs, projected


def _make_result(
    config: LatticeConfig,
    wparams: WalkParams,
    delta: float | None,
    probs: np.ndarray,
    projected: np.ndarray | None = None,
) -> SearchResult:
    n_g = config.N * math.log2(config.N)
    k = _principal_peak_index(probs)
    t2_peak = k + 1
    p_peak = float(probs[k])
    at_edge = int(np.argmax(probs)) == len(probs) - 1
    complexity = t2_peak / math.sqrt(p_peak) if p_peak > 0 else math.inf
    normalized = (
        p_peak * math.log2(config.N),
        t2_peak / math.sqrt(n_g),
        complexity / math.sqrt(n_g),
    )
    series = list(zip(range(1, len(probs) + 1), probs.tolist()))
    projected_series = None
    if projected is not None:
        projected_series = list(zip(range(1, len(projected) + 1), projected.tolist()))
    return SearchResult(
        config=config,
        wparams=wparams,
        delta=delta,
        series=series,
        t2_peak=t2_peak,
        P_peak=p_peak,
        complexity=complexity,
        normalized=normalized,
        peak_at_edge=at_edge,
        projected_series=projected_series,
    )


def run_plain_search(
    config: LatticeConfig, wparams: WalkParams, t2_max: int
) -> SearchResult:
    """Alternate oracle and walk from the uniform state for t2_max oracle calls."""
    if config.mode is not Mode.PLAIN:
        raise ValueError("run_plain_search requires a plain-mode config")
    if t2_max < 1:
        raise ValueError(f"t2_max must be >= 1, got {t2_max}")
    state = uniform_state(config)
    probs = _evolve_plain(state, config, wparams, t2_max)
    return _make_result(config, wparams, None, probs)


def run_tulsi_search(
    config: LatticeConfig,
    wparams: WalkParams,
    aparams: AncillaParams,
    t2_max: int,
) -> SearchResult:
    """Iterate the controlled circuit from |1> x |uniform>; t2 counts oracle calls."""
    if config.mode is not Mode.ANCILLA:
        raise ValueError("run_tulsi_search requires an ancilla-mode config")
    if t2_max < 1:
        raise ValueError(f"t2_max must be >= 1, got {t2_max}")
    state = uniform_state(config)
    probs, projected = _evolve_tulsi(state, config, wparams, aparams, t2_max)
    return _make_result(config, wparams, aparams.delta, probs, projected)


def run_search(
    config: LatticeConfig,
    wparams: WalkParams,
    aparams: AncillaParams | None = None,
    t2_max: int | None = None,
    kappa: float = DEFAULT_KAPPA,
) -> SearchResult:
    """Run a search with an automatic window and one regrowth.

    When the global maximum of the recorded series sits at the window edge
    the evolution is continued once to REGROWTH_FACTOR times the original
    window (computed points are never recomputed, so the extended series
    is a strict prefix extension).  A result whose ``peak_at_edge`` is
    still set afterwards signals an inadequate window to the caller.
    """
    if config.mode is Mode.ANCILLA and aparams is None:
        raise ValueError("ancilla search needs ancilla parameters")
    if config.mode is Mode.PLAIN and aparams is not None:
        raise ValueError("plain search takes no ancilla parameters")
    if t2_max is None:
        t2_max = default_t2_max(config, aparams, kappa)

    state = uniform_state(config)
    projected = None
    if config.mode is Mode.PLAIN:
        probs = _evolve_plain(state, config, wparams, t2_max)
    else:
        probs, projected = _evolve_tulsi(state, config, wparams, aparams, t2_max)

    if int(np.argmax(probs)) == len(probs) - 1:
        extra = math.ceil(REGROWTH_FACTOR * t2_max) - t2_max
        if config.mode is Mode.PLAIN:
            probs = np.concatenate([probs, _evolve_plain(state, config, wparams, extra)])
        else:
            more, more_proj = _evolve_tulsi(state, config, wparams, aparams, extra)
            probs = np.concatenate([probs, more])
            projected = np.concatenate([projected, more_proj])

    delta = aparams.delta if aparams is not None else None
    return _make_result(config, wparams, delta, probs, projected)


@dataclass(frozen=True)
class ScanRow:
    """One row of a parameter scan."""

    s: float
    t1: int
    theta: float
    P_peak: float
    t2_peak: int
    complexity: float


def scan_parameters(
    config: LatticeConfig,
    s_list: Iterable[float],
    t1_list: Iterable[int],
    aparams: AncillaParams | None = None,
    kappa: float = DEFAULT_KAPPA,
) -> list[ScanRow]:
    """One full search per (s, t1) pair, ordered as given."""
    rows = []
    for s in s_list:
        for t1 in t1_list:
            wparams = WalkParams(s=s, t1=t1)
            result = run_search(config, wparams, aparams, kappa=kappa)
            rows.append(
                ScanRow(
                    s=s,
                    t1=t1,
                    theta=wparams.theta,
                    P_peak=result.P_peak,
                    t2_peak=result.t2_peak,
                    complexity=result.complexity,
                )
            )
    return rows
