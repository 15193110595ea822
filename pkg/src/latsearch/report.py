"""Serialisation of run records and fits: CSV, JSON, plot data and figures.

Two delimited schemas are emitted.  Data rows carry one completed search
per line::

    L,N,mode,s,t1,cosdelta_coeff,t2_peak,P_peak,complexity,P_log2N,t2_norm,cx_norm,theta,peak_at_edge

and fit rows carry one fitted scaling form per line::

    form,cosdelta_coeff,Lmin,Lmax,a,b,rms

Floating-point values are printed with 10 significant digits, which makes
repeated runs byte-identical and lets rows round-trip through the fit
command unchanged.  The report path additionally writes per-figure
two-column ``.dat`` files (one per scaling form and cos(delta) rule) and
renders the matching ``.png`` next to each.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

from .scaling import (
    FitForm,
    FitResult,
    ScalingPoint,
    fit_complexity,
    fit_p_ancilla,
    fit_p_noancilla,
    fit_t2,
)
from .search import SearchResult

POINT_FIELDS = [
    "L",
    "N",
    "mode",
    "s",
    "t1",
    "cosdelta_coeff",
    "t2_peak",
    "P_peak",
    "complexity",
    "P_log2N",
    "t2_norm",
    "cx_norm",
    "theta",
    "peak_at_edge",
]

FIT_FIELDS = ["form", "cosdelta_coeff", "Lmin", "Lmax", "a", "b", "rms"]


@dataclass(frozen=True)
class RunRecord:
    """Flat, serialisable summary of one search run."""

    L: int
    N: int
    mode: str
    s: float
    t1: int
    cosdelta_coeff: float | None
    t2_peak: int
    P_peak: float
    complexity: float
    P_log2N: float
    t2_norm: float
    cx_norm: float
    theta: float
    peak_at_edge: bool

    @classmethod
    def from_result(
        cls, result: SearchResult, cosdelta_coeff: float | None = None
    ) -> "RunRecord":
        return cls(
            L=result.config.L,
            N=result.config.N,
            mode=result.config.mode.value,
            s=result.wparams.s,
            t1=result.wparams.t1,
            cosdelta_coeff=cosdelta_coeff,
            t2_peak=result.t2_peak,
            P_peak=result.P_peak,
            complexity=result.complexity,
            P_log2N=result.normalized[0],
            t2_norm=result.normalized[1],
            cx_norm=result.normalized[2],
            theta=result.wparams.theta,
            peak_at_edge=result.peak_at_edge,
        )


def fmt(value) -> str:
    """Canonical cell formatting: 10 significant digits for floats."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _record_row(rec: RunRecord) -> list[str]:
    d = asdict(rec)
    return [fmt(d[f]) for f in POINT_FIELDS]


def canonicalize(rec: RunRecord) -> RunRecord:
    """Round every float field through its serialised form.

    Fitting canonicalised records guarantees that refitting a written
    points file reproduces the published fit rows bit for bit.
    """
    d = asdict(rec)
    for key, value in d.items():
        if isinstance(value, float):
            d[key] = float(fmt(value))
    return RunRecord(**d)


def write_points_csv(path: Path, records: Sequence[RunRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(POINT_FIELDS)
        for rec in records:
            writer.writerow(_record_row(rec))


def read_points_csv(path: Path) -> list[RunRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(POINT_FIELDS) - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"points file {path} lacks columns: {sorted(missing)}")
        for row in reader:
            records.append(
                RunRecord(
                    L=int(row["L"]),
                    N=int(row["N"]),
                    mode=row["mode"],
                    s=float(row["s"]),
                    t1=int(row["t1"]),
                    cosdelta_coeff=(
                        float(row["cosdelta_coeff"]) if row["cosdelta_coeff"] else None
                    ),
                    t2_peak=int(row["t2_peak"]),
                    P_peak=float(row["P_peak"]),
                    complexity=float(row["complexity"]),
                    P_log2N=float(row["P_log2N"]),
                    t2_norm=float(row["t2_norm"]),
                    cx_norm=float(row["cx_norm"]),
                    theta=float(row["theta"]),
                    peak_at_edge=row["peak_at_edge"] == "true",
                )
            )
    return records


def write_fits_csv(path: Path, fits: Sequence[tuple[FitResult, float | None]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FIT_FIELDS)
        for fit, coeff in fits:
            writer.writerow(
                [
                    fit.form.value,
                    fmt(coeff),
                    str(fit.L_range[0]),
                    str(fit.L_range[1]),
                    fmt(fit.a),
                    fmt(fit.b),
                    fmt(fit.rms),
                ]
            )


def records_to_json(records: Sequence[RunRecord]) -> list[dict]:
    return [asdict(r) for r in records]


def fits_to_json(fits: Sequence[tuple[FitResult, float | None]]) -> list[dict]:
    out = []
    for fit, coeff in fits:
        d = asdict(fit)
        d["form"] = fit.form.value
        d["cosdelta_coeff"] = coeff
        out.append(d)
    return out


def write_json(path: Path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _scaling_points(records: Sequence[RunRecord]) -> list[ScalingPoint]:
    return [
        ScalingPoint(
            L=r.L, P_peak=r.P_peak, t2_peak=r.t2_peak, delta_rule=r.cosdelta_coeff
        )
        for r in records
    ]


def compute_fits(
    records: Sequence[RunRecord],
) -> tuple[list[tuple[FitResult, float | None]], list[str]]:
    """Group records by mode and cos(delta) rule and fit every applicable form.

    Groups with fewer than two lattice sizes are skipped with a warning,
    since a line through one point is meaningless.
    """
    fits: list[tuple[FitResult, float | None]] = []
    warnings: list[str] = []

    plain = sorted(
        (r for r in records if r.mode == "plain"), key=lambda r: r.L
    )
    if len(plain) == 1:
        warnings.append("only one plain-mode point; skipping plain fits")
    elif plain:
        pts = _scaling_points(plain)
        fits.append((fit_p_noancilla(pts), None))
        fits.append((fit_t2(pts), None))

    coeffs = sorted(
        {r.cosdelta_coeff for r in records if r.mode == "ancilla"},
        key=lambda c: (c is None, c),
    )
    for coeff in coeffs:
        group = sorted(
            (r for r in records if r.mode == "ancilla" and r.cosdelta_coeff == coeff),
            key=lambda r: r.L,
        )
        if len(group) < 2:
            warnings.append(
                f"only one ancilla point for coeff={fmt(coeff)}; skipping its fits"
            )
            continue
        pts = _scaling_points(group)
        fits.append((fit_p_ancilla(pts), coeff))
        fits.append((fit_t2(pts), coeff))
        fits.append((fit_complexity(pts), coeff))
    return fits, warnings


# --- figure emission ------------------------------------------------------

def _coeff_tag(coeff: float | None) -> str:
    return "noancilla" if coeff is None else "c" + fmt(coeff).replace(".", "p")


def _coeff_label(coeff: float | None) -> str:
    if coeff is None:
        return "no ancilla"
    return f"cos d = sqrt({fmt(coeff)}/ln N)"


_FIGURES = {
    FitForm.P_NOANCILLA: (
        "peak_probability_noancilla",
        "log2 N",
        "P * log2 N",
        lambda r: (math.log2(r.N), r.P_log2N),
    ),
    FitForm.P_ANCILLA: (
        "peak_probability_ancilla",
        "L",
        "P",
        lambda r: (float(r.L), r.P_peak),
    ),
    FitForm.T2: (
        "oracle_calls",
        "L",
        "t2 / sqrt(N log2 N)",
        lambda r: (float(r.L), r.t2_norm),
    ),
    FitForm.COMPLEXITY: (
        "complexity",
        "L",
        "t2 / sqrt(P N log2 N)",
        lambda r: (float(r.L), r.cx_norm),
    ),
}


def _fit_curve(form: FitForm, fit: FitResult, xs):
    # Every fitted form is linear in the reciprocal of the plotted abscissa.
    import numpy as np

    grid = np.linspace(min(xs), max(xs), 200)
    return grid, fit.a + fit.b / grid


def write_figures(
    outdir: Path,
    records: Sequence[RunRecord],
    fits: Sequence[tuple[FitResult, float | None]],
) -> list[Path]:
    """Write per-figure two-column .dat files and render the .png next to each."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    written: list[Path] = []
    fit_lookup = {(f.form, c): f for f, c in fits}

    for form, (stem, xlabel, ylabel, extract) in _FIGURES.items():
        if form is FitForm.P_NOANCILLA:
            groups = {None: [r for r in records if r.mode == "plain"]}
        elif form is FitForm.T2:
            groups = {}
            plain = [r for r in records if r.mode == "plain"]
            if plain:
                groups[None] = plain
            for r in records:
                if r.mode == "ancilla":
                    groups.setdefault(r.cosdelta_coeff, []).append(r)
        else:
            groups = {}
            for r in records:
                if r.mode == "ancilla":
                    groups.setdefault(r.cosdelta_coeff, []).append(r)
        groups = {c: g for c, g in groups.items() if g}
        if not groups:
            continue

        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        plotted = False
        for coeff in sorted(groups, key=lambda c: (c is not None, c or 0.0)):
            rows = sorted(groups[coeff], key=lambda r: r.L)
            xy = [extract(r) for r in rows]
            if form is FitForm.P_NOANCILLA:
                dat = outdir / f"{stem}.dat"
            else:
                dat = outdir / f"{stem}_{_coeff_tag(coeff)}.dat"
            with open(dat, "w") as fh:
                fh.write(f"# {xlabel}  {ylabel}\n")
                for x, y in xy:
                    fh.write(f"{fmt(x)} {fmt(y)}\n")
            written.append(dat)

            xs = [x for x, _ in xy]
            ys = [y for _, y in xy]
            pts = ax.plot(xs, ys, "o", label=_coeff_label(coeff))
            fit = fit_lookup.get((form, coeff))
            if fit is not None and len(xs) >= 2:
                gx, gy = _fit_curve(form, fit, xs)
                ax.plot(gx, gy, "-", color=pts[0].get_color(), linewidth=1.0)
            plotted = True

        if not plotted:
            plt.close(fig)
            continue
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.legend(fontsize=8)
        fig.tight_layout()
        png = outdir / f"{stem}.png"
        fig.savefig(png, dpi=150)
        plt.close(fig)
        written.append(png)
    return written
