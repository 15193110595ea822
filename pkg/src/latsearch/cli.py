"""Command-line front end.

Subcommands: ``search`` (one full search), ``scan`` (sweep s and t1),
``scaling`` (one search per lattice size plus the scaling fits and
figures), ``fit`` (refit a previously written points file), ``verify``
(dense-reference equivalence and invariant suite).  Everything is
deterministic: identical invocations produce byte-identical output.

Exit codes: 0 success, 1 verification failure, 2 invalid arguments,
3 probability peak still at the window edge after regrowth.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .ancilla import AncillaParams
from .lattice import LatticeConfig, Mode, WalkParams
from .report import (
    POINT_FIELDS,
    RunRecord,
    canonicalize,
    compute_fits,
    fits_to_json,
    fmt,
    read_points_csv,
    records_to_json,
    write_figures,
    write_fits_csv,
    write_json,
    write_points_csv,
)
from .search import cos_delta_rule, run_search, scan_parameters
from .verify import run_all

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_PEAK_AT_EDGE = 3

_DEFAULTS = {
    "s": 1.0 / math.sqrt(2.0),
    "t1": 3,
    "mode": "plain",
    "marked": "0,0",
    "kappa": 2.0,
    "format": "csv",
}


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latsearch",
        description="Quantum spatial search on a 2D lattice via the Dirac walk.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, single_l: bool) -> None:
        if single_l:
            p.add_argument("--L", type=int, help="lattice extent (even, >= 4)")
        else:
            p.add_argument("--L-list", dest="L_list", help="comma-separated lattice extents")
        p.add_argument("--s", type=float, help="kinetic sine parameter in (0, 1)")
        p.add_argument("--t1", type=int, help="walk steps per oracle call")
        p.add_argument("--mode", choices=["plain", "ancilla"], help="search variant")
        p.add_argument("--marked", help="marked vertex as 'x1,x2'")
        p.add_argument("--kappa", type=float, help="window factor for t2_max")
        p.add_argument("--config", help="JSON file with the same keys; flags win")
        p.add_argument("--output", help="output file or directory")
        p.add_argument("--format", choices=["csv", "json"], help="serialisation format")

    p_search = sub.add_parser("search", help="run one full search")
    add_common(p_search, single_l=True)
    p_search.add_argument("--cosdelta-coeff", dest="cosdelta_coeff", type=float,
                          help="coefficient c in cos(delta) = sqrt(c/ln N)")
    p_search.add_argument("--t2-max", dest="t2_max", type=int,
                          help="explicit window (overrides kappa heuristic)")
    p_search.add_argument("--series", help="write the (t2, P) series to this file")

    p_scan = sub.add_parser("scan", help="sweep s and t1")
    add_common(p_scan, single_l=True)
    p_scan.add_argument("--cosdelta-coeff", dest="cosdelta_coeff", type=float)
    p_scan.add_argument("--s-list", dest="s_list", help="comma-separated s values")
    p_scan.add_argument("--t1-list", dest="t1_list", help="comma-separated t1 values")

    p_scaling = sub.add_parser("scaling", help="search a list of L and fit scaling forms")
    add_common(p_scaling, single_l=False)
    p_scaling.add_argument("--cosdelta-coeff-list", dest="coeff_list",
                           help="comma-separated coefficients (ancilla mode)")
    p_scaling.add_argument("--no-figures", action="store_true",
                           help="skip .dat/.png figure emission")

    p_fit = sub.add_parser("fit", help="refit scaling forms from a points CSV")
    p_fit.add_argument("--input", required=True, help="points CSV to read")
    p_fit.add_argument("--output", help="output directory (default: input's directory)")
    p_fit.add_argument("--format", choices=["csv", "json"])
    p_fit.add_argument("--no-figures", action="store_true")

    p_verify = sub.add_parser("verify", help="run the built-in equivalence suite")
    p_verify.add_argument("--inject-flip", action="store_true",
                          help="negative control: corrupt the even block and expect failure")
    return parser


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    """Overlay the optional JSON config under explicit flags, then defaults."""
    file_values = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            file_values = json.load(fh)
        if not isinstance(file_values, dict):
            raise ValueError("config file must hold a JSON object")
    for key, value in file_values.items():
        attr = key.replace("-", "_")
        if getattr(args, attr, None) is None:
            setattr(args, attr, value)
    for key, value in _DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _parse_marked(text) -> tuple[int, int]:
    if isinstance(text, (list, tuple)):
        m1, m2 = text
        return int(m1), int(m2)
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"marked must be 'x1,x2', got {text!r}")
    return int(parts[0]), int(parts[1])


def _make_aparams(mode: Mode, coeff, N: int) -> AncillaParams | None:
    if mode is Mode.PLAIN:
        if coeff is not None:
            raise ValueError("cosdelta-coeff only applies to ancilla mode")
        return None
    if coeff is None:
        raise ValueError("ancilla mode needs --cosdelta-coeff")
    return cos_delta_rule(N, coeff)


def _emit_table(path, fields, rows, fmt_kind, json_payload) -> None:
    if fmt_kind == "json":
        text = json.dumps(json_payload, indent=2, sort_keys=True) + "\n"
    else:
        lines = [",".join(fields)]
        lines += [",".join(row) for row in rows]
        text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_search(args: argparse.Namespace) -> int:
    if args.L is None:
        raise ValueError("search needs --L")
    mode = Mode(args.mode)
    config = LatticeConfig(L=args.L, marked=_parse_marked(args.marked), mode=mode)
    wparams = WalkParams(s=args.s, t1=args.t1)
    aparams = _make_aparams(mode, args.cosdelta_coeff, config.N)
    result = run_search(config, wparams, aparams,
                        t2_max=args.t2_max, kappa=args.kappa)
    record = RunRecord.from_result(result, args.cosdelta_coeff)
    rows = [[fmt(getattr(record, f)) for f in POINT_FIELDS]]
    _emit_table(args.output, POINT_FIELDS, rows, args.format,
                records_to_json([record]))
    if args.series:
        with open(args.series, "w") as fh:
            fh.write("# t2  P\n")
            for t2, p in result.series:
                fh.write(f"{t2} {fmt(p)}\n")
    return EXIT_PEAK_AT_EDGE if result.peak_at_edge else EXIT_OK


SCAN_FIELDS = ["s", "t1", "theta", "P_peak", "t2_peak", "complexity"]


def cmd_scan(args: argparse.Namespace) -> int:
    if args.L is None or args.s_list is None or args.t1_list is None:
        raise ValueError("scan needs --L, --s-list and --t1-list")
    mode = Mode(args.mode)
    config = LatticeConfig(L=args.L, marked=_parse_marked(args.marked), mode=mode)
    aparams = _make_aparams(mode, args.cosdelta_coeff, config.N)
    rows = scan_parameters(
        config,
        _parse_float_list(args.s_list),
        _parse_int_list(args.t1_list),
        aparams,
        kappa=args.kappa,
    )
    table = [
        [fmt(r.s), str(r.t1), fmt(r.theta), fmt(r.P_peak), str(r.t2_peak), fmt(r.complexity)]
        for r in rows
    ]
    payload = [
        {f: getattr(r, f) for f in SCAN_FIELDS}
        for r in rows
    ]
    _emit_table(args.output, SCAN_FIELDS, table, args.format, payload)
    return EXIT_OK


def _write_report(outdir: Path, records, fits, warnings, fmt_kind, figures) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    if fmt_kind == "json":
        write_json(outdir / "points.json", records_to_json(records))
        write_json(outdir / "fits.json", fits_to_json(fits))
    else:
        write_points_csv(outdir / "points.csv", records)
        write_fits_csv(outdir / "fits.csv", fits)
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if figures:
        write_figures(outdir, records, fits)


def cmd_scaling(args: argparse.Namespace) -> int:
    if args.L_list is None:
        raise ValueError("scaling needs --L-list")
    if args.output is None:
        raise ValueError("scaling needs --output DIRECTORY")
    mode = Mode(args.mode)
    l_values = _parse_int_list(args.L_list)
    marked = _parse_marked(args.marked)
    wparams = WalkParams(s=args.s, t1=args.t1)

    if mode is Mode.PLAIN:
        coeffs: list[float | None] = [None]
        if args.coeff_list:
            raise ValueError("cosdelta-coeff-list only applies to ancilla mode")
    else:
        if not args.coeff_list:
            raise ValueError("ancilla scaling needs --cosdelta-coeff-list")
        coeffs = list(_parse_float_list(args.coeff_list))

    records = []
    for L in sorted(l_values):
        config = LatticeConfig(L=L, marked=marked, mode=mode)
        for coeff in coeffs:
            aparams = _make_aparams(mode, coeff, config.N)
            result = run_search(config, wparams, aparams, kappa=args.kappa)
            records.append(canonicalize(RunRecord.from_result(result, coeff)))
    records.sort(key=lambda r: (r.L, r.cosdelta_coeff or 0.0))

    fits, warnings = compute_fits(records)
    _write_report(Path(args.output), records, fits, warnings,
                  args.format, not args.no_figures)
    if any(r.peak_at_edge for r in records):
        return EXIT_PEAK_AT_EDGE
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    records = read_points_csv(Path(args.input))
    if not records:
        raise ValueError(f"no data rows in {args.input}")
    outdir = Path(args.output) if args.output else Path(args.input).parent
    fits, warnings = compute_fits(records)
    fmt_kind = args.format or "csv"
    outdir.mkdir(parents=True, exist_ok=True)
    if fmt_kind == "json":
        write_json(outdir / "fits.json", fits_to_json(fits))
    else:
        write_fits_csv(outdir / "fits.csv", fits)
    # Echo the input rows so the directory is self-contained and the
    # read/serialise round trip is observable.
    write_points_csv(outdir / "points.csv", records)
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if not args.no_figures:
        write_figures(outdir, records, fits)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    checks = run_all(inject_flip=args.inject_flip)
    width = max(len(c.name) for c in checks)
    failures = 0
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status}  {check.name:<{width}}  max dev {check.deviation:.3e}"
              f"  (tol {check.tolerance:.0e})")
        failures += 0 if check.passed else 1
    if failures:
        print(f"{failures} check(s) failed")
        return EXIT_VERIFY_FAILED
    print("all checks passed")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "fit":
            return cmd_fit(args)
        args = _merge_config(args)
        handler = {"search": cmd_search, "scan": cmd_scan, "scaling": cmd_scaling}
        return handler[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
