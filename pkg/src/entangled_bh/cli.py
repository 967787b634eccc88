"""Command-line surface: correlation curves, verification suites, simulation
and thresholds.

Every command writes its outputs into ``--out``; with the same arguments
(including ``--seed``) the files are byte-identical across runs.  Exit codes
are 0 on success, 1 when a verification fails and 2 on usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, analytics, model, verify
from .errors import ModelError
from .haar import SeededStream

DEFAULT_SEED = 20250417
DEFAULT_SAMPLES = 10_000
COMMANDS = ("curves", "verify-purity", "verify-decoupling", "twirl-check", "simulate", "thresholds")
FORMATS = ("csv", "json", "svg")
CURVE_COLUMNS = ("c_ref_B", "c_ref_R_ext", "c_ref_B_ext", "c_ref_R")
PANELS = {
    "a": ("c_ref_B", "C(ref:B)"),
    "b": ("c_ref_R_ext", "C(ref:(R,ext))"),
    "c": ("c_ref_B_ext", "C(ref:(B,ext))"),
    "d": ("c_ref_R", "C(ref:R)"),
}


class UsageError(Exception):
    pass


# -- formatting ------------------------------------------------------------------


def fmt(v: float) -> str:
    """12 significant digits; negative zero prints as 0."""
    v = float(v)
    if v == 0.0:
        v = 0.0
    return format(v, ".12g")


def _clean(obj):
    """Make a report JSON-safe: non-finite floats become null, numpy scalars
    become Python numbers."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def curves_csv(rows: Sequence[analytics.CurveRow]) -> str:
    lines = ["r," + ",".join(CURVE_COLUMNS)]
    for row in rows:
        lines.append(",".join([str(row.r)] + [fmt(getattr(row, c)) for c in CURVE_COLUMNS]))
    return "\n".join(lines) + "\n"


def svg_plot(xs: Sequence[float], ys: Sequence[float], xlabel: str, ylabel: str, title: str) -> str:
    """A single polyline with a frame, tick labels at the ends and axis labels."""
    w, h, left, right, top, bottom = 480, 320, 64, 16, 28, 48
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    pw, ph = w - left - right, h - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (1 - (y - y0) / (y1 - y0)) * ph

    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<polyline points="{pts}" fill="none" stroke="#1f4e9c" stroke-width="1.5"/>',
        f'<text x="{w / 2:.1f}" y="18" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{w / 2:.1f}" y="{h - 10}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {top + ph / 2:.1f})">{ylabel}</text>',
        f'<text x="{left}" y="{top + ph + 16}" text-anchor="middle" font-size="10">{fmt(x0)}</text>',
        f'<text x="{left + pw}" y="{top + ph + 16}" text-anchor="middle" font-size="10">{fmt(x1)}</text>',
        f'<text x="{left - 4}" y="{top + ph}" text-anchor="end" font-size="10">{fmt(y0)}</text>',
        f'<text x="{left - 4}" y="{top + 4}" text-anchor="end" font-size="10">{fmt(y1)}</text>',
        "</svg>",
        "",
    ])


# -- argument handling -------------------------------------------------------------


def parse_r_grid(spec: str | None, n: int) -> list[int]:
    """``all``, ``a:b`` (inclusive), ``a:b:step`` or ``r1,r2,...``."""
    if spec is None or spec == "all":
        return list(range(n + 1))
    try:
        if ":" in spec:
            parts = [int(p) for p in spec.split(":")]
            if len(parts) not in (2, 3):
                raise ValueError
            step = parts[2] if len(parts) == 3 else 1
            if step < 1:
                raise ValueError
            rs = list(range(parts[0], parts[1] + 1, step))
        else:
            rs = [int(p) for p in spec.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse --r-grid {spec!r}") from None
    bad = [r for r in rs if not 0 <= r <= n]
    if bad or not rs:
        raise UsageError(f"--r-grid values must lie in [0, {n}], got {rs}")
    return rs


def parse_formats(spec: str | None, default: str) -> list[str]:
    items = [s.strip() for s in (spec or default).split(",") if s.strip()]
    bad = [s for s in items if s not in FORMATS]
    if bad or not items:
        raise UsageError(f"--format must be a subset of {','.join(FORMATS)}, got {spec!r}")
    return sorted(set(items), key=FORMATS.index)


def parse_pairs(spec: str) -> list[tuple[int, int]]:
    try:
        pairs = [tuple(int(v) for v in p.split("x")) for p in spec.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse --pairs {spec!r}") from None
    if any(len(p) != 2 for p in pairs):
        raise UsageError(f"--pairs entries look like 2x4, got {spec!r}")
    return pairs


def parse_point(spec: str) -> tuple[int, int, int, int]:
    try:
        p = tuple(int(v) for v in spec.split(","))
    except ValueError:
        raise UsageError(f"cannot parse --point {spec!r}") from None
    if len(p) != 4:
        raise UsageError(f"--point needs k,nu,r,b, got {spec!r}")
    return p


def resolve_nu(args, k: int, n: int) -> int:
    if args.ext_qubits is not None:
        return args.ext_qubits
    x = args.x if args.x is not None else 0.0
    return analytics.ext_qubits_for_x(k, n, x)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entangled-bh",
        description="Entangled black hole evaporation: curves, checks and simulation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(p, fmt_default):
        p.add_argument("--k", type=int, help="in-fallen qubits entangled with ref")
        p.add_argument("--n", type=int, help="interior qubits")
        ext = p.add_mutually_exclusive_group()
        ext.add_argument("--ext-qubits", type=int, help="uniform ext spectrum over 2**nu levels")
        ext.add_argument("--x", type=float, help="excess qubits; sets nu = n - k - x")
        p.add_argument("--c", type=float, default=2.0, help="fidelity margin, floor 1 - 2**-c")
        p.add_argument("--r-grid", help="radiated counts: all, a:b, a:b:step or r1,r2,...")
        p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--format", default=None, help=f"comma list of csv,json,svg (default {fmt_default})")
        p.set_defaults(format_default=fmt_default)
        return p

    common(sub.add_parser("curves", help="correlation curves (Fig. 1 dataset)"), "csv")
    for name in ("verify-purity", "verify-decoupling"):
        p = common(sub.add_parser(name, help=f"Monte Carlo {name.split('-')[1]} check over a grid"), "json")
        p.add_argument("--point", action="append", type=parse_point, help="k,nu,r,b (repeatable)")
        p.add_argument("--max-qubits", type=int, default=verify.GRID_MAX_QUBITS)
    p = common(sub.add_parser("twirl-check", help="Monte Carlo twirl of the partial swap"), "json")
    p.add_argument("--pairs", default="1x4,2x2,4x1,2x4", help="a1xa2 list")
    p = common(sub.add_parser("simulate", help="exact cascaded evaporation runs"), "json")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--infall-qubits", type=int, default=0)
    p.add_argument("--infall-step", type=int, default=None)
    common(sub.add_parser("thresholds", help="recovery thresholds and fidelity floors"), "json")
    return parser


# -- commands --------------------------------------------------------------------


def _config(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("format_default", "out"):
            continue
        if isinstance(v, Path):
            v = str(v)
        out[k] = v
    return out


def _envelope(args, result: dict, passed: bool | None = None) -> dict:
    env = {"tool": "entangled-bh", "version": __version__, "command": args.command, "config": _config(args)}
    if passed is not None:
        env["pass"] = passed
    env["result"] = result
    return env


def _grid_points(args) -> list[tuple[int, int, int, int]]:
    if args.point:
        return verify.check_points(args.point)
    if args.k is not None or args.n is not None:
        if args.k is None or args.n is None:
            raise UsageError("give both --k and --n to select a single family")
        nu = resolve_nu(args, args.k, args.n)
        return verify.check_points([(args.k, nu, r, args.n - r) for r in parse_r_grid(args.r_grid, args.n)])
    return verify.desk_grid(args.max_qubits)


def _checks_csv(checks: list[dict]) -> str:
    if not checks:
        return ""
    keys = list(checks[0].keys())
    lines = [",".join(keys)]
    for c in checks:
        cells = []
        for key in keys:
            v = c[key]
            if isinstance(v, bool):
                cells.append("true" if v else "false")
            elif isinstance(v, float):
                cells.append(fmt(v) if math.isfinite(v) else "")
            elif v is None:
                cells.append("")
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _emit(args, formats: list[str], envelope: dict, checks: list[dict] | None = None) -> list[str]:
    written = []
    if "json" in formats:
        _write(args.out / "report.json", dumps(envelope))
        written.append("report.json")
    if "csv" in formats:
        if checks is None:
            raise UsageError(f"csv output is not available for {args.command}")
        _write(args.out / "report.csv", _checks_csv(checks))
        written.append("report.csv")
    return written


def cmd_curves(args, formats) -> int:
    k = 10 if args.k is None else args.k
    n = 100 if args.n is None else args.n
    nu = resolve_nu(args, k, n)
    if args.r_grid not in (None, "all"):
        raise UsageError("curves always covers every r in [0, n]; drop --r-grid")
    if n < 1 or k < 0:
        raise UsageError("curves need n >= 1 and k >= 0")
    rows = analytics.curve(k, n, nu)
    written = []
    if "csv" in formats:
        _write(args.out / "curves.csv", curves_csv(rows))
        written.append("curves.csv")
    if "svg" in formats:
        xs = [row.r for row in rows]
        for panel, (col, label) in PANELS.items():
            ys = [getattr(row, col) for row in rows]
            title = f"({panel}) k={k}, n={n}, nu={nu}"
            _write(args.out / f"fig1_{panel}.svg", svg_plot(xs, ys, "radiated qubits r", f"{label} [bits]", title))
            written.append(f"fig1_{panel}.svg")
    if "json" in formats:
        result = {"k": k, "n": n, "nu": nu, "rows": [
            {"r": row.r, **{c: getattr(row, c) for c in CURVE_COLUMNS}} for row in rows
        ]}
        _write(args.out / "report.json", dumps(_envelope(args, result)))
        written.append("report.json")
    print(f"curves: k={k} n={n} nu={nu}, {len(rows)} rows -> {', '.join(written)}")
    return 0


def _only(formats: list[str], allowed: tuple[str, ...], command: str) -> None:
    bad = [f for f in formats if f not in allowed]
    if bad:
        raise UsageError(f"{command} does not write {','.join(bad)}")


def cmd_verify_purity(args, formats) -> int:
    _only(formats, ("json", "csv"), args.command)
    points = _grid_points(args)
    report = verify.verify_purities(points, args.samples, args.seed, max_qubits=args.max_qubits)
    checks = [c.as_dict() for c in report.checks]
    result = {"points": len(points), "checks": checks, "failures": len(report.failures())}
    _emit(args, formats, _envelope(args, result, report.passed), checks)
    print(f"verify-purity: {len(points)} points, {len(checks)} checks, "
          f"{len(report.failures())} failures -> {'PASS' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


def cmd_verify_decoupling(args, formats) -> int:
    _only(formats, ("json", "csv"), args.command)
    points = _grid_points(args)
    report = verify.verify_decoupling(points, args.samples, args.seed, max_qubits=args.max_qubits)
    checks = [c.as_dict() for c in report.checks]
    result = {"points": len(points), "checks": checks, "failures": len(report.failures())}
    _emit(args, formats, _envelope(args, result, report.passed), checks)
    print(f"verify-decoupling: {len(points)} points, {len(checks)} checks, "
          f"{len(report.failures())} failures -> {'PASS' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


def cmd_twirl_check(args, formats) -> int:
    _only(formats, ("json", "csv"), args.command)
    report = verify.verify_twirl(parse_pairs(args.pairs), args.samples, args.seed)
    checks = [c.as_dict() for c in report.checks]
    _emit(args, formats, _envelope(args, {"checks": checks}, report.passed), checks)
    for c in report.checks:
        print(f"twirl ({c.a1},{c.a2}): alpha={fmt(c.alpha)} beta={fmt(c.beta)} "
              f"frobenius={fmt(c.frobenius)} {'PASS' if c.passed else 'FAIL'}")
    return 0 if report.passed else 1


def cmd_simulate(args, formats) -> int:
    _only(formats, ("json",), args.command)
    k = 1 if args.k is None else args.k
    n = 4 if args.n is None else args.n
    nu = resolve_nu(args, k, n)
    if args.runs < 1:
        raise UsageError("--runs must be >= 1")
    params = model.ModelParams.uniform(k, n, nu, c=args.c)
    k2, r0 = args.infall_qubits, args.infall_step
    if k2 and r0 is None:
        raise UsageError("--infall-qubits needs --infall-step")
    records = [
        model.cascaded_infall(params, k2, r0, SeededStream.for_task(args.seed, j))
        for j in range(args.runs)
    ]
    steps = len(records[0].steps)
    rs = parse_r_grid(args.r_grid, steps - 1)
    keys = sorted(records[0].steps[0].correlations)
    mean = {key: np.mean([rec.series(key) for rec in records], axis=0) for key in keys}
    ent_keys = sorted(records[0].steps[0].entropies)
    ent = {
        key: np.mean([[s.entropies[key] for s in rec.steps] for rec in records], axis=0)
        for key in ent_keys
    }
    result = {
        "k": k, "n": n, "nu": nu, "runs": args.runs,
        "infall_qubits": k2, "infall_step": r0,
        "steps": [
            {
                "r": r,
                "correlations": {key: float(mean[key][r]) for key in keys},
                "entropies": {key: float(ent[key][r]) for key in ent_keys},
                "floor_R_ext": analytics.floor_radiation_side(k, n, params.x, min(r, n)),
            }
            for r in rs
        ],
        "max_monogamy_residual": max(float(np.abs(rec.monogamy_residuals()).max()) for rec in records),
    }
    _emit(args, formats, _envelope(args, result))
    print(f"simulate: k={k} n={n} nu={nu}, {args.runs} runs, {steps} steps -> report.json")
    return 0


def cmd_thresholds(args, formats) -> int:
    _only(formats, ("json",), args.command)
    k = 10 if args.k is None else args.k
    n = 100 if args.n is None else args.n
    nu = resolve_nu(args, k, n)
    x = float(n - k - nu)
    th = analytics.thresholds(k, n, x, args.c)
    pure = analytics.thresholds(k, n, n - k, args.c)
    rows = []
    for r in parse_r_grid(args.r_grid, n):
        fr = analytics.floor_radiation_side(k, n, x, r)
        fb = analytics.floor_interior_side(k, n, x, r)
        rows.append({
            "r": r,
            "floor_R_ext": fr,
            "floor_B_ext": fb,
            "guarantee_R_ext": fr > 0,
            "guarantee_B_ext": fb > 0,
            "pure_model_floor": analytics.pure_model_bound(k, n, r),
        })
    floor_at_early = analytics.floor_radiation_side(k, n, x, th.r_early)
    result = {
        "k": k, "n": n, "nu": nu, "x": x, "c": args.c,
        "r_early": th.r_early,
        "r_late": th.r_late,
        "has_pad_phase": th.has_pad_phase,
        "floor_at_r_early": floor_at_early,
        "no_guarantee_boundary": floor_at_early <= 0.0,
        "pure_model": {"r_early": pure.r_early, "r_late": pure.r_late},
        "floors": rows,
    }
    _emit(args, formats, _envelope(args, result))
    print(f"thresholds: r_early={fmt(th.r_early)} r_late={fmt(th.r_late)} "
          f"(pure model {fmt(pure.r_early)}, {fmt(pure.r_late)})")
    return 0


HANDLERS = {
    "curves": cmd_curves,
    "verify-purity": cmd_verify_purity,
    "verify-decoupling": cmd_verify_decoupling,
    "twirl-check": cmd_twirl_check,
    "simulate": cmd_simulate,
    "thresholds": cmd_thresholds,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        if args.samples < 1:
            raise UsageError("--samples must be positive")
        if not 0 <= args.seed < 2**64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        formats = parse_formats(args.format, args.format_default)
        args.out.mkdir(parents=True, exist_ok=True)
        return HANDLERS[args.command](args, formats)
    except (UsageError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
