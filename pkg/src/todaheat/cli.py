"""Command-line front end: ``todaheat {alpha,verify,darboux,kernel}``.

Exit status is 0 on success, 1 when a verification or cross-check fails and
2 for usage errors (bad flags, windows too narrow for the request, degenerate
Darboux data).  JSON output is exact (rationals as ``"p/q"``); CSV output is
decimal and marked lossy on its first line.

If ``--output`` is not given and ``TODAHEAT_OUTPUT_DIR`` is set, reports are
written to ``$TODAHEAT_OUTPUT_DIR/<verb>.<format>``; otherwise to stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .algebra import format_rational, parse_rational
from .bessel import finite_form_from_alpha
from .darboux import (
    DarbouxSpec,
    alpha_contour,
    baker,
    chain_defect,
    commuting_pair,
    darboux_wave_table,
    extract_L,
    orthogonality_check,
)
from .errors import FitFailure, TodaHeatError
from .heat import (
    AlphaTable,
    alpha_constant_generating,
    alpha_recurrence,
    alpha_residue,
    diagonal_band,
    diamond,
    required_window,
)
from .lattice import Window
from .verify import SUITES, intertwining_detail, run_suites
from .wave import build_wave_table

ENV_OUTPUT_DIR = "TODAHEAT_OUTPUT_DIR"
LOSSY_BANNER = "# lossy: decimal approximations of exact rationals; use --format json for exact values"


class UsageError(Exception):
    """Configuration problem; reported with exit status 2."""


# -- parsing helpers -------------------------------------------------------

def parse_region(text: str) -> List[Tuple[int, int]]:
    """``band:LO:HI:WIDTH``, ``diamond:CENTER:RADIUS`` or ``points:N,M;N,M``."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "band":
            lo, hi, width = (int(v) for v in rest.split(":"))
            return diagonal_band(lo, hi, width)
        if kind == "diamond":
            center, radius = (int(v) for v in rest.split(":"))
            return diamond(center, radius)
        if kind == "points":
            pts = []
            for item in rest.split(";"):
                n, m = (int(v) for v in item.split(","))
                pts.append((n, m))
            return pts
    except ValueError as exc:
        raise UsageError(f"cannot parse region {text!r}: {exc}") from exc
    raise UsageError(f"region must start with band:, diamond: or points: (got {text!r})")


def parse_params(text: Optional[str]) -> Optional[List[Fraction]]:
    if text is None:
        return None
    if not text.strip():
        return []
    try:
        return [parse_rational(p) for p in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--params expects comma-separated rationals like 1/2,-3: {exc}") from exc


def _spec_from_args(n1: int, n2: int, params: Optional[str], seed: int) -> DarbouxSpec:
    values = parse_params(params)
    try:
        if values is None:
            return DarbouxSpec.generic(n1, n2, seed)
        return DarbouxSpec.from_params(n1, n2, values)
    except (ValueError, TodaHeatError) as exc:
        raise UsageError(str(exc)) from exc


def _load_window(args) -> Window:
    try:
        if args.window is not None:
            return Window.from_json(json.loads(args.window))
        with open(args.window_file) as fh:
            return Window.from_json(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read window: {exc}") from exc


def _span(points: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    vals = [v for p in points for v in p]
    return min(vals), max(vals)


def _auto_interval(points, order: int, pad: int = 0) -> Tuple[int, int]:
    lo, hi = _span(points)
    need = required_window(points, order) or (lo, hi)
    return min(lo, need[0]) - pad, max(hi, need[1]) + pad


# -- output ----------------------------------------------------------------

def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _dump_csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    buf.write(LOSSY_BANNER + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, Fraction) else v for v in row])
    return buf.getvalue()


def _emit(text: str, args, stem: str) -> None:
    target = args.output
    if target is None and os.environ.get(ENV_OUTPUT_DIR):
        target = str(Path(os.environ[ENV_OUTPUT_DIR]) / f"{stem}.{args.format}")
    if target is None:
        sys.stdout.write(text)
        return
    path = Path(target)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}", file=sys.stderr)


# -- verbs -----------------------------------------------------------------

def _alpha_methods(args, region, order):
    """Tables by every requested method, plus the window they describe."""
    darboux_bf = None
    if args.darboux is not None:
        n1, n2 = args.darboux
        spec = _spec_from_args(n1, n2, args.params, args.seed)
        lo, hi = _span(region)
        tab_iv = (lo - 2 * order - 2, hi + 2 * order + 2)
        auto = _auto_interval(region, order)
        interval = tuple(args.interval) if args.interval else (min(auto[0], tab_iv[0]) - 2,
                                                               max(auto[1], tab_iv[1]) + 2)
        result = extract_L(spec, interval)
        w = result.window
        source = {"darboux": spec.to_json()}
    elif args.constant is not None:
        a, b = (parse_rational(v) for v in args.constant)
        lo, hi = tuple(args.interval) if args.interval else _auto_interval(region, order, order + 2)
        w = Window.constant(lo, hi, a, b)
        source = {"constant": {"a": format_rational(a), "b": format_rational(b)}}
    else:
        w = _load_window(args)
        source = {"window": "inline" if args.window is not None else str(args.window_file)}

    methods = ["recurrence"]
    if args.cross_check:
        methods.append("residue")
        if args.darboux is not None:
            methods.append("contour")
        if args.constant is not None and all(n == m for n, m in region):
            methods.append("generating")
    elif args.method != "recurrence":
        methods = [args.method]

    tables = {}
    for method in methods:
        if method == "recurrence":
            tables[method] = alpha_recurrence(w, order, region)
        elif method == "residue":
            if args.darboux is not None:
                bf = darboux_bf = darboux_bf or baker(result, tab_iv)
                table = darboux_wave_table(bf, order, tab_iv)
            else:
                table = build_wave_table(w, order)
            tables[method] = alpha_residue(table, order, region)
        elif method == "contour":
            if args.darboux is None:
                raise UsageError("the contour method needs a --darboux window source")
            bf = darboux_bf = darboux_bf or baker(result, tab_iv)
            vals = {(k, n, m): alpha_contour(bf, k, n, m) for n, m in region for k in range(order + 1)}
            tables[method] = AlphaTable(order, tuple(sorted(set(region))), vals, "contour")
        elif method == "generating":
            if args.constant is None:
                raise UsageError("the generating method needs a --constant window source")
            series = alpha_constant_generating(w.a[w.lo], w.b[w.lo], order)
            vals = {(k, n, m): series[k] for n, m in region for k in range(order + 1)}
            tables[method] = AlphaTable(order, tuple(sorted(set(region))), vals, "generating")
    return w, source, tables


def cmd_alpha(args) -> int:
    region = parse_region(args.region)
    if args.order < 0:
        raise UsageError("--order must be nonnegative")
    w, source, tables = _alpha_methods(args, region, args.order)
    base = tables[next(iter(tables))]
    mismatch = None
    for name, table in tables.items():
        for key, v in sorted(base.values.items()):
            if table[key] != v:
                mismatch = {"method": name, "k_n_m": list(key),
                            "reference": format_rational(v), "value": format_rational(table[key])}
                break
        if mismatch:
            break
    if args.format == "csv":
        rows = [(k, n, m, v) for k, n, m, v in base.rows()]
        text = _dump_csv(["k", "n", "m", "alpha"], rows)
    else:
        report = {
            "source": source,
            "window_interval": list(w.interval),
            "order": args.order,
            "methods": list(tables),
            "table": [{"k": k, "n": n, "m": m, "alpha": format_rational(v)} for k, n, m, v in base.rows()],
        }
        if len(tables) > 1:
            report["cross_check"] = {"agree": mismatch is None, "first_mismatch": mismatch}
        text = _dump_json(report)
    _emit(text, args, "alpha")
    if mismatch:
        print(f"cross-check failed: {mismatch}", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    report = run_suites(names, seed=args.seed, k_max=args.k)
    if args.format == "csv":
        rows = [(suite, c["identity"], c["status"], c["cases"], json.dumps(c.get("counterexample", ""),
                                                                            sort_keys=True))
                for suite, checks in report["suites"].items() for c in checks]
        text = _dump_csv(["suite", "identity", "status", "cases", "counterexample"], rows)
    else:
        text = _dump_json(report)
    _emit(text, args, f"verify-{args.suite}")
    for suite, checks in report["suites"].items():
        for c in checks:
            if c["status"] != "pass":
                print(f"FAIL {suite}: {c['identity']} -- {json.dumps(c['counterexample'], sort_keys=True)}",
                      file=sys.stderr)
    return 0 if report["passed"] else 1


def darboux_certificate(spec: DarbouxSpec, interval: Tuple[int, int]) -> dict:
    """Window plus certification entries for one Darboux construction."""
    result = extract_L(spec, interval)
    w = result.window
    lo, hi = interval
    cert = {}
    chain = chain_defect(spec, interval)
    cert["jordan_chains"] = chain is None
    cert["intertwining"] = intertwining_detail(result) is None
    pair = commuting_pair(result)
    cert["commuting_operator"] = bool(pair.commutes)
    cert["spectral_curve"] = bool(pair.curve)
    bf = baker(result, interval)
    cert["baker_eigen_relation"] = bf.eigen_defect(w) is None
    idx = list(range(max(lo, -3), min(hi - 1, 3) + 1))
    cert["biorthogonality"] = orthogonality_check(bf, idx, idx) if idx else None
    return {"spec": spec.to_json(), "window": w.to_json(), "certification": cert,
            "certified": all(v is not False for v in cert.values())}


def cmd_darboux(args) -> int:
    spec = _spec_from_args(args.n1, args.n2, args.params, args.seed)
    lo, hi = args.interval
    if hi - lo < 2:
        raise UsageError("--interval must contain at least three points")
    report = darboux_certificate(spec, (lo, hi))
    if args.format == "csv":
        w = Window.from_json(report["window"])
        text = _dump_csv(["n", "a", "b"], [(n, w.a[n], w.b[n]) for n in range(w.lo, w.hi + 1)])
    else:
        text = _dump_json(report)
    _emit(text, args, "darboux")
    if not report["certified"]:
        failed = [k for k, v in report["certification"].items() if v is False]
        print(f"certification failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def cmd_kernel(args) -> int:
    point = [(args.n, args.m)]
    if args.darboux is not None:
        n1, n2 = args.darboux
        spec = _spec_from_args(n1, n2, args.params, args.seed)
        w = extract_L(spec, tuple(args.interval) if args.interval else _auto_interval(point, args.order)).window
        max_degree = 2 * max(n1, n2) - 1 if args.max_degree is None else args.max_degree
    elif args.constant is not None:
        a, b = (parse_rational(v) for v in args.constant)
        lo, hi = tuple(args.interval) if args.interval else _auto_interval(point, args.order)
        w = Window.constant(lo, hi, a, b)
        max_degree = 3 if args.max_degree is None else args.max_degree
    else:
        w = _load_window(args)
        max_degree = 3 if args.max_degree is None else args.max_degree
    alpha = alpha_recurrence(w, args.order, point)
    t_samples = tuple(args.t) if args.t else (0.25, 1.0, 2.0)
    try:
        form = finite_form_from_alpha(alpha, args.n, args.m, max_degree, t_samples)
    except FitFailure as exc:
        print(f"no finite two-Bessel form: {exc}", file=sys.stderr)
        return 1
    data = form.to_json()
    if args.format == "csv":
        text = _dump_csv(["t", "closed", "truncated", "bound", "ok"],
                         [(s["t"], s["closed"], s["truncated"], s["bound"], s["ok"]) for s in form.samples])
    else:
        text = _dump_json(data)
    _emit(text, args, "kernel")
    return 0 if all(s["ok"] for s in form.samples) else 1


# -- parser ----------------------------------------------------------------

def _add_window_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--window", help="inline JSON {interval: [lo, hi], a: [...], b: [...]}")
    src.add_argument("--window-file", help="path to a window JSON file")
    src.add_argument("--darboux", nargs=2, type=int, metavar=("N1", "N2"),
                     help="Darboux operator L_{N1,N2}")
    src.add_argument("--constant", nargs=2, metavar=("A", "B"), help="constant coefficients a, b")
    p.add_argument("--params", help="Darboux parameters, comma separated (default: seeded generic)")
    p.add_argument("--interval", nargs=2, type=int, metavar=("LO", "HI"),
                   help="window interval for --darboux / --constant (default: sized to the request)")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", help=f"output file (default: ${ENV_OUTPUT_DIR}/<verb>.<fmt> or stdout)")
    p.add_argument("--seed", type=int, default=0, help="seed for generated parameters and suites")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="todaheat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("alpha", help="heat coefficients alpha_k(n, m)")
    _add_window_source(p)
    p.add_argument("--region", required=True, help="band:LO:HI:WIDTH | diamond:C:R | points:N,M;N,M")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--method", choices=("recurrence", "residue", "contour", "generating"),
                   default="recurrence")
    p.add_argument("--cross-check", action="store_true", help="compute by every applicable method")
    _add_output(p)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("verify", help="run identity suites")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--k", type=int, default=None, help="largest flow index for the toda suite")
    _add_output(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("darboux", help="construct and certify L_{N1,N2}")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--params", help="one rational per step, comma separated")
    p.add_argument("--interval", nargs=2, type=int, default=(-10, 10), metavar=("LO", "HI"))
    _add_output(p)
    p.set_defaults(func=cmd_darboux)

    p = sub.add_parser("kernel", help="finite two-Bessel heat kernel")
    _add_window_source(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--order", type=int, default=60)
    p.add_argument("--t", type=float, action="append", help="sample time (repeatable)")
    p.add_argument("--max-degree", type=int, default=None)
    _add_output(p)
    p.set_defaults(func=cmd_kernel)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (TodaHeatError, ValueError) as exc:
        print(f"todaheat {args.verb}: error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
