"""Command-line driver: ghost coefficients, polygons, histograms and verification sweeps.

Exit status is 0 on success, 1 when a check finds a counterexample (or a
polygon cannot be certified) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from .ghost import GhostContext, ghost_coefficient, weight
from .newton import StabilityError, WeightPoint, ghost_np, global_np
from .padic import Infinity, format_rat, parse_rat
from .suites import SUITES, run_suite
from .theorems import distribution, kolmogorov_distance, wasserstein_distance

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CAVEAT = (
    "note: (p, a) is outside the very generic range p >= 11, 2 <= a <= p - 5; "
    "ghost slopes are computed but not known to be the true slopes here"
)


class UsageError(Exception):
    pass


def _rat(text: str):
    try:
        return parse_rat(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational or 'inf': {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _rat_list(text: str) -> list[Fraction]:
    out = []
    for x in text.split(","):
        v = _rat(x)
        if isinstance(v, Infinity):
            raise argparse.ArgumentTypeError("radii must be finite")
        out.append(v)
    return out


def _jsonable(x: Any) -> Any:
    if isinstance(x, (Fraction, Infinity)):
        return format_rat(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


# argument parsing


def _context_parent() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(add_help=False)
    g = ap.add_argument_group("local datum")
    g.add_argument("--p", type=int, default=7, help="prime, at least 5 (default 7)")
    g.add_argument("--a", type=int, default=None, help="1 <= a <= p-4 (default 2; verify sweeps all a when omitted)")
    g.add_argument("--b", type=int, default=0)
    g.add_argument("--seps", type=int, default=None, help="s_eps selecting the character (default 0; verify sweeps all)")
    o = ap.add_argument_group("output")
    o.add_argument("--format", choices=("json", "csv"), default="json")
    o.add_argument("--out", type=Path, default=None, help="write here instead of standard output")
    o.add_argument("--config", type=Path, default=None, help="key=value file, overridden by flags")
    return ap


def build_parser() -> argparse.ArgumentParser:
    parent = _context_parent()
    ap = argparse.ArgumentParser(prog="ghostslopes", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeff", parents=[parent], help="zeros and degree of g_n")
    c.add_argument("--n", type=int, required=True)

    n = sub.add_parser("np", parents=[parent], help="ghost Newton polygon at a Gaussian point")
    n.add_argument("--center", type=int, required=True)
    n.add_argument("--radius", type=_rat, default=parse_rat("inf"), help="exact rational or 'inf'")
    n.add_argument("--count", type=int, default=10, help="number of slopes to certify")
    n.add_argument("--mult", type=int, default=1, help="global multiplicity m")
    n.add_argument("--mult1", type=int, default=0, help="m' for split data")
    n.add_argument("--mult2", type=int, default=0, help="m'' for split data")
    n.add_argument("--split", action="store_true", help="residual representation is split")

    h = sub.add_parser("hist", parents=[parent], help="normalized slope histogram at w_k")
    h.add_argument("--kbullet", type=int, required=True)
    h.add_argument("--bins", type=int, default=20)

    v = sub.add_parser("verify", parents=[parent], help="run a verification sweep")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--kmax", type=int, default=None, help="largest k_bullet in weight sweeps")
    v.add_argument("--nmax", type=int, default=None)
    v.add_argument("--count", type=int, default=None, help="points or triples for sampled suites")
    v.add_argument("--m", type=int, default=None, help="GM level")
    v.add_argument("--pairs", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--kbullets", type=_int_list, default=None, help="dist: comma-separated k_bullet values")
    v.add_argument("--radii", type=_rat_list, default=None, help="halo: comma-separated radii")
    v.add_argument("--slack", type=_rat, default=None, help="dist: constant C in the log slack")
    v.add_argument("--workers", type=int, default=None, help="overrides GHOSTSLOPES_WORKERS")
    return ap


def read_config(path: Path) -> list[str]:
    """Turn a key=value file into flags; blank lines and # comments are skipped."""
    tokens: list[str] = []
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if key in ("split",):
            if value.lower() in ("1", "true", "yes"):
                tokens.append(flag)
            continue
        tokens += [flag, value]
    return tokens


def _with_config(argv: list[str]) -> list[str]:
    if "--config" not in argv or not argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        return argv
    extra = read_config(Path(argv[i + 1]))
    return argv[:1] + extra + argv[1:]


# commands


def _default_a(p: int) -> int:
    return max(1, min(2, p - 4))


def _context(args) -> GhostContext:
    a = _default_a(args.p) if args.a is None else args.a
    s = 0 if args.seps is None else args.seps
    return GhostContext(args.p, a, s, args.b)


def _csv(rows: Sequence[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("series", "x", "y"))
    for row in rows:
        w.writerow(tuple(_jsonable(v) for v in row))
    return buf.getvalue()


def cmd_coeff(args) -> tuple[dict, list[tuple], int]:
    ctx = _context(args)
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    g = ghost_coefficient(ctx, args.n)
    report = {
        "p": ctx.p,
        "a": ctx.a,
        "b": ctx.b,
        "s_eps": ctx.s_eps,
        "n": args.n,
        "degree": g.degree,
        "zeros": [{"k": k, "mult": m} for k, m in g],
    }
    return report, [("zeros", k, m) for k, m in g], EXIT_OK


def cmd_np(args) -> tuple[dict, list[tuple], int]:
    ctx = _context(args)
    if args.count < 0:
        raise UsageError("--count must be >= 0")
    try:
        w = WeightPoint(args.center, args.radius)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        if args.mult == 1 and not args.split:
            poly = ghost_np(ctx, w, args.count)
        else:
            poly = global_np(ctx, w, args.mult, args.mult1, args.mult2, split=args.split, count=args.count)
    except StabilityError as exc:
        return {"error": "stability", "detail": str(exc)}, [], EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    slopes = poly.slopes()[: args.count]
    report = {
        "p": ctx.p,
        "a": ctx.a,
        "b": ctx.b,
        "s_eps": ctx.s_eps,
        "center": args.center,
        "radius": args.radius,
        "vertices": [[x, y] for x, y in poly.vertices],
        "slopes": slopes,
    }
    rows = [("vertices", x, y) for x, y in poly.vertices]
    rows += [("slopes", i, s) for i, s in enumerate(slopes, 1)]
    return report, rows, EXIT_OK


def cmd_hist(args) -> tuple[dict, list[tuple], int]:
    ctx = _context(args)
    if args.kbullet < 0 or args.bins < 1:
        raise UsageError("--kbullet must be >= 0 and --bins >= 1")
    st = distribution(ctx, weight(ctx, args.kbullet))
    hist = st.histogram(args.bins)
    report = {
        "p": ctx.p,
        "a": ctx.a,
        "s_eps": ctx.s_eps,
        "k": st.k,
        "d_iw": st.d_iw,
        "d_ur": st.d_ur,
        "histogram": hist,
    }
    if st.slopes:
        report["kolmogorov"] = kolmogorov_distance(ctx.p, st.normalized)
        report["wasserstein"] = wasserstein_distance(ctx.p, st.normalized)
    rows = [("histogram", Fraction(i, args.bins), m) for i, m in enumerate(hist)]
    rows += [("slopes", i, s) for i, s in enumerate(st.normalized, 1)]
    return report, rows, EXIT_OK


def cmd_verify(args) -> tuple[dict, list[tuple], int]:
    if args.a is not None or args.seps is not None:
        _context(args)  # validate early
    cfg = {
        "p": args.p,
        "a": args.a,
        "s_eps": args.seps,
        "b": args.b,
        "kmax": args.kmax,
        "nmax": args.nmax,
        "count": args.count,
        "m": args.m,
        "pairs": args.pairs,
        "seed": args.seed,
        "kbullets": args.kbullets,
        "radii": args.radii,
        "slack": args.slack,
    }
    report = run_suite(args.suite, cfg, workers=args.workers).as_dict()
    rows = [("report", k, v) for k, v in report.items() if not isinstance(v, (dict, list))]
    return report, rows, EXIT_OK if report["status"] == "pass" else EXIT_FAIL


COMMANDS = {"coeff": cmd_coeff, "np": cmd_np, "hist": cmd_hist, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_with_config(argv))
    except UsageError as exc:
        print(f"ghostslopes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        probe = GhostContext(args.p, _default_a(args.p) if args.a is None else args.a, 0, args.b)
        if not probe.very_generic:
            print(CAVEAT, file=sys.stderr)
        report, rows, code = COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"ghostslopes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = _csv(rows) if args.format == "csv" else json.dumps(_jsonable(report), indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
