"""``polybif`` command line.

Exit codes: 0 success, 1 failed claim / convergence / internal error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
import warnings
from fractions import Fraction

from ._version import __version__
from .algebraic import AlgebraicRoot
from .families import BUILTIN_NAMES, MissingFixedParam, UnknownFamily, builtin

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


# -- value parsing --------------------------------------------------------------

_SQRT = re.compile(r"^(-?)sqrt\(?\s*([0-9/.]+)\s*\)?$")


def parse_value(text: str):
    """``p/q`` or a decimal (exact), or ``sqrtN`` / ``sqrt(N)`` as an AlgebraicRoot."""
    s = text.strip()
    m = _SQRT.match(s)
    if m:
        root = AlgebraicRoot.sqrt(parse_rational(m.group(2)))
        return root.scale(-1) if m.group(1) else root
    return parse_rational(s)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def parse_range(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split("..") if ".." in text else text.split(",")
    if len(parts) != 2:
        raise UsageError(f"range must look like lo..hi, got {text!r}")
    lo, hi = (parse_rational(p) for p in parts)
    if lo > hi:
        raise UsageError(f"range lower end {lo} exceeds upper end {hi}")
    return lo, hi


def parse_family(spec: str, a_text: str | None = None):
    """A built-in name, or the inline form ``family=<name>;a=<value>``."""
    name, fixed = spec.strip(), {}
    if "=" in spec:
        fields = dict(kv.split("=", 1) for kv in spec.split(";") if kv.strip())
        fields = {k.strip(): v.strip() for k, v in fields.items()}
        if "family" not in fields:
            raise UsageError(f"family spec {spec!r} lacks family=<name>")
        name = fields.pop("family")
        fixed = fields
    if a_text is not None:
        fixed["a"] = a_text
    unknown = set(fixed) - {"a"}
    if unknown:
        raise UsageError(f"unknown family parameter(s): {', '.join(sorted(unknown))}")
    params = [parse_value(fixed["a"])] if "a" in fixed else []
    try:
        return builtin(name, params)
    except UnknownFamily:
        raise UsageError(f"unknown family {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None
    except MissingFixedParam as exc:
        raise UsageError(str(exc)) from None


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


# -- output ---------------------------------------------------------------------

def write_output(text: str, path: str | None) -> None:
    """Write to ``path`` atomically (temp file + rename), or to stdout."""
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".polybif-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- subcommands ----------------------------------------------------------------

def cmd_period_count(args) -> int:
    from .period import LeadingCoefficientVanishes, count_period_points

    f = parse_family(args.family, args.a)
    t = parse_value(args.param)
    with warnings.catch_warnings():
        # reported below as degree_dropped instead
        warnings.simplefilter("ignore", LeadingCoefficientVanishes)
        pc = count_period_points(f, args.n, t)
    if args.format == "json":
        out = json.dumps({"tool_version": __version__, "family": f.descriptor, "n": args.n,
                          "param": str(args.param), "count": pc.count,
                          "lower_period": pc.lower_period, "degree_dropped": pc.degree_dropped})
    else:
        out = f"{pc.count}\nlower_period={'yes' if pc.lower_period else 'no'}"
        if pc.degree_dropped:
            out += "\ndegree_dropped=yes"
    write_output(out, args.output)
    return EXIT_OK


def cmd_detect(args) -> int:
    from .detect import detect

    f = parse_family(args.family, args.a)
    rng = parse_range(args.range) if args.range else None
    rep = detect(f, args.n, rng, point_tol=parse_rational(args.point_tol), grid=args.grid)
    write_output(rep.to_text() if args.format == "text" else rep.to_json(), args.output)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    from .claims import run_claims

    results = run_claims(only=args.only)
    ok = all(r.passed for r in results)
    if args.format == "json":
        out = json.dumps({"tool_version": __version__, "passed": ok,
                          "claims": [r.as_dict() for r in results]}, indent=2)
    else:
        lines = [r.line() for r in results]
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} claims pass")
        out = "\n".join(lines)
    write_output(out, args.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_tangent(args) -> int:
    from .period import tangent_parameters

    f = parse_family(args.family, args.a)
    loc = tangent_parameters(f, args.n, positive_only=not args.all)
    rows = []
    for d in loc.details:
        rows.append({
            "param": d.param.pretty(f.param_name),
            "approx": float(d.param),
            "kind": d.kind,
            "gcd_degree": d.gcd_degree,
            "real_multiple_roots": d.real_multiple_roots,
            "flank_counts": list(d.flank_counts),
            "count_at": d.count_at,
        })
    if args.format == "json":
        out = json.dumps({"tool_version": __version__, "family": f.descriptor, "n": args.n,
                          "locus_degree": loc.certificate.degree, "params": rows}, indent=2)
    else:
        out = "\n".join(f"{r['param']}  ({r['approx']:.15g})  {r['kind']}  flanks={r['flank_counts']}"
                        for r in rows) or "none"
    write_output(out, args.output)
    return EXIT_OK


def cmd_continue(args) -> int:
    from .continuation import NoConvergence, continue_branch, seed_points

    f = parse_family(args.family, args.a)
    anchor = parse_rational(args.param)
    lo, hi = parse_range(args.range)
    seeds = seed_points(f, args.n, anchor, args.newton_tol)
    if not seeds:
        print(f"no period-{args.n} points at {anchor}", file=sys.stderr)
        return EXIT_FAIL
    if args.root is not None:
        if not 0 <= args.root < len(seeds):
            raise UsageError(f"--root must be in 0..{len(seeds) - 1}")
        seeds = [seeds[args.root]]
    direction = {"up": 1, "down": -1, None: None}[args.direction]
    branches = []
    for s in seeds:
        try:
            branches.append(continue_branch(f, args.n, s, (float(lo), float(hi)), args.step0,
                                            direction=direction, newton_tol=args.newton_tol,
                                            event_tol=args.event_tol))
        except NoConvergence as exc:
            print(f"continuation failed: {exc}", file=sys.stderr)
            return EXIT_FAIL
    if args.format == "json":
        out = json.dumps({
            "tool_version": __version__, "family": f.descriptor, "n": args.n,
            "branches": [{"start": b.points[0].x0, "points": len(b.points),
                          "end": b.points[-1].param,
                          "events": [{"kind": e.kind, "param": e.param, "note": e.note} for e in b.events]}
                         for b in branches]}, indent=2)
    else:
        parts = []
        for i, b in enumerate(branches):
            body = b.to_csv().splitlines()
            if i == 0:
                parts.append("branch," + body[0])
            parts.extend(f"{i},{line}" for line in body[1:])
        out = "\n".join(parts) + "\n"
        for i, b in enumerate(branches):
            for e in b.events:
                print(f"branch {i}: {e.kind} at {e.param:.15g} {e.note}", file=sys.stderr)
    write_output(out, args.output)
    return EXIT_OK


def cmd_diagram(args) -> int:
    from .diagram import orbit_diagram, render_svg

    f = parse_family(args.family, args.a)
    lo, hi = parse_range(args.range)
    x0 = "critical-point" if args.x0 == "critical-point" else float(parse_rational(args.x0))
    d = orbit_diagram(f, (float(lo), float(hi)), args.n_params, args.transient, args.keep, x0)
    fmt = args.format or ("svg" if args.output and args.output.endswith(".svg") else "csv")
    out = render_svg(d, args.width, args.height) if fmt == "svg" else d.to_csv()
    write_output(out, args.output)
    if args.stats:
        write_output(json.dumps(d.sidecar(), indent=2), args.stats)
    return EXIT_OK


def cmd_scan(args) -> int:
    from .detect import scan_counts

    f = parse_family(args.family, args.a)
    grid = scan_counts(f, args.n, parse_range(args.range), args.grid)
    write_output(grid.to_csv(), args.output)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def _family_args(p, need_n=True):
    p.add_argument("--family", required=True,
                   help="built-in name or 'family=<name>;a=<value>'")
    p.add_argument("--a", help="fixed parameter a (p/q, decimal or sqrt7)")
    if need_n:
        p.add_argument("--n", type=int, required=True, help="period")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polybif", description="Exact and numerical bifurcation analysis "
                                 "of one-parameter polynomial maps.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("period-count", help="count period-n points at a parameter")
    _family_args(p)
    p.add_argument("--param", required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_period_count)

    p = sub.add_parser("detect", help="find bubbles and point bifurcations")
    _family_args(p)
    p.add_argument("--range", help="parameter range lo..hi")
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--point-tol", default="1/1000000000")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("verify-paper", help="replay every checkable claim")
    p.add_argument("--only", nargs="*", help="claim keys to run")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("tangent", help="exact tangent (fold) parameters")
    _family_args(p)
    p.add_argument("--all", action="store_true", help="include non-positive parameters")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_tangent)

    p = sub.add_parser("continue", help="continue period-n orbits from a rational anchor")
    _family_args(p)
    p.add_argument("--param", required=True, help="rational anchor parameter")
    p.add_argument("--range", required=True)
    p.add_argument("--root", type=int, help="index of the seed root (default: all)")
    p.add_argument("--direction", choices=("up", "down"))
    p.add_argument("--step0", type=_positive, default=1e-3)
    p.add_argument("--newton-tol", type=_positive, default=1e-12)
    p.add_argument("--event-tol", type=_positive, default=1e-8)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_continue)

    p = sub.add_parser("diagram", help="orbit diagram as CSV or SVG")
    _family_args(p, need_n=False)
    p.add_argument("--range", required=True)
    p.add_argument("--n-params", type=int, default=1000)
    p.add_argument("--transient", type=int, default=1000)
    p.add_argument("--keep", type=int, default=200)
    p.add_argument("--x0", default="critical-point")
    p.add_argument("--width", type=int, default=800)
    p.add_argument("--height", type=int, default=600)
    p.add_argument("--format", choices=("csv", "svg"))
    p.add_argument("--stats", help="write the escape statistics (JSON) here")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("scan", help="exact period counts on a grid (CSV)")
    _family_args(p)
    p.add_argument("--range", required=True)
    p.add_argument("--grid", type=int, default=2000)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_scan)
    return ap


_VALUE_FLAGS = {"--range", "--param", "--a", "--x0"}


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse takes "-2..2" for an option; glue such values to their flag
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"polybif: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        from .period import PeriodCapExceeded

        if isinstance(exc, PeriodCapExceeded):
            print(f"polybif: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        print(f"polybif: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
