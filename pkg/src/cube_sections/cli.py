"""Command-line front end: volume evaluation, extremality classification,
root solving, table generation, verification suites and plot-data export."""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import verify as verify_mod
from .criterion import (
    INCONCLUSIVE_WIDTH,
    SubdiagonalSpec,
    classify,
    classify_at_z,
    t_of_z,
)
from .errors import DomainError, PatternViolation
from .rho import DEFAULT_EPS, TABLE_EPS, solve_rho, table
from .volume import (
    Direction,
    QuadratureConfig,
    SectionQuery,
    polya_volume,
    subdiagonal_direction,
    vertex_sum_volume,
)

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_VERIFY = 3
EXIT_PATTERN = 4


@dataclass
class OutputRecord:
    """Machine- and human-renderable result envelope for one command."""

    command: str
    inputs: dict
    results: dict
    warnings: list = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "warnings": self.warnings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "OutputRecord":
        return cls(
            command=data["command"],
            inputs=data["inputs"],
            results=data["results"],
            warnings=data.get("warnings", []),
            schema_version=data.get("schema_version", SCHEMA_VERSION),
        )

    def pretty(self) -> str:
        lines = [f"{self.command}:"]
        for key, val in self.results.items():
            lines.append(f"  {key}: {val}")
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        return "\n".join(lines)


def format_sig(v, sig: int = 6) -> str:
    """Fixed-point rendering with `sig` significant digits, locale-free."""
    if v is None:
        return ""
    if v == 0:
        return "0." + "0" * (sig - 1)
    exp = math.floor(math.log10(abs(v)))
    decimals = max(sig - 1 - exp, 0)
    return f"{v:.{decimals}f}"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_rational(text: str) -> Fraction:
    """Exact rational from 'p/q' or a decimal/float literal."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(text)


def _resolve_t_z(args, n: int):
    """(t_float, z_exact_or_None) from --t / --z flags."""
    if args.z is not None and args.t is not None:
        raise DomainError("give either --t or --z, not both")
    if args.z is not None:
        z = _parse_rational(args.z)
        if not 0 < z <= Fraction(n, 2):
            raise DomainError(f"z must be in (0, {n}/2], got {z}")
        return t_of_z(n, float(z)), z
    t = float(args.t) if args.t is not None else 0.0
    if not 0 <= t < math.sqrt(n) / 2:
        raise DomainError(f"t must be < sqrt({n})/2 = {math.sqrt(n) / 2:.6f}")
    return t, None


def _emit(args, record: OutputRecord, text: str):
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_volume(args) -> int:
    n, d = args.n, args.d
    if d < n:
        raise DomainError(f"need n <= d, got n = {n}, d = {d}")
    if args.a is not None:
        direction = Direction([float(x) for x in args.a.split(",")])
    else:
        direction = subdiagonal_direction(n, d)
    t, z = _resolve_t_z(args, n)
    query = SectionQuery(direction, t)
    results = {}
    warnings = []
    if args.method in ("sum", "both"):
        results["volume_sum"] = vertex_sum_volume(query)
    if args.method in ("integral", "both"):
        cfg = QuadratureConfig(abs_tol=args.abs_tol)
        results["volume_integral"] = polya_volume(query, cfg)
    if args.method == "both":
        results["discrepancy"] = abs(results["volume_sum"] - results["volume_integral"])
    results["volume"] = results.get("volume_sum", results.get("volume_integral"))
    record = OutputRecord(
        command="volume",
        inputs={"d": d, "n": n, "t": t, "z": str(z) if z is not None else None,
                "method": args.method,
                "a_override": args.a},
        results=results,
        warnings=warnings,
    )
    _emit(args, record, record.to_json() if args.format == "json" else record.pretty())
    return EXIT_OK


def _interval_label(zf: float, rho) -> str:
    """Which critical interval the query point falls in."""
    bounds = [(0.0, "0"), (float(rho.rho_plus.value), "rho_plus"),
              (float(rho.rho_circ.value), "rho_circ"),
              (float(rho.rho_minus.value), "rho_minus"),
              (float(rho.n) / 2, "n/2")]
    for (lo, lo_name), (hi, hi_name) in zip(bounds, bounds[1:]):
        if lo < zf < hi:
            return f"({lo_name}, {hi_name})"
        if zf == hi:
            return f"at {hi_name}"
    return "outside (0, n/2]"


def cmd_classify(args) -> int:
    n, d = args.n, args.d
    spec = SubdiagonalSpec(n=n, d=d)
    t, z = _resolve_t_z(args, n)
    eps = _parse_rational(args.eps) if args.eps else DEFAULT_EPS
    if z is not None:
        res = classify_at_z(spec, z)
    else:
        res = classify(spec, t, eps)
    rho = solve_rho(n, TABLE_EPS)
    record = OutputRecord(
        command="classify",
        inputs={"d": d, "n": n, "t": res.t, "z": str(z) if z is not None else None,
                "eps": str(eps)},
        results={
            "kind": str(res.kind),
            "z": float(res.z),
            "z_exact": res.z_exact,
            "s1_sign": res.s1_sign,
            "s2_sign": res.s2_sign,
            "rho_plus": float(rho.rho_plus.value),
            "rho_circ": float(rho.rho_circ.value),
            "rho_minus": float(rho.rho_minus.value),
            "interval": _interval_label(float(res.z), rho),
        },
    )
    _emit(args, record, record.to_json() if args.format == "json" else record.pretty())
    return EXIT_OK


def _root_payload(root) -> dict:
    payload = {"value": float(root.value), "exact": root.exact}
    if root.interval is not None:
        payload["interval"] = [str(root.interval.lo), str(root.interval.hi)]
    else:
        payload["exact_value"] = str(root.value)
    return payload


def cmd_roots(args) -> int:
    n = args.n if args.n is not None else args.d
    if n is None:
        raise DomainError("roots needs --n (or --d)")
    eps = _parse_rational(args.eps) if args.eps else DEFAULT_EPS
    triple = solve_rho(n, eps)
    record = OutputRecord(
        command="roots",
        inputs={"n": n, "eps": str(eps)},
        results={
            "rho_minus": _root_payload(triple.rho_minus),
            "rho_circ": _root_payload(triple.rho_circ),
            "rho_plus": _root_payload(triple.rho_plus),
            "pattern_ok": triple.pattern_ok,
        },
    )
    if args.format == "json":
        text = record.to_json()
    else:
        lines = [f"critical roots for n = {n}:"]
        for name in ("rho_minus", "rho_circ", "rho_plus"):
            info = record.results[name]
            mark = " (exact)" if info["exact"] else ""
            lines.append(f"  {name} = {format_sig(info['value'])}{mark}")
        lines.append(f"  pattern_ok = {triple.pattern_ok}")
        text = "\n".join(lines)
    _emit(args, record, text)
    return EXIT_OK


def _table_csv(rows) -> str:
    buf = io.StringIO()
    buf.write("d,rho_minus,rho_circ,rho_plus\n")
    for row in rows:
        buf.write(f"{row.d},{format_sig(row.rho_minus)},"
                  f"{format_sig(row.rho_circ)},{format_sig(row.rho_plus)}\n")
    return buf.getvalue()


def _table_pretty(rows) -> str:
    lines = [f"{'d':>4} {'rho_minus':>14} {'rho_circ':>14} {'rho_plus':>14}"]
    for row in rows:
        if row.rho_minus is None:
            lines.append(f"{row.d:>4} {row.note}")
            continue
        cells = []
        for value, exact in ((row.rho_minus, row.exact_minus),
                             (row.rho_circ, row.exact_circ),
                             (row.rho_plus, row.exact_plus)):
            mark = " (exact)" if exact else ""
            cells.append(f"{format_sig(value) + mark:>14}")
        lines.append(f"{row.d:>4} " + " ".join(cells))
    return "\n".join(lines)


def cmd_table(args) -> int:
    eps = _parse_rational(args.eps) if args.eps else TABLE_EPS
    rows = table(args.dmin, args.dmax, eps)
    record = OutputRecord(
        command="table",
        inputs={"dmin": args.dmin, "dmax": args.dmax, "eps": str(eps),
                "format": args.format},
        results={"rows": [
            {"d": r.d, "rho_minus": r.rho_minus, "rho_circ": r.rho_circ,
             "rho_plus": r.rho_plus, "note": r.note} for r in rows]},
        warnings=[f"d={r.d}: {r.note}" for r in rows if r.note],
    )
    if args.format == "csv":
        text = _table_csv(rows)
    elif args.format == "json":
        text = record.to_json()
    else:
        text = _table_pretty(rows)
    _emit(args, record, text)
    if any(r.note for r in rows):
        return EXIT_PATTERN
    return EXIT_OK


def cmd_sweep(args) -> int:
    n, d = args.n, args.d
    if args.samples < 2:
        raise DomainError("sweep needs at least 2 samples")
    spec = SubdiagonalSpec(n=n, d=d)
    direction = subdiagonal_direction(n, d)
    from .criterion import build_S1, build_S2
    s1, s2 = build_S1(n), build_S2(n)
    tmax = math.sqrt(n) / 2
    buf = io.StringIO()
    buf.write("t,z,V,S1,S2,kind\n")
    for i in range(args.samples):
        t = tmax * i / args.samples
        z = n / 2 - t * math.sqrt(n)
        vol = vertex_sum_volume(SectionQuery(direction, t))
        res = classify(spec, t)
        buf.write(f"{t!r},{z!r},{vol!r},{s1.eval_float(z)!r},"
                  f"{s2.eval_float(z)!r},{res.kind}\n")
    record = OutputRecord(
        command="sweep",
        inputs={"d": d, "n": n, "samples": args.samples},
        results={"rows": args.samples},
    )
    _emit(args, record, buf.getvalue())
    return EXIT_OK


def cmd_verify(args) -> int:
    outcome = verify_mod.run_suite(args.suite, dmax=args.dmax)
    print(f"{outcome.passed} passed, {outcome.failed} failed "
          f"({outcome.suite} suite)")
    if outcome.pattern_violation:
        return EXIT_PATTERN
    if outcome.failed:
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cube-sections",
                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("pretty", "json", "csv"),
                       default="pretty")
        p.add_argument("--out", default=None, help="write output to a file")

    p = sub.add_parser("volume", help="section volume at distance t")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--z", type=str, default=None,
                   help="exact z as p/q (alternative to --t)")
    p.add_argument("--a", type=str, default=None,
                   help="comma-separated direction override")
    p.add_argument("--method", choices=("sum", "integral", "both"),
                   default="sum")
    p.add_argument("--abs-tol", type=float, default=1e-8)
    add_common(p)
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("classify", help="local extremality at a (sub)diagonal")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--z", type=str, default=None)
    p.add_argument("--eps", type=str, default=None)
    add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("roots", help="certified critical roots for one order")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--eps", type=str, default=None)
    add_common(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("table", help="critical-root table over a range of d")
    p.add_argument("--dmin", type=int, required=True)
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--eps", type=str, default=None)
    add_common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sweep", help="CSV of t,z,V,S1,S2,kind over a t grid")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=50)
    add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--suite", choices=("formulas", "criteria", "rho", "props", "all"),
                   default="all")
    p.add_argument("--dmax", type=int, default=35)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except PatternViolation as exc:
        print(f"pattern violation: {exc}", file=sys.stderr)
        return EXIT_PATTERN
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
