"""Command-line entry point: ``vkit <subcommand> ...``.

Exit codes: 0 ok, 2 invalid input, 3 resource budget exceeded, 4 internal
invariant violated.  Wall times (``--time``) go to stderr so that stdout is
identical between cold and warm cache runs.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction
from typing import Sequence

from . import __version__
from .assoc import AssocError, InconsistentDegree, export_text, solve_associator, verify_axioms
from .cache import Cache
from .diagrams import DiagramError, JacobiDiagram, enumerate_chord_diagrams, enumerate_jacobi_diagrams, format_code, parse_code
from .hutchings import HutchingsReport, hutchings_report
from .spaces import DiagramVector, chord_quotient, stu_expand
from .tangle import EventSequence, PresentationError, evaluate_corrected, evaluate_raw, evaluate_singular
from .weights import ResourceBudgetError, rank_table_csv, weight_oracle, weight_poly

MAX_DIMS_DEGREE = 9
MAX_ASSOC_DEGREE = 8
MAX_TANGLE_DEGREE = 7
MAX_HUTCHINGS_DEGREE = 5


class CLIError(ValueError):
    pass


def _budget(value: int, limit: int, what: str) -> None:
    if value > limit:
        raise ResourceBudgetError(f"{what} {value} exceeds the budget of {limit}")


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# ------------------------------------------------------------ commands


def cmd_dims(args: argparse.Namespace, cache: Cache) -> str:
    _budget(args.to, MAX_DIMS_DEGREE, "degree")
    variants = ["reduced", "framed"] if args.variant == "both" else [args.variant]
    rows = []
    for m in range(args.start, args.to + 1):
        row: dict = {"m": m}
        for v in variants:
            params = {"m": m, "variant": v}
            hit = cache.get("dims", params)
            t0 = time.perf_counter()
            if hit is None:
                q = chord_quotient(m, v)
                payload = json.dumps({"dim": q.dim, "basis": [list(c) for c in q.basis_codes()]})
                cache.put("dims", params, payload)
            else:
                payload = hit
            row[v] = json.loads(payload)["dim"]
            if args.time:
                print(f"dims m={m} {v}: {time.perf_counter() - t0:.3f}s", file=sys.stderr)
        rows.append(row)
    if args.json:
        return json.dumps({"variants": variants, "rows": rows}, sort_keys=True)
    lines = ["m\t" + "\t".join(variants)]
    lines += [f"{r['m']}\t" + "\t".join(str(r[v]) for v in variants) for r in rows]
    return "\n".join(lines)


def cmd_enumerate(args: argparse.Namespace, cache: Cache) -> str:
    _budget(args.degree, MAX_DIMS_DEGREE, "degree")
    if args.jacobi:
        k = 2 * args.degree - 2 if args.max_internal is None else args.max_internal
        diags = enumerate_jacobi_diagrams(args.degree, max(k, 0) if args.degree else 0)
        if args.json:
            return json.dumps({"degree": args.degree, "jacobi": [d.to_text() for d in diags]})
        return "\n".join(d.to_text() for d in diags).rstrip("\n")
    codes = [d.code for d in enumerate_chord_diagrams(args.degree)]
    if args.json:
        return json.dumps({"degree": args.degree, "diagrams": [list(c) for c in codes]})
    return "\n".join(format_code(c) or "-" for c in codes)


def cmd_stu_expand(args: argparse.Namespace, cache: Cache) -> str:
    text = sys.stdin.read() if args.file == "-" else open(args.file).read()
    vec = stu_expand(JacobiDiagram.from_text(text))
    if args.reduce:
        coords = chord_quotient(vec.degree or 0, args.reduce).coordinates(vec)
        vec = DiagramVector(coords, degree=vec.degree)
    if args.json:
        return json.dumps({"terms": [{"code": list(c), "coef": _frac(x)} for c, x in sorted(vec.items())]})
    return vec.to_text().rstrip("\n")


def _code_arg(text: str) -> tuple[int, ...]:
    return () if text.strip() in ("", "-") else parse_code(text)


def cmd_weight(args: argparse.Namespace, cache: Cache) -> str:
    code = _code_arg(args.code)
    poly = weight_poly(code, args.algebra)
    oracle = None
    if args.oracle is not None:
        oracle = weight_oracle(code, args.algebra, args.oracle)
    if args.json:
        out = {"algebra": args.algebra, "code": list(code), "coefficients": {str(k): _frac(c) for k, c in sorted(poly.coeffs.items())}}
        if oracle is not None:
            out["oracle"] = {"N": args.oracle, "value": _frac(oracle)}
        return json.dumps(out, sort_keys=True)
    lines = [str(poly)]
    if oracle is not None:
        lines.append(f"N={args.oracle}: state sum {poly(args.oracle)}, oracle {oracle}")
    return "\n".join(lines)


def cmd_weight_rank(args: argparse.Namespace, cache: Cache) -> str:
    _budget(args.to, 7, "degree")
    table = rank_table_csv(args.to)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(table)
    if args.json:
        rows = [line.split(",") for line in table.strip().splitlines()[1:]]
        return json.dumps({"rows": [{"m": int(m), "dim_framed": int(d), "rank": int(r)} for m, d, r in rows]})
    return table.rstrip("\n")


def cmd_assoc(args: argparse.Namespace, cache: Cache) -> str:
    _budget(args.degree, MAX_ASSOC_DEGREE, "degree")
    params = {"D": args.degree}
    payload = cache.get("assoc", params)
    if payload is None:
        R, phi, _ = solve_associator(args.degree)
        pent, hp, hm = verify_axioms(R, phi, args.degree)
        payload = json.dumps(
            {
                "export": export_text(phi),
                "residuals": {
                    name: _frac(max((abs(c) for c in e.terms.values()), default=Fraction(0)))
                    for name, e in (("pentagon", pent), ("hexagon+", hp), ("hexagon-", hm))
                },
            }
        )
        cache.put("assoc", params, payload)
    data = json.loads(payload)
    out_path = args.out or f"associator_D{args.degree}.txt"
    with open(out_path, "w") as fh:
        fh.write(data["export"])
    res = {k: str(Fraction(v)) for k, v in data["residuals"].items()}
    if args.json:
        return json.dumps({"degree": args.degree, "out": out_path, "residuals": res}, sort_keys=True)
    return "\n".join([f"wrote {out_path}"] + [f"{k} residual {v}" for k, v in res.items()])


def cmd_tangle(args: argparse.Namespace, cache: Cache) -> str:
    _budget(args.degree, MAX_TANGLE_DEGREE, "degree")
    seq = EventSequence.load(args.events)
    if seq.singular_count:
        value = evaluate_singular(seq, args.degree, args.variant)
    elif args.raw:
        value = evaluate_raw(seq, args.degree, args.variant)
    else:
        value = evaluate_corrected(seq, args.degree, args.variant)
    if args.json:
        return json.dumps(value.to_json(), sort_keys=True)
    return value.to_text().rstrip("\n")


def cmd_hutchings(args: argparse.Namespace, cache: Cache) -> str:
    top = args.degree if args.to is None else args.to
    start = args.degree if args.to is None else 0
    _budget(top, MAX_HUTCHINGS_DEGREE, "degree")
    reports: list[HutchingsReport] = []
    for m in range(start, top + 1):
        r = hutchings_report(m, include_fi=args.include_fi, max_degree=MAX_HUTCHINGS_DEGREE)
        if not r.im_in_ker:
            raise AssertionError(f"boundary of a D2 generator is not a cycle at m={m}")
        reports.append(r)
    if args.json:
        return json.dumps(
            {
                "rows": [
                    {"m": r.m, "dim_ker_upper": r.dim_ker_upper, "dim_im_3T8T": r.dim_im_3T8T, "residual_upper": r.residual_upper}
                    for r in reports
                ]
            }
        )
    return "\n".join([HutchingsReport.HEADER] + [r.row() for r in reports])


def cmd_cache(args: argparse.Namespace, cache: Cache) -> str:
    if args.action == "clear":
        n = cache.clear()
        return json.dumps({"removed": n}) if args.json else f"removed {n} entries from {cache.root}"
    rows = []
    for path, entry in cache.entries():
        if entry is None:
            rows.append({"file": path.name, "valid": False})
        else:
            rows.append({"file": path.name, "valid": True, "module": entry.module, "params": entry.params, "bytes": len(entry.payload)})
    if args.json:
        return json.dumps({"dir": str(cache.root), "entries": rows}, sort_keys=True)
    lines = [f"cache {cache.root}: {len(rows)} entries"]
    for r in rows:
        if r["valid"]:
            lines.append(f"{r['file']}\t{r['module']}\t{json.dumps(r['params'], sort_keys=True)}\t{r['bytes']}")
        else:
            lines.append(f"{r['file']}\tcorrupt")
    return "\n".join(lines)


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    def flags(suppress: bool) -> argparse.ArgumentParser:
        # Subcommands repeat the global flags with suppressed defaults so a flag
        # given before the subcommand is not reset by the subparser.
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--threads", type=int, default=d(os.cpu_count() or 1))
        p.add_argument("--seed", type=int, default=d(0))
        p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
        p.add_argument("--cache-dir", default=d(None), help="default: $VKIT_CACHE or .vkit-cache")
        p.add_argument("--no-cache", action="store_true", default=d(False))
        p.add_argument("--time", action="store_true", default=d(False), help="report wall time on stderr")
        return p

    common = flags(True)

    ap = argparse.ArgumentParser(prog="vkit", description="Finite-type knot invariant toolkit.", parents=[flags(False)])
    ap.add_argument("--version", action="version", version=f"vkit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", parents=[common], help="dimensions of A_m and A^r_m")
    p.add_argument("--from", dest="start", type=int, default=0)
    p.add_argument("--to", type=int, required=True)
    p.add_argument("--variant", choices=["reduced", "framed", "both"], default="both")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("enumerate", parents=[common], help="list chord or Jacobi diagrams")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--jacobi", action="store_true")
    p.add_argument("--max-internal", type=int, default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("stu-expand", parents=[common], help="expand a Jacobi diagram into chord diagrams")
    p.add_argument("file", help="Jacobi diagram text file, or - for stdin")
    p.add_argument("--reduce", choices=["reduced", "framed"], default=None)
    p.set_defaults(func=cmd_stu_expand)

    p = sub.add_parser("weight", parents=[common], help="Lie algebra weight of a chord diagram")
    p.add_argument("code", help='chord code such as "1 2 1 2"; "" or - for the empty diagram')
    p.add_argument("--algebra", choices=["gl", "so"], default="gl")
    p.add_argument("--oracle", type=int, default=None, metavar="N", help="also run the index-sum oracle at N")
    p.set_defaults(func=cmd_weight)

    p = sub.add_parser("weight-rank", parents=[common], help="rank of gl/so weight systems on A_m")
    p.add_argument("--to", type=int, required=True)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_weight_rank)

    p = sub.add_parser("assoc", parents=[common], help="solve for a rational associator")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_assoc)

    p = sub.add_parser("tangle", parents=[common], help="evaluate a knot presentation")
    p.add_argument("--events", required=True, help="bundled name or event file")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--variant", choices=["reduced", "framed"], default="reduced")
    p.add_argument("--raw", action="store_true", help="skip the hump correction")
    p.set_defaults(func=cmd_tangle)

    p = sub.add_parser("hutchings", parents=[common], help="boundary complex report")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--to", type=int, default=None, help="report every degree up to this one")
    p.add_argument("--include-fi", action="store_true")
    p.set_defaults(func=cmd_hutchings)

    p = sub.add_parser("cache", parents=[common], help="inspect or clear the result cache")
    p.add_argument("action", choices=["inspect", "clear"])
    p.set_defaults(func=cmd_cache)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    random.seed(args.seed)
    cache = Cache(args.cache_dir, enabled=not args.no_cache)
    t0 = time.perf_counter()
    try:
        out = args.func(args, cache)
    except ResourceBudgetError as exc:
        print(f"vkit {args.command}: resource budget: {exc}", file=sys.stderr)
        return 3
    except (AssertionError, InconsistentDegree) as exc:
        print(f"vkit {args.command}: internal invariant violated: {exc}", file=sys.stderr)
        return 4
    except (DiagramError, PresentationError, AssocError, CLIError, ValueError, OSError) as exc:
        print(f"vkit {args.command}: {exc}", file=sys.stderr)
        return 2
    if out:
        print(out)
    if args.time:
        print(f"vkit {args.command}: {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
