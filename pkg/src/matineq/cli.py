"""Command-line entry point.

Exit codes: 0 the property held / fixtures reproduced, 1 a violation was
found or a fixture did not reproduce, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .delta import delta
from .fixtures import published_counterexamples, verify_paper_fixtures
from .fuzz import CONSTRAINTS, FuzzConfig, fuzz, shrink
from .inequalities import InequalityId, check
from .scalar import format_fn, parse_fn
from .spectral import SymMatrix

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.9g}"


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def load_inputs(paths: Sequence[str]) -> list[SymMatrix]:
    """Matrices from matrix files, or from one file holding an ``inputs`` list
    (check output, a violation) or ``violations`` (fuzz report; first one)."""
    mats = []
    for path in paths:
        obj = _read_json(path)
        try:
            if isinstance(obj, dict) and "rows" in obj:
                mats.append(SymMatrix.from_dict(obj))
                continue
            if isinstance(obj, dict) and obj.get("violations"):
                obj = obj["violations"][0]
            if isinstance(obj, dict) and "inputs" in obj:
                mats.extend(SymMatrix.from_dict(m) for m in obj["inputs"])
                continue
        except ValueError as exc:
            raise InputError(f"{path}: {exc}") from None
        raise InputError(f"{path}: no matrix found (expected {{\"dim\", \"rows\"}} or an 'inputs' list)")
    return mats


def _table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [list(header)] + [[c if isinstance(c, str) else fmt(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells)


def _report_table(report) -> str:
    gaps = report.rhs_partial_sums - report.lhs_partial_sums
    rows = [[str(k + 1), lv, rv, g] for k, (lv, rv, g) in
            enumerate(zip(report.lhs_partial_sums, report.rhs_partial_sums, gaps))]
    return _table(["k", "lhs", "rhs", "rhs-lhs"], rows)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


# ---------------------------------------------------------------------------


def cmd_verify_paper(args) -> int:
    results = verify_paper_fixtures()
    if args.json:
        _emit({"fixtures": [r.to_dict() for r in results],
               "all_reproduced": all(r.reproduced for r in results)})
    else:
        for r in results:
            status = "REPRODUCED" if r.reproduced else "MISMATCH"
            print(f"{status}  {r.name}  margin={fmt(r.check.margin)}")
            if not r.reproduced:
                print(r.diff())
    return EXIT_OK if all(r.reproduced for r in results) else EXIT_VIOLATION


def cmd_check(args) -> int:
    f = parse_fn(args.fn)
    mats = load_inputs(args.inputs)
    res = check(args.tag, f, mats, tol=args.tol)
    if args.json:
        out = res.to_dict()
        out["inputs"] = [m.to_dict() for m in mats]
        _emit(out)
    else:
        print(f"{res.inequality}  fn={format_fn(f)}  verdict={res.verdict}")
        for name, ok in res.preconditions:
            print(f"  precondition {name}: {'ok' if ok else 'FAILED'}")
        if res.report is not None:
            print(_report_table(res.report))
            print(f"worst margin {fmt(res.report.worst_margin)} at k={res.report.worst_k}"
                  f" (tol {res.report.tol:.3g})")
    if res.verdict == "precondition_failed":
        return EXIT_INPUT
    return EXIT_VIOLATION if res.violated else EXIT_OK


def cmd_fuzz(args) -> int:
    tag = InequalityId(args.tag)
    fn = None if args.fn == "random" else parse_fn(args.fn)
    inject = ()
    if args.inject_fixture:
        fixtures = published_counterexamples()
        if tag not in fixtures:
            raise InputError(f"no published counterexample for {tag}")
        fixture_fn, inputs = fixtures[tag]
        fn = fn or fixture_fn
        inject = (inputs,)
    cfg = FuzzConfig(tag, fn=fn, dim=args.dim, trials=args.trials, seed=args.seed,
                     scale=args.scale, constraint=args.constraint, inject=inject)
    result = fuzz(cfg, max_violations=args.max_violations)
    if args.shrink:
        result.violations = [shrink(v, args.shrink) for v in result.violations]
    report = result.to_dict()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)
    if args.json:
        _emit(report)
    else:
        s = report["summary"]
        print(f"{tag}  fn={report['config']['fn']}  dim={cfg.dim}  seed={cfg.seed}  "
              f"constraint={cfg.constraint}")
        print(f"trials {s['trials_run']}  violations {s['violations']}  skipped {s['skipped']}")
        rows = [[str(v.seed_index), format_fn(v.fn), v.margin] for v in result.violations[:20]]
        if rows:
            print(_table(["trial", "fn", "margin"], rows))
    return EXIT_VIOLATION if result.violations else EXIT_OK


def cmd_delta(args) -> int:
    A, C = load_inputs([args.A])[0], load_inputs([args.C])[0]
    dv = delta(C, A, cluster_tol=args.cluster_tol)
    if args.json:
        _emit(dv.to_dict())
    else:
        rows = [[str(j + 1), v, s] for j, (v, s) in enumerate(zip(dv.values, dv.partial_sums))]
        print(_table(["j", "delta_j", "prefix sum"], rows))
        print("clusters " + ", ".join(f"{fmt(ev)} (x{m})" for ev, m in dv.clusters))
        print(f"sum {fmt(float(np.sum(dv.values)))}  trace(C) {fmt(dv.trace_C)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="matineq", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    tags = [t.value for t in InequalityId]

    sp = sub.add_parser("verify-paper", help="recompute the three published counterexamples")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify_paper)

    sp = sub.add_parser("check", help="evaluate one inequality on given matrices")
    sp.add_argument("tag", choices=tags, metavar="TAG")
    sp.add_argument("--fn", required=True, help="e.g. angle:a=1,b=1,x0=1 | min1 | sqrt | ga:a=0.5")
    sp.add_argument("--inputs", nargs="+", required=True, metavar="FILE")
    sp.add_argument("--tol", type=float, default=None, help="absolute slack (default: scaled 1e-9)")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("fuzz", help="random search for violations")
    sp.add_argument("tag", choices=tags, metavar="TAG")
    sp.add_argument("--fn", default="random")
    sp.add_argument("--dim", type=int, default=3)
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--scale", type=float, default=1.0)
    sp.add_argument("--constraint", choices=CONSTRAINTS, default=None)
    sp.add_argument("--shrink", type=int, default=0, metavar="STEPS")
    sp.add_argument("--max-violations", type=int, default=None)
    sp.add_argument("--inject-fixture", action="store_true",
                    help="use the published counterexample for TAG as trial 0")
    sp.add_argument("--out", default=None, metavar="FILE")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_fuzz)

    sp = sub.add_parser("delta", help="compute delta(C; A)")
    sp.add_argument("--A", required=True, metavar="FILE")
    sp.add_argument("--C", required=True, metavar="FILE")
    sp.add_argument("--cluster-tol", type=float, default=None)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_delta)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"matineq {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
