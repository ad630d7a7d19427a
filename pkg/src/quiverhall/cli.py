"""Batch front end: structure-constant tables and verification suites.

Exit codes: 0 all checks pass, 1 at least one relation fails, 2 bad input.
Reports are byte-identical for identical configurations.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .errors import EngineError
from .quiver import Quiver
from .report import Report
from .reps import RepCategory
from .scalars import check_prime
from .suites import SUITES, table_rows


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="quiverhall",
        description="Exact Hall-algebra computations for quiver representations "
                    "over prime fields.")
    p.add_argument("--quiver", required=True, help="path to quiver JSON "
                   '({"vertices": n, "arrows": [[s, t], ...]})')
    p.add_argument("--q", type=int, required=True, help="prime field order")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--suite", choices=sorted(SUITES), help="verification suite")
    mode.add_argument("--table", action="store_true",
                      help="emit the structure-constant table")
    p.add_argument("--bound", type=int, default=3,
                   help="total dimension bound for --table (default 3)")
    p.add_argument("--samples", type=int, default=20,
                   help="sample count for randomized suites (default 20)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--sink", type=int, default=None,
                   help="sink vertex for the reflection suite (default: first sink)")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--perturb", action="store_true",
                   help="negative control: drop the -sqrt(q) factor in the "
                        "quantum-group suite (must fail)")
    return p


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table_text(rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["A", "B", "C", "hall_number",
                                        "bridgeland_constant"])
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _report_text(report: Report, fmt: str) -> str:
    if fmt == "json":
        return report.to_json()
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["name", "status", "lhs", "rhs"])
    for c in report.checks:
        w.writerow([c.name, c.status, c.lhs, c.rhs])
    return buf.getvalue()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.quiver, "r", encoding="utf-8") as fh:
            quiver = Quiver.from_json(fh.read())
        check_prime(args.q)
        if args.samples < 1:
            raise EngineError("--samples must be >= 1")
        cat = RepCategory(quiver, args.q)
    except (OSError, ValueError, EngineError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2

    try:
        if args.table:
            rows = table_rows(cat, args.bound)
            _emit(_table_text(rows, args.format), args.out)
            return 0
        sink = args.sink
        if args.suite == "reflection" and sink is None:
            sinks = [v for v in range(1, quiver.n + 1) if quiver.is_sink(v)]
            if not sinks:
                raise EngineError("quiver has no sink")
            sink = sinks[0]
        rows = SUITES[args.suite](cat, args.samples, args.seed, sink, args.perturb)
        report = Report(suite=args.suite, q=args.q,
                        quiver=json.loads(quiver.to_json()),
                        seed=args.seed)
        report.add_all(rows)
        _emit(_report_text(report, args.format), args.out)
        return 0 if report.all_pass() else 1
    except EngineError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
