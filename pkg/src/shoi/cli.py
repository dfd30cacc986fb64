"""Command-line front end.

Exit codes: 0 consistent (or success), 1 inconsistent, 2 parse/IO/usage
error, 3 resource budget exceeded, 4 verification failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from fractions import Fraction
from typing import Callable, TextIO

from .benchmarks import FAMILIES, members_text, metrics, testont_text
from .concepts import Concept, Role, internalize
from .corpus import random_ontology
from .oracle import Consistent, OracleError, brute_force_consistency
from .parser import OntologyDocument, ParseError, parse_ontology
from .properties import verify_tableau_properties
from .simplex import Column
from .tableau import CONSISTENT, GAVE_UP, INCONSISTENT, CheckOptions, CheckResult, check_consistency

EXIT_CONSISTENT = 0
EXIT_INCONSISTENT = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET = 3
EXIT_VERIFY_FAILED = 4

TRACE_VERSION = 1

EXIT_FOR_VERDICT = {CONSISTENT: EXIT_CONSISTENT, INCONSISTENT: EXIT_INCONSISTENT, GAVE_UP: EXIT_BUDGET}


class InputError(Exception):
    pass


# -- JSON lines trace ----------------------------------------------------


def to_json(v):
    """Plain JSON value for a trace field."""
    if isinstance(v, bool) or v is None or isinstance(v, (str, int, float)):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else str(v)
    if isinstance(v, Column):
        return {"pattern": sorted(v.pattern), "cost": v.cost}
    if isinstance(v, Concept):
        return v.key
    if isinstance(v, Role):
        return str(v)
    if isinstance(v, dict):
        return {str(k): to_json(x) for k, x in v.items()}
    if isinstance(v, (set, frozenset)):
        return sorted(to_json(x) for x in v)
    if isinstance(v, (list, tuple)):
        return [to_json(x) for x in v]
    return str(v)


class TraceWriter:
    def __init__(self, out: TextIO, command: str, path: str) -> None:
        self.out = out
        self.write({"trace_version": TRACE_VERSION, "command": command, "file": path})

    def write(self, ev: dict) -> None:
        self.out.write(json.dumps(to_json(ev), sort_keys=False) + "\n")

    def __call__(self, ev: dict) -> None:
        self.write(ev)


def read_trace(lines) -> tuple[dict, list[dict]]:
    """Parse a JSON-lines trace into its header and events."""
    records = [json.loads(line) for line in lines if line.strip()]
    if not records or records[0].get("trace_version") != TRACE_VERSION:
        raise ValueError("missing or unsupported trace header")
    return records[0], records[1:]


# -- helpers -------------------------------------------------------------


def load(path: str) -> OntologyDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from e
    try:
        return parse_ontology(text)
    except ParseError as e:
        raise InputError(f"{path}: {e}") from e


def options_from(args) -> CheckOptions:
    return CheckOptions(
        max_nodes=args.max_nodes,
        timeout_s=args.timeout_s,
        paper_m=args.paper_m,
        max_bp_nodes=args.max_bp_nodes,
    )


def run_check(doc: OntologyDocument, opts: CheckOptions, on_event: Callable | None = None):
    rb = doc.rolebox()
    tbox = internalize(doc.axioms(), rb, lazy_unfolding=opts.lazy_unfolding)
    start = time.monotonic()
    res = check_consistency(tbox, rb, opts, on_event)
    return res, tbox, rb, time.monotonic() - start


def stats_lines(res: CheckResult, elapsed: float) -> list[str]:
    s = res.stats
    rules = " ".join(f"{k}={v}" for k, v in sorted(s["rules"].items())) or "none"
    out = [
        f"nodes created: {s['nodes']}",
        f"rule applications: {rules}",
        f"AM invocations: {s['am_calls']}",
        f"columns generated: {s['columns']}",
        f"branch-and-price nodes: {s['bp_nodes']}",
        f"clashes: {s['clashes']}",
        f"backtracks: {s['backtracks']}",
        f"time: {elapsed:.3f} s",
    ]
    if res.reason:
        out.insert(0, f"reason: {res.reason}")
    return out


def open_trace(args, command: str, default: TextIO | None):
    if args.trace_file:
        try:
            fh = open(args.trace_file, "w", encoding="utf-8")
        except OSError as e:
            raise InputError(f"cannot write {args.trace_file}: {e.strerror or e}") from e
        return TraceWriter(fh, command, args.file), fh
    if default is not None:
        return TraceWriter(default, command, args.file), None
    return None, None


def ilp_summary(trace: list[dict]) -> list[str]:
    """Human summary of every AM invocation: one line per ILP iteration."""
    out: list[str] = []
    it = 0
    pending = None

    def flush_rmp() -> None:
        nonlocal pending
        if pending is not None:
            out.append(pending)
            pending = None

    for ev in trace:
        kind = ev["event"]
        if kind == "am":
            flush_rmp()
            it = 0
            out.append(f"Node {ev['node']}: Q∃ = {{{', '.join(ev['Q_exists'])}}}  "
                       f"Q∀ = {{{', '.join(ev['Q_forall'])}}}  Qo = {{{', '.join(ev['Q_o'])}}}")
        elif kind == "bp_node":
            flush_rmp()
            if ev["bp_node"]:
                out.append(f"  branch-and-price node {ev['bp_node']}: bounds {to_json(ev['bounds'])}")
        elif kind == "rmp":
            flush_rmp()
            it += 1
            duals = ", ".join(f"{k}={to_json(v)}" for k, v in ev["duals"].items())
            phase = "" if ev["phase"] == "cost" else " (feasibility)"
            pending = f"  ILP iteration {it}{phase}: RMP cost={to_json(ev['objective'])}  duals [{duals}]"
        elif kind == "pp":
            col = ev["column"]
            enter = "none" if col is None else "{" + ", ".join(sorted(col.pattern)) + "}"
            line = f"PP cost={to_json(ev['objective'])}  column {enter}"
            if pending is not None:
                out.append(pending + "  " + line)
                pending = None
            else:
                out.append("  " + line)
        elif kind == "am_result":
            flush_rmp()
            if ev["status"] == "infeasible":
                out.append(f"  σ({ev['node']}) infeasible")
            else:
                out.append(f"  σ({ev['node']}) = {{{', '.join(ev['sigma'])}}}  cost={to_json(ev['objective'])}")
    flush_rmp()
    return out


# -- commands ------------------------------------------------------------


def cmd_check(args, out: TextIO, err: TextIO) -> int:
    doc = load(args.file)
    writer, fh = open_trace(args, "check", None)
    try:
        res, _, _, elapsed = run_check(doc, options_from(args), writer)
    finally:
        if fh:
            fh.close()
    print(res.verdict, file=out)
    for line in stats_lines(res, elapsed):
        print(line, file=out)
    return EXIT_FOR_VERDICT[res.verdict]


def cmd_trace(args, out: TextIO, err: TextIO) -> int:
    doc = load(args.file)
    writer, fh = open_trace(args, "trace", err)
    try:
        res, _, _, elapsed = run_check(doc, options_from(args), writer)
    finally:
        if fh:
            fh.close()
    for line in ilp_summary(res.trace):
        print(line, file=out)
    rules = [e for e in res.trace if e["event"] == "rule"]
    print(f"{len(rules)} rule applications", file=out)
    print(res.verdict, file=out)
    return EXIT_FOR_VERDICT[res.verdict]


def cmd_gen(args, out: TextIO, err: TextIO) -> int:
    try:
        if args.family == "testont":
            text = testont_text(args.n, args.variant)
        elif args.family in FAMILIES:
            text = members_text(args.extra, args.family)
        else:
            inst = random_ontology(args.seed, planted=not args.unplanted)
            text = f"; random corpus instance, seed {args.seed}\n" + inst.text
    except ValueError as e:
        raise InputError(str(e)) from e
    m = metrics(parse_ontology(text)).as_dict()
    summary = " ".join(f"{k}={v}" for k, v in m.items())
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            raise InputError(f"cannot write {args.out}: {e.strerror or e}") from e
        print(f"wrote {args.out}: {summary}", file=out)
    else:
        out.write(text)
        print(summary, file=err)
    return 0


def cmd_verify(args, out: TextIO, err: TextIO) -> int:
    doc = load(args.file)
    writer, fh = open_trace(args, "verify", None)
    try:
        res, tbox, rb, elapsed = run_check(doc, options_from(args), writer)
    finally:
        if fh:
            fh.close()
    print(res.verdict, file=out)
    status = EXIT_FOR_VERDICT[res.verdict]
    if res.verdict == CONSISTENT:
        report = verify_tableau_properties(res.graph, tbox, rb)
        for line in report.lines():
            print(line, file=out)
        if not report.ok:
            status = EXIT_VERIFY_FAILED
    else:
        print("property verification skipped: no complete clash-free graph", file=out)
    if args.oracle is not None:
        try:
            o = brute_force_consistency(tbox, rb, args.oracle, time_limit=args.timeout_s)
        except OracleError as e:
            print(f"oracle: gave up ({e})", file=out)
            return status
        if isinstance(o, Consistent):
            agrees = res.verdict != INCONSISTENT
            print(f"oracle: model with {o.model.size} element(s) found; "
                  f"{'agrees' if agrees else 'DISAGREES'}", file=out)
            if not agrees:
                status = EXIT_VERIFY_FAILED
        else:
            print(f"oracle: no model with at most {args.oracle} element(s); inconclusive", file=out)
    return status


# -- entry point ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shoi", description="SHOI consistency checker")
    sub = p.add_subparsers(dest="command", required=True)

    def reasoning(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("file", help="ontology in the .shoi s-expression syntax")
        sp.add_argument("--paper-m", type=int, default=None, help="fix the big-M artificial cost")
        sp.add_argument("--max-nodes", type=int, default=100_000, help="completion graph node budget")
        sp.add_argument("--max-bp-nodes", type=int, default=10_000,
                        help="branch-and-price tree nodes per AM call")
        sp.add_argument("--timeout-s", type=float, default=300.0, help="wall clock budget in seconds")
        sp.add_argument("--trace-file", default=None, help="write the JSON-lines trace here")

    reasoning(sub.add_parser("check", help="decide consistency and print statistics"))
    reasoning(sub.add_parser("trace", help="print the ILP iterations and stream the rule trace"))
    v = sub.add_parser("verify", help="check, then verify the tableau properties")
    reasoning(v)
    v.add_argument("--oracle", type=int, default=None, metavar="K",
                   help="cross-check with a finite model search up to K elements")

    g = sub.add_parser("gen", help="write a benchmark ontology")
    g.add_argument("family", choices=["testont", *FAMILIES, "random"])
    g.add_argument("--n", type=int, default=5, help="TestOnt size")
    g.add_argument("--variant", choices=["cons", "incons"], default="cons")
    g.add_argument("--extra", type=int, default=0, help="extra members for the member families")
    g.add_argument("--seed", type=int, default=0, help="seed for the random family")
    g.add_argument("--unplanted", action="store_true", help="random family without a planted model")
    g.add_argument("--out", default=None, help="output path (default: stdout)")
    return p


COMMANDS = {"check": cmd_check, "trace": cmd_trace, "gen": cmd_gen, "verify": cmd_verify}


def main(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    level = os.environ.get("SHOI_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=err,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT_ERROR if e.code else 0
    try:
        return COMMANDS[args.command](args, out, err)
    except InputError as e:
        print(f"shoi: error: {e}", file=err)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
