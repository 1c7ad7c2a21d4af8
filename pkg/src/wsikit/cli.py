"""Command-line front-end.

Subcommands: subsume, build, convexity, oracle counter | verify-wsi |
simulate, bench.  The logic is always chosen with --logic and never
inferred.  Exit codes for subsume: 0 subsumed, 1 not subsumed, 2
usage/fragment error; searching subcommands exit 0 on a hit and 1 on a
bound-limited miss.  Set WSIKIT_LOG=debug (or use --debug-rules) for
rule-match traces.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time

from .builder import build_wsi, export_model, size_report
from .checker import decide_subsumption, decide_subsumption_tbox
from .formulas import FragmentError, ParseError, parse_formula
from .onestep_wsi import ConvexityError
from .oracle import (BoundsError, concretize, export_concrete,
                     find_counter_model, greatest_simulation, load_model,
                     text_diagram, verify_wsi)
from .oracle.enumeration import ENVELOPE_STATES
from .rules import check_convexity_preservation
from .signatures import (KRIPKE, MONOTONE, Signature, SignatureError,
                         signature)
from .tboxes import TBoxError, parse_tbox

USAGE_ERROR = 2


def _setup_logging(args) -> None:
    level = os.environ.get("WSIKIT_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(name)s: %(message)s")
    if getattr(args, "debug_rules", False):
        logging.getLogger("wsikit.rules").setLevel(logging.DEBUG)


def _sig(args) -> Signature:
    return signature(args.logic)


def _counter_bounds(sig: Signature, args) -> int:
    if args.max_states is not None:
        return args.max_states
    return ENVELOPE_STATES[sig.kind]


def _print_counter(model, state) -> None:
    print("counter-model (bounded search):")
    print(text_diagram(model, state))


def cmd_subsume(args) -> int:
    sig = _sig(args)
    lhs = parse_formula(args.lhs, sig)
    rhs = parse_formula(args.rhs, sig)
    if args.tbox:
        with open(args.tbox, encoding="utf-8") as fh:
            tbox = parse_tbox(fh.read(), sig)
        verdict = decide_subsumption_tbox(tbox, lhs, rhs, sig)
    else:
        try:
            verdict = decide_subsumption(lhs, rhs, sig)
        except ConvexityError:
            return _subsume_by_oracle(sig, lhs, rhs, args)
    if args.json:
        out = verdict.to_json()
        if not verdict.result and sig.kind in (KRIPKE, MONOTONE):
            out["counter_model"] = export_concrete(verdict.model)
        print(json.dumps(out, indent=2))
        return 0 if verdict.result else 1
    if verdict.result:
        print("SUBSUMED (proved by model check)")
        for c in verdict.caveats:
            print(f"  caveat: {c}")
        return 0
    print("NOT SUBSUMED (wsi counter-model attached)")
    for c in verdict.caveats:
        print(f"  caveat: {c}")
    if sig.kind in (KRIPKE, MONOTONE):
        cm = concretize(verdict.model)
        print(text_diagram(cm, verdict.model.root))
    else:
        print("  (no concrete rendering for this logic; "
              "model exported via `build`)")
    return 1


def _subsume_by_oracle(sig: Signature, lhs, rhs, args) -> int:
    """Signatures without a model construction (no convexity
    preservation): bounded refutation only."""
    hit = find_counter_model(lhs, rhs, sig, _counter_bounds(sig, args),
                             max_degree=args.max_degree)
    if hit is not None:
        if args.json:
            print(json.dumps({"result": False,
                              "witness": "oracle-counter-model"}, indent=2))
        else:
            print("NOT SUBSUMED (oracle counter-model)")
            _print_counter(*hit)
        return 1
    print(f"no verdict: logic {sig.id} has no model construction and no "
          "counter-model was found within bounds", file=sys.stderr)
    return USAGE_ERROR


def cmd_build(args) -> int:
    sig = _sig(args)
    f = parse_formula(args.formula, sig)
    m = build_wsi(f, sig)
    if args.concrete:
        if sig.kind not in (KRIPKE, MONOTONE) or \
                (sig.kind == MONOTONE and not sig.serial):
            print(f"no concretization for logic {sig.id}", file=sys.stderr)
            return USAGE_ERROR
        data = export_concrete(m)
    else:
        data = export_model(m)
    text = json.dumps(data, indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.stats:
        sr = size_report(m)
        print(f"states={sr.states} bound_k={sr.bound_k} "
              f"polynomial_certificate={sr.polynomial_certificate} "
              f"certified_k={sr.certified_k} lasso={sr.lasso}",
              file=sys.stderr)
    if args.render:
        from .viz import render_model
        render_model(m, args.render, title=args.formula)
        print(f"figure written to {args.render}", file=sys.stderr)
    return 0


def cmd_convexity(args) -> int:
    sig = _sig(args)
    ce = check_convexity_preservation(sig, args.bound)
    if args.json:
        print(json.dumps({
            "logic": sig.id, "bound": args.bound,
            "preserved": ce is None,
            "counterexample": None if ce is None else str(ce),
        }, indent=2))
    elif ce is None:
        print(f"ok: rules of {sig.id} preserve convexity "
              f"(instances up to size {args.bound})")
    else:
        print(f"counterexample: {ce}")
    return 0 if ce is None else 1


def cmd_oracle_counter(args) -> int:
    sig = _sig(args)
    lhs = parse_formula(args.lhs, sig)
    rhs = parse_formula(args.rhs, sig)
    hit = find_counter_model(lhs, rhs, sig, _counter_bounds(sig, args),
                             max_degree=args.max_degree)
    if hit is None:
        print("no counter-model within bounds (confirmed-at-bound, "
              "not a proof)")
        return 1
    _print_counter(*hit)
    return 0


def cmd_oracle_verify(args) -> int:
    sig = _sig(args)
    f = parse_formula(args.formula, sig)
    m = build_wsi(f, sig)
    bound = args.max_states
    if bound is None:
        bound = 2 if sig.kind == MONOTONE else 3
    report = verify_wsi(m, f, bound)
    print(report.summary())
    return 0 if report.ok else 1


def cmd_oracle_simulate(args) -> int:
    sig = _sig(args)
    c = load_model(args.left)
    d = load_model(args.right)
    rel = greatest_simulation(c, d, sig)
    pairs = sorted(rel.pairs)
    print(f"greatest simulation: {len(pairs)} pairs")
    for x, y in pairs:
        print(f"  {x} -> {y}")
    return 0


BENCH_LOGICS = ("k-diamond", "k-box", "kd", "ms", "cl:2")


def _bench_formula(logic: str, size: int) -> str:
    """Conjunctive chain inputs growing linearly with size."""
    if logic == "k-diamond":
        parts = [f"<>p{i}" for i in range(size)]
    elif logic == "k-box":
        parts = [f"[]p{i}" for i in range(size)]
    elif logic == "kd":
        parts = [f"<>p{i}" if i % 2 else f"[]p{i}" for i in range(size)]
    elif logic == "ms":
        parts = [f"<>p{i}" if i % 2 else f"[]p{i}" for i in range(size)]
    else:
        parts = [f"[{{{1 + (i % 2)}}}]p{i}" for i in range(size)]
    inner = " & ".join(parts) or "true"
    loop = {"k-diamond": "<>x", "kd": "<>x", "k-box": "[]x", "ms": "[]x",
            "cl:2": "[{1}]x"}[logic]
    return f"nu(x;).({loop} & {inner})"


def cmd_bench(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    rows = []
    sizes = [int(s) for s in args.sizes.split(",")]
    for logic in BENCH_LOGICS:
        sig = signature(logic)
        for size in sizes:
            text = _bench_formula(logic, size)
            f = parse_formula(text, sig)
            t0 = time.perf_counter()
            m = build_wsi(f, sig)
            micros = int(1e6 * (time.perf_counter() - t0))
            rows.append({"logic": logic, "size": size,
                         "states": len(m.states), "micros": micros})
    csv_path = os.path.join(args.out, "bench.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=["logic", "size", "states",
                                           "micros"])
        w.writeheader()
        w.writerows(rows)
    from .viz import render_bench
    figures = render_bench(rows, os.path.join(args.out, "bench"))
    print(f"wrote {csv_path}")
    for fig in figures:
        print(f"wrote {fig}")
    return 0


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="wsikit",
        description="Subsumption checking for conjunctive modal fixpoint "
                    "logics via simulation-initial models.")
    top.add_argument("--debug-rules", action="store_true",
                     help="log rule matches")
    sub = top.add_subparsers(dest="command", required=True)

    def add_logic(p):
        p.add_argument("--logic", required=True,
                       help="k-diamond | k-box | k | kd | m | ms | cl:N "
                            "| graded")

    p = sub.add_parser("subsume", help="decide a subsumption")
    add_logic(p)
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--tbox", help="terminology file (ident == formula)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-states", type=int, default=None)
    p.add_argument("--max-degree", type=int, default=None)
    p.set_defaults(fn=cmd_subsume)

    p = sub.add_parser("build", help="construct and export the model")
    add_logic(p)
    p.add_argument("formula")
    p.add_argument("-o", "--output")
    p.add_argument("--concrete", action="store_true",
                   help="add explicit successor structure")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--render", help="write a PNG figure of the model")
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("convexity",
                       help="check convexity preservation of the rule set")
    add_logic(p)
    p.add_argument("--bound", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_convexity)

    po = sub.add_parser("oracle", help="bounded brute-force checks")
    osub = po.add_subparsers(dest="oracle_command", required=True)

    p = osub.add_parser("counter", help="search for a counter-model")
    add_logic(p)
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--max-states", type=int, default=None)
    p.add_argument("--max-degree", type=int, default=None)
    p.set_defaults(fn=cmd_oracle_counter)

    p = osub.add_parser("verify-wsi",
                        help="check the built model against enumeration")
    add_logic(p)
    p.add_argument("formula")
    p.add_argument("--max-states", type=int, default=None)
    p.set_defaults(fn=cmd_oracle_verify)

    p = osub.add_parser("simulate",
                        help="greatest simulation between two model files")
    add_logic(p)
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(fn=cmd_oracle_simulate)

    p = sub.add_parser("bench", help="timing report with figures")
    p.add_argument("--out", default="bench-out")
    p.add_argument("--sizes", default="1,2,4,6,8,10")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_bench)
    return top


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    _setup_logging(args)
    try:
        return args.fn(args)
    except (ParseError, FragmentError, SignatureError, TBoxError,
            BoundsError, ConvexityError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
