"""Command line interface: ``tdcheck {check,build-dta,gen,fuzz,eval}``.

Exit codes: 0 top-down deterministic (or success), 1 not top-down
deterministic (or fuzz discrepancy), 2 error.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
import json
import sys
import time

from .automata import complete, eval_tree, member_dba
from .decision import analyze, associated_dta, explain
from .errors import AutomatonError, ParseError, ResourceLimitError
from .formats import parse_dba, render_dba, render_dta
from .oracle import (GenSpec, bounded_language_equal, bounded_subset, confirm_witness,
                     exchange_violation_search, random_dba)
from .trees import RankedAlphabet, parse_tree

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2
DEFAULT_SYMBOLS = "a/0,b/0,f/2,g/1"


class _Failure(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except OSError as e:
        raise _Failure(f"cannot read {path}: {e.strerror}") from None


def _load(path):
    try:
        return parse_dba(_read(path))
    except ParseError as e:
        raise _Failure(f"{path}: {e}") from None


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def verify(A, decision, bound):
    """Independent confirmation of a decision by membership evaluation."""
    if decision.answer:
        B = associated_dta(A)
        bad = bounded_language_equal(A, B, bound)
        return {"kind": "bounded_equality", "bound": bound, "ok": bad is None,
                "counterexample": None if bad is None else str(bad)}
    ok = confirm_witness(A, decision.witness)
    return {"kind": "witness", "bound": None, "ok": ok, "counterexample": None}


def _human(report):
    lines = []
    if report["answer"]:
        lines.append("top-down deterministic")
    else:
        w = report["witness"]
        lines.append("not top-down deterministic")
        lines.append(f"  conflict triple: ({', '.join(w['triple'])})")
        lines.append(f"  context:  {w['context']}")
        lines.append(f"  accepted: {w['accepted_trees'][0]}")
        lines.append(f"  accepted: {w['accepted_trees'][1]}")
        lines.append(f"  rejected: {w['violating_tree']}  "
                     f"(argument {w['position']} of {w['symbol']} exchanged)")
    s = report["stats"]
    lines.append(f"  states {s['reduced_states']}/{s['states']} reachable, "
                 f"{s['transitions']} transitions, size {s['size']}, "
                 f"{s['seeds']} seed triples, {s['triples']} closed triples")
    for note in report["notes"]:
        lines.append(f"  note: {note}")
    v = report.get("verification")
    if v is not None:
        what = ("witness re-checked by membership" if v["kind"] == "witness"
                else f"bounded equality with the associated DTA up to {v['bound']} nodes")
        lines.append(f"  verified: {what}: {'ok' if v['ok'] else 'FAILED'}")
        if v["counterexample"]:
            lines.append(f"  disagreement on: {v['counterexample']}")
    return "\n".join(lines) + "\n"


def cmd_check(args):
    A = _load(args.file)
    t0 = time.perf_counter()
    decision = analyze(A, cap=args.max_triples)
    t1 = time.perf_counter()
    report = explain(decision)
    if args.verify:
        report["verification"] = verify(A, decision, args.oracle_bound)
    if args.stats:
        print(f"decision took {t1 - t0:.6f} s", file=sys.stderr)
        if args.verify:
            print(f"verification took {time.perf_counter() - t1:.6f} s", file=sys.stderr)
    if args.json:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(_human(report))
    if args.verify and not report["verification"]["ok"]:
        print("error: verification failed", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_YES if decision.answer else EXIT_NO


def cmd_build_dta(args):
    A = _load(args.file)
    _write(args.out, render_dta(associated_dta(A, max_states=args.max_states)))
    return EXIT_YES


def cmd_eval(args):
    A = _load(args.file)
    try:
        t = parse_tree(args.tree, A.alphabet)
    except ParseError as e:
        raise _Failure(f"tree: {e}") from None
    C = complete(A)
    q = eval_tree(C, t)
    verdict = "accepted" if member_dba(C, t) else "rejected"
    print(f"{C.name(q)} {verdict}")
    return EXIT_YES


def _spec(args, seed=None):
    if args.spec:
        text = args.spec
        if not text.lstrip().startswith("{"):
            text = _read(text)
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise _Failure(f"invalid GenSpec JSON: {e}") from None
        if seed is not None:
            obj["seed"] = seed
        return GenSpec.from_json(obj)
    return GenSpec(
        seed=args.seed if seed is None else seed,
        states=args.states,
        symbols=tuple(RankedAlphabet.parse(args.symbols).items()),
        density=args.density,
        final_prob=args.final_prob,
    )


def cmd_gen(args):
    _write(args.out, render_dba(random_dba(_spec(args))))
    return EXIT_YES


def fuzz_one(spec, bound):
    """Differential check of one generated automaton; returns a result row."""
    A = random_dba(spec)
    decision = analyze(A)
    B = associated_dta(A)
    row = {"seed": spec.seed, "states": A.n, "answer": decision.answer,
           "confirmed": False, "violation": None, "problems": []}
    if bounded_subset(A, B, bound) is not None:
        row["problems"].append("language not included in the associated DTA")
    if decision.answer:
        bad = bounded_language_equal(A, B, bound)
        row["confirmed"] = bad is None
        if bad is not None:
            row["problems"].append(f"associated DTA disagrees on {bad}")
    else:
        row["confirmed"] = confirm_witness(A, decision.witness)
        if not row["confirmed"]:
            row["problems"].append("witness rejected by membership check")
    v = exchange_violation_search(A, bound)
    if v is not None:
        row["violation"] = str(v.exchanged_tree)
        if decision.answer:
            row["problems"].append(f"exchange violation {v.exchanged_tree} but answer is true")
    return row


def run_fuzz(specs, bound, jobs=1):
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fuzz_one, specs, [bound] * len(specs)))
    return [fuzz_one(s, bound) for s in specs]


def fuzz_summary(rows):
    yes = [r for r in rows if r["answer"]]
    no = [r for r in rows if not r["answer"]]
    return {
        "automata": len(rows),
        "decision_true": len(yes),
        "decision_true_confirmed": sum(r["confirmed"] for r in yes),
        "decision_false": len(no),
        "decision_false_confirmed": sum(r["confirmed"] for r in no),
        "oracle_violations": sum(r["violation"] is not None for r in rows),
        "agreements": sum(not r["problems"] for r in rows),
        "discrepancies": sum(bool(r["problems"]) for r in rows),
    }


def cmd_fuzz(args):
    specs = [_spec(args, seed=args.seed + i) for i in range(args.count)]
    rows = run_fuzz(specs, args.bound, args.jobs)
    summary = fuzz_summary(rows)
    if args.json:
        sys.stdout.write(json.dumps({"summary": summary, "results": rows}, indent=2) + "\n")
    else:
        first = specs[0] if specs else None
        if first is not None:
            print(f"seeds {args.seed}..{args.seed + args.count - 1}, states {first.states}, "
                  f"symbols {first.alphabet}, density {first.density}, "
                  f"final probability {first.final_prob}, bound {args.bound}")
        width = max(len(k) for k in summary)
        for key, value in summary.items():
            print(f"  {key.replace('_', ' '):<{width}}  {value:>6}")
        for r in rows:
            for p in r["problems"]:
                print(f"  seed {r['seed']}: {p}")
    return EXIT_NO if summary["discrepancies"] else EXIT_YES


def _add_gen_flags(p):
    p.add_argument("--seed", type=int, default=0, help="generator seed (first seed for fuzz)")
    p.add_argument("--states", type=int, default=3)
    p.add_argument("--symbols", default=DEFAULT_SYMBOLS, help="e.g. f/2,a/0")
    p.add_argument("--density", type=float, default=0.7)
    p.add_argument("--final-prob", type=float, default=0.5)
    p.add_argument("--spec", help="GenSpec as a JSON object or a path to one")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tdcheck",
        description="Decide whether a bottom-up tree automaton language is "
                    "deterministic top-down.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide a .dba file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--verify", action="store_true",
                   help="confirm the answer with the brute-force oracle")
    p.add_argument("--oracle-bound", type=int, default=6, metavar="N",
                   help="tree size bound for --verify (default 6)")
    p.add_argument("--stats", action="store_true", help="print timings to stderr")
    p.add_argument("--max-triples", type=int, default=None, metavar="N")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("build-dta", help="write the associated top-down automaton")
    p.add_argument("file")
    p.add_argument("out", nargs="?", help="output path (default stdout)")
    p.add_argument("--max-states", type=int, default=10 ** 6, metavar="N")
    p.set_defaults(func=cmd_build_dta)

    p = sub.add_parser("gen", help="write a random .dba")
    _add_gen_flags(p)
    p.add_argument("-o", "--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fuzz", help="differential test against the oracle")
    _add_gen_flags(p)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--bound", type=int, default=6)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("eval", help="evaluate a tree against a .dba")
    p.add_argument("file")
    p.add_argument("tree", help="e.g. 'g(f(a,b))'")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_Failure, ParseError, AutomatonError, ResourceLimitError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
