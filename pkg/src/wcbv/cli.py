"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 resource outcome (budget exhausted,
space bound, heap failure, divergence) or a corpus disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import combined, corpus, heap_machine, subst_machine
from .programs import LAM, RET, ProgramFormatError, compile_term, decompile, dump_program, load_program
from .syntax import ParseError, parse, parse_debruijn, to_debruijn, to_named
from .terms import (
    IDENTITY,
    OMEGA,
    Diverged,
    Family,
    NotClosed,
    Term,
    church_bool,
    church_nat,
    evaluate,
    gen_family,
)

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2

PRELUDE = {"omega": OMEGA, "id": IDENTITY}

GEN_KINDS = ("size-explosion", "pointer-explosion", "church-nat", "church-bool")


class InputError(Exception):
    pass


def read_term(text: str) -> Term:
    if text == "-":
        text = sys.stdin.read()
    text = text.strip()
    if text in PRELUDE:
        return PRELUDE[text]
    try:
        return parse(text)
    except ParseError as e:
        raise InputError(f"parse error: {e}") from e


def _reference(s: Term, fuel: int):
    ref = evaluate(s, fuel)
    if isinstance(ref, Diverged):
        return None, ref
    return {"time": ref.time, "space": ref.space}, ref


def run_report(s: Term, args) -> tuple[dict, int]:
    report: dict = {"term": to_named(s), "strategy": args.strategy}
    code = EXIT_OK

    if args.strategy == "reference":
        ref = evaluate(s, args.fuel, trace=args.trace)
        if isinstance(ref, Diverged):
            report.update(outcome="diverged", steps=ref.steps, space=ref.space)
            return report, EXIT_RESOURCE
        report.update(outcome="normal", normal_form=to_named(ref.normal_form), time=ref.time, space=ref.space)
        if args.trace:
            report["trace"] = [to_named(t) for t in ref.trace]
        return report, code

    if args.strategy == "subst":
        out = subst_machine.run_subst(s, args.k, args.m, trace=args.trace)
        report.update(
            outcome=out.outcome.value, steps=out.steps_taken, peak_state_size=out.peak_state_size
        )
        if out.result is not None:
            report["program"] = dump_program(out.result)
            report["normal_form"] = to_named(decompile((LAM, *out.result, RET)))
        else:
            code = EXIT_RESOURCE
        if args.trace:
            report["trace"] = out.trace

    elif args.strategy == "heap":
        out = heap_machine.run_heap(s, args.k, trace=args.trace)
        report.update(
            outcome="result" if out.ok else "failure",
            steps=out.steps_taken,
            peak_state_size=out.peak_state_size,
        )
        if out.ok:
            report["closure"] = {"code": dump_program(out.closure.code), "env": out.closure.env}
            report["heap"] = heap_machine.dump_heap(out.heap)
            report["normal_form"] = to_named(heap_machine.unfold_term(out.heap, out.closure))
        else:
            report["diagnostic"] = out.diagnostic
            code = EXIT_RESOURCE
        if args.trace:
            report["trace"] = out.trace

    else:
        out = combined.run_combined(s, args.kcap)
        iterations = [
            {"k": it.k, "m": it.m, "path": it.path.value} for it in out.iterations
        ]
        if isinstance(out, combined.BudgetExhausted):
            report.update(outcome="budget-exhausted", k_cap=out.k_cap)
            code = EXIT_RESOURCE
        else:
            report.update(
                outcome="normal",
                normal_form=to_named(out.normal_form),
                final_k=out.final_k,
                final_m=out.final_m,
                peak_subst_size=out.peak_subst_size,
                peak_heap_size=out.peak_heap_size,
                modeled_space=out.modeled_space,
                total_steps=out.total_steps,
            )
        report["path_per_k"] = iterations if args.trace else [it["path"] for it in iterations]

    if not args.no_reference:
        ref, _ = _reference(s, args.fuel)
        if ref is not None:
            report["reference"] = ref
    return report, code


def emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, ensure_ascii=False))
        return
    for key, value in report.items():
        if isinstance(value, (list, dict)):
            value = json.dumps(value, ensure_ascii=False)
        print(f"{key}: {value}")


def cmd_run(args) -> int:
    s = read_term(args.input)
    t0 = time.perf_counter()
    report, code = run_report(s, args)
    if args.timing:
        report["elapsed_seconds"] = round(time.perf_counter() - t0, 6)
    emit(report, args.json)
    return code


def cmd_gen(args) -> int:
    if args.kind == "size-explosion":
        t = gen_family(Family.SIZE_EXPLOSION, args.n)
    elif args.kind == "pointer-explosion":
        t = gen_family(Family.POINTER_EXPLOSION, args.n)
    elif args.kind == "church-nat":
        t = church_nat(args.n)
    else:
        t = church_bool(bool(args.n))
    print(to_debruijn(t) if args.debruijn else to_named(t))
    return EXIT_OK


def cmd_compile(args) -> int:
    print(dump_program(compile_term(read_term(args.input))))
    return EXIT_OK


def cmd_decompile(args) -> int:
    text = sys.stdin.read() if args.dump == "-" else args.dump
    try:
        P = load_program(text)
    except ProgramFormatError as e:
        raise InputError(str(e)) from e
    s = decompile(P)
    if s is None or compile_term(s) != P:
        raise InputError("not the compiled form of any term")
    try:
        print(to_named(s))
    except ValueError:
        print(to_debruijn(s))
    return EXIT_OK


def _check(text: str) -> dict:
    s = parse_debruijn(text)
    a = corpus.check_term(s)
    if a is None:
        return {"term": text, "outcome": "diverged"}
    return {
        "term": text,
        "time": a.time,
        "space": a.space,
        "subst_steps": a.subst_steps,
        "subst_peak": a.subst_peak,
        "heap_steps": a.heap_steps,
        "heap_peak": a.heap_peak,
        "modeled_space": a.combined.modeled_space if a.combined else None,
        "agree": a.agree,
    }


def cmd_corpus(args) -> int:
    terms = [to_debruijn(s) for s in corpus.build_corpus(args.count, seed=args.seed)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_check, terms, chunksize=16))
    else:
        rows = [_check(t) for t in terms]
    disagreements = [r for r in rows if not r.get("agree", False)]
    if args.json:
        print(json.dumps({"count": len(rows), "disagreements": len(disagreements), "terms": rows}))
    else:
        for r in rows:
            print(json.dumps(r, ensure_ascii=False))
        print(f"{len(rows)} terms, {len(disagreements)} disagreements")
    return EXIT_RESOURCE if disagreements else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wcbv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a term under one strategy")
    run.add_argument("input", help="term in surface syntax, a prelude name (omega, id), or - for stdin")
    run.add_argument("--strategy", choices=("reference", "subst", "heap", "combined"), default="reference")
    run.add_argument("--fuel", type=int, default=100_000, help="reference evaluator step limit")
    run.add_argument("--k", type=int, default=100_000, help="machine step budget")
    run.add_argument("--m", type=int, default=10_000_000, help="substitution machine space budget")
    run.add_argument("--kcap", type=int, default=combined.DEFAULT_K_CAP, help="combined simulator k limit")
    run.add_argument("--trace", action="store_true")
    run.add_argument("--json", action="store_true")
    run.add_argument("--no-reference", action="store_true", help="skip the reference measures")
    run.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    run.set_defaults(func=cmd_run)

    gen = sub.add_parser("gen", help="print a generated term")
    gen.add_argument("kind", choices=GEN_KINDS)
    gen.add_argument("n", type=int)
    gen.add_argument("--debruijn", action="store_true")
    gen.set_defaults(func=cmd_gen)

    comp = sub.add_parser("compile", help="print the program of a term")
    comp.add_argument("input")
    comp.set_defaults(func=cmd_compile)

    dec = sub.add_parser("decompile", help="turn a program dump back into a term")
    dec.add_argument("dump")
    dec.set_defaults(func=cmd_decompile)

    corp = sub.add_parser("corpus", help="check that all strategies agree on a random corpus")
    corp.add_argument("--count", type=int, default=500)
    corp.add_argument("--seed", type=int, default=0)
    corp.add_argument("--jobs", type=int, default=1)
    corp.add_argument("--json", action="store_true")
    corp.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("fuel", "k", "m", "kcap", "n", "count", "jobs"):
        if getattr(args, name, 0) < 0:
            parser.error(f"--{name} must be non-negative")
    try:
        return args.func(args)
    except (InputError, NotClosed) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
