"""Command-line interface: dataset generation, synthesis, repair, evaluation
and the benchmark harness comparing the bf/ed/im cost functions.

The default seed comes from the PROOFSYNTH_SEED environment variable, falling
back to 0; all commands are deterministic given flags plus seed except for
wall-time fields.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
from dataclasses import dataclass

from . import datagen
from .protocol import GuideError
from .repair import nearest_term
from .search import (
    CorruptedOracle,
    ExternalGuide,
    FixedGuide,
    NullGuide,
    SynthesisConfig,
    synthesize,
)
from .terms import TypeExpr, has_hole, free_vars
from .tokens import (
    ParseError,
    lex,
    term_from_text,
    term_to_text,
    type_from_text,
    type_to_text,
)
from .treedist import CostKind, kernel_backend
from .typecheck import EMPTY, check_partial, infer_type


def _default_seed() -> int:
    try:
        return int(os.environ.get("PROOFSYNTH_SEED", "0"))
    except ValueError:
        return 0


def _parse_guide(text: str, timeout: float):
    if text == "null":
        return NullGuide()
    if text.startswith("fixed:"):
        return FixedGuide(term_from_text(text[len("fixed:"):]))
    if text.startswith("corrupt:"):
        return CorruptedOracle(int(text[len("corrupt:"):]))
    if text.startswith("exec:"):
        return ExternalGuide(text[len("exec:"):], timeout=timeout)
    raise argparse.ArgumentTypeError(
        f"bad guide {text!r}; expected null, fixed:<tokens>, corrupt:<k> or exec:<cmdline>"
    )


# --------------------------------------------------------------------------
# gen-dataset

def cmd_gen_dataset(args) -> int:
    entries = datagen.training_dataset(
        args.n, normal_only=args.normal_only, seed=args.seed, max_atoms=args.max_atoms
    )
    try:
        datagen.write_dataset(args.out, entries, seed=args.seed, normal_only=args.normal_only)
    except OSError as e:
        print(f"error: cannot write {args.out}: {e}", file=sys.stderr)
        return 1
    print(f"wrote {len(entries)} entries to {args.out}")
    return 0


# --------------------------------------------------------------------------
# synthesize

def cmd_synthesize(args) -> int:
    goal = type_from_text(args.type)
    guide = _parse_guide(args.guide, args.guide_timeout)
    reference = term_from_text(args.reference) if args.reference else None
    config = SynthesisConfig(
        cost_kind=CostKind(args.cost),
        max_pops=args.max_pops,
        max_candidate_size=args.max_size,
        seed=args.seed,
        guide_source=guide,
    )
    result = synthesize(goal, config, reference=reference)
    record = {
        "goal": type_to_text(goal),
        "cost": args.cost,
        "outcome": result.outcome,
        "proof": term_to_text(result.proof) if result.proof is not None else None,
        "pops": result.pops,
        "pushes": result.pushes,
        "wall_ms": round(result.wall_ms, 3),
        "guide": term_to_text(result.guide),
        "guide_distance": result.guide_distance,
    }
    if args.json:
        print(json.dumps(record, ensure_ascii=False))
    else:
        if result.outcome == "proved":
            print(record["proof"])
            print(f"pops={result.pops} pushes={result.pushes} wall_ms={record['wall_ms']}")
        else:
            print(f"budget exceeded ({result.detail}); pops={result.pops}", file=sys.stderr)
    return 0 if result.outcome == "proved" else 2


# --------------------------------------------------------------------------
# check

def cmd_check(args) -> int:
    term = term_from_text(args.term)
    if args.type is None:
        if has_hole(term) or free_vars(term):
            print("error: type inference needs a closed hole-free term; pass --type", file=sys.stderr)
            return 1
        ty = infer_type(term)
        if ty is None:
            print("untypable")
            return 1
        print(type_to_text(ty))
        return 0
    goal = type_from_text(args.type)
    ok = check_partial(EMPTY, term, goal)
    print("OK" if ok else "FAIL")
    return 0 if ok else 1


# --------------------------------------------------------------------------
# repair

def cmd_repair(args) -> int:
    tokens = lex(args.tokens)
    result = nearest_term(tokens, node_budget=args.budget)
    print(term_to_text(result.term))
    flag = " budget-exceeded" if result.budget_exceeded else ""
    print(f"distance={result.distance}{flag}")
    return 0


# --------------------------------------------------------------------------
# eval

def _load_testset(path: str) -> list[TypeExpr]:
    types: list[TypeExpr] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("{"):
                row = json.loads(line)
                if "type_tokens" not in row:
                    continue  # header
                types.append(type_from_text(row["type_tokens"]))
            else:
                types.append(type_from_text(line))
    return types


def _load_outputs(path: str) -> list[list[str]]:
    outputs: list[list[str]] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line == "NONE":
                outputs.append([])
            elif line:
                outputs.append(lex(line))
            else:
                outputs.append([])
    return outputs


def cmd_eval(args) -> int:
    types = _load_testset(args.testset)
    outputs = _load_outputs(args.outputs)
    if len(types) != len(outputs):
        print(
            f"error: {len(types)} test types but {len(outputs)} output lines",
            file=sys.stderr,
        )
        return 1
    report = datagen.evaluate_outputs(list(zip(types, outputs)))
    closeness = "n/a" if report.closeness is None else f"{report.closeness:.4f}"
    rows = [
        ("# of cases", str(report.n_total)),
        ("# of parsable", str(report.n_parsable)),
        ("# of typable", str(report.n_typable)),
        ("Closeness per AST node", closeness),
    ]
    width = max(len(r[0]) for r in rows)
    for name, value in rows:
        print(f"{name:<{width}}  {value}")
    print(
        json.dumps(
            {
                "n_total": report.n_total,
                "n_parsable": report.n_parsable,
                "n_typable": report.n_typable,
                "closeness": report.closeness,
                "per_case": [
                    {
                        "parsable": c.parsable,
                        "typable": c.typable,
                        "distance": c.distance,
                        "size": c.size,
                        "repaired": c.repaired,
                        "approximate": c.approximate,
                        "excluded": c.excluded,
                    }
                    for c in report.per_case
                ],
            }
        )
    )
    return 0


# --------------------------------------------------------------------------
# bench

@dataclass(slots=True)
class BenchRecord:
    goal_tokens: str
    procedure: str
    guide_distance: int | None
    pops: int
    pushes: int
    wall_ms: float
    outcome: str

    def to_json(self) -> dict:
        return {
            "goal_tokens": self.goal_tokens,
            "procedure": self.procedure,
            "guide_distance": self.guide_distance,
            "pops": self.pops,
            "pushes": self.pushes,
            "wall_ms": round(self.wall_ms, 3),
            "outcome": self.outcome,
        }


def _bench_table(records: list[BenchRecord], procedures: list[str]) -> str:
    buckets = sorted({r.guide_distance for r in records if r.guide_distance is not None})
    header = ["Procedure", "Sum"] + [f"ED-{n}" for n in buckets]
    lines = [header]
    for proc in procedures:
        mine = [r for r in records if r.procedure == proc]
        total = sum(r.wall_ms for r in mine)
        row = [proc, f"{total:.1f}"]
        for n in buckets:
            if proc == "bf":
                row.append("--")
                continue
            cell = [r.wall_ms for r in mine if r.guide_distance == n]
            row.append(f"{statistics.mean(cell):.1f}" if cell else "N/A")
        lines.append(row)
    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    return "\n".join(
        "  ".join(f"{cell:>{w}}" for cell, w in zip(line, widths)) for line in lines
    )


def cmd_bench(args) -> int:
    _, entries = datagen.read_dataset(args.testset)
    if not entries:
        print("error: empty testset", file=sys.stderr)
        return 1
    procedures = [p.strip() for p in args.procedures.split(",") if p.strip()]
    for p in procedures:
        if p not in ("bf", "ed", "im"):
            print(f"error: unknown procedure {p!r}", file=sys.stderr)
            return 1
    guide = _parse_guide(args.guide, args.guide_timeout)
    records: list[BenchRecord] = []
    for proc in procedures:
        for idx, entry in enumerate(entries):
            spec = NullGuide() if proc == "bf" else guide
            config = SynthesisConfig(
                cost_kind=CostKind(proc),
                max_pops=args.budget,
                max_candidate_size=args.max_size,
                seed=args.seed + idx,
                guide_source=spec,
            )
            result = synthesize(entry.goal_type, config, reference=entry.proof)
            records.append(
                BenchRecord(
                    goal_tokens=entry.type_tokens,
                    procedure=proc,
                    guide_distance=result.guide_distance if proc != "bf" else None,
                    pops=result.pops,
                    pushes=result.pushes,
                    wall_ms=result.wall_ms,
                    outcome=result.outcome if result.outcome == "proved" else "budget",
                )
            )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for r in records:
                fh.write(json.dumps(r.to_json(), ensure_ascii=False) + "\n")
    print(_bench_table(records, procedures))
    proved = sum(1 for r in records if r.outcome == "proved")
    print(f"proved {proved}/{len(records)} runs (kernel: {kernel_backend()})")
    return 0


# --------------------------------------------------------------------------

def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="proofsynth", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    seed = _default_seed()

    p = sub.add_parser("gen-dataset", help="generate a training dataset (JSONL)")
    p.add_argument("-n", type=_positive, required=True, help="number of (type, proof) pairs")
    p.add_argument("--normal-only", action="store_true", help="keep only beta/eta-normal proofs")
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--max-atoms", type=_positive, default=3)
    p.add_argument("--out", required=True, help="output JSONL path")
    p.set_defaults(func=cmd_gen_dataset)

    p = sub.add_parser("synthesize", help="search for a proof term of a type")
    p.add_argument("type", help='goal type, e.g. "a -> a"')
    p.add_argument("--cost", choices=["bf", "ed", "im"], default="bf")
    p.add_argument("--guide", default="null", help="null | fixed:<tokens> | corrupt:<k> | exec:<cmdline>")
    p.add_argument("--reference", default=None, help="reference proof tokens (for corrupt guides)")
    p.add_argument("--max-pops", type=_positive, default=50_000)
    p.add_argument("--max-size", type=_positive, default=12)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--guide-timeout", type=float, default=30.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("check", help="type-check a term (with --type: against a goal)")
    p.add_argument("--term", required=True)
    p.add_argument("--type", default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("repair", help="closest parsable term for a token sequence")
    p.add_argument("tokens", help="space-separated tokens")
    p.add_argument("--budget", type=_positive, default=1_000_000)
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("eval", help="parsability/typability/closeness of guide outputs")
    p.add_argument("--outputs", required=True, help="one token line per case (NONE allowed)")
    p.add_argument("--testset", required=True, help="JSONL with type_tokens, or plain type lines")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="run bf/ed/im over a testset and bucket by guide distance")
    p.add_argument("--testset", required=True, help="dataset JSONL (terms are corrupt-guide references)")
    p.add_argument("--procedures", default="bf,ed,im")
    p.add_argument("--guide", default="corrupt:1")
    p.add_argument("--budget", type=_positive, default=20_000)
    p.add_argument("--max-size", type=_positive, default=12)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--guide-timeout", type=float, default=30.0)
    p.add_argument("--out", default=None, help="write BenchRecord JSONL here")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, GuideError, ValueError, RuntimeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
