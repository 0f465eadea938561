"""Guided proof search: shallow-context candidate generation and the
priority-queue synthesis loop.

Search grows a partial proof by filling its leftmost-outermost hole with
depth-1 templates (a variable in scope, an abstraction, an application, a
pair, an injection, or a case split), pruning anything that contains a
beta/eta-redex or cannot type-check against the goal.  Candidates are ranked
by a cost function that may consult a guide term; with a good guide the
correct proof surfaces after far fewer pops than brute force.
"""

from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass, field

from . import protocol
from .repair import nearest_term
from .terms import (
    App,
    CasePair,
    CaseSum,
    HOLE,
    InjL,
    InjR,
    Lam,
    Pair,
    Term,
    TypeExpr,
    Var,
    canonical_key,
    children,
    find_beta_eta_redex,
    has_hole,
    hole_paths,
    max_var_index,
    replace_at,
    scope_at,
    size,
    subterm_at,
)
from .tokens import tokenize_type
from .treedist import CostEvaluator, CostKind, tree_edit_distance
from .typecheck import EMPTY, check_partial


# --------------------------------------------------------------------------
# Guide sources

@dataclass(frozen=True, slots=True)
class NullGuide:
    """No guidance; the guide term is a bare hole."""


@dataclass(frozen=True, slots=True)
class FixedGuide:
    term: Term


@dataclass(frozen=True, slots=True)
class CorruptedOracle:
    """A known reference proof damaged by k random single-node edits."""

    k_edits: int


@dataclass(frozen=True, slots=True)
class ExternalGuide:
    """A guide process spawned from a command line, speaking the wire protocol."""

    endpoint: str
    timeout: float = 30.0


GuideSpec = NullGuide | FixedGuide | CorruptedOracle | ExternalGuide


def _paths(t: Term) -> list[tuple]:
    out = [()]
    for i, c in enumerate(children(t)):
        out.extend((i,) + p for p in _paths(c))
    return out


def corrupt_term(t: Term, k_edits: int, rng: random.Random) -> Term:
    """Apply k random single-node edits (each moves tree edit distance by one).

    Edit kinds, chosen uniformly among those applicable: rename one variable
    occurrence, flip one injection constructor, wrap one subtree in an
    injection, or delete one injection node.  Results need not type-check;
    guides are hints, not proofs.
    """
    for _ in range(k_edits):
        paths = _paths(t)
        var_paths = [p for p in paths if isinstance(subterm_at(t, p), Var)]
        inj_paths = [p for p in paths if isinstance(subterm_at(t, p), (InjL, InjR))]
        kinds = ["wrap"]
        if var_paths:
            kinds.append("rename")
        if inj_paths:
            kinds.append("flip")
            kinds.append("drop")
        kind = rng.choice(sorted(kinds))
        if kind == "rename":
            path = rng.choice(var_paths)
            old = subterm_at(t, path)
            names = [f"x{i}" for i in range(max_var_index(t) + 2)]
            names = [n for n in names if n != old.name] or ["x0"]
            t = replace_at(t, path, Var(rng.choice(names)))
        elif kind == "flip":
            path = rng.choice(inj_paths)
            node = subterm_at(t, path)
            flipped = InjR(node.inner) if isinstance(node, InjL) else InjL(node.inner)
            t = replace_at(t, path, flipped)
        elif kind == "drop":
            path = rng.choice(inj_paths)
            t = replace_at(t, path, subterm_at(t, path).inner)
        else:
            path = rng.choice(paths)
            sub = subterm_at(t, path)
            wrapper = InjL if rng.random() < 0.5 else InjR
            t = replace_at(t, path, wrapper(sub))
    return t


def make_guide(
    goal: TypeExpr,
    spec: GuideSpec,
    reference: Term | None = None,
    seed: int = 0,
) -> Term:
    """Produce the guide term for a synthesis run.

    External guides are sent the goal's token sequence and their reply is
    repaired with nearest_term, so even malformed output yields a guide.
    """
    if isinstance(spec, NullGuide):
        return HOLE
    if isinstance(spec, FixedGuide):
        return spec.term
    if isinstance(spec, CorruptedOracle):
        if reference is None:
            raise ValueError("CorruptedOracle requires a reference proof")
        return corrupt_term(reference, spec.k_edits, random.Random(seed))
    if isinstance(spec, ExternalGuide):
        with protocol.GuideClient(spec.endpoint, timeout=spec.timeout) as client:
            reply = client.ask(tokenize_type(goal))
        if reply is None:
            return HOLE
        return nearest_term(reply).term
    raise TypeError(f"unknown guide spec {spec!r}")


# --------------------------------------------------------------------------
# Candidate generation

def gen_candidates(n: Term, goal: TypeExpr, max_candidate_size: int = 12) -> list[Term]:
    """All one-step refinements of the leftmost-outermost hole of n.

    The hole is filled with every shallow context (variables range over those
    in scope at the hole; binders take the next unused x_k names); fills that
    create a beta/eta-redex, fail to type-check against goal, or exceed
    max_candidate_size are removed.  The result is deduplicated by
    canonical_key, preserving template order.
    """
    holes = hole_paths(n)
    if not holes:
        raise ValueError("no hole to fill")
    path = holes[0]
    scope = scope_at(n, path)
    base = max_var_index(n) + 1
    x, y = f"x{base}", f"x{base + 1}"
    templates: list[Term] = [Var(v) for v in scope]
    templates += [
        Lam(x, HOLE),
        App(HOLE, HOLE),
        Pair(HOLE, HOLE),
        CasePair(HOLE, x, y, HOLE),
        InjL(HOLE),
        InjR(HOLE),
        CaseSum(HOLE, x, HOLE, y, HOLE),
    ]
    grow = size(n) - 1  # filling replaces the hole node
    out: list[Term] = []
    seen: set[str] = set()
    for tpl in templates:
        if grow + size(tpl) > max_candidate_size:
            continue
        cand = replace_at(n, path, tpl)
        if find_beta_eta_redex(cand) is not None:
            continue
        if not check_partial(EMPTY, cand, goal):
            continue
        key = canonical_key(cand)
        if key in seen:
            continue
        seen.add(key)
        out.append(cand)
    return out


# --------------------------------------------------------------------------
# Synthesis

@dataclass(frozen=True, slots=True)
class SynthesisConfig:
    cost_kind: CostKind = CostKind.BF
    max_pops: int = 50_000
    max_candidate_size: int = 12
    seed: int = 0
    guide_source: GuideSpec = field(default_factory=NullGuide)

    def __post_init__(self):
        if self.max_pops <= 0:
            raise ValueError("max_pops must be positive")
        if self.max_candidate_size < 1:
            raise ValueError("max_candidate_size must be at least 1")


@dataclass(slots=True)
class SynthesisResult:
    goal: TypeExpr
    outcome: str  # "proved" | "budget"
    proof: Term | None
    pops: int
    pushes: int
    wall_ms: float
    guide: Term
    guide_distance: int | None = None
    detail: str = ""


def synthesize(
    goal: TypeExpr,
    config: SynthesisConfig,
    reference: Term | None = None,
    pop_trace: list[str] | None = None,
) -> SynthesisResult:
    """Best-first search for a closed hole-free proof of goal.

    The queue starts from a bare hole and pops candidates in nondecreasing
    cost order (FIFO among ties); popping a hole-free term ends the search,
    since every enqueued term already type-checks against the goal.  The
    search cannot certify unprovability: a goal with no proof exhausts
    max_pops and reports a budget outcome.  When pop_trace is given, the
    canonical key of every investigated candidate is appended to it.
    """
    start = time.perf_counter()
    guide = make_guide(goal, config.guide_source, reference=reference, seed=config.seed)
    evaluate = CostEvaluator(config.cost_kind, guide)

    counter = 0
    heap: list[tuple[int, int, Term]] = [(evaluate(HOLE), counter, HOLE)]
    investigated: set[str] = set()
    pops = 0
    pushes = 1

    while heap and pops < config.max_pops:
        _, _, term = heapq.heappop(heap)
        key = canonical_key(term)
        if key in investigated:
            continue
        investigated.add(key)
        pops += 1
        if pop_trace is not None:
            pop_trace.append(key)
        if not has_hole(term):
            assert check_partial(EMPTY, term, goal), "search invariant: popped proof must type-check"
            wall = (time.perf_counter() - start) * 1000
            return SynthesisResult(
                goal,
                "proved",
                term,
                pops,
                pushes,
                wall,
                guide,
                guide_distance=tree_edit_distance(guide, term),
            )
        for cand in gen_candidates(term, goal, config.max_candidate_size):
            if canonical_key(cand) in investigated:
                continue
            counter += 1
            heapq.heappush(heap, (evaluate(cand), counter, cand))
            pushes += 1

    wall = (time.perf_counter() - start) * 1000
    detail = "max_pops" if heap else "queue exhausted"
    return SynthesisResult(goal, "budget", None, pops, pushes, wall, guide, detail=detail)