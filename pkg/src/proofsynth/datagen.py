"""Counting, enumeration and uniform sampling of closed well-typed terms,
dataset construction, and the model-evaluation metrics.

Sampling is uniform over alpha-classes: a dynamic-programming table counts
raw scope-valid term shapes, a shape is unranked uniformly, and untypable (or,
when requested, non-normal) draws are rejected.  Exact counts of well-typed
terms come from a separate enumerator that threads unification state and is
also used to list the proofs of a concrete goal type for the closeness
metric.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .repair import nearest_term
from .terms import (
    App,
    Arrow,
    CasePair,
    CaseSum,
    InjL,
    InjR,
    Lam,
    Pair,
    Prod,
    Sum,
    Term,
    TypeExpr,
    Var,
    canonical_rename,
    find_beta_eta_redex,
    rename_atoms,
    size,
    type_atoms,
)
from .tokens import (
    ParseError,
    TokenSeq,
    parse_term,
    term_from_text,
    term_to_text,
    type_from_text,
    type_to_text,
)
from .treedist import distance_prepared, prepare_term
from .typecheck import EMPTY, Unifier, check_partial, infer_type

GENERATOR_VERSION = "proofsynth-dataset-1"
SIZE_RANGE = range(2, 10)  # Procedure draws sizes uniformly from {2, ..., 9}


# --------------------------------------------------------------------------
# Raw shape counting and unranking (de Bruijn style, k variables in scope).
# The branch order here fixes the unranking order; count and unrank must
# stay in lockstep.

@lru_cache(maxsize=None)
def raw_count(n: int, k: int = 0) -> int:
    """Closed-under-context scope-valid term shapes of size n with k vars free."""
    if n < 1:
        return 0
    if n == 1:
        return k
    rem = n - 1
    total = raw_count(rem, k + 1)  # Lam
    total += 2 * raw_count(rem, k)  # InjL, InjR
    for i in range(1, rem):
        j = rem - i
        total += 2 * raw_count(i, k) * raw_count(j, k)  # App, Pair
        total += raw_count(i, k) * raw_count(j, k + 2)  # CasePair
    for i in range(1, rem - 1):
        for j in range(1, rem - i):
            total += raw_count(i, k) * raw_count(j, k + 1) * raw_count(rem - i - j, k + 1)  # CaseSum
    return total


def _unrank(n: int, k: int, r: int) -> tuple:
    if n == 1:
        assert 0 <= r < k
        return ("var", r)
    rem = n - 1
    c = raw_count(rem, k + 1)
    if r < c:
        return ("lam", _unrank(rem, k + 1, r))
    r -= c
    for tag in ("inl", "inr"):
        c = raw_count(rem, k)
        if r < c:
            return (tag, _unrank(rem, k, r))
        r -= c
    for tag, kb in (("app", k), ("pair", k), ("casepair", k + 2)):
        for i in range(1, rem):
            j = rem - i
            ca, cb = raw_count(i, k), raw_count(j, kb)
            c = ca * cb
            if r < c:
                qa, qb = divmod(r, cb)
                return (tag, _unrank(i, k, qa), _unrank(j, kb, qb))
            r -= c
    for i in range(1, rem - 1):
        for j in range(1, rem - i):
            l = rem - i - j
            ca = raw_count(i, k)
            cb = raw_count(j, k + 1)
            cc = raw_count(l, k + 1)
            c = ca * cb * cc
            if r < c:
                qa, rest = divmod(r, cb * cc)
                qb, qc = divmod(rest, cc)
                return ("casesum", _unrank(i, k, qa), _unrank(j, k + 1, qb), _unrank(l, k + 1, qc))
            r -= c
    raise AssertionError("rank out of range")


def _shape_to_term(node: tuple, env: tuple[str, ...], counter: int) -> tuple[Term, int]:
    # Binders claim canonical indices before their children, matching the
    # fresh-name discipline of the search (see terms.canonical_rename).
    tag = node[0]
    if tag == "var":
        return Var(env[node[1]]), counter
    if tag == "lam":
        x = f"x{counter}"
        body, counter = _shape_to_term(node[1], env + (x,), counter + 1)
        return Lam(x, body), counter
    if tag == "inl":
        inner, counter = _shape_to_term(node[1], env, counter)
        return InjL(inner), counter
    if tag == "inr":
        inner, counter = _shape_to_term(node[1], env, counter)
        return InjR(inner), counter
    if tag == "app":
        fun, counter = _shape_to_term(node[1], env, counter)
        arg, counter = _shape_to_term(node[2], env, counter)
        return App(fun, arg), counter
    if tag == "pair":
        fst, counter = _shape_to_term(node[1], env, counter)
        snd, counter = _shape_to_term(node[2], env, counter)
        return Pair(fst, snd), counter
    if tag == "casepair":
        x, y = f"x{counter}", f"x{counter + 1}"
        scrut, counter = _shape_to_term(node[1], env, counter + 2)
        body, counter = _shape_to_term(node[2], env + (x, y), counter)
        return CasePair(scrut, x, y, body), counter
    if tag == "casesum":
        x, y = f"x{counter}", f"x{counter + 1}"
        scrut, counter = _shape_to_term(node[1], env, counter + 2)
        left, counter = _shape_to_term(node[2], env + (x,), counter)
        right, counter = _shape_to_term(node[3], env + (y,), counter)
        return CaseSum(scrut, x, left, y, right), counter
    raise AssertionError(f"bad shape tag {tag!r}")


def unrank_term(n: int, rank: int) -> Term:
    """The rank-th closed term shape of size n, canonically named."""
    term, _ = _shape_to_term(_unrank(n, 0, rank), (), 0)
    return term


# --------------------------------------------------------------------------
# Typed enumeration: every closed well-typed term of a given size, each
# alpha-class exactly once (canonical naming makes shapes and classes agree).

def _root_redex(t: Term) -> bool:
    if isinstance(t, App) and isinstance(t.fun, Lam):
        return True
    if isinstance(t, CasePair):
        if isinstance(t.scrut, Pair):
            return True
        if isinstance(t.body, Pair):
            f, s = t.body.fst, t.body.snd
            if isinstance(f, Var) and isinstance(s, Var) and f.name == t.fst and s.name == t.snd:
                return True
    if isinstance(t, CaseSum):
        if isinstance(t.scrut, (InjL, InjR)):
            return True
        if isinstance(t.left, InjL) and isinstance(t.right, InjR):
            li, ri = t.left.inner, t.right.inner
            if isinstance(li, Var) and li.name == t.lvar and isinstance(ri, Var) and ri.name == t.rvar:
                return True
    if isinstance(t, Lam) and isinstance(t.body, App):
        arg = t.body.arg
        if isinstance(arg, Var) and arg.name == t.var:
            from .terms import free_vars

            if t.var not in free_vars(t.body.fun):
                return True
    return False


def _enum(goal, env, n, u: Unifier, counter: int, normal_only: bool):
    """Yield (term, next_counter) for every well-typed term of size n.

    Unification constraints hold while the consumer runs and are unwound
    before the next branch; abandon the whole Unifier if iteration stops
    early.
    """
    if n < 1:
        return
    if n == 1:
        for name, ty in env:
            m = u.mark()
            if u.unify(ty, goal):
                yield Var(name), counter
            u.undo(m)
        return
    rem = n - 1

    m0 = u.mark()
    a, b = u.fresh(), u.fresh()
    if u.unify(goal, Arrow(a, b)):
        x = f"x{counter}"
        for body, c2 in _enum(b, env + ((x, a),), rem, u, counter + 1, normal_only):
            t = Lam(x, body)
            if not (normal_only and _root_redex(t)):
                yield t, c2
    u.undo(m0)

    for wrap, pick in ((InjL, 0), (InjR, 1)):
        m0 = u.mark()
        a, b = u.fresh(), u.fresh()
        if u.unify(goal, Sum(a, b)):
            inner_goal = a if pick == 0 else b
            for inner, c2 in _enum(inner_goal, env, rem, u, counter, normal_only):
                yield wrap(inner), c2
        u.undo(m0)

    for i in range(1, rem):
        j = rem - i
        m0 = u.mark()
        a = u.fresh()
        for fun, c1 in _enum(Arrow(a, goal), env, i, u, counter, normal_only):
            if normal_only and isinstance(fun, Lam):
                continue
            for arg, c2 in _enum(a, env, j, u, c1, normal_only):
                yield App(fun, arg), c2
        u.undo(m0)

        m0 = u.mark()
        a, b = u.fresh(), u.fresh()
        if u.unify(goal, Prod(a, b)):
            for fst, c1 in _enum(a, env, i, u, counter, normal_only):
                for snd, c2 in _enum(b, env, j, u, c1, normal_only):
                    yield Pair(fst, snd), c2
        u.undo(m0)

        m0 = u.mark()
        a, b = u.fresh(), u.fresh()
        x, y = f"x{counter}", f"x{counter + 1}"
        for scrut, c1 in _enum(Prod(a, b), env, i, u, counter + 2, normal_only):
            if normal_only and isinstance(scrut, Pair):
                continue
            for body, c2 in _enum(goal, env + ((x, a), (y, b)), j, u, c1, normal_only):
                t = CasePair(scrut, x, y, body)
                if not (normal_only and _root_redex(t)):
                    yield t, c2
        u.undo(m0)

    for i in range(1, rem - 1):
        for j in range(1, rem - i):
            l = rem - i - j
            m0 = u.mark()
            a, b = u.fresh(), u.fresh()
            x, y = f"x{counter}", f"x{counter + 1}"
            for scrut, c1 in _enum(Sum(a, b), env, i, u, counter + 2, normal_only):
                if normal_only and isinstance(scrut, (InjL, InjR)):
                    continue
                for left, c2 in _enum(goal, env + ((x, a),), j, u, c1, normal_only):
                    for right, c3 in _enum(goal, env + ((y, b),), l, u, c2, normal_only):
                        t = CaseSum(scrut, x, left, y, right)
                        if not (normal_only and _root_redex(t)):
                            yield t, c3
            u.undo(m0)


def enumerate_closed_terms(s: int, normal_only: bool = False, goal: TypeExpr | None = None):
    """Iterate closed well-typed terms of size s, one per alpha-class.

    With a concrete goal, only terms typable at that goal are produced;
    otherwise a fresh metavariable stands for any type.
    """
    u = Unifier()
    root = goal if goal is not None else u.fresh()
    for term, _ in _enum(root, (), s, u, 0, normal_only):
        yield term


_count_memo: dict[tuple[int, bool], int] = {}


def count_terms(s: int, normal_only: bool = False) -> int:
    """Exact number of alpha-classes of closed well-typed terms of size s."""
    if s < 1:
        raise ValueError("size must be at least 1")
    key = (s, normal_only)
    if key not in _count_memo:
        _count_memo[key] = sum(1 for _ in enumerate_closed_terms(s, normal_only))
    return _count_memo[key]


def sample_term(
    s: int,
    normal_only: bool = False,
    seed: int | random.Random = 0,
    max_attempts: int = 200_000,
) -> Term:
    """Uniform draw over the alpha-classes counted by count_terms(s, normal_only).

    A raw shape is unranked uniformly and rejected until it is well-typed
    (and beta/eta-normal when asked); rejection preserves uniformity.
    """
    total = raw_count(s, 0)
    if total == 0:
        raise ValueError(f"no closed terms of size {s}")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    for _ in range(max_attempts):
        term = unrank_term(s, rng.randrange(total))
        if normal_only and find_beta_eta_redex(term) is not None:
            continue
        if infer_type(term) is None:
            continue
        return term
    raise RuntimeError(f"no well-typed term of size {s} found in {max_attempts} draws")


# --------------------------------------------------------------------------
# Datasets (Procedure-style construction)

@dataclass(frozen=True, slots=True)
class DatasetEntry:
    goal_type: TypeExpr
    proof: Term
    type_tokens: str
    term_tokens: str

    @property
    def size(self) -> int:
        return size(self.proof)


def _canonical_type_key(t: TypeExpr) -> str:
    atoms = type_atoms(t)
    fresh = [chr(ord("a") + i) if i < 26 else f"a{i}" for i in range(len(atoms))]
    return type_to_text(rename_atoms(t, dict(zip(atoms, fresh))))


def _sample_typed(rng: random.Random, normal_only: bool, max_atoms: int) -> tuple[Term, TypeExpr] | None:
    s = rng.choice(SIZE_RANGE)
    total = raw_count(s, 0)
    term = unrank_term(s, rng.randrange(total))
    if normal_only and find_beta_eta_redex(term) is not None:
        return None
    ty = infer_type(term)
    if ty is None or len(type_atoms(ty)) > max_atoms:
        return None
    return term, ty


def training_dataset(
    n: int,
    normal_only: bool = False,
    seed: int = 0,
    max_atoms: int = 3,
    max_iters: int | None = None,
) -> list[DatasetEntry]:
    """n (type, proof) pairs with pairwise distinct types (up to atom renaming).

    Terms are drawn at a uniformly random size in 2..9; when a type recurs,
    the smaller proof is kept.  Deterministic given the seed.
    """
    if n < 1:
        raise ValueError("dataset size must be at least 1")
    rng = random.Random(seed)
    cap = max_iters if max_iters is not None else max(20_000, 400 * n)
    chosen: dict[str, tuple[TypeExpr, Term]] = {}
    for _ in range(cap):
        drawn = _sample_typed(rng, normal_only, max_atoms)
        if drawn is None:
            continue
        term, ty = drawn
        key = type_to_text(ty)  # principal atoms are already first-occurrence named
        held = chosen.get(key)
        if held is None:
            chosen[key] = (ty, term)
        elif size(term) < size(held[1]):
            chosen[key] = (ty, term)
        if len(chosen) >= n:
            break
    else:
        raise RuntimeError(f"could not reach {n} distinct types in {cap} draws")
    entries = [
        DatasetEntry(ty, term, type_to_text(ty), term_to_text(term))
        for ty, term in chosen.values()
    ]
    return entries


def test_dataset(
    n: int,
    exclude: list[TypeExpr] | set[str] | None = None,
    seed: int = 0,
    normal_only: bool = False,
    max_atoms: int = 3,
    max_iters: int | None = None,
) -> list[TypeExpr]:
    """n types from the same sampler, none of them in exclude (up to atom
    renaming) and pairwise distinct."""
    excluded_keys: set[str] = set()
    for item in exclude or ():
        excluded_keys.add(item if isinstance(item, str) else _canonical_type_key(item))
    rng = random.Random(seed)
    cap = max_iters if max_iters is not None else max(20_000, 400 * n)
    out: list[TypeExpr] = []
    seen: set[str] = set()
    for _ in range(cap):
        if len(out) >= n:
            break
        drawn = _sample_typed(rng, normal_only, max_atoms)
        if drawn is None:
            continue
        _, ty = drawn
        key = _canonical_type_key(ty)
        if key in excluded_keys or key in seen:
            continue
        seen.add(key)
        out.append(ty)
    else:
        raise RuntimeError(f"could not reach {n} fresh types in {cap} draws")
    return out


def sampled_pairs(
    n: int,
    seed: int = 0,
    sizes: range | tuple = SIZE_RANGE,
    normal_only: bool = False,
    max_atoms: int = 3,
) -> list[tuple[TypeExpr, Term]]:
    """n (goal, reference proof) pairs for benchmarks; types may repeat."""
    rng = random.Random(seed)
    out: list[tuple[TypeExpr, Term]] = []
    while len(out) < n:
        s = rng.choice(tuple(sizes))
        term = unrank_term(s, rng.randrange(raw_count(s, 0)))
        if normal_only and find_beta_eta_redex(term) is not None:
            continue
        ty = infer_type(term)
        if ty is None or len(type_atoms(ty)) > max_atoms:
            continue
        out.append((ty, term))
    return out


# --------------------------------------------------------------------------
# Dataset files: one JSON object per line, UTF-8, with a header line.

def write_dataset(path: str | Path, entries: list[DatasetEntry], seed: int, normal_only: bool) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        header = {"version": GENERATOR_VERSION, "seed": seed, "normal_only": normal_only}
        fh.write(json.dumps(header) + "\n")
        for e in entries:
            row = {
                "type_tokens": e.type_tokens,
                "term_tokens": e.term_tokens,
                "size": e.size,
                "normal_only": normal_only,
            }
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def read_dataset(path: str | Path) -> tuple[dict, list[DatasetEntry]]:
    path = Path(path)
    entries: list[DatasetEntry] = []
    header: dict = {}
    with path.open("r", encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            row = json.loads(line)
            if i == 0 and "version" in row and "type_tokens" not in row:
                header = row
                continue
            ty = type_from_text(row["type_tokens"])
            term = term_from_text(row["term_tokens"])
            entries.append(DatasetEntry(ty, term, row["type_tokens"], row["term_tokens"]))
    return header, entries


# --------------------------------------------------------------------------
# Model-output evaluation (parsability / typability / closeness)

@dataclass(slots=True)
class CaseReport:
    parsable: bool
    typable: bool
    distance: int | None
    size: int
    repaired: bool
    approximate: bool = False
    excluded: bool = False


@dataclass(slots=True)
class EvalReport:
    n_total: int
    n_parsable: int
    n_typable: int
    closeness: float | None
    per_case: list[CaseReport]


class _ProofSets:
    """Closed hole-free proofs of a type with size <= cap, cached per type."""

    def __init__(self, size_cap: int = 9, time_cap: float = 10.0, max_entries: int = 256):
        self.size_cap = size_cap
        self.time_cap = time_cap
        self.max_entries = max_entries
        self._cache: dict[str, tuple[list, bool]] = {}

    def get(self, goal: TypeExpr) -> tuple[list, bool]:
        """(prepared proof trees, complete flag); incomplete means the time
        cap cut enumeration short and distances are upper bounds."""
        key = _canonical_type_key(goal)
        if key in self._cache:
            return self._cache[key]
        canonical_goal = type_from_text(key)
        proofs: list = []
        complete = True
        deadline = time.monotonic() + self.time_cap
        for s in range(1, self.size_cap + 1):
            for term in enumerate_closed_terms(s, goal=canonical_goal):
                proofs.append(prepare_term(term))
                if time.monotonic() > deadline:
                    complete = False
                    break
            if not complete:
                break
        if len(self._cache) >= self.max_entries:
            self._cache.pop(next(iter(self._cache)))
        self._cache[key] = (proofs, complete)
        return self._cache[key]


_proof_sets = _ProofSets()


def evaluate_outputs(
    cases: list[tuple[TypeExpr, TokenSeq]],
    proof_sets: _ProofSets | None = None,
) -> EvalReport:
    """Score raw guide outputs against their goal types.

    A case is parsable when the tokens parse directly; typable when the
    nearest_term repair type-checks at the goal; its closeness contribution is
    the minimum tree edit distance from the (canonically renamed) repaired
    term to any proof of the goal of size <= 9, divided by the repaired
    term's size.  Cases whose proof set is empty are excluded and flagged.
    """
    sets = proof_sets if proof_sets is not None else _proof_sets
    per_case: list[CaseReport] = []
    for goal, tokens in cases:
        try:
            parse_term(list(tokens))
            parsable = True
        except ParseError:
            parsable = False
        repair = nearest_term(list(tokens))
        repaired = repair.term
        typable = check_partial(EMPTY, repaired, goal)
        candidate = canonical_rename(repaired)
        proofs, complete = sets.get(goal)
        if not proofs:
            per_case.append(
                CaseReport(parsable, typable, None, size(candidate), repair.distance > 0, excluded=True)
            )
            continue
        prepared = prepare_term(candidate)
        dist = min(distance_prepared(prepared, p) for p in proofs)
        per_case.append(
            CaseReport(
                parsable,
                typable,
                dist,
                size(candidate),
                repair.distance > 0,
                approximate=not complete,
            )
        )
    included = [c for c in per_case if not c.excluded]
    closeness = (
        sum(c.distance / c.size for c in included) / len(included) if included else None
    )
    return EvalReport(
        n_total=len(per_case),
        n_parsable=sum(1 for c in per_case if c.parsable),
        n_typable=sum(1 for c in per_case if c.typable),
        closeness=closeness,
        per_case=per_case,
    )
