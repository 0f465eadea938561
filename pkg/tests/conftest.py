"""Shared generators for randomized tests; everything is seeded."""

from __future__ import annotations

import random

import pytest

from proofsynth.datagen import raw_count, unrank_term
from proofsynth.terms import (
    Arrow,
    CasePair,
    CaseSum,
    HOLE,
    Lam,
    Prod,
    Sum,
    Term,
    TVar,
    TypeExpr,
    replace_at,
)


def rand_raw_term(rng: random.Random, size: int) -> Term:
    """Uniform closed scope-valid term shape (not necessarily well-typed)."""
    total = raw_count(size, 0)
    assert total > 0, f"no closed terms of size {size}"
    return unrank_term(size, rng.randrange(total))


def rand_typed_term(rng: random.Random, size: int, max_attempts: int = 10_000) -> Term:
    from proofsynth.typecheck import infer_type

    for _ in range(max_attempts):
        t = rand_raw_term(rng, size)
        if infer_type(t) is not None:
            return t
    raise AssertionError(f"no typed term of size {size}")


def rand_type(rng: random.Random, depth: int, atoms: tuple[str, ...] = ("a", "b", "c")) -> TypeExpr:
    if depth <= 0 or rng.random() < 0.35:
        return TVar(rng.choice(atoms))
    ctor = rng.choice((Arrow, Prod, Sum))
    return ctor(rand_type(rng, depth - 1, atoms), rand_type(rng, depth - 1, atoms))


def punch_hole(rng: random.Random, t: Term) -> Term:
    """Replace one random subterm by a hole."""
    paths = all_paths(t)
    return replace_at(t, rng.choice(paths), HOLE)


def all_paths(t: Term) -> list[tuple]:
    from proofsynth.terms import children

    out = [()]
    for i, c in enumerate(children(t)):
        out.extend((i,) + p for p in all_paths(c))
    return out


def shuffle_binders(rng: random.Random, t: Term) -> Term:
    """Alpha-rename every binder to a fresh unique name."""
    counter = rng.randrange(1000)

    def fresh() -> str:
        nonlocal counter
        counter += 1
        return f"y{counter}"

    def go(t: Term, env: dict[str, str]) -> Term:
        from proofsynth.terms import App, CasePair, CaseSum, Hole, InjL, InjR, Lam, Pair, Var

        if isinstance(t, Hole):
            return t
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name))
        if isinstance(t, Lam):
            x = fresh()
            return Lam(x, go(t.body, {**env, t.var: x}))
        if isinstance(t, App):
            return App(go(t.fun, env), go(t.arg, env))
        if isinstance(t, Pair):
            return Pair(go(t.fst, env), go(t.snd, env))
        if isinstance(t, CasePair):
            x, y = fresh(), fresh()
            return CasePair(go(t.scrut, env), x, y, go(t.body, {**env, t.fst: x, t.snd: y}))
        if isinstance(t, InjL):
            return InjL(go(t.inner, env))
        if isinstance(t, InjR):
            return InjR(go(t.inner, env))
        if isinstance(t, CaseSum):
            x, y = fresh(), fresh()
            return CaseSum(
                go(t.scrut, env), x, go(t.left, {**env, t.lvar: x}), y, go(t.right, {**env, t.rvar: y})
            )
        raise TypeError(t)

    return go(t, {})


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
