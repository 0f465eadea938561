
import pytest

from proofsynth.datagen import raw_count, unrank_term
from proofsynth.terms import (
    App,
    Arrow,
    CasePair,
    CaseSum,
    HOLE,
    InjL,
    InjR,
    Lam,
    Pair,
    Prod,
    Sum,
    Term,
    TVar,
    TypeExpr,
    Var,
)
from proofsynth.tokens import type_to_text
from proofsynth.typecheck import (
    EMPTY,
    MVar,
    check_partial,
    infer_type,
    unify,
)
from conftest import punch_hole, rand_raw_term, rand_type, rand_typed_term, shuffle_binders

SWAP = Lam("x0", CasePair(Var("x0"), "x1", "x2", Pair(Var("x2"), Var("x1"))))
SWAP_WRONG = Lam("x0", CasePair(Var("x0"), "x1", "x2", Pair(Var("x1"), Var("x1"))))
SWAP_TYPE = Arrow(Prod(TVar("a1"), TVar("a2")), Prod(TVar("a2"), TVar("a1")))


# -- unify -------------------------------------------------------------------

def test_unify_binds_metavariable():
    m = MVar(1)
    beta = Arrow(TVar("b"), TVar("b"))
    assert unify(m, beta) == {1: beta}


def test_unify_occurs_check():
    m = MVar(1)
    assert unify(m, Arrow(m, TVar("b"))) is None


def test_unify_constructor_clash():
    assert unify(Prod(TVar("a"), TVar("b")), Sum(TVar("a"), TVar("b"))) is None


def test_unify_extends_substitution():
    s = unify(MVar(1), Arrow(MVar(2), TVar("b")))
    s2 = unify(MVar(2), TVar("c"), s)
    assert s2 is not None
    assert s2[2] == TVar("c")
    assert s2[1] == Arrow(TVar("c"), TVar("b"))  # idempotent: images fully resolved


def test_unify_idempotent_images(rng):
    for _ in range(200):
        a = rand_type(rng, 3)
        b = rand_type(rng, 3)
        # sprinkle metavariables in
        def meta(t, p=0.3):
            if rng.random() < p:
                return MVar(rng.randint(1, 4))
            if isinstance(t, TVar):
                return t
            return type(t)(meta(t.left), meta(t.right))

        s = unify(meta(a), meta(b))
        if s is None:
            continue
        for image in s.values():
            stack = [image]
            while stack:
                x = stack.pop()
                if isinstance(x, MVar):
                    assert x.ident not in s
                elif not isinstance(x, TVar):
                    stack.extend((x.left, x.right))


# -- check_partial -----------------------------------------------------------

def test_hole_checks_against_anything(rng):
    for _ in range(50):
        assert check_partial(EMPTY, HOLE, rand_type(rng, 3))


def test_swap_examples():
    assert not check_partial(EMPTY, SWAP_WRONG, SWAP_TYPE)
    assert check_partial(EMPTY, SWAP, SWAP_TYPE)


def test_unbound_variable_is_false_not_error():
    assert not check_partial(EMPTY, Var("nope"), TVar("a"))


def test_shadowing_uses_latest_binding():
    ctx = EMPTY.bind("x", TVar("a")).bind("x", TVar("b"))
    assert check_partial(ctx, Var("x"), TVar("b"))
    assert not check_partial(ctx, Var("x"), TVar("a"))


# Rule-by-rule derivation enumerator, independent of unification.  Goals are
# concrete; auxiliary types (application arguments, case scrutinees) range
# over a finite pool, which is exhaustive for the term/goal sizes used here.

def _type_pool(max_nodes: int, atoms: tuple[str, ...]) -> list[TypeExpr]:
    pool: list[list[TypeExpr]] = [[], [TVar(a) for a in atoms]]
    for n in range(2, max_nodes + 1):
        level: list[TypeExpr] = []
        for i in range(1, n - 1):
            for l in pool[i]:
                for r in pool[n - 1 - i]:
                    level.extend((Arrow(l, r), Prod(l, r), Sum(l, r)))
        pool.append(level)
    return [t for level in pool for t in level]


def _derivable(ctx: tuple, t: Term, goal: TypeExpr, pool: list[TypeExpr]) -> bool:
    if isinstance(t, Var):
        for name, ty in reversed(ctx):
            if name == t.name:
                return ty == goal
        return False
    if isinstance(t, Lam):
        if not isinstance(goal, Arrow):
            return False
        return _derivable(ctx + ((t.var, goal.left),), t.body, goal.right, pool)
    if isinstance(t, App):
        return any(
            _derivable(ctx, t.fun, Arrow(s, goal), pool) and _derivable(ctx, t.arg, s, pool)
            for s in pool
        )
    if isinstance(t, Pair):
        if not isinstance(goal, Prod):
            return False
        return _derivable(ctx, t.fst, goal.left, pool) and _derivable(ctx, t.snd, goal.right, pool)
    if isinstance(t, CasePair):
        return any(
            _derivable(ctx, t.scrut, Prod(a, b), pool)
            and _derivable(ctx + ((t.fst, a), (t.snd, b)), t.body, goal, pool)
            for a in pool
            for b in pool
        )
    if isinstance(t, InjL):
        if not isinstance(goal, Sum):
            return False
        return _derivable(ctx, t.inner, goal.left, pool)
    if isinstance(t, InjR):
        if not isinstance(goal, Sum):
            return False
        return _derivable(ctx, t.inner, goal.right, pool)
    if isinstance(t, CaseSum):
        return any(
            _derivable(ctx, t.scrut, Sum(a, b), pool)
            and _derivable(ctx + ((t.lvar, a),), t.left, goal, pool)
            and _derivable(ctx + ((t.rvar, b),), t.right, goal, pool)
            for a in pool
            for b in pool
        )
    raise TypeError(t)


def test_check_partial_matches_derivation_enumerator():
    pool = _type_pool(3, ("a", "b"))
    goals = [t for t in pool if len(type_to_text(t).split()) <= 5]
    terms = [unrank_term(s, r) for s in (2, 3, 4) for r in range(raw_count(s, 0))]
    checked = 0
    for t in terms:
        for goal in goals:
            got = check_partial(EMPTY, t, goal)
            want = _derivable((), t, goal, pool)
            assert got == want, (t, type_to_text(goal))
            checked += 1
    assert checked > 400


def test_monotone_hole_refinement(rng):
    rejected = 0
    for _ in range(300):
        t = punch_hole(rng, rand_raw_term(rng, rng.randint(2, 6)))
        goal = rand_type(rng, 2)
        if check_partial(EMPTY, t, goal):
            continue
        rejected += 1
        # single-hole fills of a failing term must keep failing
        filler = rng.choice([Var("x0"), Lam("x9", HOLE), Pair(HOLE, HOLE), InjL(HOLE), App(HOLE, HOLE)])
        from proofsynth.terms import hole_paths, replace_at

        holes = hole_paths(t)
        if not holes:
            continue
        filled = replace_at(t, holes[0], filler)
        assert not check_partial(EMPTY, filled, goal)
    assert rejected > 20


# -- infer_type ---------------------------------------------------------------

def test_infer_identity():
    assert type_to_text(infer_type(Lam("x", Var("x")))) == "a → a"


def test_infer_swap():
    assert type_to_text(infer_type(SWAP)) == "a × b → b × a"


def test_infer_self_application_fails():
    assert infer_type(Lam("x", App(Var("x"), Var("x")))) is None


def test_infer_rejects_open_or_holey():
    with pytest.raises(ValueError):
        infer_type(Var("x"))
    with pytest.raises(ValueError):
        infer_type(Lam("x", HOLE))


def test_infer_soundness(rng):
    for _ in range(150):
        t = rand_typed_term(rng, rng.randint(2, 7))
        ty = infer_type(t)
        assert ty is not None
        assert check_partial(EMPTY, t, ty)


def test_infer_stable_under_alpha_renaming(rng):
    for _ in range(150):
        t = rand_typed_term(rng, rng.randint(2, 7))
        assert infer_type(t) == infer_type(shuffle_binders(rng, t))


def test_atom_naming_first_occurrence():
    # λx0.λx1.x0 : a → b → a
    t = Lam("x0", Lam("x1", Var("x0")))
    assert type_to_text(infer_type(t)) == "a → b → a"
