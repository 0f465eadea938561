import random

import pytest

from proofsynth.datagen import enumerate_closed_terms, sampled_pairs
from proofsynth.search import (
    CorruptedOracle,
    FixedGuide,
    NullGuide,
    SynthesisConfig,
    corrupt_term,
    gen_candidates,
    make_guide,
    synthesize,
)
from proofsynth.terms import (
    App,
    Arrow,
    CasePair,
    HOLE,
    InjL,
    Lam,
    Pair,
    TVar,
    Var,
    alpha_eq,
    canonical_rename,
    find_beta_eta_redex,
    has_hole,
    size,
)
from proofsynth.tokens import term_from_text, type_from_text
from proofsynth.treedist import CostKind, tree_edit_distance
from proofsynth.typecheck import EMPTY, check_partial

IDENT_GOAL = Arrow(TVar("a"), TVar("a"))
SWAP_GOAL = type_from_text("a1 × a2 → a2 × a1")
SWAP_GUIDE = term_from_text("( λ x0 . ( case x0 of ( x1 , x2 ) → ( x1 , x1 ) ) )")
SWAP_PROOF = term_from_text("( λ x0 . ( case x0 of ( x1 , x2 ) → ( x2 , x1 ) ) )")


# -- gen_candidates ------------------------------------------------------------

def test_gen_candidates_from_bare_hole():
    cands = gen_candidates(HOLE, IDENT_GOAL)
    assert any(c == Lam("x0", HOLE) for c in cands)
    assert all(not isinstance(c, Pair) for c in cands)  # a pair cannot have arrow type


def test_gen_candidates_under_binder():
    cands = gen_candidates(Lam("x0", HOLE), IDENT_GOAL)
    assert any(c == Lam("x0", Var("x0")) for c in cands)
    assert all(not (isinstance(c, Lam) and isinstance(c.body, Lam)) for c in cands)


def test_gen_candidates_atom_goal():
    cands = gen_candidates(HOLE, TVar("a"))
    assert any(isinstance(c, App) for c in cands)  # argument type is a metavariable
    assert all(not isinstance(c, (Var, Lam, Pair, InjL)) for c in cands)


def test_gen_candidates_requires_hole():
    with pytest.raises(ValueError, match="no hole"):
        gen_candidates(Var("x"), TVar("a"))


def test_gen_candidates_prunes_redexes():
    # filling the function position of an application with a lambda is a beta-redex
    t = App(HOLE, HOLE)
    cands = gen_candidates(t, TVar("a"))
    assert all(find_beta_eta_redex(c) is None for c in cands)


def test_gen_candidates_respects_size_cap():
    cands = gen_candidates(Lam("x0", HOLE), IDENT_GOAL, max_candidate_size=2)
    assert cands == [Lam("x0", Var("x0"))]


def test_gen_candidates_deterministic():
    a = gen_candidates(Lam("x0", HOLE), IDENT_GOAL)
    b = gen_candidates(Lam("x0", HOLE), IDENT_GOAL)
    assert a == b


def test_fresh_binders_follow_canonical_naming():
    t = Lam("x0", CasePair(Var("x0"), "x1", "x2", HOLE))
    for cand in gen_candidates(t, SWAP_GOAL):
        assert canonical_rename(cand) == cand


# -- synthesize ----------------------------------------------------------------

def test_identity_is_minimal():
    result = synthesize(IDENT_GOAL, SynthesisConfig(cost_kind=CostKind.BF, max_pops=1000))
    assert result.outcome == "proved"
    assert alpha_eq(result.proof, Lam("x", Var("x")))
    assert size(result.proof) == 2


def test_swap_with_table2_guide():
    config = SynthesisConfig(
        cost_kind=CostKind.ED, max_pops=20_000, guide_source=FixedGuide(SWAP_GUIDE)
    )
    result = synthesize(SWAP_GOAL, config)
    assert result.outcome == "proved"
    assert alpha_eq(result.proof, SWAP_PROOF)
    bf = synthesize(SWAP_GOAL, SynthesisConfig(cost_kind=CostKind.BF, max_pops=20_000))
    assert bf.outcome == "proved"
    assert result.pops < bf.pops


def test_unprovable_goal_hits_budget():
    result = synthesize(TVar("a"), SynthesisConfig(cost_kind=CostKind.BF, max_pops=400))
    assert result.outcome == "budget"
    assert result.proof is None


def test_soundness_and_normality(rng):
    for goal, reference in sampled_pairs(15, seed=5, sizes=range(2, 7)):
        for kind in (CostKind.BF, CostKind.ED, CostKind.IM):
            spec = NullGuide() if kind is CostKind.BF else CorruptedOracle(1)
            config = SynthesisConfig(cost_kind=kind, max_pops=4000, seed=3, guide_source=spec)
            result = synthesize(goal, config, reference=reference)
            if result.outcome != "proved":
                continue
            assert not has_hole(result.proof)
            assert check_partial(EMPTY, result.proof, goal)
            assert find_beta_eta_redex(result.proof) is None
            assert result.guide_distance == tree_edit_distance(result.guide, result.proof)


def test_bf_finds_minimal_normal_proof():
    # against exhaustive size-bounded enumeration of beta/eta-normal proofs
    for goal, _ in sampled_pairs(12, seed=21, sizes=range(2, 7), normal_only=True):
        result = synthesize(goal, SynthesisConfig(cost_kind=CostKind.BF, max_pops=30_000))
        assert result.outcome == "proved"
        minimal = next(
            s
            for s in range(1, 13)
            if any(True for _ in enumerate_closed_terms(s, normal_only=True, goal=goal))
        )
        assert size(result.proof) == minimal


def test_determinism():
    config = SynthesisConfig(cost_kind=CostKind.ED, max_pops=5000, seed=42, guide_source=CorruptedOracle(2))
    a = synthesize(SWAP_GOAL, config, reference=SWAP_PROOF)
    b = synthesize(SWAP_GOAL, config, reference=SWAP_PROOF)
    assert (a.outcome, a.pops, a.pushes) == (b.outcome, b.pops, b.pushes)
    assert a.proof == b.proof
    assert a.guide == b.guide


def test_no_key_popped_twice():
    trace: list[str] = []
    synthesize(SWAP_GOAL, SynthesisConfig(cost_kind=CostKind.BF, max_pops=2000), pop_trace=trace)
    assert len(trace) == len(set(trace))


def test_ed_with_null_guide_matches_bf_pop_order():
    for goal in (IDENT_GOAL, SWAP_GOAL, type_from_text("a -> b -> a")):
        t_bf: list[str] = []
        t_ed: list[str] = []
        synthesize(goal, SynthesisConfig(cost_kind=CostKind.BF, max_pops=300), pop_trace=t_bf)
        synthesize(
            goal,
            SynthesisConfig(cost_kind=CostKind.ED, max_pops=300, guide_source=NullGuide()),
            pop_trace=t_ed,
        )
        assert t_bf == t_ed


# -- guides --------------------------------------------------------------------

def test_make_guide_null_and_fixed():
    assert make_guide(IDENT_GOAL, NullGuide()) == HOLE
    assert make_guide(IDENT_GOAL, FixedGuide(SWAP_GUIDE)) == SWAP_GUIDE


def test_corrupted_oracle_zero_edits():
    assert make_guide(IDENT_GOAL, CorruptedOracle(0), reference=SWAP_PROOF) == SWAP_PROOF


def test_corrupted_oracle_needs_reference():
    with pytest.raises(ValueError):
        make_guide(IDENT_GOAL, CorruptedOracle(1))


def test_corrupted_oracle_single_edit_distance():
    ident = Lam("x", Var("x"))
    guide = make_guide(IDENT_GOAL, CorruptedOracle(1), reference=ident, seed=7)
    assert tree_edit_distance(ident, guide) == 1


def test_corrupt_term_distance_bound(rng):
    from conftest import rand_raw_term

    for _ in range(100):
        t = rand_raw_term(rng, rng.randint(3, 8))
        k = rng.randint(1, 4)
        damaged = corrupt_term(t, k, random.Random(rng.randrange(1 << 30)))
        d = tree_edit_distance(t, damaged)
        assert d <= k  # edits may cancel, but each moves the tree at most one step
        if k == 1:
            assert d == 1


def test_config_validation():
    with pytest.raises(ValueError):
        SynthesisConfig(max_pops=0)
    with pytest.raises(ValueError):
        SynthesisConfig(max_candidate_size=0)
