

from proofsynth.repair import (
    Delete,
    Keep,
    apply_script,
    nearest_term,
    seq_edit_distance,
)
from proofsynth.terms import Lam, Var, alpha_eq
from proofsynth.tokens import ParseError, parse_term, tokenize_term
from conftest import rand_raw_term

TERM_VOCAB = ["(", ")", "λ", ".", ",", "case", "of", "→", "{", "}", ";", "Left", "Right", "x0", "x1"]


def _dp_distance(a, b):
    """Classic O(nm) insert/delete (LCS) distance."""
    n, m = len(a), len(b)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dp[i][0] = i
    for j in range(m + 1):
        dp[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if a[i - 1] == b[j - 1]:
                dp[i][j] = dp[i - 1][j - 1]
            else:
                dp[i][j] = 1 + min(dp[i - 1][j], dp[i][j - 1])
    return dp[n][m]


def _rand_seq(rng, vocab=TERM_VOCAB, lo=0, hi=12):
    return [rng.choice(vocab) for _ in range(rng.randint(lo, hi))]


# -- Myers -------------------------------------------------------------------

def test_distance_zero_on_equal():
    assert seq_edit_distance(["α", "→", "α"], ["α", "→", "α"])[0] == 0


def test_single_deletion():
    d, script = seq_edit_distance(["x", ")"], ["x"])
    assert d == 1
    assert script == [Keep("x"), Delete(1)]


def test_myers_equals_dp(rng):
    for _ in range(1000):
        a, b = _rand_seq(rng), _rand_seq(rng)
        d, script = seq_edit_distance(a, b)
        assert d == _dp_distance(a, b)
        assert apply_script(script, a) == b
        assert d == sum(1 for op in script if not isinstance(op, Keep))


def test_distance_symmetry_and_triangle(rng):
    for _ in range(300):
        a, b, c = _rand_seq(rng, hi=8), _rand_seq(rng, hi=8), _rand_seq(rng, hi=8)
        dab = seq_edit_distance(a, b)[0]
        assert dab == seq_edit_distance(b, a)[0]
        assert dab <= seq_edit_distance(a, c)[0] + seq_edit_distance(c, b)[0]


# -- nearest_term -------------------------------------------------------------

def test_already_parsable():
    toks = tokenize_term(Lam("x", Var("x")))
    r = nearest_term(toks)
    assert r.distance == 0
    assert r.term == Lam("x", Var("x"))
    assert not r.budget_exceeded


def test_dropped_paren():
    toks = tokenize_term(Lam("x", Var("x")))[:-1]
    r = nearest_term(toks)
    assert r.distance == 1
    assert alpha_eq(r.term, Lam("x", Var("x")))


def test_empty_input():
    r = nearest_term([])
    assert r.distance == 1
    assert r.term == Var("x0")


def test_unknown_tokens_are_deleted():
    # "×" is a type token, never valid in a term
    r = nearest_term(["×"])
    assert r.term == Var("x0")
    assert r.distance == 2  # delete the stray token, insert a variable


def _edit_neighbors(seq, vocab):
    for i in range(len(seq)):
        yield seq[:i] + seq[i + 1 :]
    for i in range(len(seq) + 1):
        for tok in vocab:
            yield seq[:i] + [tok] + seq[i:]


def _parses_hole_free(seq):
    if "_" in seq:
        return False
    try:
        parse_term(list(seq))
        return True
    except ParseError:
        return False


def assert_distance_minimal(corrupted, reported, vocab):
    """BFS over edit scripts: no level below the reported distance may contain
    a parsable hole-free sequence.  The repaired output witnesses the level
    at the reported distance itself."""
    if reported == 0:
        assert _parses_hole_free(corrupted)
        return
    assert not _parses_hole_free(corrupted)
    frontier = {tuple(corrupted)}
    for level in range(1, reported):
        nxt = set()
        for s in frontier:
            for nb in _edit_neighbors(list(s), vocab):
                assert not _parses_hole_free(nb), (
                    f"parse at distance {level}, but {reported} was reported: {nb}"
                )
                nxt.add(tuple(nb))
        frontier = nxt


def corrupt_tokens(rng, toks, k, vocab):
    out = list(toks)
    for _ in range(k):
        if out and rng.random() < 0.5:
            del out[rng.randrange(len(out))]
        else:
            out.insert(rng.randint(0, len(out)), rng.choice(vocab))
    return out


def test_minimality_against_bfs_oracle(rng):
    for _ in range(60):
        m = rand_raw_term(rng, rng.randint(2, 7))
        toks = tokenize_term(m)
        vocab = sorted(set(TERM_VOCAB) | set(toks))
        corrupted = corrupt_tokens(rng, toks, rng.randint(0, 2), vocab)
        r = nearest_term(corrupted)
        assert not r.budget_exceeded
        # the witness sequence is exactly as far from the input as reported
        assert seq_edit_distance(corrupted, list(r.tokens))[0] == r.distance
        assert_distance_minimal(corrupted, r.distance, vocab)


def test_idempotence(rng):
    for _ in range(40):
        m = rand_raw_term(rng, rng.randint(2, 6))
        corrupted = tokenize_term(m)[:-1] + [rng.choice(TERM_VOCAB)]
        first = nearest_term(corrupted)
        again = nearest_term(tokenize_term(first.term))
        assert again.distance == 0
        assert alpha_eq(again.term, first.term)


def test_budget_fallback_is_parsable():
    bad = [")", ")", "case", "{", "(", ","] * 4
    r = nearest_term(bad, node_budget=25)
    assert r.budget_exceeded
    assert parse_term(list(r.tokens)) is not None
    full = nearest_term(bad)
    assert full.distance <= r.distance


def test_repaired_tokens_parse_to_term(rng):
    for _ in range(50):
        seq = _rand_seq(rng, hi=10)
        r = nearest_term(seq)
        assert parse_term(list(r.tokens)) == r.term
        d, _ = seq_edit_distance(seq, list(r.tokens))
        assert d <= r.distance
