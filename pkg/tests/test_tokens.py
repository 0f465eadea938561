import pytest

from proofsynth.terms import (
    Arrow,
    CasePair,
    HOLE,
    InjL,
    Lam,
    Pair,
    Prod,
    Sum,
    TVar,
    Var,
    alpha_eq,
)
from proofsynth.tokens import (
    ParseError,
    lex,
    parse_term,
    parse_type,
    term_from_text,
    term_to_text,
    tokenize_term,
    tokenize_type,
    type_from_text,
    type_to_text,
    vocabulary,
)
from conftest import rand_raw_term, rand_type


def test_tokenize_type_paper_example():
    t = Arrow(TVar("α"), Arrow(Arrow(TVar("α"), TVar("β")), TVar("β")))
    assert tokenize_type(t) == ["α", "→", "(", "α", "→", "β", ")", "→", "β"]


def test_tokenize_type_atom():
    assert tokenize_type(TVar("α")) == ["α"]


def test_tokenize_type_swap():
    t = Arrow(Prod(TVar("α1"), TVar("α2")), Prod(TVar("α2"), TVar("α1")))
    assert tokenize_type(t) == ["α1", "×", "α2", "→", "α2", "×", "α1"]


def test_product_and_sum_mutually_parenthesized():
    t = Sum(Prod(TVar("a"), TVar("b")), TVar("c"))
    assert type_to_text(t) == "( a × b ) + c"
    t = Prod(TVar("a"), Sum(TVar("b"), TVar("c")))
    assert type_to_text(t) == "a × ( b + c )"
    with pytest.raises(ParseError):
        parse_type(["a", "×", "b", "+", "c"])


def test_operator_associativity():
    assert type_from_text("a -> b -> c") == Arrow(TVar("a"), Arrow(TVar("b"), TVar("c")))
    assert type_from_text("a * b * c") == Prod(Prod(TVar("a"), TVar("b")), TVar("c"))
    assert type_to_text(Prod(TVar("a"), Prod(TVar("b"), TVar("c")))) == "a × ( b × c )"


def test_tokenize_term_examples():
    assert tokenize_term(Lam("x", Var("x"))) == ["(", "λ", "x", ".", "x", ")"]
    assert tokenize_term(Pair(Var("x1"), Var("x1"))) == ["(", "x1", ",", "x1", ")"]
    assert tokenize_term(InjL(Var("x0"))) == ["(", "Left", "x0", ")"]
    assert tokenize_term(HOLE) == ["_"]


def test_tokenize_table2_row1():
    t = Lam("x0", CasePair(Var("x0"), "x1", "x2", Pair(Var("x1"), Var("x1"))))
    assert (
        term_to_text(t)
        == "( λ x0 . ( case x0 of ( x1 , x2 ) → ( x1 , x1 ) ) )"
    )
    assert parse_term(tokenize_term(t)) == t


def test_parse_type_examples():
    assert parse_type(["α", "→", "α"]) == Arrow(TVar("α"), TVar("α"))
    with pytest.raises(ParseError) as e:
        parse_type(["α", "→"])
    assert e.value.position == 2
    roundtrip = parse_type(tokenize_type(Arrow(TVar("α"), Arrow(Arrow(TVar("α"), TVar("β")), TVar("β")))))
    assert roundtrip == Arrow(TVar("α"), Arrow(Arrow(TVar("α"), TVar("β")), TVar("β")))


def test_parse_term_examples():
    assert parse_term(["(", "λ", "x", ".", "x", ")"]) == Lam("x", Var("x"))
    with pytest.raises(ParseError):
        parse_term(["(", "λ", "x0", "."])
    with pytest.raises(ParseError):
        parse_term([])


def test_redundant_parentheses():
    assert parse_term(["(", "(", "λ", "x", ".", "x", ")", ")"]) == Lam("x", Var("x"))
    assert parse_term(["(", "x", ")"]) == Var("x")
    assert parse_type(["(", "(", "a", ")", ")"]) == TVar("a")


def test_ascii_aliases_accepted():
    assert type_from_text("a -> b * c") == Arrow(TVar("a"), Prod(TVar("b"), TVar("c")))
    assert term_from_text("( \\ x . x )") == Lam("x", Var("x"))
    assert lex("a->b") == ["a", "→", "b"]


def test_type_roundtrip(rng):
    for _ in range(1000):
        t = rand_type(rng, 4)
        assert parse_type(tokenize_type(t)) == t


def test_term_roundtrip(rng):
    for _ in range(1000):
        t = rand_raw_term(rng, rng.randint(2, 9))
        back = parse_term(tokenize_term(t))
        assert alpha_eq(t, back)
        # tokenization is a pure function of the term
        assert tokenize_term(t) == tokenize_term(t)


def test_trailing_tokens_rejected():
    with pytest.raises(ParseError):
        parse_term(["(", "λ", "x", ".", "x", ")", "x"])
    with pytest.raises(ParseError):
        parse_type(["a", "a"])


def test_vocabulary_is_finite_and_enumerable():
    from proofsynth.datagen import training_dataset

    entries = training_dataset(20, seed=11)
    vocab = vocabulary(
        [e.type_tokens.split() for e in entries] + [e.term_tokens.split() for e in entries]
    )
    assert 0 < len(vocab) < 60
    assert all(isinstance(tok, str) for tok in vocab)
    # a second pass over the same data realizes the same vocabulary
    assert vocab == vocabulary(
        [e.type_tokens.split() for e in entries] + [e.term_tokens.split() for e in entries]
    )
