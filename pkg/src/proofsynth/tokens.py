"""Token-sequence representation of types and terms, and the inverse parsers.

This grammar is the wire format: guides receive and emit space-joined token
strings, and dataset files store the same encoding.  Canonical tokens use the
symbols "→", "×", "+" and "λ"; the ASCII aliases "->", "*" and "\\" are
accepted on input and normalized.
"""

from __future__ import annotations

from .terms import (
    App,
    Arrow,
    CasePair,
    CaseSum,
    HOLE,
    Hole,
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

ARROW = "→"
TIMES = "×"
PLUS = "+"
LPAREN = "("
RPAREN = ")"
LAMBDA = "λ"
DOT = "."
COMMA = ","
CASE = "case"
OF = "of"
LBRACE = "{"
RBRACE = "}"
SEMI = ";"
LEFT = "Left"
RIGHT = "Right"
HOLE_TOKEN = "_"
EOS = "<EOS>"

KEYWORDS = frozenset({CASE, OF, LEFT, RIGHT})
STRUCTURAL = frozenset(
    {ARROW, TIMES, PLUS, LPAREN, RPAREN, LAMBDA, DOT, COMMA, CASE, OF, LBRACE, RBRACE, SEMI, LEFT, RIGHT, HOLE_TOKEN}
)

_ALIASES = {"->": ARROW, "*": TIMES, "\\": LAMBDA}

TokenSeq = list[str]


class ParseError(Exception):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at token {position})")
        self.position = position


def normalize_token(tok: str) -> str:
    return _ALIASES.get(tok, tok)


def is_identifier(tok: str) -> bool:
    return (
        tok not in STRUCTURAL
        and tok != EOS
        and len(tok) > 0
        and all(c.isalnum() or c == "'" or c == "_" for c in tok)
        and not tok.startswith("_")
    )


def lex(text: str) -> TokenSeq:
    """Split a string into normalized tokens; spaces are optional around symbols."""
    out: TokenSeq = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("->", i):
            out.append(ARROW)
            i += 2
            continue
        if text.startswith(EOS, i):
            out.append(EOS)
            i += len(EOS)
            continue
        if c in "()λ.,{};→×+*\\":
            out.append(normalize_token(c))
            i += 1
            continue
        if c == "_":
            out.append(HOLE_TOKEN)
            i += 1
            continue
        if c.isalnum() or c == "'":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "'"):
                j += 1
            out.append(text[i:j])
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    return out


def join_tokens(tokens: TokenSeq) -> str:
    return " ".join(tokens)


def split_tokens(text: str) -> TokenSeq:
    return [normalize_token(t) for t in text.split()]


# --------------------------------------------------------------------------
# Types: minimal parenthesization; × and + bind tighter than → and are
# mutually parenthesized; → is right-associative, × and + left-associative.

def tokenize_type(t: TypeExpr) -> TokenSeq:
    out: TokenSeq = []
    _type_arrow(t, out)
    return out


def _type_arrow(t: TypeExpr, out: TokenSeq) -> None:
    if isinstance(t, Arrow):
        _type_operand(t.left, out)
        out.append(ARROW)
        _type_arrow(t.right, out)
    else:
        _type_operand(t, out)


def _type_operand(t: TypeExpr, out: TokenSeq) -> None:
    if isinstance(t, Prod):
        _type_chain(t, out, Prod, TIMES)
    elif isinstance(t, Sum):
        _type_chain(t, out, Sum, PLUS)
    else:
        _type_atom(t, out)


def _type_chain(t, out: TokenSeq, cls, op: str) -> None:
    if isinstance(t.left, cls):
        _type_chain(t.left, out, cls, op)
    else:
        _type_atom(t.left, out)
    out.append(op)
    _type_atom(t.right, out)


def _type_atom(t: TypeExpr, out: TokenSeq) -> None:
    if isinstance(t, TVar):
        out.append(t.name)
    else:
        out.append(LPAREN)
        _type_arrow(t, out)
        out.append(RPAREN)


class _Cursor:
    __slots__ = ("toks", "pos")

    def __init__(self, tokens: TokenSeq):
        self.toks = [normalize_token(t) for t in tokens]
        self.pos = 0

    def peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.pos)
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.peek()
        if got != tok:
            raise ParseError(f"expected {tok!r}, found {got!r}", self.pos)
        self.pos += 1

    def done(self) -> None:
        if self.pos < len(self.toks):
            raise ParseError(f"trailing input {self.peek()!r}", self.pos)


def parse_type(tokens: TokenSeq) -> TypeExpr:
    """Inverse of tokenize_type; accepts redundant parentheses."""
    cur = _Cursor(tokens)
    t = _parse_arrow(cur)
    cur.done()
    return t


def _parse_arrow(cur: _Cursor) -> TypeExpr:
    left = _parse_operand(cur)
    if cur.peek() == ARROW:
        cur.next()
        return Arrow(left, _parse_arrow(cur))
    return left


def _parse_operand(cur: _Cursor) -> TypeExpr:
    left = _parse_type_atom(cur)
    op = cur.peek()
    if op not in (TIMES, PLUS):
        return left
    cls = Prod if op == TIMES else Sum
    while cur.peek() == op:
        cur.next()
        left = cls(left, _parse_type_atom(cur))
    nxt = cur.peek()
    if nxt in (TIMES, PLUS):
        raise ParseError(f"mixing {op!r} and {nxt!r} requires parentheses", cur.pos)
    return left


def _parse_type_atom(cur: _Cursor) -> TypeExpr:
    tok = cur.peek()
    if tok == LPAREN:
        cur.next()
        t = _parse_arrow(cur)
        cur.expect(RPAREN)
        return t
    if tok is not None and is_identifier(tok):
        cur.next()
        return TVar(tok)
    raise ParseError(f"expected a type atom, found {tok!r}", cur.pos)


# --------------------------------------------------------------------------
# Terms: fully parenthesized, e.g.
#   ( λ x0 . ( case x0 of ( x1 , x2 ) → ( x2 , x1 ) ) )
# Holes render as "_" (debugging only; never sent to guides).

def tokenize_term(t: Term) -> TokenSeq:
    out: TokenSeq = []
    _term_tokens(t, out)
    return out


def _term_tokens(t: Term, out: TokenSeq) -> None:
    if isinstance(t, Hole):
        out.append(HOLE_TOKEN)
    elif isinstance(t, Var):
        out.append(t.name)
    elif isinstance(t, Lam):
        out.append(LPAREN)
        out.append(LAMBDA)
        out.append(t.var)
        out.append(DOT)
        _term_tokens(t.body, out)
        out.append(RPAREN)
    elif isinstance(t, App):
        out.append(LPAREN)
        _term_tokens(t.fun, out)
        _term_tokens(t.arg, out)
        out.append(RPAREN)
    elif isinstance(t, Pair):
        out.append(LPAREN)
        _term_tokens(t.fst, out)
        out.append(COMMA)
        _term_tokens(t.snd, out)
        out.append(RPAREN)
    elif isinstance(t, CasePair):
        out.extend((LPAREN, CASE))
        _term_tokens(t.scrut, out)
        out.extend((OF, LPAREN, t.fst, COMMA, t.snd, RPAREN, ARROW))
        _term_tokens(t.body, out)
        out.append(RPAREN)
    elif isinstance(t, InjL):
        out.extend((LPAREN, LEFT))
        _term_tokens(t.inner, out)
        out.append(RPAREN)
    elif isinstance(t, InjR):
        out.extend((LPAREN, RIGHT))
        _term_tokens(t.inner, out)
        out.append(RPAREN)
    elif isinstance(t, CaseSum):
        out.extend((LPAREN, CASE))
        _term_tokens(t.scrut, out)
        out.extend((OF, LBRACE, LEFT, t.lvar, ARROW))
        _term_tokens(t.left, out)
        out.extend((SEMI, RIGHT, t.rvar, ARROW))
        _term_tokens(t.right, out)
        out.extend((RBRACE, RPAREN))
    else:
        raise TypeError(f"not a term: {t!r}")


def parse_term(tokens: TokenSeq) -> Term:
    """Inverse of tokenize_term modulo alpha-equivalence.

    Redundant parentheses are accepted; unbound variables are allowed here
    (typing rejects them later).
    """
    cur = _Cursor(tokens)
    t = _parse_term(cur)
    cur.done()
    return t


def _parse_var(cur: _Cursor) -> str:
    tok = cur.peek()
    if tok is None or not is_identifier(tok):
        raise ParseError(f"expected a variable, found {tok!r}", cur.pos)
    cur.next()
    return tok


def _parse_term(cur: _Cursor) -> Term:
    tok = cur.peek()
    if tok == HOLE_TOKEN:
        cur.next()
        return HOLE
    if tok == LPAREN:
        cur.next()
        return _parse_inner(cur)
    if tok is not None and is_identifier(tok):
        cur.next()
        return Var(tok)
    raise ParseError(f"expected a term, found {tok!r}", cur.pos)


def _parse_inner(cur: _Cursor) -> Term:
    tok = cur.peek()
    if tok == LAMBDA:
        cur.next()
        var = _parse_var(cur)
        cur.expect(DOT)
        body = _parse_term(cur)
        cur.expect(RPAREN)
        return Lam(var, body)
    if tok == CASE:
        cur.next()
        scrut = _parse_term(cur)
        cur.expect(OF)
        return _parse_case_rest(cur, scrut)
    if tok == LEFT:
        cur.next()
        inner = _parse_term(cur)
        cur.expect(RPAREN)
        return InjL(inner)
    if tok == RIGHT:
        cur.next()
        inner = _parse_term(cur)
        cur.expect(RPAREN)
        return InjR(inner)
    first = _parse_term(cur)
    nxt = cur.peek()
    if nxt == RPAREN:
        cur.next()
        return first
    if nxt == COMMA:
        cur.next()
        snd = _parse_term(cur)
        cur.expect(RPAREN)
        return Pair(first, snd)
    arg = _parse_term(cur)
    cur.expect(RPAREN)
    return App(first, arg)


def _parse_case_rest(cur: _Cursor, scrut: Term) -> Term:
    tok = cur.peek()
    if tok == LPAREN:
        cur.next()
        fst = _parse_var(cur)
        cur.expect(COMMA)
        snd = _parse_var(cur)
        cur.expect(RPAREN)
        cur.expect(ARROW)
        body = _parse_term(cur)
        cur.expect(RPAREN)
        return CasePair(scrut, fst, snd, body)
    if tok == LBRACE:
        cur.next()
        cur.expect(LEFT)
        lvar = _parse_var(cur)
        cur.expect(ARROW)
        left = _parse_term(cur)
        cur.expect(SEMI)
        cur.expect(RIGHT)
        rvar = _parse_var(cur)
        cur.expect(ARROW)
        right = _parse_term(cur)
        cur.expect(RBRACE)
        cur.expect(RPAREN)
        return CaseSum(scrut, lvar, left, rvar, right)
    raise ParseError(f"expected '(' or '{{' after 'of', found {tok!r}", cur.pos)


def vocabulary(sequences) -> list[str]:
    """Sorted distinct tokens realized over an iterable of token sequences."""
    seen: set[str] = set()
    for seq in sequences:
        seen.update(seq)
    return sorted(seen)


def type_to_text(t: TypeExpr) -> str:
    return join_tokens(tokenize_type(t))


def term_to_text(t: Term) -> str:
    return join_tokens(tokenize_term(t))


def type_from_text(text: str) -> TypeExpr:
    return parse_type(lex(text))


def term_from_text(text: str) -> Term:
    return parse_term(lex(text))
