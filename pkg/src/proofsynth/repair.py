"""Recovering the closest parsable token sequence from a broken guide output.

Two layers: Myers' insert/delete edit distance between two plain token
sequences, and nearest_term, a uniform-cost search over (parser state, input
position) pairs that finds a term whose token sequence is at minimal
insert/delete distance from the input.  Every input is repairable; the empty
sequence repairs to a single variable at distance 1.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .terms import Term
from .tokens import (
    ARROW,
    CASE,
    COMMA,
    DOT,
    LAMBDA,
    LBRACE,
    LEFT,
    LPAREN,
    OF,
    RBRACE,
    RIGHT,
    RPAREN,
    SEMI,
    TokenSeq,
    is_identifier,
    normalize_token,
    parse_term,
)


# --------------------------------------------------------------------------
# Myers O((N+M)D) insert/delete distance with a witnessing script.

@dataclass(frozen=True, slots=True)
class Keep:
    token: str


@dataclass(frozen=True, slots=True)
class Insert:
    token: str
    position: int


@dataclass(frozen=True, slots=True)
class Delete:
    position: int


EditOp = Keep | Insert | Delete
EditScript = list


def seq_edit_distance(a: TokenSeq, b: TokenSeq) -> tuple[int, EditScript]:
    """Minimal insertions+deletions turning a into b, with a witnessing script."""
    n, m = len(a), len(b)
    v: dict[int, int] = {1: 0}
    trace: list[dict[int, int]] = []
    final_d = -1
    for d in range(n + m + 1):
        trace.append(dict(v))
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and v.get(k - 1, 0) < v.get(k + 1, 0)):
                x = v.get(k + 1, 0)
            else:
                x = v.get(k - 1, 0) + 1
            y = x - k
            while x < n and y < m and a[x] == b[y]:
                x += 1
                y += 1
            v[k] = x
            if x >= n and y >= m:
                final_d = d
                break
        if final_d >= 0:
            break
    assert final_d >= 0
    return final_d, _backtrack(trace, a, b, final_d)


def _backtrack(trace: list[dict[int, int]], a: TokenSeq, b: TokenSeq, final_d: int) -> EditScript:
    ops: EditScript = []
    x, y = len(a), len(b)
    for d in range(final_d, -1, -1):
        v = trace[d]
        k = x - y
        if k == -d or (k != d and v.get(k - 1, 0) < v.get(k + 1, 0)):
            prev_k = k + 1
        else:
            prev_k = k - 1
        prev_x = v.get(prev_k, 0)
        prev_y = prev_x - prev_k
        while x > prev_x and y > prev_y:
            ops.append(Keep(a[x - 1]))
            x -= 1
            y -= 1
        if d > 0:
            if x == prev_x:
                ops.append(Insert(b[prev_y], x))
            else:
                ops.append(Delete(x - 1))
            x, y = prev_x, prev_y
    ops.reverse()
    return ops


def apply_script(script: EditScript, source: TokenSeq) -> TokenSeq:
    """Replay a script against its source, producing the target sequence."""
    out: TokenSeq = []
    i = 0
    for op in script:
        if isinstance(op, Keep):
            assert source[i] == op.token, "script does not match source"
            out.append(source[i])
            i += 1
        elif isinstance(op, Delete):
            i += 1
        else:
            out.append(op.token)
    assert i == len(source), "script does not consume the source"
    return out


# --------------------------------------------------------------------------
# nearest_term: language edit distance over the hole-free term grammar.
#
# Grammar (top of stack leftmost; _VAR matches any variable identifier):
#   T -> VAR | ( I
#   I -> λ VAR . T )  |  case T of K  |  Left T )  |  Right T )  |  T J
#   J -> )  |  , T )  |  T )
#   K -> ( VAR , VAR ) → T )  |  { Left VAR → T ; Right VAR → T } )
# Transitions: shift a matching token (cost 0), insert an expected token
# (cost 1), delete the current input token (cost 1).

_T, _I, _J, _K = 0, 1, 2, 3
_VAR = 4

_PRODUCTIONS: dict[int, tuple[tuple, ...]] = {
    _T: ((_VAR,), (LPAREN, _I)),
    _I: (
        (LAMBDA, _VAR, DOT, _T, RPAREN),
        (CASE, _T, OF, _K),
        (LEFT, _T, RPAREN),
        (RIGHT, _T, RPAREN),
        (_T, _J),
    ),
    _J: ((RPAREN,), (COMMA, _T, RPAREN), (_T, RPAREN)),
    _K: (
        (LPAREN, _VAR, COMMA, _VAR, RPAREN, ARROW, _T, RPAREN),
        (LBRACE, LEFT, _VAR, ARROW, _T, SEMI, RIGHT, _VAR, ARROW, _T, RBRACE, RPAREN),
    ),
}

_INSERT_NAME = "x0"


def _matches(symbol, token: str) -> bool:
    if symbol == _VAR:
        return is_identifier(token)
    return token == symbol


def _completions() -> dict[int, tuple[int, tuple[str, ...]]]:
    """Cheapest all-insertion completion (cost, tokens) for each nonterminal."""
    comp: dict[int, tuple[int, tuple[str, ...]]] = {}

    def symbol_completion(sym) -> tuple[int, tuple[str, ...]] | None:
        if isinstance(sym, str):
            return (1, (sym,))
        if sym == _VAR:
            return (1, (_INSERT_NAME,))
        return comp.get(sym)

    changed = True
    while changed:
        changed = False
        for nt, prods in _PRODUCTIONS.items():
            best = comp.get(nt)
            for prod in prods:
                total, toks = 0, []
                ok = True
                for sym in prod:
                    sc = symbol_completion(sym)
                    if sc is None:
                        ok = False
                        break
                    total += sc[0]
                    toks.extend(sc[1])
                if ok and (best is None or total < best[0]):
                    best = (total, tuple(toks))
                    changed = True
            if best is not None:
                comp[nt] = best
    return comp


_COMPLETION = _completions()


def _complete_stack(stack: tuple) -> tuple[int, tuple[str, ...]]:
    cost, toks = 0, []
    for sym in stack:
        if isinstance(sym, str):
            cost += 1
            toks.append(sym)
        elif sym == _VAR:
            cost += 1
            toks.append(_INSERT_NAME)
        else:
            c, t = _COMPLETION[sym]
            cost += c
            toks.extend(t)
    return cost, tuple(toks)


@dataclass(slots=True)
class RepairResult:
    term: Term
    distance: int
    tokens: tuple[str, ...] = field(default=())
    budget_exceeded: bool = False


def nearest_term(tokens: TokenSeq, node_budget: int = 1_000_000) -> RepairResult:
    """Hole-free term whose rendering is closest to the input in insert/delete
    distance, together with that distance.

    Ties break deterministically: among minimal-distance repairs the search
    prefers fewer output tokens, then the lexicographically smallest output.
    On budget exhaustion the best partial repair found is completed by forced
    insertions and returned with budget_exceeded set.
    """
    toks = [normalize_token(t) for t in tokens]
    n = len(toks)
    # heap entries: (cost, out_len, out, counter, stack, pos)
    heap: list[tuple] = [(0, 0, (), 0, (_T,), 0)]
    best_cost: dict[tuple, int] = {((_T,), 0): 0}
    closed: set[tuple] = set()
    counter = 1
    pops = 0
    fallback: tuple[int, int, tuple[str, ...]] | None = None  # (est, outlen, out+completion)

    def push(c: int, o: tuple, st: tuple, p: int) -> None:
        nonlocal counter
        key = (st, p)
        if key in closed:
            return
        rec = best_cost.get(key)
        if rec is not None and rec < c:
            return
        best_cost[key] = c
        heapq.heappush(heap, (c, len(o), o, counter, st, p))
        counter += 1

    while heap:
        cost, outlen, out, _, stack, pos = heapq.heappop(heap)
        state = (stack, pos)
        if state in closed:
            continue
        closed.add(state)
        pops += 1

        if not stack and pos == n:
            term = parse_term(list(out))
            return RepairResult(term, cost, out)

        comp_cost, comp_toks = _complete_stack(stack)
        est_key = (cost + comp_cost + (n - pos), outlen + len(comp_toks), out + comp_toks)
        if fallback is None or est_key < fallback:
            fallback = est_key

        if pops >= node_budget:
            break

        if pos < n:
            push(cost + 1, out, stack, pos + 1)  # delete input token
        if not stack:
            continue
        top, rest = stack[0], stack[1:]
        if isinstance(top, str) or top == _VAR:
            if pos < n and _matches(top, toks[pos]):
                push(cost, out + (toks[pos],), rest, pos + 1)  # shift
            ins = _INSERT_NAME if top == _VAR else top
            push(cost + 1, out + (ins,), rest, pos)  # insert expected token
        else:
            for prod in _PRODUCTIONS[top]:
                push(cost, out, prod + rest, pos)

    assert fallback is not None
    est, _, full = fallback
    term = parse_term(list(full))
    return RepairResult(term, est, full, budget_exceeded=True)
