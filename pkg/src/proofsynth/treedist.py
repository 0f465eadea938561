"""Ordered tree edit distance on term ASTs, imitate, and the cost functions.

Distance is Zhang-Shasha with unit relabel/insert/delete costs over labeled
trees derived from terms.  Binder and variable names participate in labels
(candidates and guides share the same canonical x0, x1, ... discipline, so
names align); pass ignore_names=True to compare shapes only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ._kernels import load_kernel
from .terms import (
    App,
    CasePair,
    CaseSum,
    Hole,
    InjL,
    InjR,
    Lam,
    Pair,
    Term,
    Var,
    children,
    rename_frees,
    size,
)

_tree_distance, _BACKEND = load_kernel()


def kernel_backend() -> str:
    """Name of the active distance kernel ("cython" or "pure-python")."""
    return _BACKEND


@dataclass(frozen=True, slots=True)
class LabeledTree:
    label: str
    children: tuple["LabeledTree", ...] = ()


def term_label(t: Term, ignore_names: bool = False) -> str:
    if isinstance(t, Hole):
        return "hole"
    if isinstance(t, Var):
        return "var" if ignore_names else f"var:{t.name}"
    if isinstance(t, Lam):
        return "lam" if ignore_names else f"lam:{t.var}"
    if isinstance(t, App):
        return "app"
    if isinstance(t, Pair):
        return "pair"
    if isinstance(t, CasePair):
        return "casepair" if ignore_names else f"casepair:{t.fst},{t.snd}"
    if isinstance(t, InjL):
        return "left"
    if isinstance(t, InjR):
        return "right"
    if isinstance(t, CaseSum):
        return "casesum" if ignore_names else f"casesum:{t.lvar},{t.rvar}"
    raise TypeError(f"not a term: {t!r}")


def term_to_tree(t: Term, ignore_names: bool = False) -> LabeledTree:
    return LabeledTree(
        term_label(t, ignore_names),
        tuple(term_to_tree(c, ignore_names) for c in children(t)),
    )


@dataclass(frozen=True, slots=True)
class PreparedTree:
    """Postorder arrays consumed by the distance kernels."""

    labels: tuple[str, ...]
    lmds: list[int]
    keyroots: list[int]


def prepare_tree(root: LabeledTree) -> PreparedTree:
    labels: list[str] = []
    lmds: list[int] = []

    def go(node: LabeledTree) -> int:
        first: int | None = None
        for c in node.children:
            l = go(c)
            if first is None:
                first = l
        idx = len(labels)
        labels.append(node.label)
        lmds.append(first if first is not None else idx)
        return lmds[idx]

    go(root)
    keyroots: list[int] = []
    seen: set[int] = set()
    for i in range(len(lmds) - 1, -1, -1):
        if lmds[i] not in seen:
            seen.add(lmds[i])
            keyroots.append(i)
    keyroots.reverse()
    return PreparedTree(tuple(labels), lmds, keyroots)


def prepare_term(t: Term, ignore_names: bool = False) -> PreparedTree:
    return prepare_tree(term_to_tree(t, ignore_names))


def distance_prepared(a: PreparedTree, b: PreparedTree) -> int:
    intern: dict[str, int] = {}
    la = [intern.setdefault(l, len(intern)) for l in a.labels]
    lb = [intern.setdefault(l, len(intern)) for l in b.labels]
    return _tree_distance(la, a.lmds, a.keyroots, lb, b.lmds, b.keyroots)


def tree_edit_distance(a: Term, b: Term, ignore_names: bool = False) -> int:
    """Zhang-Shasha distance between the labeled-tree images of a and b."""
    return distance_prepared(prepare_term(a, ignore_names), prepare_term(b, ignore_names))


def labeled_tree_distance(a: LabeledTree, b: LabeledTree) -> int:
    """Distance between two labeled trees directly (no term involved)."""
    return distance_prepared(prepare_tree(a), prepare_tree(b))


# --------------------------------------------------------------------------
# imitate: plug guide subtrees into the holes of a candidate where the two
# terms agree structurally; any mismatch keeps the candidate's subtree.

def imitate(n: Term, m: Term) -> Term:
    """Candidate n with holes replaced by the matching subtrees of guide m.

    Structural recursion: a hole takes the whole corresponding guide subtree;
    matching constructors recurse componentwise (guide binders renamed to the
    candidate's before descending); anything else returns n unchanged.
    """
    if isinstance(n, Hole):
        return m
    if isinstance(n, Lam) and isinstance(m, Lam):
        body = m.body if m.var == n.var else rename_frees(m.body, {m.var: n.var})
        return Lam(n.var, imitate(n.body, body))
    if isinstance(n, App) and isinstance(m, App):
        return App(imitate(n.fun, m.fun), imitate(n.arg, m.arg))
    if isinstance(n, Pair) and isinstance(m, Pair):
        return Pair(imitate(n.fst, m.fst), imitate(n.snd, m.snd))
    if isinstance(n, CasePair) and isinstance(m, CasePair):
        mapping = {k: v for k, v in ((m.fst, n.fst), (m.snd, n.snd)) if k != v}
        body = rename_frees(m.body, mapping)
        return CasePair(imitate(n.scrut, m.scrut), n.fst, n.snd, imitate(n.body, body))
    if isinstance(n, InjL) and isinstance(m, InjL):
        return InjL(imitate(n.inner, m.inner))
    if isinstance(n, InjR) and isinstance(m, InjR):
        return InjR(imitate(n.inner, m.inner))
    if isinstance(n, CaseSum) and isinstance(m, CaseSum):
        left = m.left if m.lvar == n.lvar else rename_frees(m.left, {m.lvar: n.lvar})
        right = m.right if m.rvar == n.rvar else rename_frees(m.right, {m.rvar: n.rvar})
        return CaseSum(
            imitate(n.scrut, m.scrut),
            n.lvar,
            imitate(n.left, left),
            n.rvar,
            imitate(n.right, right),
        )
    return n


# --------------------------------------------------------------------------
# Cost functions ranking candidates against a guide term.

class CostKind(enum.Enum):
    BF = "bf"
    ED = "ed"
    IM = "im"


def cost(kind: CostKind, guide: Term, candidate: Term) -> int:
    """Priority of a candidate: bf ignores the guide, ed adds the tree edit
    distance to it, im adds the distance after holes borrow guide subtrees.

    With a bare-hole guide, ed doubles every bf cost (the distance to a lone
    hole equals the candidate's size), so it pops candidates in exactly the
    bf order.
    """
    if kind is CostKind.BF:
        return size(candidate)
    if kind is CostKind.ED:
        return size(candidate) + tree_edit_distance(guide, candidate)
    if kind is CostKind.IM:
        return size(candidate) + tree_edit_distance(guide, imitate(candidate, guide))
    raise ValueError(f"unknown cost kind {kind!r}")


class CostEvaluator:
    """cost(kind, guide, -) with the guide side prepared once."""

    __slots__ = ("kind", "guide", "_prepared")

    def __init__(self, kind: CostKind, guide: Term):
        self.kind = kind
        self.guide = guide
        self._prepared = prepare_term(guide)

    def __call__(self, candidate: Term) -> int:
        if self.kind is CostKind.BF:
            return size(candidate)
        if self.kind is CostKind.ED:
            return size(candidate) + distance_prepared(self._prepared, prepare_term(candidate))
        filled = imitate(candidate, self.guide)
        return size(candidate) + distance_prepared(self._prepared, prepare_term(filled))
