"""ASTs for propositions (types) and proof terms, plus structural utilities.

Types are the negation-free propositional connectives: atoms, implication,
conjunction (product) and disjunction (sum).  Proof terms are the simply
typed lambda calculus with pairs, sums and a hole constructor standing for
an unfinished proof obligation.  All values are immutable; operations never
mutate their inputs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


# --------------------------------------------------------------------------
# Types

class TypeExpr:
    """Base class for proposition ASTs."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class TVar(TypeExpr):
    name: str


@dataclass(frozen=True, slots=True)
class Arrow(TypeExpr):
    left: TypeExpr
    right: TypeExpr


@dataclass(frozen=True, slots=True)
class Prod(TypeExpr):
    left: TypeExpr
    right: TypeExpr


@dataclass(frozen=True, slots=True)
class Sum(TypeExpr):
    left: TypeExpr
    right: TypeExpr


def type_atoms(t: TypeExpr) -> list[str]:
    """Atom names in first-occurrence (preorder) order, without duplicates."""
    seen: list[str] = []

    def walk(t: TypeExpr) -> None:
        if isinstance(t, TVar):
            if t.name not in seen:
                seen.append(t.name)
        elif isinstance(t, (Arrow, Prod, Sum)):
            walk(t.left)
            walk(t.right)

    walk(t)
    return seen


def rename_atoms(t: TypeExpr, mapping: dict[str, str]) -> TypeExpr:
    if isinstance(t, TVar):
        return TVar(mapping.get(t.name, t.name))
    if isinstance(t, Arrow):
        return Arrow(rename_atoms(t.left, mapping), rename_atoms(t.right, mapping))
    if isinstance(t, Prod):
        return Prod(rename_atoms(t.left, mapping), rename_atoms(t.right, mapping))
    return Sum(rename_atoms(t.left, mapping), rename_atoms(t.right, mapping))


# --------------------------------------------------------------------------
# Terms

class Term:
    """Base class for proof-term ASTs."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Hole(Term):
    pass


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Lam(Term):
    var: str
    body: Term


@dataclass(frozen=True, slots=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Pair(Term):
    fst: Term
    snd: Term


@dataclass(frozen=True, slots=True)
class CasePair(Term):
    scrut: Term
    fst: str
    snd: str
    body: Term


@dataclass(frozen=True, slots=True)
class InjL(Term):
    inner: Term


@dataclass(frozen=True, slots=True)
class InjR(Term):
    inner: Term


@dataclass(frozen=True, slots=True)
class CaseSum(Term):
    scrut: Term
    lvar: str
    left: Term
    rvar: str
    right: Term


HOLE = Hole()


def children(t: Term) -> tuple[Term, ...]:
    """Subterm children in constructor field order (binders are not children)."""
    if isinstance(t, (Hole, Var)):
        return ()
    if isinstance(t, Lam):
        return (t.body,)
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, Pair):
        return (t.fst, t.snd)
    if isinstance(t, CasePair):
        return (t.scrut, t.body)
    if isinstance(t, (InjL, InjR)):
        return (t.inner,)
    if isinstance(t, CaseSum):
        return (t.scrut, t.left, t.right)
    raise TypeError(f"not a term: {t!r}")


def size(t: Term) -> int:
    """Number of AST nodes; every constructor, variable and hole counts one."""
    n = 1
    for c in children(t):
        n += size(c)
    return n


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Hole):
        return frozenset()
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.var}
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    if isinstance(t, Pair):
        return free_vars(t.fst) | free_vars(t.snd)
    if isinstance(t, CasePair):
        return free_vars(t.scrut) | (free_vars(t.body) - {t.fst, t.snd})
    if isinstance(t, (InjL, InjR)):
        return free_vars(t.inner)
    if isinstance(t, CaseSum):
        return (
            free_vars(t.scrut)
            | (free_vars(t.left) - {t.lvar})
            | (free_vars(t.right) - {t.rvar})
        )
    raise TypeError(f"not a term: {t!r}")


def has_hole(t: Term) -> bool:
    if isinstance(t, Hole):
        return True
    return any(has_hole(c) for c in children(t))


def alpha_eq(a: Term, b: Term) -> bool:
    """Equality modulo consistent renaming of bound variables.

    Free variables must agree by name; holes match only holes.
    """

    def go(a: Term, b: Term, env_a: dict[str, int], env_b: dict[str, int], depth: int) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, Hole):
            return True
        if isinstance(a, Var):
            assert isinstance(b, Var)
            ia, ib = env_a.get(a.name), env_b.get(b.name)
            if ia is None and ib is None:
                return a.name == b.name
            return ia == ib
        if isinstance(a, Lam):
            assert isinstance(b, Lam)
            return go(a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth}, depth + 1)
        if isinstance(a, App):
            assert isinstance(b, App)
            return go(a.fun, b.fun, env_a, env_b, depth) and go(a.arg, b.arg, env_a, env_b, depth)
        if isinstance(a, Pair):
            assert isinstance(b, Pair)
            return go(a.fst, b.fst, env_a, env_b, depth) and go(a.snd, b.snd, env_a, env_b, depth)
        if isinstance(a, CasePair):
            assert isinstance(b, CasePair)
            if not go(a.scrut, b.scrut, env_a, env_b, depth):
                return False
            ea = {**env_a, a.fst: depth, a.snd: depth + 1}
            eb = {**env_b, b.fst: depth, b.snd: depth + 1}
            return go(a.body, b.body, ea, eb, depth + 2)
        if isinstance(a, InjL):
            assert isinstance(b, InjL)
            return go(a.inner, b.inner, env_a, env_b, depth)
        if isinstance(a, InjR):
            assert isinstance(b, InjR)
            return go(a.inner, b.inner, env_a, env_b, depth)
        if isinstance(a, CaseSum):
            assert isinstance(b, CaseSum)
            if not go(a.scrut, b.scrut, env_a, env_b, depth):
                return False
            if not go(a.left, b.left, {**env_a, a.lvar: depth}, {**env_b, b.lvar: depth}, depth + 1):
                return False
            return go(a.right, b.right, {**env_a, a.rvar: depth}, {**env_b, b.rvar: depth}, depth + 1)
        raise TypeError(f"not a term: {a!r}")

    return go(a, b, {}, {}, 0)


def canonical_key(t: Term) -> str:
    """Injective key on alpha-equivalence classes (de Bruijn style rendering)."""
    parts: list[str] = []

    def go(t: Term, env: dict[str, int], depth: int) -> None:
        if isinstance(t, Hole):
            parts.append("_")
        elif isinstance(t, Var):
            i = env.get(t.name)
            parts.append(f"#{depth - 1 - i}" if i is not None else f"!{t.name}")
        elif isinstance(t, Lam):
            parts.append("L(")
            go(t.body, {**env, t.var: depth}, depth + 1)
            parts.append(")")
        elif isinstance(t, App):
            parts.append("A(")
            go(t.fun, env, depth)
            parts.append(" ")
            go(t.arg, env, depth)
            parts.append(")")
        elif isinstance(t, Pair):
            parts.append("P(")
            go(t.fst, env, depth)
            parts.append(" ")
            go(t.snd, env, depth)
            parts.append(")")
        elif isinstance(t, CasePair):
            parts.append("CP(")
            go(t.scrut, env, depth)
            parts.append(" ")
            go(t.body, {**env, t.fst: depth, t.snd: depth + 1}, depth + 2)
            parts.append(")")
        elif isinstance(t, InjL):
            parts.append("IL(")
            go(t.inner, env, depth)
            parts.append(")")
        elif isinstance(t, InjR):
            parts.append("IR(")
            go(t.inner, env, depth)
            parts.append(")")
        elif isinstance(t, CaseSum):
            parts.append("CS(")
            go(t.scrut, env, depth)
            parts.append(" ")
            go(t.left, {**env, t.lvar: depth}, depth + 1)
            parts.append(" ")
            go(t.right, {**env, t.rvar: depth}, depth + 1)
            parts.append(")")
        else:
            raise TypeError(f"not a term: {t!r}")

    go(t, {}, 0)
    return "".join(parts)


# --------------------------------------------------------------------------
# Holes and paths

Path = tuple[int, ...]


def hole_paths(t: Term) -> list[Path]:
    """Paths (child-index tuples) of all holes, preorder (leftmost-outermost first)."""
    out: list[Path] = []

    def go(t: Term, path: Path) -> None:
        if isinstance(t, Hole):
            out.append(path)
            return
        for i, c in enumerate(children(t)):
            go(c, path + (i,))

    go(t, ())
    return out


def subterm_at(t: Term, path: Path) -> Term:
    for i in path:
        t = children(t)[i]
    return t


def replace_at(t: Term, path: Path, sub: Term) -> Term:
    """Copy of t with the subterm at path replaced by sub."""
    if not path:
        return sub
    i, rest = path[0], path[1:]
    if isinstance(t, Lam):
        return Lam(t.var, replace_at(t.body, rest, sub))
    if isinstance(t, App):
        return App(replace_at(t.fun, rest, sub), t.arg) if i == 0 else App(t.fun, replace_at(t.arg, rest, sub))
    if isinstance(t, Pair):
        return Pair(replace_at(t.fst, rest, sub), t.snd) if i == 0 else Pair(t.fst, replace_at(t.snd, rest, sub))
    if isinstance(t, CasePair):
        if i == 0:
            return CasePair(replace_at(t.scrut, rest, sub), t.fst, t.snd, t.body)
        return CasePair(t.scrut, t.fst, t.snd, replace_at(t.body, rest, sub))
    if isinstance(t, InjL):
        return InjL(replace_at(t.inner, rest, sub))
    if isinstance(t, InjR):
        return InjR(replace_at(t.inner, rest, sub))
    if isinstance(t, CaseSum):
        if i == 0:
            return CaseSum(replace_at(t.scrut, rest, sub), t.lvar, t.left, t.rvar, t.right)
        if i == 1:
            return CaseSum(t.scrut, t.lvar, replace_at(t.left, rest, sub), t.rvar, t.right)
        return CaseSum(t.scrut, t.lvar, t.left, t.rvar, replace_at(t.right, rest, sub))
    raise TypeError(f"no child {i} in {t!r}")


def scope_at(t: Term, path: Path) -> tuple[str, ...]:
    """Variables bound on the way to path, outermost first (shadowed names dropped)."""
    bound: list[str] = []

    def add(name: str) -> None:
        if name in bound:
            bound.remove(name)
        bound.append(name)

    cur = t
    for i in path:
        if isinstance(cur, Lam):
            add(cur.var)
        elif isinstance(cur, CasePair) and i == 1:
            add(cur.fst)
            add(cur.snd)
        elif isinstance(cur, CaseSum) and i == 1:
            add(cur.lvar)
        elif isinstance(cur, CaseSum) and i == 2:
            add(cur.rvar)
        cur = children(cur)[i]
    return tuple(bound)


# --------------------------------------------------------------------------
# Beta/eta redexes

def find_beta_eta_redex(t: Term) -> tuple[Path, str] | None:
    """Location and kind of the first beta- or eta-redex, preorder; None if normal.

    Beta: an introduction immediately consumed by its eliminator.  Eta: an
    eliminator that merely re-introduces its input (function, pair and sum
    forms).  Detection is purely syntactic; holes never form redexes.
    """

    def at_root(t: Term) -> str | None:
        if isinstance(t, App) and isinstance(t.fun, Lam):
            return "beta"
        if isinstance(t, CasePair) and isinstance(t.scrut, Pair):
            return "beta"
        if isinstance(t, CaseSum) and isinstance(t.scrut, (InjL, InjR)):
            return "beta"
        if isinstance(t, Lam) and isinstance(t.body, App):
            arg = t.body.arg
            if isinstance(arg, Var) and arg.name == t.var and t.var not in free_vars(t.body.fun):
                return "eta"
        if isinstance(t, CasePair) and isinstance(t.body, Pair):
            f, s = t.body.fst, t.body.snd
            if isinstance(f, Var) and isinstance(s, Var) and f.name == t.fst and s.name == t.snd:
                return "eta"
        if isinstance(t, CaseSum) and isinstance(t.left, InjL) and isinstance(t.right, InjR):
            li, ri = t.left.inner, t.right.inner
            if isinstance(li, Var) and li.name == t.lvar and isinstance(ri, Var) and ri.name == t.rvar:
                return "eta"
        return None

    def go(t: Term, path: Path) -> tuple[Path, str] | None:
        kind = at_root(t)
        if kind is not None:
            return (path, kind)
        for i, c in enumerate(children(t)):
            found = go(c, path + (i,))
            if found is not None:
                return found
        return None

    return go(t, ())


# --------------------------------------------------------------------------
# Canonical binder naming

_VAR_INDEX = re.compile(r"^x(\d+)$")


def max_var_index(t: Term) -> int:
    """Largest k such that x_k occurs as a binder or variable; -1 if none."""
    best = -1

    def note(name: str) -> None:
        nonlocal best
        m = _VAR_INDEX.match(name)
        if m:
            best = max(best, int(m.group(1)))

    def go(t: Term) -> None:
        if isinstance(t, Var):
            note(t.name)
        elif isinstance(t, Lam):
            note(t.var)
            go(t.body)
        elif isinstance(t, CasePair):
            note(t.fst)
            note(t.snd)
            go(t.scrut)
            go(t.body)
        elif isinstance(t, CaseSum):
            note(t.lvar)
            note(t.rvar)
            go(t.scrut)
            go(t.left)
            go(t.right)
        else:
            for c in children(t):
                go(c)

    go(t)
    return best


def canonical_rename(t: Term) -> Term:
    """Rename binders to x0, x1, ... in the order the guided search introduces them.

    A binding constructor claims its indices before its children are visited
    (both case binders at once, before the scrutinee), matching the fresh-name
    discipline of candidate generation so that independently produced terms of
    the same shape carry the same names.  Indices already taken by free
    variables are skipped, so renaming never captures them.
    """
    taken = free_vars(t)
    counter = 0

    def fresh() -> str:
        nonlocal counter
        while f"x{counter}" in taken:
            counter += 1
        name = f"x{counter}"
        counter += 1
        return name

    def go(t: Term, env: dict[str, str]) -> Term:
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
            scrut = go(t.scrut, env)
            return CasePair(scrut, x, y, go(t.body, {**env, t.fst: x, t.snd: y}))
        if isinstance(t, InjL):
            return InjL(go(t.inner, env))
        if isinstance(t, InjR):
            return InjR(go(t.inner, env))
        if isinstance(t, CaseSum):
            x, y = fresh(), fresh()
            scrut = go(t.scrut, env)
            left = go(t.left, {**env, t.lvar: x})
            right = go(t.right, {**env, t.rvar: y})
            return CaseSum(scrut, x, left, y, right)
        raise TypeError(f"not a term: {t!r}")

    return go(t, {})


def rename_frees(t: Term, mapping: dict[str, str]) -> Term:
    """Simultaneously rename free occurrences per mapping (no capture avoidance)."""
    if not mapping:
        return t
    if isinstance(t, Hole):
        return t
    if isinstance(t, Var):
        return Var(mapping[t.name]) if t.name in mapping else t
    if isinstance(t, Lam):
        inner = {k: v for k, v in mapping.items() if k != t.var}
        return Lam(t.var, rename_frees(t.body, inner))
    if isinstance(t, App):
        return App(rename_frees(t.fun, mapping), rename_frees(t.arg, mapping))
    if isinstance(t, Pair):
        return Pair(rename_frees(t.fst, mapping), rename_frees(t.snd, mapping))
    if isinstance(t, CasePair):
        inner = {k: v for k, v in mapping.items() if k not in (t.fst, t.snd)}
        return CasePair(rename_frees(t.scrut, mapping), t.fst, t.snd, rename_frees(t.body, inner))
    if isinstance(t, InjL):
        return InjL(rename_frees(t.inner, mapping))
    if isinstance(t, InjR):
        return InjR(rename_frees(t.inner, mapping))
    if isinstance(t, CaseSum):
        linner = {k: v for k, v in mapping.items() if k != t.lvar}
        rinner = {k: v for k, v in mapping.items() if k != t.rvar}
        return CaseSum(
            rename_frees(t.scrut, mapping),
            t.lvar,
            rename_frees(t.left, linner),
            t.rvar,
            rename_frees(t.right, rinner),
        )
    raise TypeError(f"not a term: {t!r}")
