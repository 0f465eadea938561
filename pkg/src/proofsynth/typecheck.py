"""Typing for partial proof terms and principal-type inference.

A hole checks against any goal, so checking a partial term reduces to
first-order unification over type skeletons (types extended with
metavariables).  Inference sessions own their metavariable counters and a
trail for cheap backtracking; contexts are immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    App,
    Arrow,
    CasePair,
    CaseSum,
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
    free_vars,
    has_hole,
)


@dataclass(frozen=True, slots=True)
class MVar(TypeExpr):
    """Unification metavariable; identifiers are unique per session."""

    ident: int


Substitution = dict[int, TypeExpr]


def is_concrete(t: TypeExpr) -> bool:
    if isinstance(t, MVar):
        return False
    if isinstance(t, TVar):
        return True
    return is_concrete(t.left) and is_concrete(t.right)


class Unifier:
    """Mutable unification state with a trail for mark/undo backtracking."""

    __slots__ = ("sub", "trail", "counter")

    def __init__(self, sub: Substitution | None = None, counter: int = 0):
        self.sub: Substitution = dict(sub) if sub else {}
        self.trail: list[int] = []
        self.counter = counter

    def fresh(self) -> MVar:
        self.counter += 1
        return MVar(self.counter)

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            del self.sub[self.trail.pop()]

    def walk(self, t: TypeExpr) -> TypeExpr:
        while isinstance(t, MVar):
            bound = self.sub.get(t.ident)
            if bound is None:
                return t
            t = bound
        return t

    def _occurs(self, ident: int, t: TypeExpr) -> bool:
        t = self.walk(t)
        if isinstance(t, MVar):
            return t.ident == ident
        if isinstance(t, TVar):
            return False
        return self._occurs(ident, t.left) or self._occurs(ident, t.right)

    def unify(self, a: TypeExpr, b: TypeExpr) -> bool:
        a = self.walk(a)
        b = self.walk(b)
        if a == b:
            return True
        if isinstance(a, MVar):
            if self._occurs(a.ident, b):
                return False
            self.sub[a.ident] = b
            self.trail.append(a.ident)
            return True
        if isinstance(b, MVar):
            return self.unify(b, a)
        if type(a) is not type(b) or isinstance(a, TVar):
            return False
        return self.unify(a.left, b.left) and self.unify(a.right, b.right)

    def resolve(self, t: TypeExpr) -> TypeExpr:
        """Fully apply the current substitution."""
        t = self.walk(t)
        if isinstance(t, (MVar, TVar)):
            return t
        if isinstance(t, Arrow):
            return Arrow(self.resolve(t.left), self.resolve(t.right))
        if isinstance(t, Prod):
            return Prod(self.resolve(t.left), self.resolve(t.right))
        return Sum(self.resolve(t.left), self.resolve(t.right))


def unify(a: TypeExpr, b: TypeExpr, subst: Substitution | None = None) -> Substitution | None:
    """Most general unifier extending subst, or None if there is none.

    Occurs-check violations and constructor clashes both yield None.  The
    returned substitution is idempotent (images fully resolved).
    """
    top = 0
    for t in (a, b):
        stack = [t]
        while stack:
            s = stack.pop()
            if isinstance(s, MVar):
                top = max(top, s.ident)
            elif not isinstance(s, TVar):
                stack.extend((s.left, s.right))
    if subst:
        top = max(top, max(subst.keys(), default=0))
    u = Unifier(subst, counter=top)
    if not u.unify(a, b):
        return None
    return {ident: u.resolve(MVar(ident)) for ident in u.sub}


class Context:
    """Ordered typing context; later bindings shadow earlier ones."""

    __slots__ = ("bindings",)

    def __init__(self, bindings: tuple[tuple[str, TypeExpr], ...] = ()):
        self.bindings = bindings

    def bind(self, name: str, ty: TypeExpr) -> "Context":
        return Context(self.bindings + ((name, ty),))

    def lookup(self, name: str) -> TypeExpr | None:
        for n, ty in reversed(self.bindings):
            if n == name:
                return ty
        return None

    def names(self) -> tuple[str, ...]:
        """In-scope names, outermost first, shadowed entries dropped."""
        out: list[str] = []
        for n, _ in self.bindings:
            if n in out:
                out.remove(n)
            out.append(n)
        return tuple(out)

    def __len__(self) -> int:
        return len(self.bindings)


EMPTY = Context()


def _check(u: Unifier, ctx: Context, t: Term, goal: TypeExpr) -> bool:
    """Constrain u so that ctx |- t : goal; False if no assignment exists.

    Unification computes most general solutions, so failure is final and no
    backtracking over rule choices is needed.
    """
    if isinstance(t, Hole):
        return True
    if isinstance(t, Var):
        ty = ctx.lookup(t.name)
        return ty is not None and u.unify(ty, goal)
    if isinstance(t, Lam):
        a, b = u.fresh(), u.fresh()
        return u.unify(goal, Arrow(a, b)) and _check(u, ctx.bind(t.var, a), t.body, b)
    if isinstance(t, App):
        a = u.fresh()
        return _check(u, ctx, t.fun, Arrow(a, goal)) and _check(u, ctx, t.arg, a)
    if isinstance(t, Pair):
        a, b = u.fresh(), u.fresh()
        return (
            u.unify(goal, Prod(a, b))
            and _check(u, ctx, t.fst, a)
            and _check(u, ctx, t.snd, b)
        )
    if isinstance(t, CasePair):
        a, b = u.fresh(), u.fresh()
        return _check(u, ctx, t.scrut, Prod(a, b)) and _check(
            u, ctx.bind(t.fst, a).bind(t.snd, b), t.body, goal
        )
    if isinstance(t, InjL):
        a, b = u.fresh(), u.fresh()
        return u.unify(goal, Sum(a, b)) and _check(u, ctx, t.inner, a)
    if isinstance(t, InjR):
        a, b = u.fresh(), u.fresh()
        return u.unify(goal, Sum(a, b)) and _check(u, ctx, t.inner, b)
    if isinstance(t, CaseSum):
        a, b = u.fresh(), u.fresh()
        return (
            _check(u, ctx, t.scrut, Sum(a, b))
            and _check(u, ctx.bind(t.lvar, a), t.left, goal)
            and _check(u, ctx.bind(t.rvar, b), t.right, goal)
        )
    raise TypeError(f"not a term: {t!r}")


def _max_mvar(t: TypeExpr) -> int:
    if isinstance(t, MVar):
        return t.ident
    if isinstance(t, TVar):
        return 0
    return max(_max_mvar(t.left), _max_mvar(t.right))


def check_partial(ctx: Context, t: Term, goal: TypeExpr) -> bool:
    """True iff some assignment of types to holes and metavariables gives
    ctx |- t : goal.  Unbound variables make the check false, not an error."""
    u = Unifier(counter=max(_max_mvar(goal), max((_max_mvar(ty) for _, ty in ctx.bindings), default=0)))
    return _check(u, ctx, t, goal)


_ATOMS = "abcdefghijklmnopqrstuvwxyz"


def _principal_names(t: TypeExpr, names: dict[int, str]) -> TypeExpr:
    if isinstance(t, MVar):
        if t.ident not in names:
            i = len(names)
            names[t.ident] = _ATOMS[i] if i < len(_ATOMS) else f"a{i}"
        return TVar(names[t.ident])
    if isinstance(t, TVar):
        return t
    if isinstance(t, Arrow):
        return Arrow(_principal_names(t.left, names), _principal_names(t.right, names))
    if isinstance(t, Prod):
        return Prod(_principal_names(t.left, names), _principal_names(t.right, names))
    return Sum(_principal_names(t.left, names), _principal_names(t.right, names))


def infer_type(t: Term) -> TypeExpr | None:
    """Principal simple type of a closed hole-free term, or None if untypable.

    Residual metavariables become fresh atoms a, b, c, ... in first-occurrence
    order.
    """
    if has_hole(t):
        raise ValueError("infer_type requires a hole-free term")
    if free_vars(t):
        raise ValueError(f"infer_type requires a closed term; free: {sorted(free_vars(t))}")
    u = Unifier()
    root = u.fresh()
    if not _check(u, EMPTY, t, root):
        return None
    return _principal_names(u.resolve(root), {})
