"""Term language: syntax, substitution, alpha-equivalence and effect predicates.

Terms are immutable dataclasses.  Variables are named; substitution renames
binders on demand so that no free variable of the substituend is captured.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Iterator, Mapping

ChoiceName = int


class Term:
    """Base class of every syntax node."""

    __slots__ = ("_fv",)

    def __str__(self) -> str:
        from boxtt.sexpr import to_sexpr

        return to_sexpr(self)


# --- core computations ------------------------------------------------------

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
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Spread(Term):
    scrut: Term
    left_var: str
    right_var: str
    body: Term


@dataclass(frozen=True, slots=True)
class Inl(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class Inr(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class Decide(Term):
    scrut: Term
    left_var: str
    on_left: Term
    right_var: str
    on_right: Term


@dataclass(frozen=True, slots=True)
class Num(Term):
    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or isinstance(self.value, bool) or self.value < 0:
            raise ValueError(f"numerals are natural numbers, got {self.value!r}")


@dataclass(frozen=True, slots=True)
class Succ(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class NatRec(Term):
    scrut: Term
    zero_case: Term
    succ_case: Term


@dataclass(frozen=True, slots=True)
class Fix(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class Let(Term):
    var: str
    bound: Term
    body: Term


@dataclass(frozen=True, slots=True)
class Star(Term):
    pass


@dataclass(frozen=True, slots=True)
class Name(Term):
    name: ChoiceName

    def __post_init__(self):
        if not isinstance(self.name, int) or self.name < 0:
            raise ValueError(f"choice names are natural numbers, got {self.name!r}")


@dataclass(frozen=True, slots=True)
class Read(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class Choose(Term):
    target: Term
    value: Term


@dataclass(frozen=True, slots=True)
class Fresh(Term):
    var: str
    body: Term


# --- type constructors (inert values) ---------------------------------------

@dataclass(frozen=True, slots=True)
class Pi(Term):
    var: str
    domain: Term
    codomain: Term


@dataclass(frozen=True, slots=True)
class Sum(Term):
    var: str
    domain: Term
    codomain: Term


@dataclass(frozen=True, slots=True)
class SetType(Term):
    var: str
    domain: Term
    codomain: Term


@dataclass(frozen=True, slots=True)
class Union(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Eq(Term):
    type: Term
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Universe(Term):
    level: int


@dataclass(frozen=True, slots=True)
class Nat(Term):
    pass


@dataclass(frozen=True, slots=True)
class Isect(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class QSquash(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class NoRead(Term):
    pass


@dataclass(frozen=True, slots=True)
class NoWrite(Term):
    pass


@dataclass(frozen=True, slots=True)
class Pure(Term):
    pass


STAR = Star()

TYPE_CONSTRUCTORS = (Pi, Sum, SetType, Union, Eq, Universe, Nat, Isect, QSquash,
                     NoRead, NoWrite, Pure)
VALUE_CONSTRUCTORS = TYPE_CONSTRUCTORS + (Lam, Star, Num, Inl, Inr, Pair, Name)

# For each binding construct: (child field, variable fields bound in that child).
# Children not listed bind nothing.
SCOPES: dict[type, dict[str, tuple[str, ...]]] = {
    Lam: {"body": ("var",)},
    Let: {"body": ("var",)},
    Fresh: {"body": ("var",)},
    Spread: {"body": ("left_var", "right_var")},
    Decide: {"on_left": ("left_var",), "on_right": ("right_var",)},
    Pi: {"codomain": ("var",)},
    Sum: {"codomain": ("var",)},
    SetType: {"codomain": ("var",)},
}


def is_value(t: Term) -> bool:
    return isinstance(t, VALUE_CONSTRUCTORS)


def is_numeral(t: Term) -> bool:
    return isinstance(t, Num)


_FIELDS: dict[type, tuple[str, ...]] = {}


def field_names(t: Term) -> tuple[str, ...]:
    cls = type(t)
    names = _FIELDS.get(cls)
    if names is None:
        names = _FIELDS[cls] = tuple(f.name for f in fields(cls))
    return names


def children(t: Term) -> Iterator[tuple[str, Term, tuple[str, ...]]]:
    """Yield ``(field, child, bound variable names)`` for each subterm of ``t``."""
    scopes = SCOPES.get(type(t), {})
    for name in field_names(t):
        value = getattr(t, name)
        if isinstance(value, Term):
            yield name, value, tuple(getattr(t, v) for v in scopes.get(name, ()))


def subterms(t: Term) -> Iterator[Term]:
    """All subterms of ``t``, ``t`` included, in pre-order."""
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        stack.extend(c for _, c, _ in children(u))


def free_vars(t: Term) -> frozenset[str]:
    try:
        return t._fv
    except AttributeError:
        pass
    if isinstance(t, Var):
        fv = frozenset((t.name,))
    else:
        out: set[str] = set()
        for _, child, bound in children(t):
            out |= free_vars(child) - set(bound)
        fv = frozenset(out)
    object.__setattr__(t, "_fv", fv)  # memo; not a dataclass field
    return fv


def is_closed(t: Term) -> bool:
    return not free_vars(t)


def fresh_var(base: str, avoid) -> str:
    """Smallest ``base<k>`` (or ``base`` itself) not in ``avoid``."""
    stem = base.rstrip("0123456789") or "v"
    if base not in avoid:
        return base
    k = 1
    while f"{stem}{k}" in avoid:
        k += 1
    return f"{stem}{k}"


def subst(t: Term, x: str, u: Term) -> Term:
    """Capture-avoiding ``t[x\\u]``."""
    return subst_many(t, {x: u})


def subst_many(t: Term, sub: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution."""
    if not sub:
        return t
    fv_sub = frozenset().union(*(free_vars(u) for u in sub.values()))
    return _subst(t, dict(sub), fv_sub)


def _subst(t: Term, sub: dict[str, Term], fv_sub: frozenset[str]) -> Term:
    match t:
        case Var(name):
            return sub.get(name, t)
    kids = list(children(t))
    if not kids:
        return t
    scopes = SCOPES.get(type(t))
    if scopes is None:
        changes = {}
        for field_name, child, _ in kids:
            new = _subst(child, sub, fv_sub)
            if new is not child:
                changes[field_name] = new
        return replace(t, **changes) if changes else t

    # Binders: rename any bound variable that would capture a free variable of
    # the substituends, then push the substitution into each child.
    renames: dict[str, str] = {}
    if fv_sub & {getattr(t, v) for vs in scopes.values() for v in vs}:
        taken = set(fv_sub) | set(sub)
        for _, child, _ in kids:
            taken |= free_vars(child)
        for var_field in {v for vs in scopes.values() for v in vs}:
            taken.add(getattr(t, var_field))
        for child_field, var_fields in scopes.items():
            child = getattr(t, child_field)
            live = {k for k in sub if k not in {getattr(t, v) for v in var_fields}}
            if not live & free_vars(child):
                continue
            for var_field in var_fields:
                old = getattr(t, var_field)
                if old in fv_sub and var_field not in renames:
                    new_name = fresh_var(old, taken)
                    taken.add(new_name)
                    renames[var_field] = new_name

    changes: dict[str, object] = {}
    for field_name, child, _ in kids:
        var_fields = scopes.get(field_name, ())
        inner = {k: v for k, v in sub.items() if k not in {getattr(t, vf) for vf in var_fields}}
        renaming = {getattr(t, vf): Var(renames[vf]) for vf in var_fields if vf in renames}
        if renaming:
            child = _subst(child, renaming, frozenset(v.name for v in renaming.values()))
        if inner:
            child = _subst(child, inner, fv_sub)
        if child is not getattr(t, field_name):
            changes[field_name] = child
    changes.update(renames)
    return replace(t, **changes) if changes else t


def alpha_eq(t1: Term, t2: Term) -> bool:
    return _alpha(t1, t2, {}, {}, 0)


def _alpha(t1: Term, t2: Term, env1: dict, env2: dict, depth: int) -> bool:
    if t1 is t2 and not env1 and not env2:
        return True
    if type(t1) is not type(t2):
        return False
    if isinstance(t1, Var):
        b1, b2 = env1.get(t1.name), env2.get(t2.name)
        if b1 is None and b2 is None:
            return t1.name == t2.name
        return b1 == b2
    scopes = SCOPES.get(type(t1), {})
    for name in field_names(t1):
        a, b = getattr(t1, name), getattr(t2, name)
        if isinstance(a, Term):
            bound = scopes.get(name, ())
            if bound:
                e1, e2 = dict(env1), dict(env2)
                for i, vf in enumerate(bound):
                    e1[getattr(t1, vf)] = depth + i
                    e2[getattr(t2, vf)] = depth + i
                if not _alpha(a, b, e1, e2, depth + len(bound)):
                    return False
            elif not _alpha(a, b, env1, env2, depth):
                return False
        elif not isinstance(a, str) and a != b:
            # variable-name fields are compared through the environments
            return False
    return True


# --- syntactic effect predicates ------------------------------------------

def nonames(t: Term) -> bool:
    """No choice name and no ``fresh`` occurs in ``t``."""
    return not any(isinstance(u, (Name, Fresh)) for u in subterms(t))


def noread(t: Term) -> bool:
    return not any(isinstance(u, Read) for u in subterms(t))


def nowrite(t: Term) -> bool:
    return not any(isinstance(u, (Choose, Fresh)) for u in subterms(t))


def rename_names(t: Term, mapping: Mapping[ChoiceName, ChoiceName]) -> Term:
    """Replace choice names according to ``mapping``."""
    if isinstance(t, Name):
        return Name(mapping.get(t.name, t.name))
    changes = {}
    for field_name, child, _ in children(t):
        new = rename_names(child, mapping)
        if new is not child:
            changes[field_name] = new
    return replace(t, **changes) if changes else t


def names(t: Term) -> frozenset[ChoiceName]:
    return frozenset(u.name for u in subterms(t) if isinstance(u, Name))


# --- derived forms -----------------------------------------------------------

def ite(cond: Term, then: Term, other: Term) -> Term:
    x = fresh_var("x", free_vars(then) | free_vars(other))
    return Decide(cond, x, then, x, other)


def seq(first: Term, second: Term) -> Term:
    x = fresh_var("x", free_vars(second))
    return Let(x, first, second)


def btrue() -> Term:
    return Inl(STAR)


def bfalse() -> Term:
    return Inr(STAR)


def neg(t: Term) -> Term:
    return ite(t, bfalse(), btrue())


def iszero(t: Term) -> Term:
    return NatRec(t, btrue(), Lam("m", Lam("r", bfalse())))


def pred(t: Term) -> Term:
    return NatRec(t, Num(0), Lam("m", Lam("r", Var("m"))))


def sub(a: Term, b: Term) -> Term:
    """``a - b`` truncated at zero."""
    return NatRec(b, a, Lam("m", Lam("r", pred(Var("r")))))


def lt(a: Term, b: Term) -> Term:
    return neg(iszero(sub(b, a)))


def iflt(a: Term, b: Term, then: Term, other: Term) -> Term:
    return ite(lt(a, b), then, other)


def add(a: Term, b: Term) -> Term:
    """``a + b`` by recursion on ``b``."""
    return NatRec(b, a, Lam("m", Lam("r", Succ(Var("r")))))
