"""Similarity relations that identify terms differing only at probe positions.

Both relations are structural: they relate equal constructors with related
children, relate ``upd``-wrapped (or forced) functions through their first
clause, and never relate a bare choice name or a ``fresh``.
"""
from __future__ import annotations

from boxtt.continuity import mk_force, mk_upd
from boxtt.terms import SCOPES, Fresh, field_names, Lam, Name, Term, Var, alpha_eq
from boxtt.worlds import ChoiceName


def _related(t1: Term, t2: Term, first_clause, env1: dict, env2: dict, depth: int) -> bool:
    if isinstance(t1, Lam) and isinstance(t2, Lam) and first_clause(t1, t2):
        return True
    if isinstance(t1, (Name, Fresh)) or isinstance(t2, (Name, Fresh)):
        return False
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
            e1, e2 = env1, env2
            if bound:
                e1, e2 = dict(env1), dict(env2)
                for i, vf in enumerate(bound):
                    e1[getattr(t1, vf)] = depth + i
                    e2[getattr(t2, vf)] = depth + i
            if not _related(a, b, first_clause, e1, e2, depth + len(bound)):
                return False
        elif not isinstance(a, str) and a != b:
            return False
    return True


def sim_diff(t1: Term, t2: Term, k1: ChoiceName, k2: ChoiceName, alpha: Term) -> bool:
    """``t1`` and ``t2`` agree except that ``upd(k1, alpha)`` faces ``upd(k2, alpha)``."""
    u1, u2 = mk_upd(k1, alpha), mk_upd(k2, alpha)
    return _related(t1, t2, lambda a, b: alpha_eq(a, u1) and alpha_eq(b, u2), {}, {}, 0)


def sim_force(t1: Term, t2: Term, k: ChoiceName, alpha: Term, beta: Term) -> bool:
    """``t1`` and ``t2`` agree except that ``upd(k, alpha)`` faces ``force(beta)``."""
    u, fb = mk_upd(k, alpha), mk_force(beta)
    return _related(t1, t2, lambda a, b: alpha_eq(a, u) and alpha_eq(b, fb), {}, {}, 0)


def updterm(t: Term, k: ChoiceName, alpha: Term) -> bool:
    """Name ``k`` occurs in ``t`` only inside ``upd(k, alpha)``."""
    return sim_diff(t, t, k, k, alpha)
