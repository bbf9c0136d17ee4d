"""Sampled membership checks for numbers and the effect-restriction types.

Quantification over all extensions of a world is replaced by a seeded sample
of extensions that always contains the world itself.
"""
from __future__ import annotations

from dataclasses import dataclass

from boxtt.evaluator import DEFAULT_FUEL, Done, evaluate
from boxtt.terms import Num, Term, alpha_eq, nonames
from boxtt.worlds import RefWorld, sample_extensions


@dataclass(frozen=True)
class SampleParams:
    depth: int = 4
    count: int = 16
    seed: int = 0
    fuel: int = DEFAULT_FUEL


DEFAULT_PARAMS = SampleParams()


def _extensions(w: RefWorld, p: SampleParams) -> list[RefWorld]:
    return sample_extensions(w, p.depth, p.count, p.seed)


def member_nat_sampled(t: Term, w: RefWorld, params: SampleParams = DEFAULT_PARAMS) -> bool:
    """``t`` computes to one and the same numeral from every sampled extension."""
    seen = set()
    for w2 in _extensions(w, params):
        r = evaluate(t, w2, params.fuel)
        if not isinstance(r, Done) or not isinstance(r.value, Num):
            return False
        seen.add(r.value.value)
    return len(seen) == 1


def member_noread_sampled(t: Term, w: RefWorld, params: SampleParams = DEFAULT_PARAMS) -> bool:
    """Whenever ``t`` yields a value in a sampled world, it yields it in that world's extensions."""
    for w1 in _extensions(w, params):
        r1 = evaluate(t, w1, params.fuel)
        if not isinstance(r1, Done):
            return False
        for w2 in _extensions(w1, params):
            r2 = evaluate(t, w2, params.fuel)
            if not isinstance(r2, Done) or not alpha_eq(r1.value, r2.value):
                return False
    return True


def member_nowrite_sampled(t: Term, w: RefWorld, params: SampleParams = DEFAULT_PARAMS) -> bool:
    """``t`` computes to a value and leaves every sampled world unchanged."""
    for w1 in _extensions(w, params):
        r = evaluate(t, w1, params.fuel)
        if not isinstance(r, Done) or r.world != w1:
            return False
    return True


def member_pure(t: Term, w: RefWorld, fuel: int = DEFAULT_FUEL,
                params: SampleParams | None = None) -> bool:
    """``t`` is name-free and computes to the same name-free value everywhere sampled."""
    if not nonames(t):
        return False
    params = params or SampleParams(fuel=fuel)
    r0 = evaluate(t, w, fuel)
    if not isinstance(r0, Done) or not nonames(r0.value) or r0.world != w:
        return False
    for w1 in _extensions(w, params):
        r = evaluate(t, w1, fuel)
        if not isinstance(r, Done) or not alpha_eq(r.value, r0.value) or r.world != w1:
            return False
    return True
