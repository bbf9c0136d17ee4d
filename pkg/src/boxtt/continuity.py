"""The stateful modulus-of-continuity realizer and its meta-level oracle.

``mk_mod(F, alpha)`` allocates a fresh cell, runs ``F`` on a wrapper of
``alpha`` that records the largest argument it is applied to, and returns
one more than that record.  ``oracle_modulus`` computes the same number by
watching the evaluator apply a probe function instead.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from boxtt.evaluator import (
    DEFAULT_FUEL, Done, ProbeState, StuckAt, Timeout, Trace, eval_probe, eval_trace, evaluate,
    step, Stepped,
)
from boxtt.terms import (
    STAR, App, Choose, Fresh, Lam, Let, Name, Num, Pair, Read, Succ, Term, Var, free_vars,
    fresh_var, iflt, is_closed, nonames, seq,
)
from boxtt.worlds import ChoiceName, RefWorld, new_choice, read


class ModulusError(Exception):
    pass


class PurityViolation(ModulusError):
    pass


class NonNumeralResult(ModulusError):
    pass


class EvaluationFailed(ModulusError):
    """The modulus computation timed out or got stuck."""

    def __init__(self, result):
        self.result = result
        kind = "timed out" if isinstance(result, Timeout) else f"got stuck ({result.reason.value})"
        super().__init__(f"evaluation {kind} after {result.steps} steps")


def _name_term(name: Union[ChoiceName, Term]) -> Term:
    return Name(name) if isinstance(name, int) else name


def mk_upd(name: Union[ChoiceName, Term], alpha: Term) -> Term:
    """``λx. let y = x in (iflt !name y (name := y) ⋆; alpha y)``."""
    name = _name_term(name)
    avoid = free_vars(name) | free_vars(alpha)
    x = fresh_var("x", avoid)
    y = fresh_var("y", avoid | {x})
    record = iflt(Read(name), Var(y), Choose(name, Var(y)), STAR)
    return Lam(x, Let(y, Var(x), seq(record, App(alpha, Var(y)))))


def mk_mod(f: Term, alpha: Term) -> Term:
    """``fresh k. (k := 0; F (upd k alpha); succ !k)``."""
    k = fresh_var("k", free_vars(f) | free_vars(alpha))
    kv = Var(k)
    return Fresh(k, seq(Choose(kv, Num(0)), seq(App(f, mk_upd(kv, alpha)), Succ(Read(kv)))))


def mk_force(f: Term) -> Term:
    """``λx. let y = x in f y``: call-by-value application of ``f``."""
    avoid = free_vars(f)
    x = fresh_var("x", avoid)
    y = fresh_var("y", avoid | {x})
    return Lam(x, Let(y, Var(x), App(f, Var(y))))


def mk_cont_realizer() -> Term:
    """``λF. λα. ⟨mod(F, α), λβ. λe. ⋆⟩``."""
    return Lam("F", Lam("a", Pair(mk_mod(Var("F"), Var("a")), Lam("b", Lam("e", STAR)))))


@dataclass
class ModulusReport:
    modulus: int
    fuel_used: int
    final_world: RefWorld
    fresh_name: ChoiceName
    trace: Optional[Trace] = None

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "fresh_name": self.fresh_name,
            "steps": self.fuel_used,
            "final_world": self.final_world.to_json(),
            "trace_states": None if self.trace is None else len(self.trace.states),
        }


def _check_inputs(f: Term, alpha: Term) -> None:
    for label, t in (("F", f), ("alpha", alpha)):
        if not nonames(t):
            raise PurityViolation(f"{label} contains a choice name or fresh")
        if not is_closed(t):
            raise ValueError(f"{label} has free variables {sorted(free_vars(t))}")


def compute_modulus(f: Term, alpha: Term, w: RefWorld, fuel: int = DEFAULT_FUEL,
                    keep_trace: bool = False) -> ModulusReport:
    """Run ``mk_mod(f, alpha)`` from ``w`` and return the numeral it produces."""
    _check_inputs(f, alpha)
    term = mk_mod(f, alpha)
    first = step(term, w)
    assert isinstance(first, Stepped) and isinstance(term, Fresh)
    fresh_name = new_choice(w)
    if keep_trace:
        trace = eval_trace(term, w, fuel)
        result = trace.result
    else:
        trace, result = None, evaluate(term, w, fuel)
    if not isinstance(result, Done):
        raise EvaluationFailed(result)
    if not isinstance(result.value, Num):
        raise NonNumeralResult(f"mod returned {result.value}")
    return ModulusReport(result.value.value, result.steps, result.world, fresh_name, trace)


def oracle_modulus(f: Term, alpha: Term, w: RefWorld, fuel: int = DEFAULT_FUEL) -> int:
    """One more than the largest numeral ``f`` applies its argument to."""
    return 1 + max(oracle_log(f, alpha, w, fuel), default=0)


def oracle_log(f: Term, alpha: Term, w: RefWorld, fuel: int = DEFAULT_FUEL) -> list[int]:
    _check_inputs(f, alpha)
    result, log = eval_probe(f, ProbeState(alpha), w, fuel)
    if not isinstance(result, Done):
        raise EvaluationFailed(result)
    return log


def cell_values(trace: Trace, name: ChoiceName) -> list[Optional[int]]:
    """The value of cell ``name`` in every state of ``trace`` (None before it exists)."""
    return [read(w, name) for w in trace.worlds()]
