"""Call-by-name small-step machine over terms and reference-cell worlds.

``step`` performs one reduction, descending through the strict argument
positions (application head, let binding, successor/recursor/pair/injection
scrutinees, read and choose targets) to the leftmost redex.  ``evaluate``,
``eval_trace`` and ``eval_probe`` drive it with a fuel bound.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from boxtt.terms import (
    STAR, App, Choose, Decide, Fix, Fresh, Inl, Inr, Lam, Let, Name, NatRec, Num, Pair,
    Read, Spread, Succ, Term, Var, is_value, subst, subst_many,
)
from boxtt.worlds import NAT, RefWorld, coerce, new_choice, read, start_new_choice, write

DEFAULT_FUEL = 100_000


class StuckReason(enum.Enum):
    FREE_VARIABLE = "FreeVariable"
    BAD_APPLICATION = "BadApplication"
    BAD_SCRUTINEE = "BadScrutinee"
    READ_UNKNOWN_NAME = "ReadUnknownName"
    NON_NUMERAL_CHOICE_READ = "NonNumeralChoiceRead"


@dataclass(frozen=True)
class Stepped:
    term: Term
    world: RefWorld


@dataclass(frozen=True)
class IsValue:
    pass


@dataclass(frozen=True)
class Stuck:
    reason: StuckReason
    term: Optional[Term] = None


IS_VALUE = IsValue()
StepOutcome = Union[Stepped, IsValue, Stuck]


@dataclass(frozen=True)
class Done:
    value: Term
    world: RefWorld
    steps: int


@dataclass(frozen=True)
class Timeout:
    term: Term
    world: RefWorld
    steps: int


@dataclass(frozen=True)
class StuckAt:
    term: Term
    world: RefWorld
    reason: StuckReason
    steps: int


EvalResult = Union[Done, Timeout, StuckAt]


@dataclass
class Trace:
    states: list[tuple[Term, RefWorld]]
    result: EvalResult

    @property
    def exhausted(self) -> bool:
        return isinstance(self.result, Timeout)

    def worlds(self) -> list[RefWorld]:
        return [w for _, w in self.states]


@dataclass(frozen=True)
class ProbeHead(Term):
    """Evaluator-internal function constant used by ``eval_probe``."""

    sexpr_atom = "<probe>"


PROBE = ProbeHead()


@dataclass
class ProbeState:
    probe_function: Term
    log: list[int] = field(default_factory=list)


Rebuild = Callable[[Term], Term]


def step(t: Term, w: RefWorld, probe: Optional[ProbeState] = None) -> StepOutcome:
    """One reduction step of ``t`` in ``w``."""
    frames: list[Rebuild] = []
    cur = t
    while True:
        outcome = _head_step(cur, w, probe)
        if isinstance(outcome, tuple):
            sub, rebuild = outcome
            frames.append(rebuild)
            cur = sub
            continue
        break
    if isinstance(outcome, IsValue):
        if frames:  # a strict position already holding a value is handled by _head_step
            raise AssertionError("descended into a value")
        return outcome
    if isinstance(outcome, Stuck):
        return outcome
    term = outcome.term
    for rebuild in reversed(frames):
        term = rebuild(term)
    return Stepped(term, outcome.world)


def _stuck(reason: StuckReason, t: Term) -> Stuck:
    return Stuck(reason, t)


def _head_step(t: Term, w: RefWorld, probe: Optional[ProbeState]):
    """Contract ``t`` at its head, or return ``(subterm, rebuild)`` to descend."""
    match t:
        case Var():
            return _stuck(StuckReason.FREE_VARIABLE, t)
        case ProbeHead():
            return IS_VALUE
        case App(Lam(x, body), arg):
            return Stepped(subst(body, x, arg), w)
        case App(ProbeHead(), arg) if probe is not None:
            if isinstance(arg, Num):
                probe.log.append(arg.value)
                return Stepped(App(probe.probe_function, arg), w)
            if is_value(arg) or isinstance(arg, ProbeHead):
                return _stuck(StuckReason.BAD_SCRUTINEE, t)
            return arg, lambda a, f=t.fun: App(f, a)
        case App(fun, arg):
            if is_value(fun) or isinstance(fun, ProbeHead):
                return _stuck(StuckReason.BAD_APPLICATION, t)
            return fun, lambda f: App(f, arg)
        case Fix(arg):
            if is_value(arg):
                return Stepped(App(arg, t), w)
            return arg, Fix
        case Let(x, bound, body):
            if is_value(bound) or isinstance(bound, ProbeHead):
                return Stepped(subst(body, x, bound), w)
            return bound, lambda b: Let(x, b, body)
        case Succ(arg):
            if isinstance(arg, Num):
                return Stepped(Num(arg.value + 1), w)
            if is_value(arg):
                return _stuck(StuckReason.BAD_SCRUTINEE, t)
            return arg, Succ
        case NatRec(scrut, zero_case, succ_case):
            if isinstance(scrut, Num):
                if scrut.value == 0:
                    return Stepped(zero_case, w)
                n = Num(scrut.value - 1)
                return Stepped(App(App(succ_case, n), NatRec(n, zero_case, succ_case)), w)
            if is_value(scrut):
                return _stuck(StuckReason.BAD_SCRUTINEE, t)
            return scrut, lambda s: NatRec(s, zero_case, succ_case)
        case Spread(scrut, x, y, body):
            if isinstance(scrut, Pair):
                return Stepped(subst_many(body, {x: scrut.left, y: scrut.right}), w)
            if is_value(scrut):
                return _stuck(StuckReason.BAD_SCRUTINEE, t)
            return scrut, lambda s: Spread(s, x, y, body)
        case Decide(scrut, x, on_left, y, on_right):
            if isinstance(scrut, Inl):
                return Stepped(subst(on_left, x, scrut.arg), w)
            if isinstance(scrut, Inr):
                return Stepped(subst(on_right, y, scrut.arg), w)
            if is_value(scrut):
                return _stuck(StuckReason.BAD_SCRUTINEE, t)
            return scrut, lambda s: Decide(s, x, on_left, y, on_right)
        case Read(target):
            if isinstance(target, Name):
                c = read(w, target.name)
                if c is None:
                    return _stuck(StuckReason.READ_UNKNOWN_NAME, t)
                if not isinstance(c, int) or c < 0:
                    return _stuck(StuckReason.NON_NUMERAL_CHOICE_READ, t)
                return Stepped(Num(c), w)
            if is_value(target):
                return _stuck(StuckReason.BAD_SCRUTINEE, t)
            return target, Read
        case Choose(target, value):
            if isinstance(target, Name):
                return Stepped(STAR, write(w, target.name, coerce(value)))
            if is_value(target):
                return _stuck(StuckReason.BAD_SCRUTINEE, t)
            return target, lambda g: Choose(g, value)
        case Fresh(x, body):
            return Stepped(subst(body, x, Name(new_choice(w))), start_new_choice(w, NAT))
    if is_value(t):
        return IS_VALUE
    raise TypeError(f"not a term: {t!r}")


def _run(t: Term, w: RefWorld, fuel: int, probe: Optional[ProbeState],
         states: Optional[list]) -> EvalResult:
    # Same reduction sequence as iterating ``step``, but the evaluation context
    # is kept between steps instead of being rediscovered from the root.
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    frames: list[Rebuild] = []
    focus = t
    steps = 0

    def whole() -> Term:
        term = focus
        for rebuild in reversed(frames):
            term = rebuild(term)
        return term

    while True:
        out = _head_step(focus, w, probe)
        if isinstance(out, tuple):
            frames.append(out[1])
            focus = out[0]
            continue
        if isinstance(out, IsValue):
            if not frames:
                return Done(focus, w, steps)
            focus = frames.pop()(focus)
            continue
        if isinstance(out, Stuck):
            return StuckAt(whole(), w, out.reason, steps)
        if steps == fuel:
            return Timeout(whole(), w, steps)
        focus, w = out.term, out.world
        steps += 1
        if states is not None:
            states.append((whole(), w))


def evaluate(t: Term, w: RefWorld, fuel: int = DEFAULT_FUEL) -> EvalResult:
    """Multi-step evaluation of ``t`` from ``w`` using at most ``fuel`` steps."""
    return _run(t, w, fuel, None, None)


def eval_trace(t: Term, w: RefWorld, fuel: int = DEFAULT_FUEL) -> Trace:
    states = [(t, w)]
    result = _run(t, w, fuel, None, states)
    return Trace(states, result)


def eval_probe(f: Term, probe: ProbeState, w: RefWorld,
               fuel: int = DEFAULT_FUEL) -> tuple[EvalResult, list[int]]:
    """Evaluate ``f`` applied to a probe that records every numeral it receives.

    The probe forces its argument to a numeral, logs it, then behaves as
    ``probe.probe_function``.
    """
    result = _run(App(f, PROBE), w, fuel, probe, None)
    return result, probe.log


def trace_records(trace: Trace):
    from boxtt.sexpr import to_sexpr

    for i, (t, w) in enumerate(trace.states):
        yield {"step": i, "term": to_sexpr(t), "world": w.to_json()}


def write_trace_jsonl(trace: Trace, fp) -> None:
    for rec in trace_records(trace):
        fp.write(json.dumps(rec) + "\n")
