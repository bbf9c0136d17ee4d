"""Property suites over generated pure functionals.

Each suite runs a list of ``CaseSpec`` and returns a ``SuiteReport``.  All
randomness is derived from the case seeds, so a report is reproducible from
its parameters (apart from ``wall_time``).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

from boxtt.continuity import (
    ModulusError, PurityViolation, cell_values, compute_modulus, mk_force, mk_upd, oracle_log,
    oracle_modulus,
)
from boxtt.evaluator import DEFAULT_FUEL, Done, Stepped, IsValue, eval_trace, evaluate, step
from boxtt.sexpr import parse, read_all, term_of, to_sexpr, world_of, world_to_sexpr, SList, Atom
from boxtt.terms import (
    App, Choose, Lam, Let, Name, Num, Read, Succ, Term, Var, alpha_eq, iflt, is_closed, nonames,
    rename_names, seq,
)
from boxtt.validation.generators import gen_alpha, gen_beta_agreeing, gen_F, gen_world
from boxtt.validation.membership import (
    SampleParams, member_noread_sampled, member_nowrite_sampled, member_pure,
)
from boxtt.validation.similarity import sim_diff, sim_force
from boxtt.worlds import (
    NAT, Cell, RefWorld, compatible, extends, new_choice, read, sample_extensions,
    start_new_choice, write,
)
import random

DEFAULT_CASES = 500
DEFAULT_SEED = 42
DEFAULT_BETAS = 10
DEFAULT_SAMPLES = 16
DEFAULT_DEPTH = 4
F_SIZE = 8
ALPHA_SIZE = 5


@dataclass(frozen=True)
class CaseSpec:
    F: Term
    alpha: Term
    world: RefWorld
    seed: int
    fuel: int = DEFAULT_FUEL
    redraws: int = 0

    def __post_init__(self):
        for t in (self.F, self.alpha):
            if not nonames(t) or not is_closed(t):
                raise ValueError(f"case terms must be closed and name-free: {t}")

    def to_sexpr(self) -> str:
        return (f"(case\n  (seed {self.seed})\n  (fuel {self.fuel})\n  (redraws {self.redraws})\n"
                f"  (F {to_sexpr(self.F)})\n  (alpha {to_sexpr(self.alpha)})\n"
                f"  {world_to_sexpr(self.world)})\n")

    @classmethod
    def from_sexpr(cls, text: str) -> "CaseSpec":
        (datum,) = read_all(text)
        fields: dict = {}
        for item in datum.items[1:]:
            key = item.items[0].text
            if key == "world":
                fields["world"] = world_of(item)
            elif key in ("seed", "fuel", "redraws"):
                fields[key] = int(item.items[1].text)
            else:
                fields[key] = term_of(item.items[1])
        return cls(fields["F"], fields["alpha"], fields.get("world", RefWorld()),
                   fields.get("seed", 0), fields.get("fuel", DEFAULT_FUEL),
                   fields.get("redraws", 0))


@dataclass
class Failure:
    seed: int
    message: str
    expected: object = None
    actual: object = None
    inputs: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"seed": self.seed, "message": self.message, "expected": self.expected,
                "actual": self.actual, "inputs": self.inputs}


@dataclass
class SuiteReport:
    name: str
    cases_run: int = 0
    failures: list[Failure] = field(default_factory=list)
    wall_time: float = 0.0
    stats: dict = field(default_factory=dict)
    failed_cases: list[CaseSpec] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self, timing: bool = True) -> dict:
        out = {"suite": self.name, "cases_run": self.cases_run, "passed": self.passed,
               "failures": [f.to_json() for f in self.failures], "stats": dict(sorted(self.stats.items()))}
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "".join(f", {k}={v}" for k, v in sorted(self.stats.items()))
        return (f"{status} {self.name}: {self.cases_run} cases, {len(self.failures)} failures"
                f"{extra} ({self.wall_time:.2f}s)")

    def dump_failures(self, directory: Path) -> list[Path]:
        directory.mkdir(parents=True, exist_ok=True)
        paths = []
        for case in self.failed_cases:
            p = directory / f"{self.name}-seed{case.seed}.sexp"
            p.write_text(case.to_sexpr())
            paths.append(p)
        return paths


def case_seed(seed: int, i: int) -> int:
    return seed * 1_000_003 + i


MAX_REDRAWS = 20


def gen_case(seed: int, fuel: int = DEFAULT_FUEL, f_size: int = F_SIZE,
             alpha_size: int = ALPHA_SIZE) -> CaseSpec:
    """A case whose ``F alpha`` visibly computes a numeral within ``fuel``.

    Call-by-name can make a total ``F alpha`` exponentially expensive; such a
    draw is outside the step budget, so it is replaced by the next variant for
    the same seed.  The number of replaced draws is kept on the case.
    """
    world = gen_world(seed)
    for variant in range(MAX_REDRAWS + 1):
        F, alpha = gen_F(seed, f_size, variant), gen_alpha(seed, alpha_size, variant)
        r = evaluate(App(F, alpha), world, fuel)
        if isinstance(r, Done) and isinstance(r.value, Num):
            return CaseSpec(F, alpha, world, seed, fuel, variant)
    raise RuntimeError(f"seed {seed}: no terminating draw in {MAX_REDRAWS + 1} attempts")


def gen_cases(count: int = DEFAULT_CASES, seed: int = DEFAULT_SEED, fuel: int = DEFAULT_FUEL,
              f_size: int = F_SIZE, alpha_size: int = ALPHA_SIZE) -> list[CaseSpec]:
    return [gen_case(case_seed(seed, i), fuel, f_size, alpha_size) for i in range(count)]


def _inputs(case: CaseSpec) -> dict:
    return {"F": to_sexpr(case.F), "alpha": to_sexpr(case.alpha),
            "world": world_to_sexpr(case.world)}


def _run_suite(name: str, cases: Iterable[CaseSpec],
               check: Callable[[CaseSpec, dict], Optional[Failure]]) -> SuiteReport:
    report = SuiteReport(name)
    start = time.perf_counter()
    for case in cases:
        report.cases_run += 1
        if case.redraws:
            _bump(report.stats, "redrawn_cases")
        try:
            failure = check(case, report.stats)
        except (ModulusError, ValueError) as e:
            failure = Failure(case.seed, f"{type(e).__name__}: {e}")
        if failure is not None:
            failure.inputs = failure.inputs or _inputs(case)
            report.failures.append(failure)
            report.failed_cases.append(case)
    report.wall_time = time.perf_counter() - start
    return report


def _bump(stats: dict, key: str, by: int = 1) -> None:
    stats[key] = stats.get(key, 0) + by


def _numeral_of(t: Term, w: RefWorld, fuel: int):
    r = evaluate(t, w, fuel)
    if isinstance(r, Done) and isinstance(r.value, Num):
        return r.value.value
    return None


# --- modulus is a number -------------------------------------------------------

def lockstep_sim_diff(F: Term, alpha: Term, w1: RefWorld, w2: RefWorld,
                      fuel: int = DEFAULT_FUEL, stats: Optional[dict] = None) -> Optional[str]:
    """Run ``F (upd k1 alpha)`` and ``F (upd k2 alpha)`` side by side from fresh cells.

    Returns a description of the first violation, or None.  At every step the
    second state must be the first with ``k1`` renamed to ``k2`` and the two
    cells must hold equal values; ``sim_diff`` must relate the states at the
    start, at the end, and wherever neither exposes the body of an ``upd``.
    """
    k1, k2 = new_choice(w1), new_choice(w2)
    w1 = write(start_new_choice(w1, NAT), k1, 0)
    w2 = write(start_new_choice(w2, NAT), k2, 0)
    t1, t2 = App(F, mk_upd(k1, alpha)), App(F, mk_upd(k2, alpha))
    if not sim_diff(t1, t2, k1, k2, alpha):
        return "initial states are not similar"
    for i in range(fuel + 1):
        if not alpha_eq(rename_names(t1, {k1: k2}), t2):
            return f"states at step {i} differ beyond the cell name"
        if read(w1, k1) != read(w2, k2):
            return f"cell values differ at step {i}: {read(w1, k1)} vs {read(w2, k2)}"
        if stats is not None and sim_diff(t1, t2, k1, k2, alpha):
            _bump(stats, "similar_states")
        o1, o2 = step(t1, w1), step(t2, w2)
        if isinstance(o1, IsValue) and isinstance(o2, IsValue):
            if not (isinstance(t1, Num) and t1 == t2 and sim_diff(t1, t2, k1, k2, alpha)):
                return f"final values differ: {t1} vs {t2}"
            return None
        if not (isinstance(o1, Stepped) and isinstance(o2, Stepped)):
            return f"runs desynchronised at step {i}: {o1} vs {o2}"
        t1, w1, t2, w2 = o1.term, o1.world, o2.term, o2.world
    return "fuel exhausted"


def check_modulus_suite(cases: Iterable[CaseSpec], samples: int = DEFAULT_SAMPLES,
                        depth: int = DEFAULT_DEPTH, lockstep: int = 1) -> SuiteReport:
    """Modulus is a numeral, equals the oracle, and is invariant across extensions."""

    def check(case: CaseSpec, stats: dict) -> Optional[Failure]:
        base = compute_modulus(case.F, case.alpha, case.world, case.fuel)
        oracle = oracle_modulus(case.F, case.alpha, case.world, case.fuel)
        if oracle != base.modulus:
            return Failure(case.seed, "modulus disagrees with oracle", oracle, base.modulus)
        exts = sample_extensions(case.world, depth, samples, case.seed)
        for w2 in exts:
            m = compute_modulus(case.F, case.alpha, w2, case.fuel).modulus
            if m != base.modulus:
                return Failure(case.seed, f"modulus changes in extension {world_to_sexpr(w2)}",
                               base.modulus, m)
        _bump(stats, "extensions", len(exts))
        for w2 in [w for w in exts if w != case.world][:lockstep]:
            problem = lockstep_sim_diff(case.F, case.alpha, case.world, w2, case.fuel, stats)
            if problem:
                return Failure(case.seed, f"similarity check against {world_to_sexpr(w2)}: {problem}")
            _bump(stats, "lockstep_pairs")
        return None

    return _run_suite("modulus", cases, check)


# --- the modulus is the highest number ---------------------------------------

def check_highest_suite(cases: Iterable[CaseSpec]) -> SuiteReport:
    """Every recorded value stays below the modulus; the last one is modulus - 1."""

    def check(case: CaseSpec, stats: dict) -> Optional[Failure]:
        rep = compute_modulus(case.F, case.alpha, case.world, case.fuel, keep_trace=True)
        values = [v for v in cell_values(rep.trace, rep.fresh_name) if v is not None]
        top = rep.modulus - 1
        if any(v > top for v in values):
            return Failure(case.seed, "a state records more than modulus - 1", top, max(values))
        if values[-1] != top:
            return Failure(case.seed, "final record is not modulus - 1", top, values[-1])
        if any(b < a for a, b in zip(values, values[1:])):
            return Failure(case.seed, "record decreased along the computation", None, values)
        log = oracle_log(case.F, case.alpha, case.world, case.fuel)
        if any(n >= rep.modulus for n in log):
            return Failure(case.seed, "an argument is not below the modulus", rep.modulus, max(log))
        _bump(stats, "states", len(rep.trace.states))
        return None

    return _run_suite("highest", cases, check)


# --- the modulus as a modulus -------------------------------------------------

def check_continuity_suite(cases: Iterable[CaseSpec], betas: int = DEFAULT_BETAS,
                           lockstep_steps: int = 100) -> SuiteReport:
    """``F alpha``, ``F beta`` and ``F (force beta)`` agree for beta agreeing below the modulus."""

    def check(case: CaseSpec, stats: dict) -> Optional[Failure]:
        F, alpha, w, fuel = case.F, case.alpha, case.world, case.fuel
        n = compute_modulus(F, alpha, w, fuel).modulus
        expected = _numeral_of(App(F, alpha), w, fuel)
        if expected is None:
            return Failure(case.seed, "F alpha does not compute to a numeral")
        k = new_choice(w)
        wk = write(start_new_choice(w, NAT), k, 0)
        with_upd = _numeral_of(App(F, mk_upd(k, alpha)), wk, fuel)
        if with_upd != expected:
            return Failure(case.seed, "F (upd alpha) differs from F alpha", expected, with_upd)
        for j in range(betas):
            beta = gen_beta_agreeing(alpha, n, case.seed * 31 + j, fuel)
            got = _numeral_of(App(F, beta), w, fuel)
            forced = _numeral_of(App(F, mk_force(beta)), w, fuel)
            if got != expected or forced != expected:
                return Failure(case.seed, f"beta #{j} agreeing below {n} changes F",
                               expected, [got, forced], {**_inputs(case), "beta": to_sexpr(beta)})
            t1, t2 = App(F, mk_upd(k, alpha)), App(F, mk_force(beta))
            if not sim_force(t1, t2, k, alpha, beta):
                return Failure(case.seed, "F (upd alpha) and F (force beta) are not similar")
            w1, w2 = wk, w
            for _ in range(lockstep_steps):
                o1, o2 = step(t1, w1), step(t2, w2)
                if not (isinstance(o1, Stepped) and isinstance(o2, Stepped)):
                    break
                t1, w1, t2, w2 = o1.term, o1.world, o2.term, o2.world
                if not sim_force(t1, t2, k, alpha, beta):
                    _bump(stats, "lockstep_desync")
                    break
                if w2 != w:
                    return Failure(case.seed, "F (force beta) wrote to the world")
                _bump(stats, "lockstep_steps")
            _bump(stats, "betas")
        return None

    return _run_suite("continuity", cases, check)


# --- computations respect extension -------------------------------------------

def _chain_problem(trace) -> Optional[str]:
    worlds = trace.worlds()
    for i, (a, b) in enumerate(zip(worlds, worlds[1:])):
        if not extends(a, b):
            return f"step {i} does not extend its world"
    if not extends(worlds[0], worlds[-1]):
        return "final world does not extend the initial one"
    return None


def check_extension_suite(cases: Iterable[CaseSpec]) -> SuiteReport:
    from boxtt.continuity import mk_mod

    def check(case: CaseSpec, stats: dict) -> Optional[Failure]:
        k = new_choice(case.world)
        wk = write(start_new_choice(case.world, NAT), k, 0)
        runs = [(mk_mod(case.F, case.alpha), case.world), (App(case.F, case.alpha), case.world),
                (App(case.F, mk_upd(k, case.alpha)), wk)]
        for label, (t, w) in zip(("mod", "F alpha", "F upd"), runs):
            trace = eval_trace(t, w, case.fuel)
            if not isinstance(trace.result, Done):
                return Failure(case.seed, f"{label} did not finish: {type(trace.result).__name__}")
            problem = _chain_problem(trace)
            if problem:
                return Failure(case.seed, f"{label}: {problem}")
            _bump(stats, "states", len(trace.states))
        return None

    return _run_suite("extension", cases, check)


# --- fixed regressions ------------------------------------------------------

def _fixed_suite(name: str, checks: list[tuple[str, Callable[[], object], object]]) -> SuiteReport:
    report = SuiteReport(name)
    start = time.perf_counter()
    for i, (label, run, expected) in enumerate(checks):
        report.cases_run += 1
        try:
            actual = run()
        except Exception as e:  # a crash is a failed check
            actual = f"{type(e).__name__}: {e}"
        if actual != expected:
            report.failures.append(Failure(i, label, expected, actual))
    report.wall_time = time.perf_counter() - start
    return report


def purity_counterexample() -> dict:
    """The impure point and argument that separate ``alpha n`` from ``upd alpha n``."""
    gamma = Name(0)
    alpha = Lam("n", iflt(Read(gamma), Num(1), Num(0), Num(1)))
    arg = seq(Choose(gamma, Num(1)), Num(1))
    world = RefWorld((Cell(0, NAT, 0, True),))
    return {"gamma": 0, "alpha": alpha, "arg": arg, "world": world}


def check_purity_counterexample(fuel: int = DEFAULT_FUEL) -> SuiteReport:
    ce = purity_counterexample()
    alpha, arg, w = ce["alpha"], ce["arg"], ce["world"]
    k = new_choice(w)
    wk = write(start_new_choice(w, NAT), k, 0)

    def rejected():
        try:
            compute_modulus(Lam("f", App(Var("f"), Num(0))), alpha, w, fuel)
        except PurityViolation:
            return "PurityViolation"
        return "accepted"

    return _fixed_suite("purity-counterexample", [
        ("alpha n computes to 0 when gamma is 0", lambda: _numeral_of(App(alpha, arg), w, fuel), 0),
        ("upd alpha n computes to 1", lambda: _numeral_of(App(mk_upd(k, alpha), arg), wk, fuel), 1),
        ("compute_modulus rejects the impure alpha", rejected, "PurityViolation"),
    ])


def membership_examples() -> dict[str, Term]:
    kappa = Name(0)
    x = "x"
    return {
        "read": Read(kappa),
        "let-read-zero": Let(x, Read(kappa), Num(0)),
        "increment": Choose(kappa, Succ(Read(kappa))),
        "read-restore": Let(x, Read(kappa), seq(Choose(kappa, Succ(Var(x))), Choose(kappa, Var(x)))),
        "zero": Num(0),
        "seq-read-zero": seq(Read(kappa), Num(0)),
    }


def membership_world() -> RefWorld:
    return RefWorld((Cell(0, NAT, 3, True),))


def check_membership_suite(params: SampleParams = SampleParams()) -> SuiteReport:
    ex, w = membership_examples(), membership_world()
    return _fixed_suite("membership", [
        ("!k is not in NoRead", lambda: member_noread_sampled(ex["read"], w, params), False),
        ("let x = !k in 0 is in NoRead",
         lambda: member_noread_sampled(ex["let-read-zero"], w, params), True),
        ("k := !k + 1 is not in NoWrite",
         lambda: member_nowrite_sampled(ex["increment"], w, params), False),
        ("read-then-restore is in NoWrite",
         lambda: member_nowrite_sampled(ex["read-restore"], w, params), True),
        ("0 is pure", lambda: member_pure(ex["zero"], w, params.fuel, params), True),
        ("seq !k 0 is not pure", lambda: member_pure(ex["seq-read-zero"], w, params.fuel, params),
         False),
    ])


# --- reference-cell assumptions ------------------------------------------------

def check_assumptions_suite(count: int = 1000, seed: int = DEFAULT_SEED,
                            samples: int = 4, depth: int = DEFAULT_DEPTH) -> SuiteReport:
    """Reads after writes return the write, and stay numerals in extensions."""
    report = SuiteReport("assumptions")
    start = time.perf_counter()
    rng = random.Random(f"assumptions:{seed}")
    for i in range(count):
        s = case_seed(seed, i)
        w = gen_world(s, max_cells=5)
        if not w.cells or rng.random() < 0.2:
            w = start_new_choice(w, NAT)
        k = rng.choice(w.names())
        n = rng.randint(0, 50)
        report.cases_run += 1
        if not compatible(k, w, NAT):
            _bump(report.stats, "incompatible_skipped")
            continue
        w2 = write(w, k, n)
        if read(w2, k) != n:
            report.failures.append(Failure(s, "read after write", n, read(w2, k)))
            continue
        if not extends(w, w2):
            report.failures.append(Failure(s, "write does not extend"))
            continue
        for w3 in sample_extensions(w2, depth, samples, s):
            v = read(w3, k)
            if not (isinstance(v, int) and v >= 0) or not compatible(k, w3, NAT):
                report.failures.append(Failure(s, "read in extension is not a numeral", None, v))
                break
        _bump(report.stats, "compatible")
    report.wall_time = time.perf_counter() - start
    return report


SUITES = ("modulus", "highest", "continuity", "extension", "purity-counterexample",
          "membership", "assumptions")


def run_suites(names: Iterable[str], cases: int = DEFAULT_CASES, seed: int = DEFAULT_SEED,
               fuel: int = DEFAULT_FUEL, betas: int = DEFAULT_BETAS,
               samples: int = DEFAULT_SAMPLES, depth: int = DEFAULT_DEPTH,
               case_list: Optional[list[CaseSpec]] = None) -> list[SuiteReport]:
    names = list(names)
    if "all" in names:
        names = list(SUITES)
    generated = case_list if case_list is not None else None
    reports = []
    for name in names:
        if name in ("modulus", "highest", "continuity", "extension") and generated is None:
            generated = gen_cases(cases, seed, fuel)
        match name:
            case "modulus":
                reports.append(check_modulus_suite(generated, samples, depth))
            case "highest":
                reports.append(check_highest_suite(generated))
            case "continuity":
                reports.append(check_continuity_suite(generated, betas))
            case "extension":
                reports.append(check_extension_suite(generated))
            case "purity-counterexample":
                reports.append(check_purity_counterexample(fuel))
            case "membership":
                reports.append(check_membership_suite(SampleParams(depth, samples, seed, fuel)))
            case "assumptions":
                reports.append(check_assumptions_suite(2 * cases, seed, depth=depth))
            case _:
                raise ValueError(f"unknown suite {name!r}")
    return reports
