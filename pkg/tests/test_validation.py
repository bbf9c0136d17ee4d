from hypothesis import given, settings, strategies as st

from boxtt.continuity import mk_force, mk_upd
from boxtt.evaluator import Done, evaluate
from boxtt.terms import (
    App, Fresh, Lam, Let, Name, Num, Read, Succ, Var, is_closed, nonames,
)
from boxtt.validation import suites
from boxtt.validation.generators import gen_F, gen_alpha, gen_beta_agreeing, gen_world
from boxtt.validation.membership import (
    SampleParams, member_nat_sampled, member_noread_sampled, member_nowrite_sampled, member_pure,
)
from boxtt.validation.similarity import sim_diff, sim_force, updterm
from boxtt.worlds import NAT, Cell, RefWorld

EMPTY = RefWorld()
SUCC = Lam("n", Succ(Var("n")))
F = Lam("a", App(Var("a"), App(Var("a"), Num(2))))
FAST = SampleParams(depth=3, count=6)


def numeral(t, w=EMPTY):
    r = evaluate(t, w, 100_000)
    assert isinstance(r, Done) and isinstance(r.value, Num), r
    return r.value.value


# --- similarity ----------------------------------------------------------------

def test_sim_diff_examples():
    assert sim_diff(mk_upd(0, SUCC), mk_upd(1, SUCC), 0, 1, SUCC)
    assert not sim_diff(Name(0), Name(1), 0, 1, SUCC)
    assert sim_diff(Num(3), Num(3), 0, 1, SUCC)
    assert not sim_diff(Num(3), Num(4), 0, 1, SUCC)
    assert not sim_diff(mk_upd(0, SUCC), mk_upd(0, SUCC), 0, 1, SUCC)


def test_sim_diff_is_up_to_renaming():
    a = Lam("x", App(Var("x"), mk_upd(0, SUCC)))
    b = Lam("y", App(Var("y"), mk_upd(1, SUCC)))
    assert sim_diff(a, b, 0, 1, SUCC)


def test_sim_force_examples():
    beta = Lam("n", Num(0))
    assert sim_force(mk_upd(0, SUCC), mk_force(beta), 0, SUCC, beta)
    assert sim_force(App(F, mk_upd(0, SUCC)), App(F, mk_force(beta)), 0, SUCC, beta)
    assert not sim_force(Fresh("x", Var("x")), Fresh("x", Var("x")), 0, SUCC, beta)


def test_updterm_examples():
    assert updterm(App(F, mk_upd(0, SUCC)), 0, SUCC)
    assert not updterm(Read(Name(0)), 0, SUCC)
    assert updterm(Num(0), 0, SUCC)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_similarity_reflexive_on_generated(seed):
    f, alpha = gen_F(seed, 6), gen_alpha(seed, 4)
    assert sim_diff(f, f, 0, 1, alpha)
    assert updterm(App(f, mk_upd(0, alpha)), 0, alpha)
    assert sim_force(App(f, mk_upd(0, alpha)), App(f, mk_force(alpha)), 0, alpha, alpha)


# --- generators ----------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_generated_terms_are_closed_and_name_free(seed):
    for t in (gen_F(seed, 8), gen_alpha(seed, 5)):
        assert nonames(t) and is_closed(t)
    assert gen_F(seed, 8) == gen_F(seed, 8)


def test_raw_draws_terminate_at_the_calibrated_size():
    # measured on unfiltered draws at the default sizes, which are at most 8
    assert suites.F_SIZE <= 8 and suites.ALPHA_SIZE <= 8
    seeds = [suites.case_seed(7, i) for i in range(300)]
    done = sum(isinstance(evaluate(App(gen_F(s, suites.F_SIZE), gen_alpha(s, suites.ALPHA_SIZE)),
                                   EMPTY, 100_000), Done) for s in seeds)
    assert done >= 0.99 * len(seeds)


def test_redraws_are_deterministic_and_rare():
    a = suites.gen_case(42000299)
    assert a.redraws >= 1 and a == suites.gen_case(42000299)
    assert isinstance(evaluate(App(a.F, a.alpha), a.world, a.fuel), Done)
    assert suites.gen_case(12345).redraws == 0


def test_beta_agreeing_example():
    ident = Lam("n", Var("n"))
    for seed in range(20):
        beta = gen_beta_agreeing(ident, 3, seed)
        assert nonames(beta) and is_closed(beta)
        assert [numeral(App(beta, Num(i))) for i in range(3)] == [0, 1, 2]
        assert numeral(App(beta, Num(3))) != 3


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 8))
def test_beta_agreeing_property(seed, n):
    alpha = gen_alpha(seed, 5)
    beta = gen_beta_agreeing(alpha, n, seed)
    for i in range(n):
        assert numeral(App(beta, Num(i))) == numeral(App(alpha, Num(i)))
    assert numeral(App(beta, Num(n))) != numeral(App(alpha, Num(n)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 12))
def test_force_agrees_on_numerals(seed, n):
    beta = gen_beta_agreeing(gen_alpha(seed, 5), 3, seed)
    assert numeral(App(mk_force(beta), Num(n))) == numeral(App(beta, Num(n)))


# --- membership ----------------------------------------------------------------

def test_membership_examples():
    ex, w = suites.membership_examples(), suites.membership_world()
    assert not member_noread_sampled(ex["read"], w, FAST)
    assert member_noread_sampled(ex["let-read-zero"], w, FAST)
    assert not member_nowrite_sampled(ex["increment"], w, FAST)
    assert member_nowrite_sampled(ex["read-restore"], w, FAST)
    assert member_pure(ex["zero"], w, params=FAST)
    assert not member_pure(ex["seq-read-zero"], w, params=FAST)


def test_member_nat():
    w = RefWorld((Cell(0, NAT, 3, True),))
    assert member_nat_sampled(Succ(Num(1)), w, FAST)
    assert not member_nat_sampled(Read(Name(0)), w, FAST)
    assert not member_nat_sampled(Lam("x", Var("x")), w, FAST)
    assert member_nat_sampled(Let("x", Read(Name(0)), Num(0)), w, FAST)


def test_member_pure_rejects_name_valued_results():
    assert not member_pure(Fresh("x", Var("x")), EMPTY, params=FAST)


# --- suites --------------------------------------------------------------------

def test_case_spec_round_trip():
    case = suites.gen_case(12345)
    assert suites.CaseSpec.from_sexpr(case.to_sexpr()) == case


def test_lockstep_on_worked_example():
    stats = {}
    w1, w2 = EMPTY, RefWorld((Cell(0, NAT, 5, True), Cell(3, NAT, 1, False)))
    assert suites.lockstep_sim_diff(F, SUCC, w1, w2, stats=stats) is None
    assert stats["similar_states"] > 0


def test_small_suites_pass_and_are_deterministic():
    cases = suites.gen_cases(15, seed=3)
    for run in (lambda: suites.check_modulus_suite(cases, samples=4, depth=2),
                lambda: suites.check_highest_suite(cases),
                lambda: suites.check_continuity_suite(cases, betas=3),
                lambda: suites.check_extension_suite(cases)):
        a, b = run(), run()
        assert a.passed, a.failures[:2]
        assert a.cases_run == 15
        assert a.to_json(timing=False) == b.to_json(timing=False)


def test_fixed_suites_pass():
    for r in (suites.check_purity_counterexample(), suites.check_membership_suite(FAST),
              suites.check_assumptions_suite(200)):
        assert r.passed, r.failures


def test_failures_are_reported_and_dumped(tmp_path):
    case = suites.gen_case(99)
    report = suites._run_suite("demo", [case], lambda c, s: suites.Failure(c.seed, "boom"))
    assert not report.passed and report.failures[0].inputs["F"]
    (path,) = report.dump_failures(tmp_path)
    assert suites.CaseSpec.from_sexpr(path.read_text()) == case
    assert "FAIL demo" in report.summary()


def test_crashing_case_is_a_failure():
    impure = suites.CaseSpec.__new__(suites.CaseSpec)
    object.__setattr__(impure, "F", Lam("a", Read(Name(0))))
    object.__setattr__(impure, "alpha", SUCC)
    object.__setattr__(impure, "world", EMPTY)
    object.__setattr__(impure, "seed", 1)
    object.__setattr__(impure, "fuel", 100)
    report = suites.check_modulus_suite([impure], samples=2, depth=1)
    assert not report.passed and "PurityViolation" in report.failures[0].message
