from hypothesis import given, settings, strategies as st

from boxtt import terms as T
from boxtt.evaluator import Done, evaluate
from boxtt.terms import (
    App, Choose, Fresh, Lam, Let, Name, Num, Read, Succ, Var, alpha_eq, free_vars, is_value,
    nonames, noread, nowrite, subst,
)
from boxtt.validation.generators import gen_any_term
from boxtt.worlds import RefWorld

W = RefWorld()


def value_of(t):
    r = evaluate(t, W, 10_000)
    assert isinstance(r, Done), r
    return r.value


def test_subst_base_case():
    assert subst(Var("x"), "x", Num(3)) == Num(3)


def test_subst_respects_shadowing():
    t = Lam("x", Var("x"))
    assert subst(t, "x", Num(3)) == t


def test_subst_renames_to_avoid_capture():
    out = subst(Lam("y", App(Var("x"), Var("y"))), "x", Var("y"))
    assert isinstance(out, Lam) and out.var != "y"
    assert out.body == App(Var("y"), Var(out.var))
    assert alpha_eq(out, Lam("z", App(Var("y"), Var("z"))))


def test_subst_leaves_unrelated_binders_alone():
    t = Lam("y", App(Var("x"), Var("y")))
    assert subst(t, "x", Num(1)) == Lam("y", App(Num(1), Var("y")))


def test_free_vars_of_binders():
    t = T.Spread(Var("p"), "a", "b", App(Var("a"), Var("c")))
    assert free_vars(t) == {"p", "c"}
    assert free_vars(T.Pi("x", Var("A"), Var("x"))) == {"A"}


def test_alpha_eq_distinguishes_binding_structure():
    assert alpha_eq(Lam("x", Var("x")), Lam("y", Var("y")))
    assert not alpha_eq(Lam("x", Var("y")), Lam("y", Var("y")))
    assert not alpha_eq(Lam("x", Lam("y", Var("x"))), Lam("x", Lam("y", Var("y"))))


def test_nonames_examples():
    assert nonames(Lam("x", Succ(Var("x"))))
    assert not nonames(Read(Name(0)))
    assert not nonames(Fresh("x", Var("x")))


def test_noread_nowrite_examples():
    assert noread(Choose(Name(1), Num(1)))
    assert not nowrite(Choose(Name(1), Num(1)))
    assert nowrite(Read(Name(1)))


def test_values():
    assert is_value(Lam("x", Var("x"))) and is_value(Num(0)) and is_value(T.STAR)
    assert is_value(Name(3)) and is_value(T.Pair(Succ(Num(0)), Var("z")))
    assert not is_value(App(Var("f"), Num(0))) and not is_value(Succ(Num(0)))
    assert not is_value(Fresh("x", Var("x")))


def test_numerals_are_natural():
    import pytest

    with pytest.raises(ValueError):
        Num(-1)


def test_sugar_lt():
    assert value_of(T.lt(Num(2), Num(5))) == value_of(T.btrue())
    assert value_of(T.lt(Num(5), Num(2))) == value_of(T.bfalse())
    assert value_of(T.lt(Num(3), Num(3))) == value_of(T.bfalse())


def test_sugar_arithmetic():
    assert value_of(T.sub(Num(5), Num(2))) == Num(3)
    assert value_of(T.sub(Num(2), Num(5))) == Num(0)
    assert value_of(T.pred(Num(0))) == Num(0)
    assert value_of(T.pred(Num(4))) == Num(3)
    assert value_of(T.add(Num(4), Num(3))) == Num(7)
    assert value_of(T.iszero(Num(0))) == value_of(T.btrue())
    assert value_of(T.iszero(Num(2))) == value_of(T.bfalse())


def test_sugar_ite_and_iflt():
    assert value_of(T.ite(T.btrue(), Num(1), Num(2))) == Num(1)
    assert value_of(T.ite(T.bfalse(), Num(1), Num(2))) == Num(2)
    assert value_of(T.iflt(Num(1), Num(2), Num(7), Num(8))) == Num(7)
    assert value_of(T.neg(T.btrue())) == value_of(T.bfalse())


def test_sugar_binders_do_not_capture():
    # the branches mention variables the sugar might pick for itself
    for v in ("x", "y", "m", "r", "_"):
        assert value_of(Let(v, Num(9), T.ite(T.btrue(), Var(v), Num(0)))) == Num(9)
        assert value_of(Let(v, Num(9), T.seq(Num(0), Var(v)))) == Num(9)


def test_sugar_is_name_free():
    for t in (T.iflt(Num(0), Num(1), Num(2), Num(3)), T.sub(Num(1), Num(2)), T.seq(Num(0), T.STAR)):
        assert nonames(t)
    assert not nonames(T.seq(Read(Name(0)), Num(0)))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["x", "y", "z", "f", "x1"]))
def test_subst_identity_is_alpha_eq(seed, x):
    t = gen_any_term(seed)
    assert alpha_eq(subst(t, x, Var(x)), t)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_subst_removes_the_variable(seed):
    t = gen_any_term(seed)
    for x in free_vars(t):
        assert x not in free_vars(subst(t, x, Num(0)))
