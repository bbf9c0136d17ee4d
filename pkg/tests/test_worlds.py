import pytest
from hypothesis import given, settings, strategies as st

from boxtt.terms import Lam, Num, STAR, Var
from boxtt.validation.generators import gen_world
from boxtt.worlds import (
    NAT, Cell, RefWorld, Restriction, RestrictionKind, coerce, compatible, extends, new_choice,
    read, sample_extensions, start_new_choice, write,
)

EMPTY = RefWorld()
ONE = RefWorld((Cell(1, NAT, 3, True),))


def test_read():
    assert read(ONE, 1) == 3
    assert read(EMPTY, 7) is None


def test_write():
    assert write(RefWorld((Cell(1, NAT, 0, True),)), 1, 4) == RefWorld((Cell(1, NAT, 4, True),))
    assert write(EMPTY, 1, 4) == EMPTY
    frozen = RefWorld((Cell(1, NAT, 0, False),))
    assert write(frozen, 1, 4) == frozen


def test_new_choice():
    assert new_choice(EMPTY) == 0
    assert new_choice(RefWorld((Cell(0, NAT, 0), Cell(3, NAT, 0)))) == 4


def test_start_new_choice():
    assert start_new_choice(EMPTY, NAT) == RefWorld((Cell(0, NAT, 0, True),))
    w = start_new_choice(ONE, NAT)
    assert read(w, new_choice(ONE)) == NAT.default
    assert compatible(new_choice(ONE), w, NAT)


def test_compatible():
    assert compatible(1, ONE, NAT)
    assert not compatible(1, EMPTY, NAT)
    assert not compatible(1, RefWorld((Cell(1, NAT, 3, False),)), NAT)


def test_extends_examples():
    assert extends(ONE, ONE)
    assert extends(ONE, start_new_choice(ONE, NAT))
    assert not extends(start_new_choice(ONE, NAT), ONE)
    assert not extends(RefWorld((Cell(1, NAT, 3, False),)), RefWorld((Cell(1, NAT, 4, False),)))
    assert not extends(ONE, RefWorld((Cell(2, NAT, 3, True),)))


def test_coerce():
    assert coerce(Num(7)) == 7
    assert coerce(Lam("x", Var("x"))) == 0
    assert coerce(STAR) == 0


def test_restriction_rejects_bad_values():
    with pytest.raises(ValueError):
        Cell(0, NAT, -1)
    with pytest.raises(ValueError):
        Restriction(RestrictionKind.NAT_ONLY, -2)
    with pytest.raises(ValueError):
        RefWorld((Cell(0, NAT, 0), Cell(0, NAT, 1)))


def test_json_round_trip():
    w = RefWorld((Cell(0, NAT, 3, True), Cell(2, NAT, 0, False)))
    assert RefWorld.from_json(w.to_json()) == w


def test_sample_extensions_examples():
    assert sample_extensions(ONE, 0, 1, 5) == [ONE]
    a = sample_extensions(ONE, 4, 16, 9)
    assert a == sample_extensions(ONE, 4, 16, 9)
    assert len(a) == 16 and a[0] == ONE
    assert all(extends(ONE, w) for w in a)


worlds = st.integers(0, 10**6).map(lambda s: gen_world(s, max_cells=4))


@settings(max_examples=200, deadline=None)
@given(worlds, st.integers(0, 10**6))
def test_extends_is_reflexive_and_transitive(w, seed):
    assert extends(w, w)
    for w2 in sample_extensions(w, 3, 4, seed):
        assert extends(w, w2)
        for w3 in sample_extensions(w2, 3, 4, seed + 1):
            assert extends(w2, w3) and extends(w, w3)


@settings(max_examples=200, deadline=None)
@given(worlds, st.integers(0, 100))
def test_write_extends_and_is_read_back(w, n):
    w = start_new_choice(w, NAT)
    for k in w.names():
        w2 = write(w, k, n)
        assert extends(w, w2)
        if compatible(k, w, NAT):
            assert read(w2, k) == n
    assert new_choice(w) not in w.names()
