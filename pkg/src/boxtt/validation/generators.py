"""Seeded random generators for pure functionals, points and worlds.

Every generated ``F`` and ``alpha`` is closed and name-free, and total on
numerals: recursion is only through ``natrec`` whose step function uses the
recursive result at most once.
"""
from __future__ import annotations

import random

from boxtt.evaluator import DEFAULT_FUEL, Done, evaluate
from boxtt import terms as T
from boxtt.terms import App, Lam, Let, Num, Pair, Spread, Succ, Term, Var
from boxtt.worlds import NAT, Cell, RefWorld


class _Gen:
    def __init__(self, rng: random.Random, alpha_var: str | None = None):
        self.rng = rng
        self.alpha_var = alpha_var
        self.counter = 0

    def var(self, base="v") -> str:
        self.counter += 1
        return f"{base}{self.counter}"

    def leaf(self, scope: list[str]) -> Term:
        rng = self.rng
        if scope and rng.random() < 0.6:
            return Var(rng.choice(scope))
        return Num(rng.randint(0, 4))

    def expr(self, size: int, scope: list[str]) -> Term:
        rng = self.rng
        if size <= 1:
            if self.alpha_var and rng.random() < 0.35:
                return App(Var(self.alpha_var), self.leaf(scope))
            return self.leaf(scope)
        options = ["succ", "pred", "sub", "add", "ifz", "iflt", "let", "natrec", "beta", "spread"]
        weights = [3, 2, 2, 1, 2, 2, 2, 2, 2, 1]
        if self.alpha_var:
            options += ["apply", "apply", "pass"]
            weights += [6, 3, 1]
        kind = rng.choices(options, weights)[0]
        s = size - 1
        match kind:
            case "succ":
                return Succ(self.expr(s, scope))
            case "pred":
                return T.pred(self.expr(s, scope))
            case "sub":
                a, b = self._split(s)
                return T.sub(self.expr(a, scope), self.expr(b, scope))
            case "add":
                a, b = self._split(s)
                return T.add(self.expr(a, scope), self.expr(b, scope))
            case "ifz":
                a, b, c = self._split3(s)
                return T.ite(T.iszero(self.expr(a, scope)), self.expr(b, scope), self.expr(c, scope))
            case "iflt":
                a, b = self._split(s)
                c, d = self._split(max(1, s - 2))
                return T.iflt(self.expr(a, scope), self.expr(b, scope),
                              self.expr(c, scope), self.expr(d, scope))
            case "let":
                v = self.var()
                a, b = self._split(s)
                return Let(v, self.expr(a, scope), self.expr(b, scope + [v]))
            case "natrec":
                a, b, c = self._split3(s)
                m, r = self.var("m"), self.var("r")
                return T.NatRec(self.expr(a, scope), self.expr(b, scope),
                                Lam(m, Lam(r, self.step_body(c, scope + [m], r))))
            case "beta":
                v = self.var()
                a, b = self._split(s)
                return App(Lam(v, self.expr(b, scope + [v])), self.expr(a, scope))
            case "spread":
                x, y = self.var(), self.var()
                a, b, c = self._split3(s)
                return Spread(Pair(self.expr(a, scope), self.expr(b, scope)), x, y,
                              self.expr(c, scope + [x, y]))
            case "apply":
                return App(Var(self.alpha_var), self.expr(s, scope))
            case "pass":
                g = self.var("g")
                return App(Lam(g, App(Var(g), self.expr(s, scope))), Var(self.alpha_var))
        raise AssertionError(kind)

    def step_body(self, size: int, scope: list[str], r: str) -> Term:
        """A natrec step that mentions the recursive result ``r`` at most once."""
        kind = self.rng.choice(["r", "succ", "sub", "add", "ignore"])
        other = self.expr(max(1, size - 1), scope)
        match kind:
            case "r":
                return Var(r)
            case "succ":
                return Succ(Var(r))
            case "sub":
                return T.sub(Var(r), other)
            case "add":
                return T.add(Var(r), other)
            case _:
                return other

    def _split(self, size: int) -> tuple[int, int]:
        a = self.rng.randint(1, max(1, size - 1)) if size > 1 else 1
        return a, max(1, size - a)

    def _split3(self, size: int) -> tuple[int, int, int]:
        a, rest = self._split(size)
        b, c = self._split(rest)
        return a, b, c


def _rng(kind: str, seed: int, variant: int) -> random.Random:
    return random.Random(f"{kind}:{seed}" if variant == 0 else f"{kind}:{seed}#{variant}")


def gen_alpha(seed: int, size: int = 4, variant: int = 0) -> Term:
    """A closed, name-free, total function on numerals ``λn. e``."""
    if size < 1:
        raise ValueError("size must be at least 1")
    g = _Gen(_rng("alpha", seed, variant))
    return Lam("n", g.expr(size, ["n"]))


def gen_F(seed: int, size: int = 6, variant: int = 0) -> Term:
    """A closed, name-free functional ``λa. e`` that applies ``a`` to numerals."""
    if size < 1:
        raise ValueError("size must be at least 1")
    g = _Gen(_rng("F", seed, variant), alpha_var="a")
    return Lam("a", g.expr(size, []))


def _numeral(t: Term, fuel: int) -> int:
    r = evaluate(t, RefWorld(), fuel)
    if not isinstance(r, Done) or not isinstance(r.value, Num):
        raise ValueError(f"{t} does not evaluate to a numeral")
    return r.value.value


def gen_beta_agreeing(alpha: Term, n: int, seed: int, fuel: int = DEFAULT_FUEL) -> Term:
    """A name-free ``beta`` equal to ``alpha`` below ``n`` and different at ``n``.

    Below ``n`` the result either calls ``alpha`` or, for small ``n``, looks the
    answer up in a table of precomputed values.  From ``n`` on it is patched.
    """
    rng = random.Random(f"beta:{seed}:{n}")
    at_n = _numeral(App(alpha, Num(n)), fuel)
    m = "m"
    if rng.random() < 0.5:
        tail: Term = Succ(App(alpha, Var(m)))
        for _ in range(rng.randint(0, 2)):
            tail = Succ(tail)
    else:
        c = rng.randint(0, at_n + 3)
        if c == at_n:
            c += 1
        tail = Num(c)
    if n <= 6 and rng.random() < 0.5:
        below: Term = Num(_numeral(App(alpha, Num(n - 1)), fuel)) if n else Num(0)
        for i in range(n - 2, -1, -1):
            below = T.iflt(Var(m), Num(i + 1), Num(_numeral(App(alpha, Num(i)), fuel)), below)
    else:
        below = App(alpha, Var(m))
    return Lam(m, T.iflt(Var(m), Num(n), below, tail))


def gen_world(seed: int, max_cells: int = 3) -> RefWorld:
    rng = random.Random(f"world:{seed}")
    cells, name = [], rng.randint(0, 2)
    for _ in range(rng.randint(0, max_cells)):
        cells.append(Cell(name, NAT, rng.randint(0, 9), rng.random() < 0.85))
        name += rng.randint(1, 3)
    return RefWorld(tuple(cells))


_ATOMS = [lambda r: T.STAR, lambda r: T.Nat(), lambda r: T.NoRead(), lambda r: T.NoWrite(),
          lambda r: T.Pure(), lambda r: Num(r.randint(0, 20)), lambda r: T.Name(r.randint(0, 5)),
          lambda r: T.Universe(r.randint(0, 3))]


def gen_any_term(seed: int, size: int = 8) -> Term:
    """An arbitrary (possibly open, ill-typed) term over the full grammar."""
    rng = random.Random(f"any:{seed}")
    names = ["x", "y", "z", "f", "x1"]

    def go(size: int) -> Term:
        if size <= 1:
            if rng.random() < 0.4:
                return Var(rng.choice(names))
            return rng.choice(_ATOMS)(rng)
        v = lambda: rng.choice(names)
        s = size - 1
        k = lambda: go(rng.randint(1, s))
        builders = [
            lambda: Lam(v(), k()), lambda: App(k(), k()), lambda: Pair(k(), k()),
            lambda: Spread(k(), v(), v(), k()), lambda: T.Inl(k()), lambda: T.Inr(k()),
            lambda: T.Decide(k(), v(), k(), v(), k()), lambda: Succ(k()),
            lambda: T.NatRec(k(), k(), k()), lambda: T.Fix(k()), lambda: Let(v(), k(), k()),
            lambda: T.Read(k()), lambda: T.Choose(k(), k()), lambda: T.Fresh(v(), k()),
            lambda: T.Pi(v(), k(), k()), lambda: T.Sum(v(), k(), k()),
            lambda: T.SetType(v(), k(), k()), lambda: T.Union(k(), k()),
            lambda: T.Eq(k(), k(), k()), lambda: T.Isect(k(), k()), lambda: T.QSquash(k()),
        ]
        return rng.choice(builders)()

    return go(size)
