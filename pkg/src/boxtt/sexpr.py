"""S-expression concrete syntax for terms and worlds.

One form per syntactic production, e.g. ``(app (lam x x) (num 0))``.  Sugar
forms (``ite``, ``seq``, ``iflt``, ``true``, ...) are expanded while parsing, so
printing always yields core syntax and ``parse(to_sexpr(t)) == t``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from boxtt import terms as T
from boxtt.worlds import NAT, Cell, RefWorld


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line, self.column = line, column
        where = f"{line}:{column}: " if line else ""
        super().__init__(where + message)


class UnknownForm(ParseError):
    pass


class ArityError(ParseError):
    pass


@dataclass(frozen=True)
class Atom:
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int
    column: int


_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


def read_all(text: str) -> list:
    """Read every top-level datum in ``text``."""
    stack: list[tuple[list, int, int]] = []
    top: list = []
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        tok = m.group()
        column = m.start() - line_start + 1
        if tok[0].isspace() or tok[0] == ";":
            nl = tok.count("\n")
            if nl:
                line += nl
                line_start = m.start() + tok.rindex("\n") + 1
            continue
        if tok == "(":
            stack.append(([], line, column))
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line, column)
            items, l0, c0 = stack.pop()
            node = SList(tuple(items), l0, c0)
            (stack[-1][0] if stack else top).append(node)
        else:
            (stack[-1][0] if stack else top).append(Atom(tok, line, column))
    if stack:
        _, l0, c0 = stack[-1]
        raise ParseError("unclosed '('", l0, c0)
    return top


def read_one(text: str):
    data = read_all(text)
    if len(data) != 1:
        raise ParseError(f"expected exactly one form, found {len(data)}")
    return data[0]


# --- terms --------------------------------------------------------------------

_CONSTANTS = {
    "star": lambda: T.STAR,
    "nat": T.Nat,
    "noread": T.NoRead,
    "nowrite": T.NoWrite,
    "pure": T.Pure,
    "true": T.btrue,
    "false": T.bfalse,
}
RESERVED = frozenset(_CONSTANTS)

# form -> (argument kinds, builder); kinds: "t" term, "v" variable, "n" natural
_FORMS = {
    "lam": ("vt", T.Lam),
    "app": ("tt", T.App),
    "pair": ("tt", T.Pair),
    "spread": ("tvvt", T.Spread),
    "inl": ("t", T.Inl),
    "inr": ("t", T.Inr),
    "decide": ("tvtvt", T.Decide),
    "num": ("n", T.Num),
    "succ": ("t", T.Succ),
    "natrec": ("ttt", T.NatRec),
    "fix": ("t", T.Fix),
    "let": ("vtt", T.Let),
    "name": ("n", T.Name),
    "read": ("t", T.Read),
    "choose": ("tt", T.Choose),
    "fresh": ("vt", T.Fresh),
    "pi": ("vtt", T.Pi),
    "sum": ("vtt", T.Sum),
    "set": ("vtt", T.SetType),
    "union": ("tt", T.Union),
    "eq": ("ttt", T.Eq),
    "univ": ("n", T.Universe),
    "isect": ("tt", T.Isect),
    "qsquash": ("t", T.QSquash),
    # sugar
    "ite": ("ttt", T.ite),
    "seq": ("tt", T.seq),
    "iflt": ("tttt", T.iflt),
    "neg": ("t", T.neg),
    "iszero": ("t", T.iszero),
    "pred": ("t", T.pred),
    "sub": ("tt", T.sub),
    "lt": ("tt", T.lt),
    "add": ("tt", T.add),
}


def parse(text: str) -> T.Term:
    """Parse one term."""
    return term_of(read_one(text))


def term_of(datum) -> T.Term:
    if isinstance(datum, Atom):
        if datum.text in _CONSTANTS:
            return _CONSTANTS[datum.text]()
        if datum.text in _FORMS:
            raise ParseError(f"form '{datum.text}' must be applied", datum.line, datum.column)
        return T.Var(_variable(datum))
    if not datum.items:
        raise ParseError("empty form", datum.line, datum.column)
    head, *args = datum.items
    if not isinstance(head, Atom):
        raise UnknownForm("form head must be a symbol", datum.line, datum.column)
    if head.text not in _FORMS:
        raise UnknownForm(f"unknown form '{head.text}'", head.line, head.column)
    kinds, build = _FORMS[head.text]
    if len(args) != len(kinds):
        raise ArityError(f"'{head.text}' takes {len(kinds)} arguments, got {len(args)}",
                         datum.line, datum.column)
    converted = []
    for kind, arg in zip(kinds, args):
        if kind == "t":
            converted.append(term_of(arg))
        elif kind == "v":
            converted.append(_variable(arg))
        else:
            converted.append(_natural(arg))
    return build(*converted)


def _variable(datum) -> str:
    if not isinstance(datum, Atom):
        raise ParseError("expected a variable", datum.line, datum.column)
    text = datum.text
    if text in RESERVED or text in _FORMS or text[0].isdigit():
        raise ParseError(f"'{text}' cannot be used as a variable", datum.line, datum.column)
    return text


def _natural(datum) -> int:
    if not isinstance(datum, Atom) or not datum.text.isdigit():
        raise ParseError("expected a natural number", datum.line, datum.column)
    return int(datum.text)


def to_sexpr(t: T.Term) -> str:
    parts: list[str] = []
    _emit(t, parts)
    return "".join(parts)


_HEADS = {cls: name for name, (_, cls) in _FORMS.items() if isinstance(cls, type)}
_ATOMS = {T.Star: "star", T.Nat: "nat", T.NoRead: "noread", T.NoWrite: "nowrite", T.Pure: "pure"}


def _emit(t: T.Term, out: list[str]) -> None:
    cls = type(t)
    if cls is T.Var:
        out.append(t.name)
        return
    if cls in _ATOMS:
        out.append(_ATOMS[cls])
        return
    if cls not in _HEADS:
        atom = getattr(t, "sexpr_atom", None)
        if atom is None:
            raise TypeError(f"cannot print {t!r}")
        out.append(atom)
        return
    out.append("(" + _HEADS[cls])
    for f in t.__dataclass_fields__:
        value = getattr(t, f)
        out.append(" ")
        if isinstance(value, T.Term):
            _emit(value, out)
        else:
            out.append(str(value))
    out.append(")")


# --- worlds -------------------------------------------------------------------

_BOOLS = {"true": True, "false": False, "#t": True, "#f": False}


def parse_world(text: str) -> RefWorld:
    return world_of(read_one(text))


def world_of(datum) -> RefWorld:
    if (not isinstance(datum, SList) or not datum.items
            or not isinstance(datum.items[0], Atom) or datum.items[0].text != "world"):
        raise ParseError("expected (world (cell ...) ...)", datum.line, datum.column)
    cells = []
    for item in datum.items[1:]:
        if (not isinstance(item, SList) or len(item.items) != 5
                or not isinstance(item.items[0], Atom) or item.items[0].text != "cell"):
            raise ArityError("expected (cell <name> nat <value> <mutable?>)", item.line, item.column)
        _, name, res, value, mutable = item.items
        if not isinstance(res, Atom) or res.text != "nat":
            raise UnknownForm("only the 'nat' restriction is supported", res.line, res.column)
        if not isinstance(mutable, Atom) or mutable.text not in _BOOLS:
            raise ParseError("mutability flag must be true or false", mutable.line, mutable.column)
        cells.append(Cell(_natural(name), NAT, _natural(value), _BOOLS[mutable.text]))
    try:
        return RefWorld(tuple(cells))
    except ValueError as e:
        raise ParseError(str(e), datum.line, datum.column) from None


def world_to_sexpr(w: RefWorld) -> str:
    cells = " ".join(
        f"(cell {c.name} nat {c.value} {'true' if c.mutable else 'false'})" for c in w.cells
    )
    return f"(world {cells})" if cells else "(world)"
