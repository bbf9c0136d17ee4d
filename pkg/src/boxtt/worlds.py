"""Reference-cell worlds.

A world is an ordered list of cells ``(name, restriction, value, mutable)``.
Worlds are extended by creating a cell or by updating a mutable one; every
operation here is pure and returns a new world.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, replace
from typing import Optional

ChoiceName = int
Choice = int


class RestrictionKind(enum.Enum):
    NAT_ONLY = "nat"


@dataclass(frozen=True)
class Restriction:
    kind: RestrictionKind
    default: Choice

    def __post_init__(self):
        if not self.holds(self.default):
            raise ValueError(f"default {self.default!r} violates restriction {self.kind.value}")

    def holds(self, c) -> bool:
        if self.kind is RestrictionKind.NAT_ONLY:
            return isinstance(c, int) and not isinstance(c, bool) and c >= 0
        raise AssertionError(self.kind)


NAT = Restriction(RestrictionKind.NAT_ONLY, 0)


@dataclass(frozen=True)
class Cell:
    name: ChoiceName
    restriction: Restriction
    value: Choice
    mutable: bool = True

    def __post_init__(self):
        if not self.restriction.holds(self.value):
            raise ValueError(f"cell {self.name}: value {self.value!r} violates its restriction")


@dataclass(frozen=True)
class RefWorld:
    cells: tuple[Cell, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        seen = set()
        for c in self.cells:
            if c.name in seen:
                raise ValueError(f"duplicate cell name {c.name}")
            seen.add(c.name)

    def names(self) -> list[ChoiceName]:
        return [c.name for c in self.cells]

    def cell(self, name: ChoiceName) -> Optional[Cell]:
        for c in self.cells:
            if c.name == name:
                return c
        return None

    def to_json(self) -> list[dict]:
        return [
            {"name": c.name, "restriction": c.restriction.kind.value, "value": c.value,
             "mutable": c.mutable}
            for c in self.cells
        ]

    @classmethod
    def from_json(cls, data) -> "RefWorld":
        return cls(tuple(Cell(d["name"], NAT, d["value"], d.get("mutable", True)) for d in data))


EMPTY = RefWorld()


def read(w: RefWorld, name: ChoiceName) -> Optional[Choice]:
    """The current value of cell ``name``, or None when there is no such cell."""
    c = w.cell(name)
    return None if c is None else c.value


def write(w: RefWorld, name: ChoiceName, c: Choice) -> RefWorld:
    """Update a mutable cell; absent or immutable cells leave ``w`` as is."""
    cells = list(w.cells)
    for i, cell in enumerate(cells):
        if cell.name == name:
            if not cell.mutable:
                return w
            cells[i] = replace(cell, value=c)
            return RefWorld(tuple(cells))
    return w


def new_choice(w: RefWorld) -> ChoiceName:
    return max(w.names(), default=-1) + 1


def start_new_choice(w: RefWorld, r: Restriction = NAT) -> RefWorld:
    return RefWorld(w.cells + (Cell(new_choice(w), r, r.default, True),))


def compatible(name: ChoiceName, w: RefWorld, r: Restriction = NAT) -> bool:
    """Cell ``name`` was created with restriction ``r`` and currently satisfies it.

    Cells created by ``start_new_choice`` are mutable, so an immutable cell
    (only possible in a hand-written world) is never compatible.
    """
    c = w.cell(name)
    return c is not None and c.mutable and c.restriction == r and r.holds(c.value)


def extends(w1: RefWorld, w2: RefWorld) -> bool:
    """Whether ``w2`` is reachable from ``w1`` by creating and updating cells."""
    if len(w2.cells) < len(w1.cells):
        return False
    for old, new in zip(w1.cells, w2.cells):
        if old.name != new.name or old.restriction != new.restriction or old.mutable != new.mutable:
            return False
        if old.value != new.value and not old.mutable:
            return False
    # new cells start at the default and only mutable ones can move away from it
    return all(c.mutable or c.value == c.restriction.default for c in w2.cells[len(w1.cells):])


def coerce(t) -> Choice:
    """Numerals become their value; every other term becomes 0."""
    from boxtt.terms import Num

    return t.value if isinstance(t, Num) else 0


def sample_extensions(w: RefWorld, depth: int = 4, count: int = 16, seed: int = 0,
                      max_value: int = 9) -> list[RefWorld]:
    """``count`` extensions of ``w`` (``w`` first), each at most ``depth`` operations away."""
    if depth < 0 or count < 1:
        raise ValueError("need depth >= 0 and count >= 1")
    rng = random.Random(seed)
    out = [w]
    while len(out) < count:
        w2 = w
        for _ in range(rng.randint(0, depth) if depth else 0):
            mutable = [c.name for c in w2.cells if c.mutable]
            if mutable and rng.random() < 0.6:
                w2 = write(w2, rng.choice(mutable), rng.randint(0, max_value))
            else:
                w2 = start_new_choice(w2, NAT)
        out.append(w2)
    return out
