"""Finitely generated abelian grading groups and skew-symmetric bicharacters.

A grading group is Z^a x Z_{m1} x ... x Z_{mk}.  A bicharacter assigns a
nonzero rational to every ordered pair of generators and extends to the
whole group bimultiplicatively; the three defining identities are

    eps(a, b) eps(b, a) = 1
    eps(a, b + c) = eps(a, b) eps(a, c)
    eps(a + b, c) = eps(a, c) eps(b, c)

which on generators reduce to the skew condition plus, for each torsion
generator g of order m, the consistency eps(g, h)^m = eps(h, g)^m = 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class GradingGroup:
    free_rank: int
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        object.__setattr__(self, "torsion_orders", tuple(int(m) for m in self.torsion_orders))
        if any(m < 2 for m in self.torsion_orders):
            raise ValueError("torsion orders must be >= 2")

    @property
    def num_generators(self) -> int:
        return self.free_rank + len(self.torsion_orders)

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, tuple(int(c) for c in coords))

    def identity(self) -> "GroupElement":
        return self.element((0,) * self.num_generators)

    def is_trivial(self) -> bool:
        return self.num_generators == 0

    def elements(self):
        """All elements of a finite group (error if a free factor is present)."""
        if self.free_rank:
            raise ValueError("group is infinite")
        for coords in itertools.product(*(range(m) for m in self.torsion_orders)):
            yield self.element(coords)


@dataclass(frozen=True)
class GroupElement:
    group: GradingGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        g = self.group
        if len(self.coords) != g.num_generators:
            raise ValueError("coordinate count != generator count")
        reduced = list(self.coords)
        for i, m in enumerate(g.torsion_orders):
            reduced[g.free_rank + i] %= m
        object.__setattr__(self, "coords", tuple(reduced))

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if other.group != self.group:
            raise ValueError("group mismatch")
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def is_identity(self) -> bool:
        return all(c == 0 for c in self.coords)

    def sort_key(self) -> tuple[int, ...]:
        return self.coords


def element_add(g: GroupElement, h: GroupElement) -> GroupElement:
    return g + h


@dataclass(frozen=True)
class Bicharacter:
    """Skew-symmetric bicharacter given by its values on generator pairs."""

    group: GradingGroup
    generator_values: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = self.group.num_generators
        table = tuple(tuple(Fraction(x) for x in row) for row in self.generator_values)
        if len(table) != n or any(len(row) != n for row in table):
            raise ValueError("generator value table must be square of size #generators")
        object.__setattr__(self, "generator_values", table)
        problems = bichar_validate(self)
        if problems:
            raise ValueError("invalid bicharacter: " + "; ".join(problems))

    def __call__(self, a: GroupElement, b: GroupElement) -> Fraction:
        return bichar_eval(self, a, b)


def bichar_eval(eps: Bicharacter, a: GroupElement, b: GroupElement) -> Fraction:
    """Bimultiplicative extension of the generator table; always nonzero."""
    if a.group != eps.group or b.group != eps.group:
        raise ValueError("group mismatch")
    out = Fraction(1)
    for i, ai in enumerate(a.coords):
        if ai == 0:
            continue
        for j, bj in enumerate(b.coords):
            if bj == 0:
                continue
            out *= eps.generator_values[i][j] ** (ai * bj)
    return out


def bichar_validate(eps: Bicharacter) -> list[str]:
    """Violations of the defining identities, as human-readable strings."""
    table = eps.generator_values
    g = eps.group
    n = g.num_generators
    problems = []
    for i in range(n):
        for j in range(n):
            v = table[i][j]
            if v == 0:
                problems.append(f"eps(g{i}, g{j}) = 0")
    if problems:
        return problems
    for i in range(n):
        for j in range(n):
            if table[i][j] * table[j][i] != 1:
                problems.append(
                    f"skew axiom fails on generators ({i}, {j}): "
                    f"{table[i][j]} * {table[j][i]} != 1"
                )
    # bimultiplicativity is automatic for the extension; what can fail is
    # well-definedness on torsion factors: g of order m forces eps(g,.)^m = 1
    for t, m in enumerate(g.torsion_orders):
        i = g.free_rank + t
        for j in range(n):
            if table[i][j] ** m != 1:
                problems.append(
                    f"torsion consistency fails: eps(g{i}, g{j})^{m} != 1"
                )
            if table[j][i] ** m != 1:
                problems.append(
                    f"torsion consistency fails: eps(g{j}, g{i})^{m} != 1"
                )
    return problems


_MINUS = Fraction(-1)
_PLUS = Fraction(1)


def builtin_bicharacter(name: str, n: int | None = None) -> Bicharacter:
    """Stock bicharacters.

    ``Z2``      sign grading on Z_2, eps(i, j) = (-1)^(ij)
    ``Z2^n``    componentwise sign on Z_2^n (requires ``n``)
    ``Z2xZ2``   eps((i1,i2),(j1,j2)) = (-1)^(i1 j2 - i2 j1)
    ``ZxZ``     eps((i1,i2),(j1,j2)) = (-1)^((i1+i2)(j1+j2)) on Z x Z
    ``signs``   the multiplicative group {-1, +1} encoded as Z_2; the
                relabeling +1 -> 0, -1 -> 1 turns the closed form
                (-1)^((i-1)(j-1)/4) into the Z2 table
    """
    if name == "Z2":
        grp = GradingGroup(0, (2,))
        return Bicharacter(grp, ((_MINUS,),))
    if name == "Z2^n":
        if n is None or n < 1:
            raise ValueError("Z2^n requires a positive n parameter")
        grp = GradingGroup(0, (2,) * n)
        table = tuple(
            tuple(_MINUS if i == j else _PLUS for j in range(n)) for i in range(n)
        )
        return Bicharacter(grp, table)
    if name == "Z2xZ2":
        grp = GradingGroup(0, (2, 2))
        return Bicharacter(grp, ((_PLUS, _MINUS), (_MINUS, _PLUS)))
    if name == "ZxZ":
        grp = GradingGroup(2, ())
        return Bicharacter(grp, ((_MINUS, _MINUS), (_MINUS, _MINUS)))
    if name == "signs":
        grp = GradingGroup(0, (2,))
        return Bicharacter(grp, ((_MINUS,),))
    raise ValueError(f"unknown builtin bicharacter {name!r}")


def trivial_bicharacter(group: GradingGroup) -> Bicharacter:
    """The constant-1 bicharacter (ordinary, sign-free setting)."""
    n = group.num_generators
    return Bicharacter(group, tuple((_PLUS,) * n for _ in range(n)))


def signs_element(group_element_value: int, group: GradingGroup) -> GroupElement:
    """Relabeling for the {-1,+1} multiplicative group: +1 -> 0, -1 -> 1."""
    if group_element_value == 1:
        return group.element((0,))
    if group_element_value == -1:
        return group.element((1,))
    raise ValueError("element must be +1 or -1")
