"""Finite abelian groups Z_{N1} x ... x Z_{Nn} and their characters.

Phases are exact: a character value exp(2 pi i q) is represented by the
rational q reduced mod 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

DEFAULT_ENUM_CAP = 10**6


class GroupSpecError(ValueError):
    """Raised for malformed group specs or mixed-group arithmetic."""


def frac_mod1(q: Fraction | int) -> Fraction:
    q = Fraction(q)
    return q - math.floor(q)


@dataclass(frozen=True)
class GroupSpec:
    factors: tuple[int, ...]

    def __init__(self, factors: Iterable[int]):
        fs = tuple(int(n) for n in factors)
        if not fs:
            raise GroupSpecError("group needs at least one cyclic factor")
        for n in fs:
            if n < 2:
                raise GroupSpecError(f"cyclic factor order must be >= 2, got {n}")
        object.__setattr__(self, "factors", fs)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.factors)

    def element(self, comps: int | Sequence[int]) -> "GroupElement":
        if isinstance(comps, int):
            comps = (comps,) if self.rank == 1 else None
            if comps is None:
                raise GroupSpecError("integer shorthand only valid for cyclic groups")
        return GroupElement(self, comps)

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def to_json(self) -> list[int]:
        return list(self.factors)

    @classmethod
    def from_json(cls, data) -> "GroupSpec":
        if isinstance(data, int):
            return cls([data])
        if not isinstance(data, (list, tuple)):
            raise GroupSpecError(f"group spec must be a JSON array, got {data!r}")
        return cls(data)

    def __repr__(self) -> str:
        return "x".join(f"Z{n}" for n in self.factors)


@dataclass(frozen=True)
class GroupElement:
    spec: GroupSpec
    components: tuple[int, ...]

    def __init__(self, spec: GroupSpec, components: Sequence[int]):
        comps = tuple(int(c) for c in components)
        if len(comps) != spec.rank:
            raise GroupSpecError(
                f"element has {len(comps)} components, group {spec!r} has {spec.rank}")
        comps = tuple(c % n for c, n in zip(comps, spec.factors))
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "components", comps)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return add(self, other)

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.spec, [-c for c in self.components])

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return add(self, -other)

    def scale(self, k: int) -> "GroupElement":
        return GroupElement(self.spec, [k * c for c in self.components])

    def is_zero(self) -> bool:
        return not any(self.components)

    def __repr__(self) -> str:
        if self.spec.rank == 1:
            return str(self.components[0])
        return str(self.components)


@dataclass(frozen=True)
class Character:
    """The character chi_label(k) = exp(2 pi i sum_j label_j k_j / N_j)."""

    label: GroupElement

    def __call__(self, k: GroupElement) -> Fraction:
        return character_eval(self, k)

    def __mul__(self, other: "Character") -> "Character":
        return Character(self.label + other.label)


def _check_same(a: GroupElement, b: GroupElement) -> None:
    if a.spec != b.spec:
        raise GroupSpecError(f"group mismatch: {a.spec!r} vs {b.spec!r}")


def add(a: GroupElement, b: GroupElement) -> GroupElement:
    _check_same(a, b)
    return GroupElement(a.spec, [x + y for x, y in zip(a.components, b.components)])


def character_eval(chi: Character, k: GroupElement) -> Fraction:
    """Exact exponent q in [0, 1) with chi(k) = exp(2 pi i q)."""
    _check_same(chi.label, k)
    total = sum(Fraction(g * x, n) for g, x, n in
                zip(chi.label.components, k.components, chi.label.spec.factors))
    return frac_mod1(total)


def enumerate_elements(spec: GroupSpec, cap: int = DEFAULT_ENUM_CAP) -> list[GroupElement]:
    if spec.order > cap:
        raise GroupSpecError(f"group order {spec.order} exceeds enumeration cap {cap}")
    return list(iter_elements(spec))


def iter_elements(spec: GroupSpec) -> Iterator[GroupElement]:
    for comps in itertools.product(*(range(n) for n in spec.factors)):
        yield GroupElement(spec, comps)
