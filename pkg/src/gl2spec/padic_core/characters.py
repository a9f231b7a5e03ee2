"""Roots of unity as Q/Z and characters of finite abelian groups.

A group is given by cyclic generators of known orders; elements are exponent
vectors ("logs").  A character is the vector of its values on the generators,
each value stored as an exponent in Q/Z.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

Log = tuple[int, ...]


def _mod1(x) -> Fraction:
    x = Fraction(x)
    return x - math.floor(x)


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """exp(2 pi i * exponent), exponent kept in [0, 1)."""

    exponent: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "exponent", _mod1(self.exponent))

    @classmethod
    def one(cls) -> RootOfUnity:
        return cls(Fraction(0))

    @property
    def order(self) -> int:
        return self.exponent.denominator

    def __mul__(self, other: RootOfUnity) -> RootOfUnity:
        return RootOfUnity(self.exponent + other.exponent)

    def __pow__(self, n: int) -> RootOfUnity:
        return RootOfUnity(self.exponent * n)

    def inverse(self) -> RootOfUnity:
        return RootOfUnity(-self.exponent)

    def is_one(self) -> bool:
        return self.exponent == 0

    def to_complex(self) -> complex:
        angle = 2 * math.pi * float(self.exponent)
        return complex(math.cos(angle), math.sin(angle))

    def __repr__(self) -> str:
        return f"zeta({self.exponent})"


@dataclass(frozen=True)
class FiniteAbelianPresentation:
    """Product of cyclic groups, optionally carrying unit-group structure.

    ``filtration[c]`` lists logs of generators of the image of 1 + P^c
    (``filtration[0]`` is the whole group).  ``galois[j]`` is the log of the
    Galois image of generator j.  ``norm_logs[j]`` is the log of the norm of
    generator j in the base unit group of level ``base_level``, and
    ``base_embedding`` is the log of that base group's generator.
    """

    generator_orders: tuple[int, ...]
    p: int = 0
    kind: str = "abstract"
    level: int = 0
    label: str = ""
    filtration: tuple[tuple[Log, ...], ...] = ()
    galois: Optional[tuple[Log, ...]] = field(default=None, compare=False)
    norm_logs: Optional[tuple[int, ...]] = field(default=None, compare=False)
    base_embedding: Optional[Log] = field(default=None, compare=False)
    base_level: int = field(default=0, compare=False)

    def __post_init__(self):
        if any(n < 1 for n in self.generator_orders):
            raise ValueError("generator orders must be positive")

    @property
    def order(self) -> int:
        return math.prod(self.generator_orders)

    @property
    def rank(self) -> int:
        return len(self.generator_orders)

    def reduce(self, log: Sequence[int]) -> Log:
        return tuple(int(x) % n for x, n in zip(log, self.generator_orders))


@dataclass(frozen=True)
class FiniteCharacter:
    group: FiniteAbelianPresentation
    exponents: tuple[Fraction, ...]

    def __post_init__(self):
        exps = tuple(_mod1(e) for e in self.exponents)
        if len(exps) != self.group.rank:
            raise ValueError("one exponent per generator required")
        for e, n in zip(exps, self.group.generator_orders):
            if n % e.denominator:
                raise ValueError(f"exponent {e} incompatible with generator order {n}")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def from_ints(cls, group: FiniteAbelianPresentation, ks: Sequence[int]) -> FiniteCharacter:
        return cls(group, tuple(Fraction(int(k), n) for k, n in zip(ks, group.generator_orders)))

    @classmethod
    def trivial(cls, group: FiniteAbelianPresentation) -> FiniteCharacter:
        return cls(group, (Fraction(0),) * group.rank)

    @property
    def level(self) -> int:
        return self.group.level

    def int_vector(self) -> Log:
        return tuple(int(e * n) for e, n in zip(self.exponents, self.group.generator_orders))

    def __call__(self, log: Sequence[int]) -> RootOfUnity:
        return RootOfUnity(sum((e * int(x) for e, x in zip(self.exponents, log)), Fraction(0)))

    def __mul__(self, other: FiniteCharacter) -> FiniteCharacter:
        if other.group != self.group:
            raise ValueError("characters live on different groups")
        return FiniteCharacter(self.group, tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __pow__(self, n: int) -> FiniteCharacter:
        return FiniteCharacter(self.group, tuple(e * n for e in self.exponents))

    def inverse(self) -> FiniteCharacter:
        return self ** -1

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def sort_key(self) -> tuple:
        return self.exponents


class ConductorBoundError(ValueError):
    """The presentation is too shallow to pin down the conductor."""

    def __init__(self, lower_bound: int):
        super().__init__(f"conductor is at least {lower_bound}; level too small to certify")
        self.lower_bound = lower_bound


def char_order(chi: FiniteCharacter) -> int:
    return math.lcm(1, *(e.denominator for e in chi.exponents))


def char_conductor(chi: FiniteCharacter) -> int:
    """Smallest c with chi trivial on the image of 1 + P^c."""
    steps = chi.group.filtration
    if not steps:
        raise ValueError("presentation carries no filtration")
    for c, gens in enumerate(steps):
        if all(chi(g).is_one() for g in gens):
            return c
    raise ConductorBoundError(len(steps))


def galois_conjugate(eta: FiniteCharacter) -> FiniteCharacter:
    """eta composed with the nontrivial automorphism of the quadratic extension."""
    grp = eta.group
    if grp.galois is None or grp.kind not in ("unramified", "ramified"):
        raise ValueError("galois_conjugate needs a character of quadratic-extension units")
    return FiniteCharacter(grp, tuple(eta(image).exponent for image in grp.galois))


def all_characters(group: FiniteAbelianPresentation) -> Iterator[FiniteCharacter]:
    for ks in itertools.product(*(range(n) for n in group.generator_orders)):
        yield FiniteCharacter.from_ints(group, ks)
