"""Truncated unit groups of Q_p and of its quadratic extensions.

Elements of o/P^j are pairs (a, b) meaning a + b*sqrt(d); for the base field
b is always 0.  In the ramified case sqrt(d) is the uniformizer, so a is kept
mod p^ceil(j/2) and b mod p^floor(j/2).
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

from sympy import factorint

from .arith import require_odd_prime, smallest_nonresidue, smallest_primitive_root, euler_phi
from .characters import FiniteAbelianPresentation, FiniteCharacter, Log, char_conductor

Elem = tuple[int, int]

MAX_RAMIFIED_LEVEL = 3


class UnitGroup:
    def __init__(self, p: int, kind: str, level: int, d: int, label: str):
        self.p = p
        self.kind = kind
        self.level = level
        self.d = d
        self.label = label
        if kind == "ramified":
            self.mod_a = p ** ((level + 1) // 2)
            self.mod_b = p ** (level // 2)
            self.base_level = (level + 1) // 2
        elif kind == "unramified":
            self.mod_a = self.mod_b = p**level
            self.base_level = level
        else:
            self.mod_a, self.mod_b = p**level, 1
            self.base_level = level

    # ring arithmetic -----------------------------------------------------
    def norm_elem(self, x: Elem) -> Elem:
        return (x[0] % self.mod_a, x[1] % self.mod_b)

    def mul(self, x: Elem, y: Elem) -> Elem:
        a, b = x
        c, e = y
        return self.norm_elem((a * c + self.d * b * e, a * e + b * c))

    def power(self, x: Elem, n: int) -> Elem:
        result: Elem = self.norm_elem((1, 0))
        base = x
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def is_unit(self, x: Elem) -> bool:
        p = self.p
        if self.kind == "unramified":
            return x[0] % p != 0 or x[1] % p != 0
        return x[0] % p != 0

    def conj(self, x: Elem) -> Elem:
        return self.norm_elem((x[0], -x[1]))

    def norm_to_base(self, x: Elem) -> int:
        return (x[0] * x[0] - self.d * x[1] * x[1]) % self.p**self.base_level

    @property
    def order(self) -> int:
        p, j = self.p, self.level
        if self.kind == "unramified":
            return (p * p - 1) * p ** (2 * (j - 1))
        if self.kind == "ramified":
            return (p - 1) * p ** (j - 1)
        return euler_phi(p**j)

    def element_order(self, x: Elem) -> int:
        n = self.order
        for ell in factorint(n):
            while n % ell == 0 and self.power(x, n // ell) == self.norm_elem((1, 0)):
                n //= ell
        return n

    def uniformizer_power(self, i: int) -> Elem:
        """pi^i as a pair; pi = p unless ramified."""
        if self.kind != "ramified":
            return self.norm_elem((self.p**i, 0))
        k, odd = divmod(i, 2)
        c = self.d**k
        return self.norm_elem((0, c) if odd else (c, 0))

    # presentation --------------------------------------------------------
    def _choose_generators(self) -> list[Elem]:
        p, j = self.p, self.level
        if self.kind == "base":
            return [(smallest_primitive_root(p, j), 0)]
        if self.kind == "unramified":
            residue_field = UnitGroup(p, "unramified", 1, self.d, self.label)
            target = p * p - 1
            torsion = next(
                (a, b)
                for a, b in itertools.product(range(p), repeat=2)
                if (a, b) != (0, 0) and residue_field.element_order((a, b)) == target
            )
            gens = [self.power(torsion, p ** (j - 1))]
            if j >= 2:
                gens += [(1 + p, 0), (1, p)]
            return [self.norm_elem(g) for g in gens]
        g = smallest_primitive_root(p, 1)
        gens = [self.power((g, 0), p ** (j - 1))]
        for i in range(1, j):
            pi_i = self.uniformizer_power(i)
            gens.append(self.norm_elem((1 + pi_i[0], pi_i[1])))
        return gens

    def _build(self):
        gens = self._choose_generators()
        orders = [self.element_order(g) for g in gens]
        table: dict[Elem, Log] = {}
        powers = []
        for g, n in zip(gens, orders):
            row = [self.norm_elem((1, 0))]
            for _ in range(n - 1):
                row.append(self.mul(row[-1], g))
            powers.append(row)
        for exps in itertools.product(*(range(n) for n in orders)):
            x = self.norm_elem((1, 0))
            for row, e in zip(powers, exps):
                x = self.mul(x, row[e])
            table[x] = exps
        if len(table) != self.order or math.prod(orders) != self.order:
            raise ArithmeticError(f"generators of {self.label} level {self.level} are not independent")
        self.generators = gens
        self.orders = tuple(orders)
        self._log = table
        self._exp = {v: k for k, v in table.items()}

    def log(self, x: Elem) -> Log:
        return self._log[self.norm_elem(x)]

    def exp(self, log: Log) -> Elem:
        return self._exp[tuple(int(e) % n for e, n in zip(log, self.orders))]

    def elements(self):
        return self._log.keys()

    def filtration_logs(self) -> tuple[tuple[Log, ...], ...]:
        rank = len(self.orders)
        whole = tuple(tuple(int(i == k) for i in range(rank)) for k in range(rank))
        steps = [whole]
        for c in range(1, self.level + 1):
            gens = []
            for i in range(c, self.level):
                pi_i = self.uniformizer_power(i)
                gens.append(self.log((1 + pi_i[0], pi_i[1])))
                if self.kind == "unramified":
                    gens.append(self.log((1, pi_i[0])))
            steps.append(tuple(gens))
        return tuple(steps)


def _finish(group: UnitGroup) -> UnitGroup:
    group._build()
    galois = norm_logs = embedding = None
    if group.kind != "base":
        base = base_units(group.p, group.base_level)
        galois = tuple(group.log(group.conj(g)) for g in group.generators)
        norm_logs = tuple(base.log((group.norm_to_base(g), 0))[0] for g in group.generators)
        embedding = group.log((base.generators[0][0], 0))
    else:
        embedding = (1,)
    group.presentation = FiniteAbelianPresentation(
        generator_orders=group.orders,
        p=group.p,
        kind=group.kind,
        level=group.level,
        label=group.label,
        filtration=group.filtration_logs(),
        galois=galois,
        norm_logs=norm_logs,
        base_embedding=embedding,
        base_level=group.base_level,
    )
    return group


@lru_cache(maxsize=None)
def base_units(p: int, m: int) -> UnitGroup:
    """(Z/p^m)^x, cyclic on the smallest primitive root."""
    require_odd_prime(p)
    if m < 1:
        raise ValueError("level must be >= 1")
    return _finish(UnitGroup(p, "base", m, 0, f"Z/{p}^{m}"))


@lru_cache(maxsize=None)
def unramified_units(p: int, m: int) -> UnitGroup:
    require_odd_prime(p)
    if m < 1:
        raise ValueError("level must be >= 1")
    return _finish(UnitGroup(p, "unramified", m, smallest_nonresidue(p), "unramified"))


@lru_cache(maxsize=None)
def ramified_units(p: int, level: int, twisted: bool = False) -> UnitGroup:
    """Units of Q_p(sqrt(eps*p)) mod P^level; eps = 1, or the smallest non-residue if twisted."""
    require_odd_prime(p)
    if not 1 <= level <= MAX_RAMIFIED_LEVEL:
        raise ValueError(f"ramified levels 1..{MAX_RAMIFIED_LEVEL} supported, got {level}")
    eps = smallest_nonresidue(p) if twisted else 1
    label = "ramified-np" if twisted else "ramified-p"
    return _finish(UnitGroup(p, "ramified", level, eps * p, label))


def extension_units(p: int, label: str, level: int) -> UnitGroup:
    if label == "unramified":
        return unramified_units(p, level)
    if label in ("ramified-p", "ramified-np"):
        return ramified_units(p, level, label == "ramified-np")
    raise ValueError(f"unknown extension label {label!r}")


def base_character(p: int, m: int, k: int) -> FiniteCharacter:
    """Character of (Z/p^m)^x sending the generator to exp(2 pi i k / phi(p^m))."""
    grp = base_units(p, m).presentation
    return FiniteCharacter.from_ints(grp, (k % grp.generator_orders[0],))


def base_exponent_at_level(chi: FiniteCharacter, level: int) -> int:
    """Re-express a base character as an exponent on the level-``level`` generator."""
    grp = chi.group
    if grp.kind != "base":
        raise ValueError("expected a character of (Z/p^m)^x")
    p, m = grp.p, grp.level
    phi_target = euler_phi(p**level)
    if level >= m:
        source = base_units(p, m)
        g = base_units(p, level).generators[0][0]
        value = chi(source.log((g, 0))).exponent
    else:
        if char_conductor(chi) > level:
            raise ValueError("character does not factor through the requested level")
        g = base_units(p, level).generators[0][0]
        value = chi(base_units(p, m).log((g, 0))).exponent
    k = value * phi_target
    assert k.denominator == 1
    return int(k) % phi_target


def transport_base_character(chi: FiniteCharacter, level: int) -> FiniteCharacter:
    return base_character(chi.group.p, level, base_exponent_at_level(chi, level))


def restrict_to_base(eta: FiniteCharacter) -> FiniteCharacter:
    """eta restricted to Z_p^x, as a character of (Z/p^base_level)^x."""
    grp = eta.group
    if grp.base_embedding is None or grp.kind == "base":
        raise ValueError("expected a character of quadratic-extension units")
    value = eta(grp.base_embedding).exponent
    base = base_units(grp.p, grp.base_level).presentation
    return FiniteCharacter(base, (value,))


def norm_character(chi: FiniteCharacter, ext: FiniteAbelianPresentation) -> FiniteCharacter:
    """chi composed with the norm map, as a character on ``ext``."""
    if chi.group.kind != "base" or ext.norm_logs is None:
        raise ValueError("need a base character and an extension presentation")
    k = base_exponent_at_level(chi, ext.base_level)
    phi = euler_phi(ext.p**ext.base_level)
    return FiniteCharacter(ext, tuple(Fraction(k * n, phi) for n in ext.norm_logs))
