"""Tempered orbits of GL2(Q_p), fixed-central-character slices and their masses.

Base characters are handled internally as integers k mod phi(p^W) on the
generator of (Z/p^W)^x, where W is the working level.  Characters of the
quadratic extensions are integer vectors on the generators of the truncated
unit group.  Public results are built from these as FiniteCharacter objects.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Union

import numpy as np

from .padic_core import (
    FiniteAbelianPresentation,
    FiniteCharacter,
    RootOfUnity,
    base_character,
    base_units,
    char_conductor,
    euler_phi,
    extension_units,
    galois_conjugate,
    legendre,
    norm_character,
    restrict_to_base,
    smallest_nonresidue,
)
from .padic_core.arith import require_odd_prime
from .padic_core.unit_groups import base_exponent_at_level

MAX_CONDUCTOR = 4
KIND_ORDER = ("type1", "type2", "steinberg", "supercuspidal")
EXTENSIONS = ("unramified", "ramified-p", "ramified-np")


class EmptySliceError(ValueError):
    pass


class UnsupportedConductorError(ValueError):
    pass


@dataclass(frozen=True)
class CentralCharacter:
    restriction: FiniteCharacter
    uniformizer_value: RootOfUnity = RootOfUnity()

    @classmethod
    def trivial(cls, p: int, level: int = 1) -> CentralCharacter:
        return cls(base_character(p, level, 0))

    @classmethod
    def from_exponent(cls, p: int, level: int, k: int, omega=Fraction(0)) -> CentralCharacter:
        return cls(base_character(p, level, k), RootOfUnity(Fraction(omega)))

    @property
    def p(self) -> int:
        return self.restriction.group.p

    @property
    def conductor(self) -> int:
        return char_conductor(self.restriction)


@dataclass(frozen=True)
class TemperedOrbit:
    """One connected component of the tempered dual.

    ``characters`` holds (chi0,) for type1 and steinberg, the canonically
    ordered pair for type2, and (eta0, conj eta0) for supercuspidal orbits.
    """

    kind: str
    characters: tuple[FiniteCharacter, ...]
    conductor: int
    central_restriction: FiniteCharacter
    extension: Optional[str] = None

    @property
    def p(self) -> int:
        return self.characters[0].group.p

    def sort_key(self) -> tuple:
        return (KIND_ORDER.index(self.kind), self.extension or "", tuple(c.exponents for c in self.characters))


@dataclass(frozen=True)
class DiscretePoints:
    count: int
    mass_per_point: Fraction

    @property
    def total_mass(self) -> Fraction:
        return self.count * self.mass_per_point


@dataclass(frozen=True)
class Circle:
    total_mass: Fraction


Shape = Union[DiscretePoints, Circle]


@dataclass(frozen=True)
class OrbitSlice:
    orbit: TemperedOrbit
    central: CentralCharacter
    shape: Shape

    @property
    def total_mass(self) -> Fraction:
        return self.shape.total_mass


# --------------------------------------------------------------------------
# orbit construction from raw characters


def _legendre_character(p: int, level: int) -> FiniteCharacter:
    return base_character(p, level, euler_phi(p**level) // 2)


def _same_base_character(a: FiniteCharacter, b: FiniteCharacter) -> bool:
    level = max(a.group.level, b.group.level)
    return base_exponent_at_level(a, level) == base_exponent_at_level(b, level)


def _base_product(a: FiniteCharacter, b: FiniteCharacter) -> FiniteCharacter:
    level = max(a.group.level, b.group.level)
    p = a.group.p
    return base_character(p, level, base_exponent_at_level(a, level) + base_exponent_at_level(b, level))


def orbit_conductor(o: TemperedOrbit) -> int:
    """Conductor recomputed from the orbit's characters."""
    chars = o.characters
    if o.kind == "type1":
        return 2 * char_conductor(chars[0])
    if o.kind == "type2":
        return char_conductor(chars[0]) + char_conductor(chars[1])
    if o.kind == "steinberg":
        return 1 if chars[0].is_trivial() else 2 * char_conductor(chars[0])
    c = char_conductor(chars[0])
    return 2 * c if o.extension == "unramified" else c + 1


def central_restriction_of(kind: str, chars: tuple[FiniteCharacter, ...], extension: Optional[str]) -> FiniteCharacter:
    if kind in ("type1", "steinberg"):
        return _base_product(chars[0], chars[0])
    if kind == "type2":
        return _base_product(chars[0], chars[1])
    res = restrict_to_base(chars[0])
    if extension != "unramified":
        res = _base_product(res, _legendre_character(res.group.p, res.group.level))
    return res


def make_orbit(kind: str, chars: Iterable[FiniteCharacter], extension: Optional[str] = None) -> TemperedOrbit:
    """Validate, canonicalise and build an orbit from its defining characters."""
    chars = tuple(chars)
    if kind not in KIND_ORDER:
        raise ValueError(f"unknown orbit kind {kind!r}")
    if kind == "type2":
        a, b = sorted(chars, key=FiniteCharacter.sort_key)
        if a == b:
            raise ValueError("type2 orbits need two distinct characters")
        chars = (a, b)
    elif kind == "supercuspidal":
        eta = chars[0]
        conj = galois_conjugate(eta)
        if conj == eta:
            raise ValueError("supercuspidal data must not be Galois invariant")
        if extension is None:
            extension = eta.group.label
        chars = tuple(sorted((eta, conj), key=FiniteCharacter.sort_key))
    else:
        chars = chars[:1]
    draft = TemperedOrbit(kind, chars, 0, chars[0], extension)
    return TemperedOrbit(kind, chars, orbit_conductor(draft), central_restriction_of(kind, chars, extension), extension)


def supercuspidal_alpha(eta0: FiniteCharacter) -> int:
    """Least conductor of eta0 * (chi o N) over base characters chi."""
    grp = eta0.group
    if grp.norm_logs is None:
        raise ValueError("eta0 must live on quadratic-extension units")
    if galois_conjugate(eta0) == eta0:
        raise ValueError("alpha is only defined for non-invariant eta0")
    p, m = grp.p, grp.base_level
    best = min(
        char_conductor(eta0 * norm_character(base_character(p, m, k), grp)) for k in range(euler_phi(p**m))
    )
    if grp.kind == "ramified" and best % 2:
        raise ArithmeticError("ramified alpha came out odd")
    return best


def formal_degree(p: int, extension: str, alpha: int) -> Fraction:
    q = Fraction(p)
    if extension == "unramified":
        return (q - 1) * q ** (alpha - 1)
    return (q * q - 1) / 2 * q ** (alpha // 2 - 1)


# --------------------------------------------------------------------------
# point counts by brute force over unramified twist data


def _roots_of_unity(n: int) -> Iterator[RootOfUnity]:
    for i in range(n):
        yield RootOfUnity(Fraction(i, n))


@lru_cache(maxsize=None)
def _supercuspidal_points(p: int, extension: str, omega: Fraction, at_eps: tuple, at_minus_one: Fraction) -> int:
    """Isomorphism classes of pi_eta with eta|units in {eta0, conj} and central value omega at p.

    ``at_eps`` gives (eta0(eps), conj(eta0)(eps)) for the ramified case.  A
    representation is pinned down by (which unit character, u = eta(uniformizer)),
    and Galois conjugation identifies (eta0, u) with (conj, u') where
    u' = u (unramified) or eta0(-1) u (ramified).
    """
    dens = [omega.denominator, 2] + [Fraction(x).denominator for x in at_eps]
    n = 2 * math.lcm(*dens)
    target = RootOfUnity(omega)
    solutions = set()
    for which in (0, 1):
        for u in _roots_of_unity(n):
            if extension == "unramified":
                value = u * RootOfUnity(Fraction(1, 2))
            else:
                eps = smallest_nonresidue(p) if extension == "ramified-np" else 1
                sign = RootOfUnity(Fraction(0 if legendre(-eps, p) == 1 else 1, 2))
                value = sign * u * u * RootOfUnity(-Fraction(at_eps[which]))
            if value == target:
                solutions.add((which, u))
    shift = RootOfUnity(Fraction(0) if extension == "unramified" else at_minus_one)
    classes = set()
    for which, u in solutions:
        partner = (1 - which, u * shift)
        if partner not in solutions:
            raise ArithmeticError("solution set not closed under Galois conjugation")
        classes.add(frozenset([(which, u), partner]))
    return len(classes)


def _steinberg_points(omega: Fraction) -> int:
    n = 2 * omega.denominator
    return sum(1 for u in _roots_of_unity(n) if u * u == RootOfUnity(omega))


def _eps_log(group, extension: str) -> tuple:
    p = group.p
    eps = smallest_nonresidue(p) if extension == "ramified-np" else 1
    return group.log((eps, 0)), group.log((p**group.base_level - 1, 0))


def slice_mass(o: TemperedOrbit, chi: CentralCharacter) -> OrbitSlice:
    if chi.p != o.p:
        raise EmptySliceError("prime mismatch")
    if not _same_base_character(o.central_restriction, chi.restriction):
        raise EmptySliceError("central character does not match the orbit on units")
    q = Fraction(o.p)
    omega = chi.uniformizer_value.exponent
    if o.kind == "type1":
        shape: Shape = Circle(Fraction(1))
    elif o.kind == "type2":
        a, b = o.characters
        level = max(a.group.level, b.group.level)
        diff = base_character(o.p, level, base_exponent_at_level(b, level) - base_exponent_at_level(a, level))
        shape = Circle((q + 1) / q * q ** char_conductor(diff))
    elif o.kind == "steinberg":
        shape = DiscretePoints(_steinberg_points(omega), (q - 1) / 2)
    else:
        eta, conj = o.characters
        alpha = supercuspidal_alpha(eta)
        eps_log, minus_one = _eps_log(extension_units(o.p, o.extension, eta.group.level), o.extension)
        count = _supercuspidal_points(
            o.p, o.extension, omega, (eta(eps_log).exponent, conj(eps_log).exponent), eta(minus_one).exponent
        )
        if count == 0:
            raise EmptySliceError("no twist matches the uniformizer value")
        shape = DiscretePoints(count, formal_degree(o.p, o.extension, alpha))
    return OrbitSlice(o, chi, shape)


# --------------------------------------------------------------------------
# vectorised tables


def _all_vectors(orders: tuple[int, ...]) -> np.ndarray:
    grids = np.meshgrid(*(np.arange(n, dtype=np.int64) for n in orders), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def conductor_array(group: FiniteAbelianPresentation, ks: np.ndarray) -> np.ndarray:
    """Conductors of many characters given as integer rows."""
    orders = np.array(group.generator_orders, dtype=np.int64)
    big = math.lcm(*group.generator_orders)
    scale = big // orders
    out = np.full(len(ks), -1, dtype=np.int64)
    for c, gens in enumerate(group.filtration):
        trivial = np.ones(len(ks), dtype=bool)
        for g in gens:
            trivial &= ((ks * (np.array(g, dtype=np.int64) * scale)).sum(axis=1) % big) == 0
        out[(out < 0) & trivial] = c
    if (out < 0).any():
        raise ArithmeticError("filtration too short for some characters")
    return out


class _BaseTable:
    def __init__(self, p: int, level: int):
        self.p = p
        self.level = level
        self.group = base_units(p, level)
        self.phi = self.group.orders[0]
        self.cond = conductor_array(self.group.presentation, np.arange(self.phi, dtype=np.int64)[:, None])

    def character(self, k: int) -> FiniteCharacter:
        return base_character(self.p, self.level, int(k))


class _ExtensionTable:
    """Non-invariant characters of one extension's units, one row per Galois pair."""

    def __init__(self, p: int, extension: str, level: int, work_level: int):
        grp = extension_units(p, extension, level)
        pres = grp.presentation
        self.p, self.extension, self.level, self.group = p, extension, level, grp
        orders = np.array(pres.generator_orders, dtype=np.int64)
        big = math.lcm(*pres.generator_orders)
        scale = big // orders
        ks = _all_vectors(pres.generator_orders)
        galois = np.array(pres.galois, dtype=np.int64)
        conj = ((ks * scale) @ galois.T) % big // scale
        radix = np.cumprod(np.concatenate([[1], orders[::-1][:-1]]))[::-1]
        index, conj_index = ks @ radix, conj @ radix
        keep = index < conj_index
        self.ks, self.conj = ks[keep], conj[keep]
        self.cond = conductor_array(pres, self.ks)
        # restriction to Z_p^x at the base level, then moved to the working level
        m = pres.base_level
        phi_b = euler_phi(p**m)
        emb = np.array(pres.base_embedding, dtype=np.int64)
        rest_b = ((self.ks * scale) @ emb % big) * phi_b // big
        g_work = base_units(p, work_level).generators[0][0]
        lift = base_units(p, m).log((g_work, 0))[0]
        phi_w = euler_phi(p**work_level)
        rest_w = rest_b * lift * (phi_w // phi_b) % phi_w
        if extension != "unramified":
            rest_w = (rest_w + phi_w // 2) % phi_w
        self.central = rest_w
        # alpha: least conductor over norm twists
        norm_logs = np.array(pres.norm_logs, dtype=np.int64)
        alpha = self.cond.copy()
        for kb in range(phi_b):
            twist = kb * norm_logs * orders
            assert (twist % phi_b == 0).all()
            twisted = (self.ks + twist // phi_b) % orders
            alpha = np.minimum(alpha, conductor_array(pres, twisted))
        self.alpha = alpha
        self.orbit_cond = 2 * self.cond if extension == "unramified" else self.cond + 1
        eps_log, minus_one = _eps_log(grp, extension)
        self.at_eps = ((self.ks * scale) @ np.array(eps_log) % big, (self.conj * scale) @ np.array(eps_log) % big)
        self.at_minus_one = (self.ks * scale) @ np.array(minus_one) % big
        self.big = big

    def character(self, row: int) -> FiniteCharacter:
        return FiniteCharacter.from_ints(self.group.presentation, self.ks[row])


def working_level(max_conductor: int) -> int:
    return max(2, max_conductor)


def extension_level(extension: str, max_conductor: int) -> int:
    return max_conductor // 2 if extension == "unramified" else max_conductor - 1


@lru_cache(maxsize=None)
def _tables(p: int, max_conductor: int):
    work = working_level(max_conductor)
    base = _BaseTable(p, work)
    exts = {}
    for ext in EXTENSIONS:
        level = extension_level(ext, max_conductor)
        if level >= 1:
            exts[ext] = _ExtensionTable(p, ext, level, work)
    return base, exts


def _check_conductor_cap(max_conductor: int):
    if not 0 <= max_conductor <= MAX_CONDUCTOR:
        raise UnsupportedConductorError(f"max_conductor must lie in 0..{MAX_CONDUCTOR}")


# --------------------------------------------------------------------------
# slice enumeration


@dataclass(frozen=True)
class _SliceRecord:
    """Slice data before any FiniteCharacter objects are built."""

    kind: str
    key: tuple
    conductor: int
    shape: Shape
    extension: Optional[str] = None


def _central_exponent(chi: CentralCharacter, work: int) -> Optional[int]:
    if chi.conductor > work:
        return None
    return base_exponent_at_level(chi.restriction, work)


def _square_roots(base: _BaseTable, k_u: int) -> list[int]:
    if k_u % 2:
        return []
    half = k_u // 2
    return [half, (half + base.phi // 2) % base.phi]


def _slice_records(p: int, chi: CentralCharacter, max_conductor: int, materialize_type2: bool) -> Iterator:
    _check_conductor_cap(max_conductor)
    require_odd_prime(p)
    base, exts = _tables(p, max_conductor)
    k_u = _central_exponent(chi, base.level)
    if k_u is None:
        return
    q = Fraction(p)
    omega = chi.uniformizer_value.exponent
    for k0 in _square_roots(base, k_u):
        c = 2 * int(base.cond[k0])
        if c <= max_conductor:
            yield _SliceRecord("type1", (k0,), c, Circle(Fraction(1)))
    # type2: all unordered pairs with product k_u, vectorised
    ks = np.arange(base.phi, dtype=np.int64)
    kp = (k_u - ks) % base.phi
    cond = base.cond[ks] + base.cond[kp]
    mask = (ks < kp) & (cond <= max_conductor)
    diff_cond = base.cond[(kp - ks) % base.phi]
    if materialize_type2:
        for a, b, c, dc in zip(ks[mask], kp[mask], cond[mask], diff_cond[mask]):
            yield _SliceRecord("type2", (int(a), int(b)), int(c), Circle((q + 1) / q * q ** int(dc)))
    else:
        pairs = np.stack([cond[mask], diff_cond[mask]], axis=1)
        if len(pairs):
            uniq, counts = np.unique(pairs, axis=0, return_counts=True)
            for (c, dc), n in zip(uniq, counts):
                yield _SliceRecord("type2-tally", (int(n),), int(c), Circle(int(n) * (q + 1) / q * q ** int(dc)))
    steinberg_points = _steinberg_points(omega)
    for k0 in _square_roots(base, k_u):
        c = 1 if k0 == 0 else 2 * int(base.cond[k0])
        if c <= max_conductor:
            yield _SliceRecord("steinberg", (k0,), c, DiscretePoints(steinberg_points, (q - 1) / 2))
    for ext, table in exts.items():
        rows = np.nonzero((table.central == k_u) & (table.orbit_cond <= max_conductor))[0]
        for row in rows:
            count = _supercuspidal_points(
                p,
                ext,
                omega,
                (Fraction(int(table.at_eps[0][row]), table.big), Fraction(int(table.at_eps[1][row]), table.big)),
                Fraction(int(table.at_minus_one[row]), table.big),
            )
            if count == 0:
                continue
            shape = DiscretePoints(count, formal_degree(p, ext, int(table.alpha[row])))
            yield _SliceRecord("supercuspidal", (int(row),), int(table.orbit_cond[row]), shape, ext)


def _orbit_from_record(p: int, rec: _SliceRecord, max_conductor: int) -> TemperedOrbit:
    base, exts = _tables(p, max_conductor)
    if rec.kind == "supercuspidal":
        table = exts[rec.extension]
        row = rec.key[0]
        eta = table.character(row)
        chars = (eta, FiniteCharacter.from_ints(table.group.presentation, table.conj[row]))
        central = restrict_to_base(eta)
        if rec.extension != "unramified":
            central = _base_product(central, _legendre_character(p, central.group.level))
        return TemperedOrbit("supercuspidal", chars, rec.conductor, central, rec.extension)
    chars = tuple(base.character(k) for k in rec.key)
    central = base.character(sum(rec.key) if rec.kind == "type2" else 2 * rec.key[0])
    return TemperedOrbit(rec.kind, chars, rec.conductor, central)


def enumerate_slices(p: int, chi: CentralCharacter, max_conductor: int) -> list[OrbitSlice]:
    """Every slice of conductor <= max_conductor with central character chi, once each."""
    records = _slice_records(p, chi, max_conductor, materialize_type2=True)
    slices = [OrbitSlice(_orbit_from_record(p, rec, max_conductor), chi, rec.shape) for rec in records]
    slices.sort(key=lambda s: s.orbit.sort_key())
    return slices


def mass_by_conductor(p: int, chi: CentralCharacter, max_conductor: int) -> dict[int, Fraction]:
    totals: dict[int, Fraction] = {}
    for rec in _slice_records(p, chi, max_conductor, materialize_type2=False):
        totals[rec.conductor] = totals.get(rec.conductor, Fraction(0)) + rec.shape.total_mass
    return totals


def gamma0_index_value(p: int, r: int) -> int:
    return 1 if r == 0 else p ** (r - 1) * (p + 1)


@dataclass(frozen=True)
class MassIdentity:
    lhs: Fraction
    rhs: Fraction
    equal: bool


def mass_identity_check(p: int, r: int, chi: CentralCharacter) -> MassIdentity:
    """Sum of mass * (r - c + 1) over slices of conductor c <= r, against [K : Gamma0(p^r)]."""
    if not 0 <= r <= MAX_CONDUCTOR:
        raise UnsupportedConductorError(f"r must lie in 0..{MAX_CONDUCTOR}")
    if chi.conductor > r:
        raise ValueError("central character conductor exceeds the level")
    totals = mass_by_conductor(p, chi, r)
    lhs = sum((m * (r - c + 1) for c, m in totals.items()), Fraction(0))
    rhs = Fraction(gamma0_index_value(p, r))
    return MassIdentity(lhs, rhs, lhs == rhs)


# --------------------------------------------------------------------------
# orbits regardless of central character


def enumerate_orbits(p: int, conductors: Iterable[int]) -> Iterator[TemperedOrbit]:
    """All tempered orbits whose conductor lies in ``conductors`` (each cap <= 4)."""
    wanted = set(conductors)
    top = max(wanted)
    _check_conductor_cap(top)
    base, exts = _tables(p, top)
    chars = {}

    def char(k):
        if k not in chars:
            chars[k] = base.character(k)
        return chars[k]

    phi = base.phi
    for k0 in range(phi):
        c = 2 * int(base.cond[k0])
        if c in wanted:
            yield TemperedOrbit("type1", (char(k0),), c, char(2 * k0 % phi))
        cs = 1 if k0 == 0 else c
        if cs in wanted:
            yield TemperedOrbit("steinberg", (char(k0),), cs, char(2 * k0 % phi))
    by_cond = {c: np.nonzero(base.cond == c)[0] for c in range(top + 1)}
    for c1, c2 in itertools.combinations_with_replacement(range(top + 1), 2):
        if c1 + c2 not in wanted:
            continue
        if c1 == c2:
            pairs = itertools.combinations(by_cond[c1], 2)
        else:
            pairs = itertools.product(by_cond[c1], by_cond[c2])
        for a, b in pairs:
            a, b = int(min(a, b)), int(max(a, b))
            yield TemperedOrbit("type2", (char(a), char(b)), c1 + c2, char((a + b) % phi))
    for ext, table in exts.items():
        for row in np.nonzero(np.isin(table.orbit_cond, list(wanted)))[0]:
            yield _orbit_from_record(p, _SliceRecord("supercuspidal", (int(row),), int(table.orbit_cond[row]), Circle(Fraction(1)), ext), top)


def slice_rows(slices: Iterable[OrbitSlice]) -> list[dict]:
    rows = []
    for s in slices:
        o = s.orbit
        params = ";".join(
            ",".join(f"{e.numerator}/{e.denominator}" for e in c.exponents) for c in o.characters
        )
        if o.extension:
            params = f"{o.extension}:{params}"
        shape = s.shape
        mass = shape.total_mass
        rows.append(
            {
                "p": o.p,
                "type": o.kind,
                "parameters": params,
                "conductor": o.conductor,
                "shape": f"points:{shape.count}" if isinstance(shape, DiscretePoints) else "circle",
                "mass_num": mass.numerator,
                "mass_den": mass.denominator,
            }
        )
    return rows
