"""Orbital integrals and constant terms of 1_{Z Gamma0(p^r)}.

Measures: vol(K) = 1, vol(N cap K) = 1, so vol(Gamma0(p^r)) = 1 / [K : Gamma0(p^r)].
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..padic_core import INF, is_square_in_Qp, vp
from ..padic_core.arith import require_odd_prime, residue
from .tree import (
    RadiusError,
    RationalMatrix,
    TreeContext,
    TreeVertex,
    count_paths,
    fixed_segment_count,
    fixes_vertex,
    origin,
)

COSET_COST_LIMIT = 10**7


def gamma0_volume(p: int, r: int) -> Fraction:
    return Fraction(1) if r == 0 else Fraction(1, p ** (r - 1) * (p + 1))


def is_elliptic(g: RationalMatrix, p: int) -> bool:
    disc = g.discriminant()
    return disc != 0 and not is_square_in_Qp(disc, p)


# --------------------------------------------------------------------------
# central constant term


def central_constant_term(p: int, r: int) -> Fraction:
    """Closed form: q^-k for r = 2k, 2/(q+1) q^-k for r = 2k+1."""
    require_odd_prime(p)
    if r < 0:
        raise ValueError("r must be nonnegative")
    k, odd = divmod(r, 2)
    value = Fraction(1, p**k)
    return value * Fraction(2, p + 1) if odd else value


def _shell_sum(p: int, r: int, shell_count) -> Fraction:
    if r == 0:
        return Fraction(1)
    q = Fraction(p)
    total = q**-r
    for j in range(r):
        total += gamma0_volume(p, r) * (q - 1) * q ** (-j - 1) * shell_count(j)
    return total


def central_constant_term_shell_sum(p: int, r: int) -> Fraction:
    """Integral over N split by v(b) = j; shell j fixes q^floor((r+j)/2) segments from the base vertex."""
    return _shell_sum(p, r, lambda j: p ** ((r + j) // 2))


def shell_sum_as_printed(p: int, r: int) -> Fraction:
    """The same sum with q^floor(j/2) per shell; kept to document that it disagrees."""
    return _shell_sum(p, r, lambda j: p ** (j // 2))


def central_constant_term_by_tree(p: int, r: int) -> Fraction:
    """Shell sum with each shell's segment count found by walking the tree."""
    return _shell_sum(p, r, lambda j: fixed_segment_count(RationalMatrix.unipotent(p**j), r, TreeContext(p, r + 1), anchor=origin()))


# --------------------------------------------------------------------------
# coset oracle for diagonal constant terms


def _p1_cosets(p: int, r: int) -> list[tuple[int, int, int, int]]:
    """Representatives (x, u, y, w) of K / Gamma0(p^r), one per point of P^1(Z/p^r)."""
    mod = p**r
    reps = [(1, 0, y, 1) for y in range(mod)]
    reps += [(x, 1, 1, 0) for x in range(0, mod, p)]
    return reps


def _gl2_mod(p: int, r: int):
    mod = p**r
    for x, u, y, w in itertools.product(range(mod), repeat=4):
        if (x * w - u * y) % p:
            yield (x, u, y, w)


def _lower_left_conjugate(k, m, mod: int) -> int:
    """Lower-left entry of k^-1 m k mod p^r, up to the unit 1/det(k)."""
    x, u, y, w = k
    m11, m12, m21, m22 = m
    left = (m11 * x + m12 * y) % mod
    lower = (m21 * x + m22 * y) % mod
    return (x * lower - y * left) % mod


def coset_constant_term(p: int, t1, t2, r: int, full: bool = False) -> Fraction:
    """Q_t(1_{Z Gamma0(p^r)}) for t = diag(t1, t2) with unit entries.

    Only b in Z_p contribute and the integrand depends on b mod p^r and on
    k modulo Gamma0(p^r), so the integral is a finite average.
    """
    require_odd_prime(p)
    if vp(t1, p) != 0 or vp(t2, p) != 0:
        raise ValueError("t must have unit entries")
    if r == 0:
        return Fraction(1)
    mod = p**r
    a1, a2 = residue(t1, p, r), residue(t2, p, r)
    if full:
        size = mod**4
        if size * mod > COSET_COST_LIMIT:
            raise OverflowError("full GL2 enumeration too large; use the coset mode or the tree method")
        reps = list(_gl2_mod(p, r))
    else:
        size = mod + mod // p
        if size * mod > COSET_COST_LIMIT:
            raise OverflowError("coset oracle too large; use the tree method")
        reps = _p1_cosets(p, r)
    hits = 0
    for b in range(mod):
        m = (a1, a1 * b % mod, 0, a2)
        hits += sum(1 for k in reps if _lower_left_conjugate(k, m, mod) == 0)
    return Fraction(hits, mod * len(reps))


@dataclass(frozen=True)
class DiagonalConstantTerm:
    value: Fraction
    bound: Fraction
    v: int

    @property
    def within_bound(self) -> bool:
        return self.value <= self.bound


def constant_term_diagonal(t: RationalMatrix, r: int, ctx: Optional[TreeContext] = None) -> DiagonalConstantTerm:
    """Coset-oracle value together with the upper bound it must satisfy."""
    if t.b != 0 or t.c != 0 or t.a == t.d:
        raise ValueError("need a non-scalar diagonal matrix")
    p = ctx.p if ctx else None
    if p is None:
        raise ValueError("a tree context fixes the prime")
    v = vp(t.a - t.d, p)
    value = coset_constant_term(p, t.a, t.d, r)
    bound = 2 * Fraction(p) ** v * gamma0_volume(p, r) if r > v else Fraction(1)
    result = DiagonalConstantTerm(value, bound, v)
    if not result.within_bound:
        raise ArithmeticError(f"constant term {value} exceeds bound {bound}")
    return result


# --------------------------------------------------------------------------
# orbital integrals


def _rational_eigenvalues(g: RationalMatrix) -> Optional[tuple[Fraction, Fraction]]:
    disc = g.discriminant()
    num, den = disc.numerator, disc.denominator
    if num < 0:
        return None
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    root = Fraction(rn, rd)
    return ((g.trace + root) / 2, (g.trace - root) / 2)


def diagonal_orbital_integral_by_tree(p: int, t1, t2, r: int) -> Fraction:
    """vol(Gamma0) * sum over b in p^-v Z_p / Z_p of fixed oriented segments starting at w(b, 0)."""
    t = RationalMatrix.diag(t1, t2)
    v = vp(t.a - t.d, p)
    total = 0
    for j in range(p**v):
        start = TreeVertex.make(Fraction(j, p**v), 0, p)
        total += count_paths(start, r, p, lambda w: fixes_vertex(t, w, p))
    return gamma0_volume(p, r) * total


def orbital_integral_gamma0(gamma: RationalMatrix, r: int, ctx: TreeContext, method: str = "constant-term") -> Fraction:
    """O_gamma(1_{Z Gamma0(p^r)}) for semisimple non-central gamma."""
    p = ctx.p
    if gamma.is_scalar():
        raise ValueError("gamma is central")
    disc = gamma.discriminant()
    if disc == 0:
        raise ValueError("gamma is not semisimple")
    if is_elliptic(gamma, p):
        if ctx.radius <= r:
            raise RadiusError("radius must exceed r")
        return gamma0_volume(p, r) * fixed_segment_count(gamma, r, ctx)
    eig = _rational_eigenvalues(gamma)
    if eig is None:
        raise NotImplementedError("split gamma with irrational eigenvalues")
    t1, t2 = eig
    if vp(t1, p) != vp(t2, p):
        return Fraction(0)
    scale = Fraction(p) ** -vp(t1, p)
    t1, t2 = t1 * scale, t2 * scale
    if method == "tree":
        if ctx.radius < vp(t1 - t2, p) + r:
            raise RadiusError("radius too small for the tree method")
        return diagonal_orbital_integral_by_tree(p, t1, t2, r)
    if method != "constant-term":
        raise ValueError(f"unknown method {method!r}")
    v = vp(t1 - t2, p)
    return Fraction(p) ** v * constant_term_diagonal(RationalMatrix.diag(t1, t2), r, ctx).value


# --------------------------------------------------------------------------
# global envelope


@dataclass(frozen=True)
class GlobalEnvelope:
    N: int
    value: Fraction
    envelope: Fraction

    @property
    def holds(self) -> bool:
        return self.value <= self.envelope


def global_diagonal_envelope(t1: int, t2: int, N: int) -> GlobalEnvelope:
    """Product of local constant terms over p^r || N against 2^P prod p^{v_p(t1-t2)} / N."""
    from sympy import factorint

    value, envelope = Fraction(1), Fraction(1, N)
    for p, r in sorted(factorint(N).items()):
        require_odd_prime(p)
        value *= coset_constant_term(p, t1, t2, r)
        envelope *= 2 * Fraction(p) ** vp(t1 - t2, p)
    return GlobalEnvelope(N, value, envelope)
