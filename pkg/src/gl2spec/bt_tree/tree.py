"""Vertices, adjacency and fixed-point sets on the Bruhat-Tits tree of PGL2(Q_p).

The vertex w(a, s) is the homothety class of the lattice spanned by e1 and
a*e1 + p^s*e2.  Only a mod Z_(p) matters, so a is stored as n / p^m with
0 <= n < p^m and p not dividing n (or a = 0).
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from ..padic_core import INF, vp
from ..padic_core.arith import require_odd_prime, residue


class RadiusError(ValueError):
    """The truncation radius is too small to answer without cutting something off."""


@dataclass(frozen=True)
class RationalMatrix:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.det == 0:
            raise ValueError("matrix is singular")

    @classmethod
    def of(cls, rows: Sequence[Sequence]) -> RationalMatrix:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def diag(cls, x, y) -> RationalMatrix:
        return cls(x, 0, 0, y)

    @classmethod
    def unipotent(cls, b) -> RationalMatrix:
        return cls(1, b, 0, 1)

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> Fraction:
        return self.a + self.d

    @property
    def entries(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: RationalMatrix) -> RationalMatrix:
        return RationalMatrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> RationalMatrix:
        det = self.det
        return RationalMatrix(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def scaled(self, s) -> RationalMatrix:
        s = Fraction(s)
        return RationalMatrix(self.a * s, self.b * s, self.c * s, self.d * s)

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def discriminant(self) -> Fraction:
        return self.trace**2 - 4 * self.det


@dataclass(frozen=True)
class TreeContext:
    p: int
    radius: int

    def __post_init__(self):
        require_odd_prime(self.p)
        if self.radius < 1:
            raise ValueError("radius must be positive")


@dataclass(frozen=True, order=True)
class TreeVertex:
    s: int
    a: Fraction

    @classmethod
    def make(cls, a, s: int, p: int) -> TreeVertex:
        a = Fraction(a)
        v = vp(a, p)
        if v is INF or v >= 0:
            return cls(s, Fraction(0))
        m = -v
        n = residue(a * p**m, p, m)
        return cls(s, Fraction(n, p**m))

    def basis(self, p: int) -> RationalMatrix:
        return RationalMatrix(1, self.a, 0, Fraction(p) ** self.s)

    def __repr__(self) -> str:
        return f"w({self.a}, {self.s})"


def origin() -> TreeVertex:
    return TreeVertex(0, Fraction(0))


def _min_valuation(m: RationalMatrix, p: int):
    return min(vp(x, p) for x in m.entries)


def vertex_distance(u: TreeVertex, w: TreeVertex, p: int) -> int:
    """Elementary-divisor distance between two lattice classes."""
    m = u.basis(p).inverse() @ w.basis(p)
    return vp(m.det, p) - 2 * _min_valuation(m, p)


def dist_to_standard_apartment(w: TreeVertex, p: int) -> tuple[int, TreeVertex]:
    """Distance to the diagonal apartment and the nearest point on it."""
    v = vp(w.a, p)
    if v is INF or v >= 0:
        return 0, w
    return -v, TreeVertex(w.s - v, Fraction(0))


def vertex_of(basis: RationalMatrix, p: int) -> TreeVertex:
    """Class of the lattice spanned by the columns of ``basis``."""
    (x1, y1), (x2, y2) = (basis.a, basis.c), (basis.b, basis.d)
    if y1 == 0 and y2 == 0:
        raise ValueError("columns do not span")
    # pivot on the column whose second entry has least valuation
    if y2 == 0 or (y1 != 0 and vp(y1, p) < vp(y2, p)):
        (x1, y1), (x2, y2) = (x2, y2), (x1, y1)
    # now column 2 is the pivot; clear the second entry of column 1
    ratio = y1 / y2
    x = x1 - ratio * x2
    y, z = x2, y2
    s = vp(z / x, p)
    unit = (z / x) / Fraction(p) ** s
    return TreeVertex.make(y / x / unit, s, p)


def apply(g: RationalMatrix, w: TreeVertex, p: int) -> TreeVertex:
    return vertex_of(g @ w.basis(p), p)


def neighbors(w: TreeVertex, ctx: TreeContext) -> list[TreeVertex]:
    p = ctx.p
    if vertex_distance(origin(), w, p) > ctx.radius - 1:
        raise RadiusError(f"{w} lies outside radius {ctx.radius - 1}")
    return _raw_neighbors(w, p)


def _raw_neighbors(w: TreeVertex, p: int) -> list[TreeVertex]:
    n, pm = w.a.numerator, w.a.denominator
    if pm == 1:
        up = TreeVertex(w.s + 1, Fraction(0))
        down = [TreeVertex(w.s - 1, Fraction(u, p)) for u in range(p)]
    else:
        up = TreeVertex(w.s + 1, Fraction(n % (pm // p), pm // p))
        down = [TreeVertex(w.s - 1, Fraction(n + u * pm, pm * p)) for u in range(p)]
    return [up, *down]


@lru_cache(maxsize=4096)
def _integral_form(g: RationalMatrix, p: int):
    """(v(det g), v(G), entries of G*g) with G the common denominator."""
    G = math.lcm(g.a.denominator, g.b.denominator, g.c.denominator, g.d.denominator)
    return vp(g.det, p), vp(G, p), tuple(int(x * G) for x in g.entries)


def fixes_vertex(g: RationalMatrix, w: TreeVertex, p: int) -> bool:
    """True iff h^-1 g h lies in Z * GL2(Z_p), h the basis of w."""
    dv, G, (m11, m12, m21, m22) = _integral_form(g, p)
    if dv % 2:
        return False
    # h^-1 g h for h = [[1, a], [0, p^s]], expanded by hand and cleared of
    # denominators: g = M / G, a = A / p^m, the common denominator is G * D
    # with D = p^(2m) * p^|s|.
    A, pm = w.a.numerator, w.a.denominator
    m = 0 if pm == 1 else vp(pm, p)
    up, down = p ** max(w.s, 0), p ** max(-w.s, 0)
    cross = A * m21 * down * pm * down
    big_d = pm * pm * up * down
    xs = (
        m11 * big_d - cross,
        A * (m11 - m22) * pm * up * down + m12 * pm * pm * up * up - A * A * m21 * down * down,
        m21 * down * pm * pm * down,
        cross + m22 * big_d,
    )
    need = dv // 2 + G + 2 * m + abs(w.s)
    if need <= 0:
        return True
    modulus = p**need
    return all(x % modulus == 0 for x in xs)


def ball(ctx: TreeContext, centre: Optional[TreeVertex] = None) -> dict[TreeVertex, int]:
    """All vertices within ctx.radius of ``centre``, with their distances."""
    centre = centre or origin()
    seen = {centre: 0}
    queue = deque([centre])
    while queue:
        w = queue.popleft()
        if seen[w] == ctx.radius:
            continue
        for u in _raw_neighbors(w, ctx.p):
            if u not in seen:
                seen[u] = seen[w] + 1
                queue.append(u)
    return seen


def fixed_set(g: RationalMatrix, ctx: TreeContext) -> set[TreeVertex]:
    """Fixed vertices of g, certified complete: raises if they reach the ball's boundary."""
    vertices = ball(ctx)
    fixed = {w for w in vertices if fixes_vertex(g, w, ctx.p)}
    if not fixed:
        raise RadiusError("no fixed vertex inside the ball; enlarge the radius")
    if any(vertices[w] == ctx.radius for w in fixed):
        raise RadiusError("fixed set reaches the ball boundary; enlarge the radius")
    return fixed


def count_paths(start: TreeVertex, r: int, p: int, allowed) -> int:
    """Non-backtracking paths of length r from ``start`` through vertices accepted by ``allowed``."""
    if not allowed(start):
        return 0

    def walk(w: TreeVertex, prev: Optional[TreeVertex], left: int) -> int:
        if left == 0:
            return 1
        total = 0
        for u in _raw_neighbors(w, p):
            if u != prev and allowed(u):
                total += walk(u, w, left - 1)
        return total

    return walk(start, None, r)


def fixed_segment_count(
    g: RationalMatrix,
    r: int,
    ctx: TreeContext,
    anchor: Optional[TreeVertex] = None,
    oriented: bool = True,
) -> int:
    """Length-r segments inside the fixed set of g.

    With an anchor, counts segments starting there (the fixed set may be
    infinite).  Without one, the whole fixed set must sit inside the ball.
    Oriented counting treats a segment and its reversal as different.
    """
    p = ctx.p
    if r < 0:
        raise ValueError("r must be nonnegative")
    if anchor is not None:
        if vertex_distance(origin(), anchor, p) + r > ctx.radius:
            raise RadiusError("segments from the anchor leave the ball")
        return count_paths(anchor, r, p, lambda w: fixes_vertex(g, w, p))
    if r >= ctx.radius:
        raise RadiusError("radius must exceed the segment length")
    if vp(g.det, p) % 2:
        return 0
    fixed = fixed_set(g, ctx)
    total = sum(count_paths(w, r, p, fixed.__contains__) for w in fixed)
    if oriented or r == 0:
        return total
    return total // 2


def in_z_gamma0(m: RationalMatrix, p: int, r: int) -> bool:
    """Membership in Z * Gamma0(p^r) by valuations after central rescaling."""
    dv = vp(m.det, p)
    if dv % 2:
        return False
    e = dv // 2
    scaled = m.scaled(Fraction(p) ** -e)
    if _min_valuation(scaled, p) < 0:
        return False
    return r == 0 or vp(scaled.c, p) >= r


def standard_segment(r: int, p: int) -> list[TreeVertex]:
    return [TreeVertex(i, Fraction(0)) for i in range(r + 1)]


def fixes_translated_segment(gamma: RationalMatrix, g: RationalMatrix, r: int, p: int) -> bool:
    """Does gamma fix every vertex of g applied to the standard segment?"""
    for i in range(r + 1):
        h = g @ RationalMatrix.diag(1, Fraction(p) ** i)
        if vertex_of(gamma @ h, p) != vertex_of(h, p):
            return False
    return True
