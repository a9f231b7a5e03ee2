"""Degree bounds for fields of rationality, Weil q-integers and mass ratios."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import sympy

from .padic_core import FiniteCharacter, euler_phi
from .padic_core.arith import require_odd_prime
from .spectrum import CentralCharacter, TemperedOrbit, enumerate_orbits, enumerate_slices


def cyclotomic_degree(n: int) -> int:
    return euler_phi(n)


@dataclass(frozen=True)
class DegreeBound:
    orbit: TemperedOrbit
    lower_bound: int


def _value_orders(chars: Iterable[FiniteCharacter]) -> set[int]:
    return {e.denominator for chi in chars for e in chi.exponents}


def orbit_rationality_bound(o: TemperedOrbit) -> DegreeBound:
    """Certified lower bound on [Q(O):Q] from the orders of the character values."""
    best = 1
    for n in _value_orders(o.characters):
        phi = cyclotomic_degree(n)
        best = max(best, phi if o.kind == "steinberg" else -(-phi // 2))
    return DegreeBound(o, best)


def conductor_rationality_gate(p: int, A: int, conductors: Sequence[int] = (3, 4)) -> bool:
    """True when every orbit of the given conductors has degree bound > A."""
    require_odd_prime(p)
    if p <= 2 * A + 1:
        raise ValueError(f"gate needs p > 2A + 1 (p={p}, A={A})")
    if not set(conductors) <= {3, 4}:
        raise ValueError("gate covers conductors 3 and 4")
    return all(orbit_rationality_bound(o).lower_bound > A for o in enumerate_orbits(p, conductors))


# --------------------------------------------------------------------------
# Weil q-integers


@dataclass(frozen=True)
class WeilInteger:
    min_poly: tuple[int, ...]  # monic, highest degree first
    weight: int
    q: int

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    def roots(self) -> np.ndarray:
        return np.roots(np.array(self.min_poly, dtype=float))

    def max_modulus_error(self) -> float:
        target = float(self.q**self.weight)
        return float(max(abs(abs(z) ** 2 - target) for z in self.roots()))


def _poly_eval(coeffs: Sequence, x):
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _poly_divmod(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    out = []
    while len(num) >= len(den):
        factor = num[0] / den[0]
        out.append(factor)
        for i, d in enumerate(den):
            num[i] -= factor * d
        num.pop(0)
    return out, num


def is_irreducible_small(coeffs: Sequence[int]) -> bool:
    """Irreducibility over Q of a monic integer polynomial of degree <= 4."""
    d = len(coeffs) - 1
    if d > 4:
        raise ValueError("degree above 4 not supported")
    if d <= 1:
        return d == 1
    const = coeffs[-1]
    if const == 0:
        return False
    divisors = [x for x in range(1, abs(const) + 1) if const % x == 0]
    if any(_poly_eval(coeffs, s * x) == 0 for x in divisors for s in (1, -1)):
        return False
    if d < 4:
        return True
    # monic quadratic factors x^2 + b x + c with c | const; b is bounded by root sizes
    bound = math.ceil(2 * (1 + max(abs(c) for c in coeffs)))
    num = [Fraction(c) for c in coeffs]
    for c in {s * x for x in divisors for s in (1, -1)}:
        for b in range(-bound, bound + 1):
            _, rem = _poly_divmod(num, [Fraction(1), Fraction(b), Fraction(c)])
            if all(r == 0 for r in rem):
                return False
    return True


def _weil_exact_quadratic(coeffs: Sequence[int], q: int, w: int) -> bool:
    _, c1, c2 = coeffs
    qw = q**w
    return (c2 == qw and c1 * c1 < 4 * qw) or (c2 == -qw and c1 == 0)


def _coefficient_bound(d: int, j: int, q: int, w: int, margin: int) -> int:
    return math.floor(math.comb(d, j) * math.sqrt(q ** (j * w))) + margin


def weil_polynomials(q: int, weight: int, degree: int, margin: int = 0) -> list[WeilInteger]:
    """Monic irreducible integer polynomials of one degree with all roots of modulus q^(w/2).

    Roots are closed under a -> q^w / a, so c_{d-j} = +-c_j q^{w(d/2 - j)} with
    c_d = +-q^{dw/2}; only the first half of the coefficients is searched.
    """
    d, w = degree, weight
    if d * w % 2:
        return []
    top = q ** (d * w // 2)
    found = []
    half = d // 2
    ranges = [range(-_coefficient_bound(d, j, q, w, margin), _coefficient_bound(d, j, q, w, margin) + 1) for j in range(1, half + 1)]
    for sign in (1, -1):
        for head in itertools.product(*ranges):
            coeffs = [1, *head] + [0] * (d - half)
            if d % 2 == 0 and sign == -1 and coeffs[half] != 0:
                continue
            ok = True
            for k in range(half + 1, d + 1):
                twice = w * (2 * k - d)
                if twice % 2:
                    ok = coeffs[d - k] == 0
                    if not ok:
                        break
                    continue
                coeffs[k] = sign * coeffs[d - k] * q ** (twice // 2)
            if not ok:
                continue
            poly = tuple(coeffs)
            if not is_irreducible_small(poly):
                continue
            cand = WeilInteger(poly, w, q)
            if d == 1:
                good = abs(poly[1]) == top
            elif d == 2:
                good = _weil_exact_quadratic(poly, q, w)
            else:
                good = cand.max_modulus_error() < 1e-9 and _functional_equation_holds(poly, q, w)
            if good:
                found.append(cand)
    return sorted(set(found), key=lambda u: u.min_poly)


def _functional_equation_holds(coeffs: Sequence[int], q: int, w: int) -> bool:
    d = len(coeffs) - 1
    # x^d P(q^w / x) has coefficient c_j q^{w(d-j)} on x^j, i.e. reversed order
    lhs = [coeffs[j] * q ** (w * (d - j)) for j in range(d + 1)][::-1]
    scale = coeffs[-1]
    return all(a == scale * b for a, b in zip(lhs, coeffs))


def weil_q_integers(q: int, weight: int, max_degree: int, margin: int = 0) -> list[WeilInteger]:
    if not 1 <= max_degree <= 4:
        raise ValueError("max_degree must lie in 1..4")
    if weight < 1:
        raise ValueError("weight must be positive")
    out = []
    for d in range(1, max_degree + 1):
        out.extend(weil_polynomials(q, weight, d, margin))
    return out


@dataclass(frozen=True)
class AlgebraicTrace:
    """An algebraic number given by its monic minimal polynomial (highest degree first)."""

    min_poly: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def value(self):
        if self.degree != 1:
            raise ValueError("trace is not rational")
        return -self.min_poly[1]

    def negated(self) -> AlgebraicTrace:
        """Minimal polynomial of the negative: substitute -y and renormalise to monic."""
        d = self.degree
        return AlgebraicTrace(tuple(c * (-1) ** (d - j) * (-1) ** d for j, c in enumerate(self.min_poly)))

    def real_roots(self) -> list[float]:
        return [float(z.real) for z in np.roots(np.array(self.min_poly, dtype=float))]


def _trace_polynomial(weil: WeilInteger) -> tuple[int, ...]:
    qw = weil.q**weil.weight
    traces: list[complex] = []
    for z in weil.roots():
        t = z + qw / z
        if all(abs(t - s) > 1e-7 for s in traces):
            traces.append(t)
    coeffs = np.poly(np.array(traces))
    rounded = tuple(int(round(c.real)) for c in coeffs)
    if max(abs(c - r) for c, r in zip(coeffs, rounded)) > 1e-6:
        raise ArithmeticError("trace polynomial is not integral")
    return rounded


def unramified_small_rationality_points(q: int, weight: int, A: int) -> frozenset[AlgebraicTrace]:
    """Traces a = alpha + q^w/alpha of Weil q-integers alpha of degree <= 2A, as minimal polynomials of degree <= A."""
    if A < 1:
        return frozenset()
    y = sympy.symbols("y")
    out = set()
    for weil in weil_q_integers(q, weight, min(2 * A, 4)):
        poly = sympy.Poly(list(_trace_polynomial(weil)), y)
        for factor, _ in poly.factor_list()[1]:
            coeffs = tuple(int(c) for c in factor.all_coeffs())
            if coeffs[0] < 0:
                coeffs = tuple(-c for c in coeffs)
            if len(coeffs) - 1 <= A:
                out.add(AlgebraicTrace(coeffs))
    return frozenset(out)


# --------------------------------------------------------------------------
# mass ratio and counting bounds


def largest_n_with_small_phi(A: int) -> int:
    """Largest n with phi(n) <= 2A; phi(n) >= sqrt(n/2) keeps the search finite."""
    limit = 8 * A * A + 8
    return max(n for n in range(1, limit + 1) if euler_phi(n) <= 2 * A)


@dataclass(frozen=True)
class MassRatio:
    p: int
    A: int
    high_mass: Fraction
    total: Fraction

    @property
    def ratio(self) -> Fraction:
        return self.high_mass / self.total


def small_rationality_mass_ratio(p: int, A: int, chi: CentralCharacter | None = None) -> MassRatio:
    """Share of the level-p^2 mass carried by slices of conductor <= 2 whose degree bound exceeds A."""
    require_odd_prime(p)
    if p <= 2 * A + 1:
        raise ValueError("needs p > 2A + 1")
    chi = chi or CentralCharacter.trivial(p)
    if chi.conductor != 0:
        raise ValueError("central character must be unramified")
    high = Fraction(0)
    for s in enumerate_slices(p, chi, 2):
        if orbit_rationality_bound(s.orbit).lower_bound > A:
            high += s.total_mass
    return MassRatio(p, A, high, Fraction(p * (p + 1)))


@dataclass(frozen=True)
class OldformBound:
    B: int
    b: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    def decay(self, norm: int) -> Fraction:
        return (self.B - 1) * Fraction(norm) ** (2 - self.B)


def oldform_bound_check(B: int, b: int) -> OldformBound:
    if B < 3 or b not in (0, 1, 2):
        raise ValueError("need B >= 3 and b in {0, 1, 2}")
    return OldformBound(B, b, B - b + 1, (B - 1) * (3 - b))
