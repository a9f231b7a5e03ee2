"""Exact arithmetic in Q(zeta_n) on the power basis modulo the n-th cyclotomic polynomial."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import Poly, cyclotomic_poly, symbols

_x = symbols("x")


@lru_cache(maxsize=None)
def cyclotomic_coefficients(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(n, _x), _x).all_coeffs()))


@dataclass(frozen=True)
class CyclotomicNumber:
    n: int
    coeffs: tuple[Fraction, ...]

    @classmethod
    def zero(cls, n: int) -> CyclotomicNumber:
        return cls(n, ())

    @classmethod
    def zeta_power(cls, n: int, k: int) -> CyclotomicNumber:
        vec = [Fraction(0)] * n
        vec[k % n] = Fraction(1)
        return cls(n, tuple(vec))._reduced()

    def _reduced(self) -> CyclotomicNumber:
        phi = cyclotomic_coefficients(self.n)
        deg = len(phi) - 1
        c = list(self.coeffs)
        for i in range(len(c) - 1, deg - 1, -1):
            lead = c[i]
            if lead:
                for j, pj in enumerate(phi):
                    c[i - deg + j] -= lead * pj
        c = c[:deg]
        while c and c[-1] == 0:
            c.pop()
        return CyclotomicNumber(self.n, tuple(c))

    def __add__(self, other: CyclotomicNumber) -> CyclotomicNumber:
        size = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (size - len(self.coeffs))
        for i, v in enumerate(other.coeffs):
            a[i] += v
        return CyclotomicNumber(self.n, tuple(a))._reduced()

    def scale(self, s) -> CyclotomicNumber:
        return CyclotomicNumber(self.n, tuple(Fraction(s) * v for v in self.coeffs))._reduced()

    def is_zero(self) -> bool:
        return not self.coeffs

    def rational_value(self):
        """The value as a Fraction when it lies in Q, else None."""
        if self.is_zero():
            return Fraction(0)
        if len(self.coeffs) == 1:
            return self.coeffs[0]
        return None

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.n)
        return sum((complex(float(v)) * z**i for i, v in enumerate(self.coeffs)), 0j)
