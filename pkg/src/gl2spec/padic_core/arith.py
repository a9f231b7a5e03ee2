"""Exact valuations and small number-theoretic helpers over Q."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Union

from sympy import isprime, legendre_symbol, totient
from sympy.ntheory import primitive_root

Rational = Union[int, Fraction]


class _Infinity:
    """Valuation of zero. Compares above every integer and equals only itself."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("padic-infinity")

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INF = _Infinity()


def require_odd_prime(p: int) -> int:
    if not (isinstance(p, int) and p > 2 and isprime(p)):
        raise ValueError(f"expected an odd prime, got {p!r}")
    return p


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp(x: Rational, p: int):
    """p-adic valuation of a rational number; ``INF`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def unit_part(x: Rational, p: int) -> Fraction:
    """x divided by p**vp(x)."""
    x = Fraction(x)
    v = vp(x, p)
    if v is INF:
        raise ValueError("zero has no unit part")
    return x / Fraction(p) ** v


def residue(x: Rational, p: int, m: int) -> int:
    """Image of a p-integral rational in Z/p^m."""
    x = Fraction(x)
    mod = p**m
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not p-integral for p={p}")
    return x.numerator * pow(x.denominator, -1, mod) % mod


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("phi is defined for n >= 1")
    return int(totient(n))


def legendre(a: int, p: int) -> int:
    return int(legendre_symbol(a % p, p))


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    for n in range(2, p):
        if legendre(n, p) == -1:
            return n
    raise ValueError(f"no quadratic non-residue mod {p}")


@lru_cache(maxsize=None)
def smallest_primitive_root(p: int, m: int) -> int:
    """Smallest generator of (Z/p^m)^x."""
    return int(primitive_root(p**m))


def is_square_in_Qp(x: Rational, p: int) -> bool:
    """Square-class test in Q_p for odd p (valuation parity and Legendre symbol)."""
    x = Fraction(x)
    if x == 0:
        return True
    v = vp(x, p)
    if v % 2:
        return False
    return legendre(residue(unit_part(x, p), p, 1), p) == 1
