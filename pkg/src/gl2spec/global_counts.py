"""Level-raising traces, the newform sieve, cusp form dimensions and Fejer values."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy import divisors, factorint, mobius

from .padic_core import RootOfUnity, euler_phi
from .padic_core.cyclotomic import CyclotomicNumber


@dataclass(frozen=True)
class LevelData:
    N: int
    k: int
    factorization: dict = field(init=False, compare=False, hash=False)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("level must be positive")
        if self.k < 2 or self.k % 2:
            raise ValueError("weight must be even and >= 2")
        object.__setattr__(self, "factorization", dict(factorint(self.N)))


def gamma0_index(p: int, r: int) -> int:
    if r < 0:
        raise ValueError("r must be nonnegative")
    return 1 if r == 0 else p ** (r - 1) * (p + 1)


def projective_line_size(p: int, r: int) -> int:
    """|P^1(Z/p^r)| counted from primitive pairs modulo unit scaling."""
    if r == 0:
        return 1
    mod = p**r
    primitive = sum(1 for x in range(mod) for y in range(mod) if x % p or y % p)
    return primitive // euler_phi(mod)


def oldvector_trace(c: int, r: int) -> int:
    """Dimension of Gamma0(p^r)-fixed vectors in a representation of conductor c."""
    return r - c + 1 if c <= r else 0


def newform_trace(c: int, r: int, f_ord: int) -> int:
    """Exact-conductor indicator assembled from level-raising traces.

    Levels below the central conductor carry no test function, so the
    combination depends on how far r sits above f_ord.
    """
    if not 0 <= f_ord <= r:
        raise ValueError("need 0 <= f_ord <= r")
    gap = r - f_ord
    if gap == 0:
        return oldvector_trace(c, r)
    if gap == 1:
        return oldvector_trace(c, r) - 2 * oldvector_trace(c, r - 1)
    return oldvector_trace(c, r) - 2 * oldvector_trace(c, r - 1) + oldvector_trace(c, r - 2)


def sl2_index(N: int) -> int:
    """[SL2(Z) : Gamma0(N)] = N prod (1 + 1/p)."""
    out = Fraction(N)
    for p in factorint(N):
        out *= 1 + Fraction(1, p)
    return int(out)


def dim_main_term(ld: LevelData) -> Fraction:
    """(k - 1)/12 * [SL2(Z) : Gamma0(N)]; the 1/12 is -zeta(-1)."""
    return Fraction(ld.k - 1, 12) * sl2_index(ld.N)


def totally_real_main_term(zeta_minus_one: Fraction, degree: int, index: int, weights: tuple[int, ...]) -> Fraction:
    """Main term over a totally real field of the given degree, with zeta_F(-1) supplied by the caller."""
    if len(weights) != degree:
        raise ValueError("one weight per real place")
    tau = (-1) ** degree * Fraction(zeta_minus_one) * Fraction(2) ** (1 - degree)
    return tau * index * math.prod(k - 1 for k in weights)


def _chi_minus_four(p: int) -> int:
    return 0 if p == 2 else (1 if p % 4 == 1 else -1)


def _chi_minus_three(p: int) -> int:
    return 0 if p == 3 else (1 if p % 3 == 1 else -1)


@dataclass(frozen=True)
class CurveInvariants:
    index: int
    nu2: int
    nu3: int
    cusps: int

    @property
    def genus(self) -> Fraction:
        return 1 + Fraction(self.index, 12) - Fraction(self.nu2, 4) - Fraction(self.nu3, 3) - Fraction(self.cusps, 2)


def curve_invariants(N: int) -> CurveInvariants:
    fac = factorint(N)
    nu2 = 0 if N % 4 == 0 else math.prod(1 + _chi_minus_four(p) for p in fac)
    nu3 = 0 if N % 9 == 0 else math.prod(1 + _chi_minus_three(p) for p in fac)
    cusps = sum(euler_phi(math.gcd(d, N // d)) for d in divisors(N))
    return CurveInvariants(sl2_index(N), nu2, nu3, cusps)


def classical_dim_oracle(ld: LevelData) -> int:
    """dim S_k(Gamma0(N)) from genus, elliptic points and cusps."""
    inv = curve_invariants(ld.N)
    g = inv.genus
    assert g.denominator == 1
    k = ld.k
    if k == 2:
        return int(g)
    return int((k - 1) * (g - 1) + (k // 2 - 1) * inv.cusps + inv.nu2 * (k // 4) + inv.nu3 * (k // 3))


def _mobius_squared(n: int) -> int:
    """The Dirichlet square of mu, the inverse of the divisor-count function."""
    return sum(int(mobius(d)) * int(mobius(n // d)) for d in divisors(n))


def new_dimension(N: int, k: int) -> int:
    return sum(_mobius_squared(N // d) * classical_dim_oracle(LevelData(d, k)) for d in divisors(N))


@dataclass(frozen=True)
class AtkinLehnerReport:
    N: int
    k: int
    new_dims: dict
    total: int
    oracle: int

    @property
    def consistent(self) -> bool:
        return self.total == self.oracle and all(v >= 0 for v in self.new_dims.values())


def atkin_lehner_consistency(N: int, k: int) -> AtkinLehnerReport:
    """Rebuild dim S_k(Gamma0(N)) from new dimensions with multiplicities d(N/M)."""
    new = {d: new_dimension(d, k) for d in divisors(N)}
    total = sum(new[d] * len(divisors(N // d)) for d in new)
    return AtkinLehnerReport(N, k, new, total, classical_dim_oracle(LevelData(N, k)))


@dataclass(frozen=True)
class DimensionRow:
    N: int
    k: int
    main_term: Fraction
    oracle: int

    @property
    def abs_err(self) -> Fraction:
        return abs(self.oracle - self.main_term)

    @property
    def err_over_sqrt_n(self) -> float:
        return float(self.abs_err) / math.sqrt(self.N)


def dimension_rows(k: int, n_max: int, n_min: int = 1) -> list[DimensionRow]:
    rows = []
    for N in range(n_min, n_max + 1):
        ld = LevelData(N, k)
        rows.append(DimensionRow(N, k, dim_main_term(ld), classical_dim_oracle(ld)))
    return rows


@dataclass(frozen=True)
class FejerValue:
    value: CyclotomicNumber

    @property
    def rational(self) -> Optional[Fraction]:
        return self.value.rational_value()

    @property
    def magnitude(self) -> float:
        return abs(self.value.to_complex())


def fejer_hat(M: int, mode: str, z: Optional[RootOfUnity] = None) -> FejerValue:
    """Fejer-kernel transform: 0 on ramified twists, (1/M^2) sum (M - |i|) z^i otherwise."""
    if M < 1:
        raise ValueError("M must be positive")
    if mode == "ramified":
        return FejerValue(CyclotomicNumber.zero(1))
    if mode != "unramified" or z is None:
        raise ValueError("unramified mode needs a root of unity z")
    n = z.order
    step = int(z.exponent * n)
    total = CyclotomicNumber.zero(n)
    weights = [Fraction(0)] * n
    for i in range(1 - M, M):
        weights[(i * step) % n] += M - abs(i)
    for j, w in enumerate(weights):
        if w:
            total = total + CyclotomicNumber.zeta_power(n, j).scale(w)
    return FejerValue(total.scale(Fraction(1, M * M)))
