"""Row producers for each CLI command.  Every function is pure and picklable."""
from __future__ import annotations

import math
from fractions import Fraction

from ..bt_tree import (
    RationalMatrix,
    TreeContext,
    central_constant_term,
    central_constant_term_by_tree,
    central_constant_term_shell_sum,
    constant_term_diagonal,
    diagonal_orbital_integral_by_tree,
)
from ..global_counts import dimension_rows, fejer_hat
from ..padic_core import RootOfUnity, euler_phi
from ..rationality import largest_n_with_small_phi, small_rationality_mass_ratio, weil_q_integers
from ..spectrum import CentralCharacter, enumerate_slices, mass_identity_check, slice_rows


def parse_chi(spec: str, p: int) -> list[CentralCharacter]:
    """'trivial', 'all' (every restriction of conductor <= 2), or LEVEL:K[:OMEGA]."""
    if spec == "trivial":
        return [CentralCharacter.trivial(p)]
    if spec == "all":
        return [CentralCharacter.from_exponent(p, 2, k) for k in range(euler_phi(p * p))]
    parts = spec.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"bad character spec {spec!r}")
    level, k = int(parts[0]), int(parts[1])
    omega = Fraction(parts[2]) if len(parts) == 3 else Fraction(0)
    if level < 1:
        raise ValueError("character level must be >= 1")
    return [CentralCharacter.from_exponent(p, level, k, omega)]


def _chi_label(chi: CentralCharacter) -> str:
    e = chi.restriction.exponents[0]
    return f"{chi.restriction.level}:{e.numerator}/{e.denominator}"


def _frac(prefix: str, x: Fraction) -> dict:
    x = Fraction(x)
    return {f"{prefix}_num": x.numerator, f"{prefix}_den": x.denominator}


def orbit_rows(p: int, chi_spec: str, max_conductor: int) -> list[dict]:
    rows = []
    for chi in parse_chi(chi_spec, p):
        for row in slice_rows(enumerate_slices(p, chi, max_conductor)):
            row["chi"] = _chi_label(chi)
            row["omega"] = str(chi.uniformizer_value.exponent)
            row["pass"] = row["mass_num"] > 0
            rows.append(row)
    return rows


def mass_rows(p: int, chi_spec: str, r_lo: int, r_hi: int) -> list[dict]:
    rows = []
    for chi in parse_chi(chi_spec, p):
        for r in range(max(r_lo, chi.conductor), r_hi + 1):
            res = mass_identity_check(p, r, chi)
            rows.append(
                {
                    "p": p,
                    "chi": _chi_label(chi),
                    "omega": str(chi.uniformizer_value.exponent),
                    "r": r,
                    **_frac("lhs", res.lhs),
                    **_frac("rhs", res.rhs),
                    "pass": res.equal,
                }
            )
    return rows


def tree_rows(p: int, r_lo: int, r_hi: int) -> list[dict]:
    rows = []
    for r in range(r_lo, r_hi + 1):
        closed = central_constant_term(p, r)
        bound_sq = Fraction(1, p**r)
        for method, value in (
            ("closed-form", closed),
            ("shell-sum", central_constant_term_shell_sum(p, r)),
            ("tree-walk", central_constant_term_by_tree(p, r)),
        ):
            rows.append(
                {
                    "p": p,
                    "r": r,
                    "gamma_entries": "1,0,0,1",
                    "method": method,
                    **_frac("value", value),
                    **_frac("bound_sq", bound_sq),
                    "pass": value == closed and value * value <= bound_sq,
                }
            )
    if p <= 5:
        for v in range(0, 3):
            t2 = 2 if v == 0 else 1 + 2 * p**v
            t = RationalMatrix.diag(1, t2)
            for r in range(r_lo, min(r_hi, 2) + 1):
                term = constant_term_diagonal(t, r, TreeContext(p, v + r + 1))
                tree = diagonal_orbital_integral_by_tree(p, 1, t2, r)
                rows.append(
                    {
                        "p": p,
                        "r": r,
                        "gamma_entries": f"1,0,0,{t2}",
                        "method": "coset-vs-tree",
                        **_frac("value", p**v * term.value),
                        **_frac("bound_sq", term.bound**2),
                        "pass": p**v * term.value == tree and term.within_bound,
                    }
                )
    return rows


def ratio_rows(primes: list[int], A: int) -> list[dict]:
    rows, previous = [], None
    f = largest_n_with_small_phi(A)
    for p in sorted(primes):
        res = small_rationality_mass_ratio(p, A)
        ratio = res.ratio
        increasing = previous is None or ratio > previous
        rows.append(
            {
                "p": p,
                "A": A,
                **_frac("ratio", ratio),
                "f_A": f,
                "increasing": increasing,
                "pass": 0 < ratio <= 1 and increasing,
            }
        )
        previous = ratio
    return rows


def weil_rows(q: int, weight: int, max_degree: int) -> list[dict]:
    found = weil_q_integers(q, weight, max_degree)
    again = weil_q_integers(q, weight, max_degree, margin=1)
    complete = set(found) == set(again)
    rows = []
    for w in found:
        err = w.max_modulus_error()
        rows.append(
            {
                "q": q,
                "weight": weight,
                "degree": w.degree,
                "coefficients": " ".join(map(str, w.min_poly)),
                "modulus_error_float": f"{err:.3e}",
                "pass": err < 1e-9 and complete,
            }
        )
    return rows


def dim_rows(k: int, n_max: int) -> list[dict]:
    rows = []
    for row in dimension_rows(k, n_max):
        rows.append(
            {
                "N": row.N,
                "k": k,
                **_frac("main_term", row.main_term),
                "oracle_dim": row.oracle,
                **_frac("abs_err", row.abs_err),
                "err_over_sqrtN_float": f"{row.err_over_sqrt_n:.6f}",
                "pass": row.err_over_sqrt_n <= 2,
            }
        )
    return rows


def fejer_rows(Ms: list[int], zs: list[Fraction]) -> list[dict]:
    rows = []
    for M in Ms:
        ram = fejer_hat(M, "ramified")
        rows.append({"M": M, "mode": "ramified", "z": "-", "exact": "0", "magnitude_float": "0", "pass": ram.rational == 0})
        for z in zs:
            val = fejer_hat(M, "unramified", RootOfUnity(z))
            exact = val.rational
            if z == 0:
                ok = exact == 1
            elif (z * M).denominator == 1:
                ok = exact == 0
            else:
                ok = val.magnitude <= 1 + 1e-12
            rows.append(
                {
                    "M": M,
                    "mode": "unramified",
                    "z": str(z),
                    "exact": "irrational" if exact is None else str(exact),
                    "magnitude_float": f"{val.magnitude:.12e}",
                    "pass": ok,
                }
            )
    return rows
