import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from gl2spec.padic_core import euler_phi
from gl2spec.padic_core.unit_groups import base_character
from gl2spec.rationality import (
    AlgebraicTrace,
    conductor_rationality_gate,
    cyclotomic_degree,
    is_irreducible_small,
    largest_n_with_small_phi,
    oldform_bound_check,
    orbit_rationality_bound,
    small_rationality_mass_ratio,
    unramified_small_rationality_points,
    weil_q_integers,
)
from gl2spec.spectrum import make_orbit

x = sympy.symbols("x")


def test_cyclotomic_degree_examples():
    assert [cyclotomic_degree(n) for n in (1, 2, 3, 4, 5, 7, 12)] == [1, 1, 2, 2, 4, 6, 4]


def test_steinberg_bound_uses_full_degree():
    chi0 = base_character(29, 1, 4)  # order 7
    assert orbit_rationality_bound(make_orbit("steinberg", [chi0])).lower_bound == 6


@pytest.mark.parametrize("p", [5, 7, 11])
def test_type2_bound_halves_degree(p):
    chi0 = base_character(p, 2, p - 1)  # order p, conductor 2
    o = make_orbit("type2", [chi0, chi0.inverse()])
    assert orbit_rationality_bound(o).lower_bound == (p - 1) // 2


def test_gate_examples_and_guard():
    assert conductor_rationality_gate(7, 2)
    assert conductor_rationality_gate(11, 4)
    with pytest.raises(ValueError):
        conductor_rationality_gate(5, 2)
    with pytest.raises(ValueError):
        conductor_rationality_gate(7, 1, conductors=(2,))


def _weil_oracle(q, w, d):
    """Every monic irreducible integer polynomial of degree d with roots of modulus q^(w/2), by brute force."""
    bounds = [math.floor(math.comb(d, j) * q ** (j * w / 2)) for j in range(1, d + 1)]
    out = set()
    for tail in itertools.product(*(range(-b, b + 1) for b in bounds)):
        if abs(tail[-1]) != q ** (d * w // 2) or d * w % 2:
            continue
        coeffs = (1, *tail)
        roots = np.roots(np.array(coeffs, dtype=float))
        if np.max(np.abs(np.abs(roots) ** 2 - q**w)) > 1e-6:
            continue
        if sympy.Poly(list(coeffs), x).is_irreducible:
            out.add(coeffs)
    return out


@pytest.mark.parametrize("q,w,dmax", [(3, 1, 2), (3, 1, 4), (2, 1, 4), (5, 1, 2), (3, 2, 2)])
def test_weil_search_matches_brute_force(q, w, dmax):
    found = {u.min_poly for u in weil_q_integers(q, w, dmax)}
    oracle = set().union(*(_weil_oracle(q, w, d) for d in range(1, dmax + 1)))
    assert found == oracle


def test_weil_small_case_count():
    found = weil_q_integers(3, 1, 2)
    assert len(found) == 8
    polys = {u.min_poly for u in found}
    assert (1, 0, -3) in polys
    assert {(1, c, 3) for c in range(-3, 4)} <= polys
    assert all(u.max_modulus_error() < 1e-9 for u in found)


def test_weil_margin_is_stable():
    assert weil_q_integers(3, 1, 4) == weil_q_integers(3, 1, 4, margin=1)


def test_weil_argument_checks():
    with pytest.raises(ValueError):
        weil_q_integers(3, 1, 5)
    with pytest.raises(ValueError):
        weil_q_integers(3, 0, 2)


@given(st.lists(st.integers(-12, 12), min_size=1, max_size=4))
def test_irreducibility_against_sympy(tail):
    coeffs = [1, *tail]
    assert is_irreducible_small(coeffs) == sympy.Poly(coeffs, x).is_irreducible


def _integer_traces(q, w):
    qw = q**w
    out = {a for a in range(-2 * qw, 2 * qw + 1) if a * a < 4 * qw}
    root = math.isqrt(qw)
    if root * root == qw:
        out |= {2 * root, -2 * root}
    return out


@pytest.mark.parametrize("q,w", [(3, 1), (3, 2), (5, 1), (7, 1)])
def test_rational_traces(q, w):
    pts = unramified_small_rationality_points(q, w, 1)
    assert {t.value for t in pts} == _integer_traces(q, w)


@pytest.mark.parametrize("q,w,A", [(3, 1, 1), (3, 1, 2), (5, 1, 1)])
def test_trace_set_is_closed_under_negation(q, w, A):
    pts = unramified_small_rationality_points(q, w, A)
    assert {t.negated() for t in pts} == pts
    bound = 2 * math.sqrt(q**w) + 1e-9
    for t in pts:
        assert all(abs(r) <= bound for r in t.real_roots())


def test_negated_minimal_polynomial():
    t = AlgebraicTrace((1, -2, -1))  # 1 +- sqrt 2
    assert t.negated() == AlgebraicTrace((1, 2, -1))
    assert AlgebraicTrace((1, -3)).negated().value == -3
    with pytest.raises(ValueError):
        t.value


def test_largest_n_with_small_phi():
    assert largest_n_with_small_phi(1) == 6
    for A in (1, 2, 3, 5):
        n = largest_n_with_small_phi(A)
        assert euler_phi(n) <= 2 * A
        assert all(euler_phi(m) > 2 * A for m in range(n + 1, 8 * A * A + 100))


def _high_mass_oracle(p, A):
    """Closed count at trivial central character: tame type2 pairs and depth-zero unramified supercuspidals."""
    q = p
    def share(n):
        return sum(euler_phi(d) for d in sympy.divisors(n) if -(-euler_phi(d) // 2) > A) // 2
    return (q + 1) * share(p - 1) + (q - 1) * share(p + 1)


@pytest.mark.parametrize("p,A", [(5, 1), (7, 1), (11, 1), (13, 1), (7, 2), (11, 2), (13, 3)])
def test_mass_ratio_against_closed_count(p, A):
    r = small_rationality_mass_ratio(p, A)
    assert r.total == p * (p + 1)
    assert r.high_mass == _high_mass_oracle(p, A)


def test_mass_ratio_values():
    ratios = [small_rationality_mass_ratio(p, 1).ratio for p in (5, 7, 13, 17, 19, 23)]
    assert ratios == [0, Fraction(3, 14), Fraction(50, 91), Fraction(2, 3), Fraction(66, 95), Fraction(52, 69)]


def test_mass_ratio_guard():
    with pytest.raises(ValueError):
        small_rationality_mass_ratio(3, 1)


@pytest.mark.parametrize("B", [3, 4, 7, 20])
@pytest.mark.parametrize("b", [0, 1, 2])
def test_oldform_bound(B, b):
    res = oldform_bound_check(B, b)
    assert res.holds
    assert res.decay(10) < res.decay(2)


def test_oldform_bound_rejects_small_B():
    with pytest.raises(ValueError):
        oldform_bound_check(2, 0)
