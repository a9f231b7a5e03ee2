import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gl2spec.global_counts import (
    LevelData,
    atkin_lehner_consistency,
    classical_dim_oracle,
    curve_invariants,
    dim_main_term,
    dimension_rows,
    fejer_hat,
    gamma0_index,
    new_dimension,
    newform_trace,
    oldvector_trace,
    projective_line_size,
    sl2_index,
    totally_real_main_term,
)
from gl2spec.padic_core import RootOfUnity

# genus of X0(p) for small primes, from published tables
PRIME_GENUS = {2: 0, 3: 0, 5: 0, 7: 0, 11: 1, 13: 0, 17: 1, 19: 1, 23: 2, 29: 2, 31: 2, 37: 2,
               41: 3, 43: 3, 47: 4, 53: 4, 59: 5, 61: 4, 67: 5, 71: 6, 73: 5, 79: 6, 83: 7, 89: 7, 97: 7}


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_gamma0_index_counts_the_projective_line(p, r):
    if p**r > 125:
        return
    assert gamma0_index(p, r) == projective_line_size(p, r)


@pytest.mark.parametrize("f_ord", range(5))
def test_newform_trace_is_the_exact_conductor_indicator(f_ord):
    for r in range(f_ord, 5):
        for c in range(f_ord, 7):
            assert newform_trace(c, r, f_ord) == int(c == r)


def test_oldvector_trace_and_guards():
    assert [oldvector_trace(c, 3) for c in range(5)] == [4, 3, 2, 1, 0]
    with pytest.raises(ValueError):
        newform_trace(1, 1, 2)


@pytest.mark.parametrize("N,g", PRIME_GENUS.items())
def test_weight_two_dimension_is_the_genus(N, g):
    assert classical_dim_oracle(LevelData(N, 2)) == g


def _level_one(k):
    return max(0, k // 12 - 1) if k % 12 == 2 else k // 12


@pytest.mark.parametrize("k", range(2, 40, 2))
def test_level_one_dimensions(k):
    assert classical_dim_oracle(LevelData(1, k)) == _level_one(k)


def test_dimension_examples():
    assert classical_dim_oracle(LevelData(2, 8)) == 1
    assert classical_dim_oracle(LevelData(3, 6)) == 1
    assert classical_dim_oracle(LevelData(11, 4)) == 2
    assert new_dimension(22, 2) == 0
    assert new_dimension(33, 2) == 1
    assert new_dimension(37, 2) == 2


def test_curve_invariants_examples():
    inv = curve_invariants(13)
    assert (inv.index, inv.nu2, inv.nu3, inv.cusps) == (14, 2, 2, 2)
    assert curve_invariants(36).nu2 == 0 and curve_invariants(36).nu3 == 0


@given(st.integers(1, 400))
def test_sl2_index_is_multiplicative_over_prime_powers(N):
    from sympy import factorint

    prod = 1
    for p, e in factorint(N).items():
        prod *= gamma0_index(p, e)
    assert sl2_index(N) == prod


@pytest.mark.parametrize("k", [2, 4, 6, 12])
def test_atkin_lehner_rebuild(k):
    for N in range(1, 120):
        report = atkin_lehner_consistency(N, k)
        assert report.consistent, (N, k, report)


def test_main_term_examples():
    assert dim_main_term(LevelData(1, 12)) == Fraction(11, 12)
    assert dim_main_term(LevelData(11, 2)) == 1
    assert dim_main_term(LevelData(2, 4)) == Fraction(3, 4)
    assert totally_real_main_term(Fraction(-1, 12), 1, sl2_index(11), (2,)) == dim_main_term(LevelData(11, 2))
    with pytest.raises(ValueError):
        totally_real_main_term(Fraction(1, 60), 2, 1, (2,))


def test_level_data_guards():
    with pytest.raises(ValueError):
        LevelData(0, 2)
    with pytest.raises(ValueError):
        LevelData(5, 3)


def test_dimension_rows_error_grows_slowly():
    rows = dimension_rows(12, 150)
    assert max(r.err_over_sqrt_n for r in rows) <= 2
    assert rows[0].abs_err == Fraction(1, 12)


def _fejer_direct(M, t):
    return sum((M - abs(i)) * cmath.exp(2j * cmath.pi * t * i) for i in range(1 - M, M)) / M**2


@given(st.integers(1, 30), st.fractions(min_value=0, max_value=1, max_denominator=12))
def test_fejer_matches_direct_sum(M, t):
    got = fejer_hat(M, "unramified", RootOfUnity(t)).value.to_complex()
    assert abs(got - _fejer_direct(M, float(t))) < 1e-9


def test_fejer_exact_values():
    assert fejer_hat(5, "ramified").rational == 0
    assert fejer_hat(7, "unramified", RootOfUnity(Fraction(0))).rational == 1
    for M in (3, 4, 6):
        for j in range(1, M):
            assert fejer_hat(M, "unramified", RootOfUnity(Fraction(j, M))).rational == 0
    assert fejer_hat(8, "unramified", RootOfUnity(Fraction(1, 3))).rational == Fraction(1, 64)
    with pytest.raises(ValueError):
        fejer_hat(0, "ramified")
    with pytest.raises(ValueError):
        fejer_hat(4, "unramified")
