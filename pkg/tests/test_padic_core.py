from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import multiplicity

from gl2spec.padic_core import (
    INF,
    ConductorBoundError,
    FiniteAbelianPresentation,
    FiniteCharacter,
    RootOfUnity,
    all_characters,
    base_units,
    char_conductor,
    char_order,
    galois_conjugate,
    ramified_units,
    unramified_units,
    vp,
)
from gl2spec.padic_core.cyclotomic import CyclotomicNumber

nonzero = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6).filter(lambda x: x != 0)


def test_vp_examples():
    assert vp(Fraction(9, 2), 3) == 2
    assert vp(1, 5) == 0
    assert vp(0, 7) is INF
    assert INF > 10**9 and not (INF < 0)


@given(nonzero, st.sampled_from([3, 5, 7, 11]))
def test_vp_against_sympy_multiplicity(x, p):
    assert vp(x, p) == multiplicity(p, x.numerator) - multiplicity(p, x.denominator)


@given(nonzero, nonzero, st.sampled_from([3, 5, 7]))
def test_vp_is_additive(x, y, p):
    assert vp(x * y, p) == vp(x, p) + vp(y, p)


def test_char_order_examples():
    cyc6 = FiniteAbelianPresentation((6,))
    assert char_order(FiniteCharacter.trivial(cyc6)) == 1
    assert char_order(FiniteCharacter(cyc6, (Fraction(1, 6),))) == 6
    grp = FiniteAbelianPresentation((2, 9))
    assert char_order(FiniteCharacter(grp, (Fraction(1, 2), Fraction(1, 3)))) == 6


def test_character_rejects_bad_exponent():
    with pytest.raises(ValueError):
        FiniteCharacter(FiniteAbelianPresentation((4,)), (Fraction(1, 3),))


def _conductor_by_elements(chi, group):
    """Smallest c with chi trivial on every unit congruent to 1 mod P^c, by evaluating on elements."""
    p = group.p
    for c in range(group.level + 1):
        ok = True
        for x in group.elements():
            if group.kind == "ramified":
                in_uc = _ramified_depth(x, group) >= c
            else:
                in_uc = all(v % p**c == 0 for v in ((x[0] - 1), x[1])) if c else True
            if in_uc and not chi(group.log(x)).is_one():
                ok = False
                break
        if ok:
            return c
    raise AssertionError


def _ramified_depth(x, group):
    """Largest c with x = 1 mod varpi^c: a - 1 counts at even depths, b at odd ones."""
    p, depth = group.p, 0
    a, b = x[0] - 1, x[1]
    while depth < group.level:
        nxt = depth + 1
        need_a, need_b = (nxt + 1) // 2, nxt // 2
        if a % p**need_a or b % p**need_b:
            break
        depth = nxt
    return depth


def test_conductor_examples():
    pres = base_units(7, 1).presentation
    assert char_conductor(FiniteCharacter.trivial(pres)) == 0
    assert char_conductor(FiniteCharacter.from_ints(pres, (1,))) == 1
    pres2 = base_units(7, 2).presentation
    order7 = FiniteCharacter.from_ints(pres2, (6,))  # generator order 42, exponent 6/42 = 1/7
    assert char_order(order7) == 7
    assert char_conductor(order7) == 2


@pytest.mark.parametrize(
    "group",
    [base_units(3, 2), base_units(5, 2), base_units(3, 3), unramified_units(3, 2), ramified_units(3, 3), ramified_units(5, 2, True)],
    ids=lambda g: f"{g.label}-{g.level}",
)
def test_conductor_matches_element_evaluation(group):
    for chi in all_characters(group.presentation):
        assert char_conductor(chi) == _conductor_by_elements(chi, group)


def test_conductor_error_carries_lower_bound():
    pres = base_units(5, 2).presentation
    shallow = FiniteAbelianPresentation(pres.generator_orders, p=5, kind="base", level=2, filtration=pres.filtration[:1])
    chi = FiniteCharacter.from_ints(shallow, (1,))
    with pytest.raises(ConductorBoundError) as err:
        char_conductor(chi)
    assert err.value.lower_bound == 1


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("m", [1, 2])
def test_character_count(p, m):
    assert sum(1 for _ in all_characters(base_units(p, m).presentation)) == p ** (m - 1) * (p - 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_conductor_of_product(p):
    chars = list(all_characters(base_units(p, 2).presentation))
    for a in chars:
        for b in chars[:: max(1, len(chars) // 8)]:
            assert char_conductor(a * b) <= max(char_conductor(a), char_conductor(b))


@pytest.mark.parametrize("group", [unramified_units(3, 2), unramified_units(5, 1), ramified_units(5, 2), ramified_units(3, 2, True)], ids=lambda g: g.label)
def test_galois_conjugate_by_elements_and_involution(group):
    for eta in all_characters(group.presentation):
        conj = galois_conjugate(eta)
        assert galois_conjugate(conj) == eta
        for x in list(group.elements())[:40]:
            assert conj(group.log(x)) == eta(group.log(group.conj(x)))


def test_galois_conjugate_on_norm_one_quotient():
    p = 5
    grp = unramified_units(p, 1)
    pres = grp.presentation
    # characters of F_25^x trivial on F_5^x factor through the order-6 quotient
    g = grp.log((2, 0))  # 2 generates F_5^x
    for eta in all_characters(pres):
        if eta(g).is_one():
            assert galois_conjugate(eta) == eta.inverse()


def test_galois_conjugate_fixes_lifts_and_rejects_base():
    grp = unramified_units(7, 1)
    eta = FiniteCharacter.from_ints(grp.presentation, (7 + 1,))  # exponent (q+1)/(q^2-1): a lift from F_7^x
    assert galois_conjugate(eta) == eta
    with pytest.raises(ValueError):
        galois_conjugate(FiniteCharacter.trivial(base_units(7, 1).presentation))


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_group_tables_are_bijective(p):
    for grp in (base_units(p, 3), unramified_units(p, 2), ramified_units(p, 3), ramified_units(p, 3, True)):
        elems = list(grp.elements())
        assert len(elems) == grp.order == len(set(elems))
        assert all(grp.is_unit(x) for x in elems)


def test_norm_is_multiplicative():
    grp = ramified_units(5, 3)
    elems = list(grp.elements())[:30]
    mod = 5**grp.base_level
    for x in elems:
        for y in elems[:10]:
            assert grp.norm_to_base(grp.mul(x, y)) == grp.norm_to_base(x) * grp.norm_to_base(y) % mod


@given(st.fractions(), st.fractions())
def test_root_of_unity_arithmetic(a, b):
    x, y = RootOfUnity(a), RootOfUnity(b)
    assert 0 <= x.exponent < 1
    assert (x * y).exponent == (Fraction(a) + Fraction(b)) % 1
    assert (x * x.inverse()).is_one()


def test_cyclotomic_reduction():
    i = CyclotomicNumber.zeta_power(4, 1)
    assert (i + CyclotomicNumber.zeta_power(4, 3)).is_zero()
    w = CyclotomicNumber.zeta_power(3, 1)
    total = w + CyclotomicNumber.zeta_power(3, 2) + CyclotomicNumber.zeta_power(3, 0)
    assert total.is_zero()
    assert abs(w.to_complex() - complex(-0.5, 3**0.5 / 2)) < 1e-12
