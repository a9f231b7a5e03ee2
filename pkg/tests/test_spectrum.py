import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gl2spec.padic_core import all_characters, base_units, char_conductor, galois_conjugate
from gl2spec.padic_core.unit_groups import base_character, extension_units
from gl2spec.spectrum import (
    CentralCharacter,
    Circle,
    DiscretePoints,
    EmptySliceError,
    UnsupportedConductorError,
    enumerate_orbits,
    enumerate_slices,
    make_orbit,
    mass_by_conductor,
    mass_identity_check,
    orbit_conductor,
    slice_mass,
    supercuspidal_alpha,
)


def _slow_masses(p, chi, M):
    """Mass per conductor from orbits built one at a time out of explicit characters."""
    level = max(2, M)
    base = list(all_characters(base_units(p, level).presentation))
    orbits = [make_orbit("type1", [c]) for c in base]
    orbits += [make_orbit("steinberg", [c]) for c in base]
    orbits += [make_orbit("type2", pair) for pair in itertools.combinations(base, 2)]
    for label, ext_level in (("unramified", M // 2), ("ramified-p", M - 1), ("ramified-np", M - 1)):
        if ext_level < 1:
            continue
        seen = set()
        for eta in all_characters(extension_units(p, label, ext_level).presentation):
            if galois_conjugate(eta) == eta or eta in seen:
                continue
            seen.update({eta, galois_conjugate(eta)})
            orbits.append(make_orbit("supercuspidal", [eta], label))
    totals = {}
    for o in orbits:
        if o.conductor > M:
            continue
        try:
            s = slice_mass(o, chi)
        except EmptySliceError:
            continue
        totals[o.conductor] = totals.get(o.conductor, Fraction(0)) + s.total_mass
    return totals


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("M", [1, 2, 3])
@pytest.mark.parametrize("k,omega", [(0, Fraction(0)), (0, Fraction(1, 2)), (1, Fraction(0))])
def test_vectorised_masses_match_orbit_by_orbit(p, M, k, omega):
    chi = CentralCharacter.from_exponent(p, 1, k, omega)
    assert mass_by_conductor(p, chi, M) == {c: m for c, m in _slow_masses(p, chi, M).items() if m}


def test_slices_conductor_at_most_one():
    p = 3
    slices = enumerate_slices(p, CentralCharacter.trivial(p), 1)
    kinds = sorted(s.orbit.kind for s in slices)
    # a conductor-1 type2 pair {1, chi} has central restriction chi != 1
    assert kinds == ["steinberg", "type1"]
    masses = {s.orbit.kind: s.total_mass for s in slices}
    assert masses["type1"] == 1
    assert masses["steinberg"] == 2  # two points of mass (q-1)/2


def test_conductor_zero_has_only_the_unramified_circle():
    slices = enumerate_slices(5, CentralCharacter.trivial(5), 0)
    assert [s.orbit.kind for s in slices] == ["type1"]
    assert isinstance(slices[0].shape, Circle)


def test_type2_mass_example():
    p = 5
    chi0 = base_character(p, 1, 1)
    o = make_orbit("type2", [chi0, chi0.inverse()])
    assert o.conductor == 2
    assert slice_mass(o, CentralCharacter.trivial(p)).total_mass == 6


@pytest.mark.parametrize("p", [3, 5, 7])
def test_steinberg_has_two_points(p):
    for omega in (Fraction(0), Fraction(1, 2), Fraction(1, 3)):
        chi = CentralCharacter.from_exponent(p, 1, 0, omega)
        for s in enumerate_slices(p, chi, 2):
            if s.orbit.kind == "steinberg":
                assert isinstance(s.shape, DiscretePoints) and s.shape.count == 2


@pytest.mark.parametrize("p", [3, 5, 7])
def test_enumerated_conductors_recompute(p):
    chi = CentralCharacter.trivial(p)
    for s in enumerate_slices(p, chi, 3):
        o = s.orbit
        assert orbit_conductor(o) == o.conductor
        rebuilt = make_orbit(o.kind, o.characters, o.extension)
        assert rebuilt.conductor == o.conductor


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_depth_zero_supercuspidal_mass(p):
    slices = enumerate_slices(p, CentralCharacter.trivial(p), 2)
    sc = sum((s.total_mass for s in slices if s.orbit.kind == "supercuspidal"), Fraction(0))
    assert sc == Fraction((p - 1) ** 2, 2)


@pytest.mark.parametrize("p", [3, 5])
def test_orbits_listed_once(p):
    slices = enumerate_slices(p, CentralCharacter.trivial(p), 3)
    keys = [(s.orbit.kind, s.orbit.extension, s.orbit.characters) for s in slices]
    assert len(keys) == len(set(keys))


def test_alpha_examples():
    p = 5
    grp = extension_units(p, "unramified", 1)
    eta = next(e for e in all_characters(grp.presentation) if galois_conjugate(e) != e)
    assert supercuspidal_alpha(eta) == 1
    # a ramified character of conductor 1 has no twist below level 2
    ram1 = extension_units(p, "ramified-p", 1)
    assert all(galois_conjugate(e) == e for e in all_characters(ram1.presentation))
    ram2 = extension_units(p, "ramified-p", 2)
    eta2 = next(e for e in all_characters(ram2.presentation) if galois_conjugate(e) != e)
    assert char_conductor(eta2) == 2
    assert supercuspidal_alpha(eta2) == 2


def test_alpha_rejects_invariant_data():
    grp = extension_units(3, "unramified", 1)
    inv = next(e for e in all_characters(grp.presentation) if galois_conjugate(e) == e)
    with pytest.raises(ValueError):
        supercuspidal_alpha(inv)


def test_slice_with_wrong_central_character_is_empty():
    p = 5
    o = make_orbit("type1", [base_character(p, 1, 0)])
    with pytest.raises(EmptySliceError):
        slice_mass(o, CentralCharacter.from_exponent(p, 1, 1))


def test_make_orbit_validation():
    c = base_character(5, 1, 1)
    with pytest.raises(ValueError):
        make_orbit("type2", [c, c])
    with pytest.raises(ValueError):
        make_orbit("principal", [c])


def test_conductor_cap():
    with pytest.raises(UnsupportedConductorError):
        mass_identity_check(3, 5, CentralCharacter.trivial(3))
    with pytest.raises(ValueError):
        mass_identity_check(3, 1, CentralCharacter.from_exponent(3, 2, 1))


@given(
    p=st.sampled_from([3, 5, 7]),
    r=st.integers(0, 4),
    k=st.integers(0, 41),
    omega=st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(2, 5)]),
)
def test_mass_identity_property(p, r, k, omega):
    level = max(1, min(r, 2))
    chi = CentralCharacter.from_exponent(p, level, k, omega)
    if chi.conductor > r:
        return
    result = mass_identity_check(p, r, chi)
    assert result.equal, (result.lhs, result.rhs)


def test_enumerate_orbits_counts_conductor_one():
    p = 7
    orbits = list(enumerate_orbits(p, [1]))
    # steinberg at trivial chi0, and type2 pairs {trivial, tamely ramified}
    assert sum(o.kind == "steinberg" for o in orbits) == 1
    assert sum(o.kind == "type2" for o in orbits) == p - 2
