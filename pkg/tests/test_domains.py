from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eisenzero.domains import (
    RELATIONS,
    TO_F0,
    TO_FHALF,
    MoebiusMap,
    Region,
    S,
    T,
    UncertifiedTruncation,
    circle_deviation,
    classify_region,
    map_from_F0,
    map_from_Fhalf,
    map_to_F0,
    map_to_Fhalf,
    region_predicates,
    relation_residual,
)
from eisenzero.series import TruncationPolicy


@pytest.mark.parametrize(
    "z, region",
    [
        (1j, Region.Y),
        (0.4 + 2j, Region.Y),
        (0.3j, Region.P),
        (-0.4 + 0.6j, Region.O),
        (0.4 + 0.6j, Region.G),
        (0.33 + 0.2j, Region.B),
        (0.45 + 0.2j, Region.N),
        (0.1 + 0.01j, None),
        (0.7 + 0.5j, None),
    ],
)
def test_classify_region(z, region):
    assert classify_region(z) == region


@given(st.floats(-0.5, 0.5), st.floats(1e-3, 3))
@settings(max_examples=300)
def test_regions_never_overlap(x, y):
    assert len(region_predicates(complex(x, y))) <= 1


def test_moebius_algebra():
    assert S @ S == MoebiusMap(-1, 0, 0, -1)
    assert (T @ T.inverse()).det == 1
    m = MoebiusMap(2, 1, 1, 1)
    z = 0.3 + 0.7j
    assert abs(m.inverse()(m(z)) - z) < 1e-14
    with pytest.raises(ValueError):
        MoebiusMap(1, 2, 2, 4)


def test_domain_maps_are_exact_rationals():
    assert TO_F0 == MoebiusMap(0, -1, 4, 0)
    assert TO_FHALF == MoebiusMap(0, Fraction(1, 2), -2, 1)
    assert TO_FHALF.pole() == 0.5


def test_map_examples():
    assert abs(map_to_Fhalf(1j) - (0.1 + 0.2j)) < 1e-15
    assert abs(map_to_F0(1j) - 0.25j) < 1e-15
    assert abs(map_from_F0(-0.5 + 0.5j) - (0.25 + 0.25j)) < 1e-15
    with pytest.raises(ValueError):
        map_to_Fhalf(0.5)
    with pytest.raises(ValueError):
        map_to_F0(0)


@given(st.floats(-2, 2), st.floats(0.05, 5))
def test_maps_round_trip(x, y):
    z = complex(x, y)
    assert abs(map_from_F0(map_to_F0(z)) - z) < 1e-9 * max(1, abs(z)) ** 2
    if abs(z - 0.5) > 1e-3:
        assert abs(map_from_Fhalf(map_to_Fhalf(z)) - z) < 1e-9 * max(1, abs(z)) ** 2


@given(st.floats(0.5, 50))
def test_both_lines_map_to_the_circle(y):
    assert circle_deviation(map_from_F0(complex(-0.5, y))) < 1e-12
    assert circle_deviation(map_from_Fhalf(complex(0.5, y))) < 1e-12


@given(st.floats(0.5, 50))
def test_lines_map_to_opposite_halves_of_the_circle(y):
    assert map_from_F0(complex(-0.5, y)).real <= 0.25 + 1e-12
    assert map_from_Fhalf(complex(0.5, y)).real >= 0.25 - 1e-12


@pytest.mark.parametrize("which", RELATIONS)
@pytest.mark.parametrize("k", [15, 101])
def test_relations_hold(which, k):
    z = 0.5 * complex(-0.2, 0.95) if which == "e0_inversion" else complex(-0.45, 0.5)
    assert relation_residual(which, z, k) < 1e-10


def test_relation_rejects_unknown_name():
    with pytest.raises(ValueError):
        relation_residual("bogus", 1j, 15)


def test_relation_refuses_uncertified_evaluation():
    with pytest.raises(UncertifiedTruncation):
        relation_residual("ehalf_translation", complex(-0.5, 0.4), 15, TruncationPolicy(lattice_u_max=1, lattice_v_max=2))
