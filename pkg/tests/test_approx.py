import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eisenzero.approx import (
    C1,
    C2,
    PolarCoordinates,
    WindowError,
    approximant,
    m0,
    m0_direct,
    m_half,
    m_half_direct,
    measured_remainder,
    scaled_series,
    tail_bounds,
    window,
    window_edge_j1,
)
from eisenzero.zerofinder import sample_points


def test_polar_coordinates():
    p = PolarCoordinates.from_y(0.5)
    assert p.delta == pytest.approx(math.pi / 4, abs=1e-15)
    assert p.r == pytest.approx(math.sqrt(0.5), abs=1e-15)
    with pytest.raises(ValueError):
        PolarCoordinates.from_y(0)


def test_m0_k5_at_half():
    # both the closed form and the direct two-term sum give -2 cos(3 pi/8)
    assert m0(0.5, 5) == pytest.approx(-2 * math.cos(3 * math.pi / 8), abs=1e-14)
    assert m0_direct(0.5, 5).real == pytest.approx(-0.7653668647301795, abs=1e-12)


def test_m_half_k5_at_half():
    assert m_half(0.5, 5) == pytest.approx(2 * math.cos(5 * math.pi / 8), abs=1e-14)
    assert m_half(0.5, 5) == pytest.approx(-0.7653668647301795, abs=1e-14)


def test_m_half_zero_when_angle_hits_pi_over_2():
    k = 9
    theta = math.pi / k  # theta k / 2 = pi / 2
    assert abs(m_half(math.tan(theta) / 2, k)) < 1e-14


@pytest.mark.parametrize("k", [5, 7, 9, 11, 13, 15, 101, 103, 105, 107])
def test_closed_forms_match_direct(k):
    lo, hi = window(k)
    for y in np.linspace(0.5, max(hi, 1.5), 25):
        y = float(y)
        for f, g in ((m0, m0_direct), (m_half, m_half_direct)):
            d = g(y, k)
            assert abs(d - f(y, k)) < 1e-12


@pytest.mark.parametrize("k", [101, 103, 15])
def test_sample_points_are_extrema(k):
    for series in ("E0", "Ehalf"):
        for p in sample_points(k, series):
            assert abs(abs(approximant(series, p.y, k)) - 2) < 1e-12


def test_j2_example():
    b = tail_bounds(0.5, 101)
    expected = C2 * (8 / 81) ** 25.25 * 3 / (2 * math.sqrt(101))
    assert b.j2 == pytest.approx(expected, rel=1e-12)
    assert b.j2 < 1e-20
    assert b.n1 == b.j1 and b.n2 == b.j2


def test_window_rejection():
    lo, hi = window(101)
    with pytest.raises(WindowError):
        tail_bounds(0.49, 101)
    with pytest.raises(WindowError):
        tail_bounds(hi * 1.001, 101)
    tail_bounds(hi, 101)


@pytest.mark.parametrize("k", [15, 101, 107])
def test_j1_increasing_on_window(k):
    lo, hi = window(k)
    j = [tail_bounds(float(y), k).j1 for y in np.linspace(lo, hi, 40)]
    assert all(a < b for a, b in zip(j, j[1:]))


@pytest.mark.parametrize("k", [101, 103, 201, 401])
def test_window_edge_envelope(k):
    _, hi = window(k)
    assert tail_bounds(hi, k).j1 <= window_edge_j1(k)


def test_bounds_below_two_at_k101_samples():
    for series in ("E0", "Ehalf"):
        for p in sample_points(101, series):
            assert tail_bounds(p.y, 101).total(series) < 2


def test_remainder_definition_k15():
    y, k = 0.5, 15
    full = scaled_series("E0", y, k).value.real
    rem = measured_remainder("E0", y, k)
    assert rem.certified
    assert abs((full - m0(y, k)) - rem.value) < 1e-12


@given(st.floats(0.5, 3.3), st.sampled_from(["E0", "Ehalf"]))
@settings(max_examples=25, deadline=None)
def test_remainder_is_real_and_consistent(y, series):
    k = 101
    rem = measured_remainder(series, y, k)
    assert abs(rem.imag) <= 1e-9 * max(abs(rem.value), 1e-30) + 1e-25
    full = scaled_series(series, y, k).value
    assert abs(full.imag) <= 1e-9 * abs(full)
    assert abs((full.real - approximant(series, y, k)) - rem.value) < 1e-12


@pytest.mark.parametrize("series", ["E0", "Ehalf"])
def test_remainder_dominated_on_grid_k101(series):
    lo, hi = window(101)
    for y in np.linspace(lo, hi, 50):
        y = float(y)
        rem = measured_remainder(series, y, 101)
        assert abs(rem.value) + rem.tail <= tail_bounds(y, 101).total(series)


def test_scaled_series_rejects_other_series():
    with pytest.raises(ValueError):
        scaled_series("Einf", 1.0, 15)


def test_constants():
    assert (C1, C2) == (16.0, 10.0)
