"""Closed-form approximants on the lines x = -1/2 and x = 1/2, and their error bounds.

On z = -1/2 + iy the two terms of E_0 with u = 1 (v = 0 and v = 1) have equal
modulus r^(-k/2), r = |z|.  After scaling by r^(k/2) and rotating by e(k/8)
they combine into M_0 = 2 cos(delta k/2 - pi k/4), delta = arctan(2y).
Everything else in the series is the remainder J_1 + J_2, bounded here by
explicit closed forms.  E_half on z = 1/2 + iy behaves the same way with
M_half = 2 cos(theta k/2) and remainder N_1 + N_2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .series import (
    EvalResult,
    TruncationPolicy,
    _evaluate,
    _ehalf_coef,
    _e0_coef,
    as_weight,
    auto_lattice_policy,
    half_power,
)

C1 = 16.0
C2 = 10.0
LINE_SERIES = ("E0", "Ehalf")

# the two terms folded into the approximant, as (row, v) lattice indices
_LEADING = {
    "E0": frozenset({(1, 0), (1, 1)}),
    "Ehalf": frozenset({(1, 0), (1, -1)}),
}


class WindowError(ValueError):
    """y lies outside the window where the remainder bounds hold."""


class RemainderNotReal(ArithmeticError):
    """The measured remainder has a non-negligible imaginary part."""


@dataclass(frozen=True)
class PolarCoordinates:
    r: float
    delta: float

    @classmethod
    def from_y(cls, y: float) -> "PolarCoordinates":
        if y <= 0:
            raise ValueError(f"y must be positive, got {y}")
        return cls(math.sqrt(0.25 + y * y), math.atan(2 * y))


def window(k) -> tuple[float, float]:
    """[1/2, sqrt(k) / sqrt(2 log k)]."""
    k = as_weight(k).k
    return 0.5, math.sqrt(k) / math.sqrt(2 * math.log(k))


def angle_max(k) -> float:
    """Largest sample angle, arctan(sqrt(2k) / sqrt(log k))."""
    k = as_weight(k).k
    return math.atan(math.sqrt(2 * k) / math.sqrt(math.log(k)))


def _line_point(series: str, y: float) -> complex:
    if series == "E0":
        return complex(-0.5, y)
    if series == "Ehalf":
        return complex(0.5, y)
    raise ValueError(f"series must be one of {LINE_SERIES}, got {series!r}")


def _rotation(series: str, k: int) -> complex:
    # E_half already carries its e(-k/8) inside the evaluator
    return cmath.exp(1j * math.pi * k / 4) if series == "E0" else 1.0


def m0(y: float, k) -> float:
    """2 cos(delta k/2 - pi k/4): the two u = 1 terms of e(k/8) r^(k/2) E_0(-1/2 + iy)."""
    w = as_weight(k)
    d = PolarCoordinates.from_y(y).delta
    return 2 * math.cos(d * w.k / 2 - math.pi * w.k / 4)


def m_half(y: float, k) -> float:
    """2 cos(theta k/2): the two d = 1 terms of r^(k/2) E_half(1/2 + iy)."""
    w = as_weight(k)
    t = PolarCoordinates.from_y(y).delta
    return 2 * math.cos(t * w.k / 2)


def approximant(series: str, y: float, k) -> float:
    return m0(y, k) if series == "E0" else m_half(y, k)


def approximant_direct(series: str, y: float, k) -> complex:
    """The two leading lattice terms summed directly, coefficients included."""
    w = as_weight(k)
    z = _line_point(series, y)
    r = abs(z)
    if series == "E0":
        v = np.array([0, 1])
        coef = _e0_coef(1, v, w.k)
        pts = z + v
    else:
        c = np.array([0, -1])
        coef = _ehalf_coef(1, c, w.k) * cmath.exp(-1j * math.pi * w.k / 4)
        pts = z + c
    total = sum(complex(a) / half_power(complex(p), w) for a, p in zip(coef, pts))
    return _rotation(series, w.k) * math.exp(w.s * math.log(r)) * total


def m0_direct(y: float, k) -> complex:
    return approximant_direct("E0", y, k)


def m_half_direct(y: float, k) -> complex:
    return approximant_direct("Ehalf", y, k)


@dataclass(frozen=True)
class TailBounds:
    j1: float
    j2: float
    n1: float
    n2: float

    def __post_init__(self):
        if min(self.j1, self.j2, self.n1, self.n2) < 0:
            raise ValueError("bounds must be non-negative")

    def total(self, series: str = "E0") -> float:
        return self.j1 + self.j2 if series == "E0" else self.n1 + self.n2


def tail_bounds(y: float, k, c1: float = C1, c2: float = C2) -> TailBounds:
    """Closed-form bounds on the remainder pieces at -1/2 + iy (and 1/2 + iy).

    j1 = c1 (1/4 + y^2) R^((k-4)/4) with R = (1/4 + y^2) / (9/4 + y^2),
    j2 = c2 (8/81)^(k/4) 3y / sqrt(k).  The same numbers bound n1, n2.
    """
    w = as_weight(k)
    lo, hi = window(w)
    # a hair of slack so sample points computed through tan() are not rejected
    if not (lo * (1 - 1e-12) <= y <= hi * (1 + 1e-12)):
        raise WindowError(f"y = {y} outside [{lo}, {hi:.6g}] for k = {w.k}")
    a = 0.25 + y * y
    R = a / (2.25 + y * y)
    j1 = c1 * a * math.exp((w.k - 4) / 4 * math.log(R))
    j2 = c2 * math.exp(w.k / 4 * math.log(8 / 81)) * 3 * y / math.sqrt(w.k)
    return TailBounds(j1, j2, j1, j2)


def window_edge_j1(k, c1: float = C1) -> float:
    """c1 (2k / log k) k^(-1/4), the large-k envelope of j1 at the window top."""
    k = as_weight(k).k
    return c1 * (2 * k / math.log(k)) * k ** -0.25


def scaled_series(series: str, y: float, k, policy: TruncationPolicy | None = None) -> EvalResult:
    """e(k/8) r^(k/2) E_0(-1/2 + iy) or r^(k/2) E_half(1/2 + iy); real in exact arithmetic.

    The factor r^(k/2) is applied inside every term, so nothing overflows.
    """
    w = as_weight(k)
    z = _line_point(series, y)
    res = _evaluate(series, z, w, policy, log_scale=w.s * math.log(abs(z)))
    rot = _rotation(series, w.k)
    return EvalResult(complex(rot * res.value), res.tail_estimate, res.terms_used, res.certified, res.scale)


@dataclass(frozen=True)
class Remainder:
    value: float  # real part of scaled series minus approximant
    imag: float
    tail: float  # truncation plus rounding bound on |value|
    terms_used: int
    certified: bool


def remainder_policy(series: str, y: float, k, target: float | None = None) -> TruncationPolicy:
    """Cutoffs whose scaled tail is below ``target`` (absolute).

    Both leading terms have modulus exactly 1 after scaling, so an absolute
    target is natural.  The default asks for 1e-4 of the bound being tested,
    capped at 1e-12, falling back to 1e-12 outside the window.
    """
    if target is None:
        try:
            target = min(1e-12, 1e-4 * tail_bounds(y, k).total(series))
        except WindowError:
            target = 1e-12
    return auto_lattice_policy(_line_point(series, y), k, series, target_tail=target)


def measured_remainder(series: str, y: float, k, policy: TruncationPolicy | None = None) -> Remainder:
    """Scaled series minus approximant, summed as the series without its two leading terms.

    Subtracting the approximant from the full scaled value would lose every
    digit below about 1e-15; skipping the two lattice terms keeps the
    remainder accurate to its own size.
    """
    w = as_weight(k)
    z = _line_point(series, y)
    if policy is None:
        policy = remainder_policy(series, y, w)
    res = _evaluate(series, z, w, policy, log_scale=w.s * math.log(abs(z)), skip=_LEADING[series])
    val = _rotation(series, w.k) * res.value
    if abs(val.imag) > 1e-8 * max(1.0, abs(val)):
        raise RemainderNotReal(f"{series} remainder at y={y}, k={w.k} has imaginary part {val.imag:.3g}")
    certified = res.tail_estimate <= policy.target_tail
    return Remainder(float(val.real), float(val.imag), res.tail_estimate, res.terms_used, bool(certified))
