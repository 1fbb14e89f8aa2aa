"""Regions of the fundamental domain F_inf and the maps to F_0 and F_half."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .series import (
    TruncationPolicy,
    as_point,
    as_weight,
    eval_E_0_lattice,
    eval_E_half_lattice,
    eval_E_inf,
    half_power,
)


class UncertifiedTruncation(RuntimeError):
    """An evaluation's tail bound exceeded its policy's target."""


class Region(enum.Enum):
    Y = "Y"
    P = "P"
    O = "O"
    G = "G"
    B = "B"
    N = "N"


def _d2(z: complex, centre: float) -> float:
    return (z.real - centre) ** 2 + z.imag**2


# Each predicate lists the inequalities verbatim; squared distances avoid sqrt.
_PREDICATES = {
    Region.Y: lambda z: abs(z.real) <= 0.5 and _d2(z, 0) >= 1,
    Region.P: lambda z: _d2(z, 0) < 1 and _d2(z, -1) >= 1 and _d2(z, 1) >= 1,
    Region.O: lambda z: z.real >= -0.5 and _d2(z, -1) < 1 and _d2(z, -1 / 3) >= 1 / 9,
    Region.G: lambda z: z.real <= 0.5 and _d2(z, 1 / 3) >= 1 / 9 and _d2(z, 1) < 1,
    Region.B: lambda z: _d2(z, 1 / 3) < 1 / 9 and _d2(z, 1 / 5) >= 1 / 25 and _d2(z, 2 / 3) >= 1 / 9,
    Region.N: lambda z: z.real <= 0.5 and _d2(z, 2 / 3) < 1 / 9 and _d2(z, 3 / 8) >= 1 / 64,
}


def region_predicates(z) -> list[Region]:
    """Every region whose inequality list z satisfies (normally zero or one)."""
    z = as_point(z).z
    return [r for r, pred in _PREDICATES.items() if pred(z)]


def classify_region(z) -> Region | None:
    hits = region_predicates(z)
    if len(hits) > 1:
        raise AssertionError(f"regions overlap at {z}: {hits}")
    return hits[0] if hits else None


@dataclass(frozen=True)
class MoebiusMap:
    """z -> (a z + b) / (c z + d) with rational entries."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.det == 0:
            raise ValueError("singular Moebius map")

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "MoebiusMap":
        return MoebiusMap(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def pole(self) -> complex | None:
        return None if self.c == 0 else complex(-self.d / self.c)

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        den = float(self.c) * z + float(self.d)
        if den == 0:
            raise ValueError(f"{z} is the pole of {self}")
        return (float(self.a) * z + float(self.b)) / den


S = MoebiusMap(0, -1, 1, 0)
T = MoebiusMap(1, 1, 0, 1)


def translation(t) -> MoebiusMap:
    return MoebiusMap(1, t, 0, 1)


# z -> S(z)/4 = -1/(4z)
TO_F0 = MoebiusMap(1, 0, 0, 4) @ S
# z -> -S T^2 S (z) + 1/2; negating the matrix does not change the map
TO_FHALF = translation(Fraction(1, 2)) @ -(S @ T @ T @ S)


def map_to_F0(z) -> complex:
    z = complex(z)
    if z == 0:
        raise ValueError("z = 0 has no image in F_0")
    return TO_F0(z)


def map_from_F0(w) -> complex:
    return TO_F0.inverse()(complex(w))


def map_to_Fhalf(z) -> complex:
    z = complex(z)
    if z == TO_FHALF.pole():
        raise ValueError("z = 1/2 is the pole of the F_half map")
    return TO_FHALF(z)


def map_from_Fhalf(w) -> complex:
    return TO_FHALF.inverse()(complex(w))


RELATIONS = ("e0_inversion", "ehalf_from_einf", "ehalf_translation", "ehalf_from_e0")


def relation_sides(which: str, z, k, policy: TruncationPolicy | None = None) -> tuple[complex, complex]:
    """Left and right sides of one automorphy relation at z.

    e0_inversion:      E_0(-1/(4z)) = (4z)^(k/2) i^(-k) E_inf(z)
    ehalf_from_einf:   E_half(z + 1/2) = 2^(k/2) (2z+1)^(-k/2) E_inf(z/(2z+1))
    ehalf_translation: E_half(z) = i^(-k) E_half(z + 1)
    ehalf_from_e0:     E_half(z) = (2z+1)^(-k/2) E_0(z/(2z+1))
    """
    w = as_weight(k)
    z = as_point(z).z
    ik = 1j ** (-w.k)
    results = []

    def ev(fn, point):
        r = fn(point, w, policy)
        results.append(r)
        return r.value

    if which == "e0_inversion":
        lhs = ev(eval_E_0_lattice, -1 / (4 * z))
        rhs = half_power(4 * z, w) * ik * ev(eval_E_inf, z)
    elif which == "ehalf_from_einf":
        lhs = ev(eval_E_half_lattice, z + 0.5)
        rhs = 2**w.s / half_power(2 * z + 1, w) * ev(eval_E_inf, z / (2 * z + 1))
    elif which == "ehalf_translation":
        lhs = ev(eval_E_half_lattice, z)
        rhs = ik * ev(eval_E_half_lattice, z + 1)
    elif which == "ehalf_from_e0":
        lhs = ev(eval_E_half_lattice, z)
        rhs = ev(eval_E_0_lattice, z / (2 * z + 1)) / half_power(2 * z + 1, w)
    else:
        raise ValueError(f"unknown relation {which!r}; expected one of {RELATIONS}")
    bad = [r for r in results if not r.certified]
    if bad:
        raise UncertifiedTruncation(f"{which} at z={z}: tail {bad[0].tail_estimate:.3g} above target")
    return lhs, rhs


def relation_residual(which: str, z, k, policy: TruncationPolicy | None = None) -> float:
    """|lhs - rhs| / max(|lhs|, |rhs|)."""
    lhs, rhs = relation_sides(which, z, k, policy)
    scale = max(abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale if scale else 0.0


def circle_deviation(z) -> float:
    """| |z - 1/4| - 1/4 |."""
    return abs(abs(complex(z) - 0.25) - 0.25)

