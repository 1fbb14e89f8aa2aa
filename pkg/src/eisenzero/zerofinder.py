"""Locate and certify zeros of E_inf through its images on x = -1/2, x = 1/2 and x = 0.

The scaled series on each line is real.  At the sample points, where the
approximant is +-2, a remainder bound below 2 fixes its sign, so every
adjacent pair with opposite signs brackets a zero.  The stretches of the
window below the first and above the last sample point are scanned directly
on a fine grid, accepting only sign changes whose values clear their tails.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field, replace

from .approx import (
    LINE_SERIES,
    WindowError,
    angle_max,
    approximant,
    measured_remainder,
    scaled_series,
    tail_bounds,
)
from .domains import circle_deviation, map_from_F0, map_from_Fhalf
from .series import (
    TruncationPolicy,
    TruncationWarning,
    Weight,
    as_weight,
    eval_E_0_fourier,
    eval_E_0_lattice,
)

SERIES_IDS = {"E0": "E0_line", "Ehalf": "Ehalf_line"}
DEFAULT_TOL = 1e-10
DEDUP_TOL = 1e-8
FLOOR_C = 1


class SignAnomaly(RuntimeError):
    """A bisection midpoint whose sign cannot be certified."""

    def __init__(self, y: float, value: float, tail: float):
        super().__init__(f"sign at y={y!r} not certified: |value| {abs(value):.3g} <= tail {tail:.3g}")
        self.y = y


class ValenceExceeded(RuntimeError):
    """More zeros than the valence formula allows: an evaluator is wrong."""


@dataclass(frozen=True)
class SamplePoint:
    n: int
    angle: float
    y: float
    predicted_sign: int


@dataclass(frozen=True)
class ZeroCertificate:
    series_id: str
    bracket: tuple[float, float]
    endpoint_signs: tuple[int, int]
    endpoint_margins: tuple[float, float]
    refined_y: float | None = None
    residual: float | None = None
    method: str = "sample"  # "sample", "scan" or "p-scan"
    n: int | None = None  # lower sample index for method "sample"

    @property
    def width(self) -> float:
        return self.bracket[1] - self.bracket[0]


@dataclass(frozen=True)
class VoidedSample:
    series_id: str
    n: int
    y: float
    reason: str


@dataclass
class ZeroReport:
    k: Weight
    certificates: list[ZeroCertificate]
    mapped_points: list[complex]
    circle_max_deviation: float
    count_found: int
    valence_budget: int
    theorem_floor: int
    per_series: dict[str, int] = field(default_factory=dict)
    voided: list[VoidedSample] = field(default_factory=list)
    p_axis_found: bool = False


def _line_offset(series: str, k: int) -> float:
    # multiples of pi/k added to 2 pi n / k so the approximant sits at +-2
    if series == "Ehalf":
        return 0.0
    return 0.5 if k % 4 == 1 else -0.5


def sample_points(k, series: str) -> list[SamplePoint]:
    """Every n whose angle lies in [pi/4, arctan(sqrt(2k/log k))], ascending."""
    if series not in LINE_SERIES:
        raise ValueError(f"series must be one of {LINE_SERIES}")
    w = as_weight(k)
    off = _line_offset(series, w.k)
    top = angle_max(w)
    out = []
    n = max(0, math.floor(w.k / 8) - 1)
    while True:
        a = (2 * n + off) * math.pi / w.k
        if a > top:
            break
        if a >= math.pi / 4:
            y = math.tan(a) / 2
            sign = 1 if approximant(series, y, w) > 0 else -1
            out.append(SamplePoint(n, a, y, sign))
        n += 1
    return out


def theorem_floor(k, c: int = FLOOR_C) -> int:
    k = as_weight(k).k
    return math.ceil(k / 8) - c * math.ceil(math.sqrt(k * math.log(k)))


def _sign(x: float) -> int:
    return 1 if x > 0 else -1


def _line_value(series: str, y: float, w: Weight, policy: TruncationPolicy | None) -> tuple[float, float]:
    res = scaled_series(series, y, w, policy)
    return res.value.real, res.tail_estimate


def _scan_segment(series, a_lo, a_hi, w, policy) -> list[ZeroCertificate]:
    """Grid scan over angles [a_lo, a_hi] with step at most pi/(4k)."""
    if a_hi <= a_lo:
        return []
    steps = max(1, math.ceil((a_hi - a_lo) / (math.pi / (4 * w.k))))
    prev = None
    out = []
    for i in range(steps + 1):
        a = a_lo + (a_hi - a_lo) * i / steps
        y = math.tan(a) / 2
        val, tail = _line_value(series, y, w, policy)
        if abs(val) <= tail:
            prev = None  # an uncertified point breaks the chain
            continue
        cur = (y, _sign(val), abs(val) - tail)
        if prev and prev[1] != cur[1]:
            out.append(
                ZeroCertificate(
                    SERIES_IDS[series], (prev[0], cur[0]), (prev[1], cur[1]), (prev[2], cur[2]), method="scan"
                )
            )
        prev = cur
    return out


def bracket_zeros(
    k, series: str, policy: TruncationPolicy | None = None, edge_scan: bool = True
) -> tuple[list[ZeroCertificate], list[VoidedSample]]:
    """Sign-change brackets between adjacent sample points, plus scans of the gaps.

    A sample point counts only if its bound total is below 2 and its measured
    remainder is below 2; otherwise it is returned in the voided list.  The
    window below the first and above the last counted sample, and any stretch
    around a voided one, is covered by a direct scan.
    """
    w = as_weight(k)
    sid = SERIES_IDS[series]
    pts = sample_points(w, series)
    good = []
    voided = []
    for p in pts:
        try:
            bound = tail_bounds(p.y, w).total(series)
        except WindowError as exc:
            voided.append(VoidedSample(sid, p.n, p.y, str(exc)))
            continue
        rem = measured_remainder(series, p.y, w)
        if bound >= 2:
            voided.append(VoidedSample(sid, p.n, p.y, f"bound {bound:.3g} >= 2"))
            continue
        if abs(rem.value) + rem.tail >= 2:
            voided.append(VoidedSample(sid, p.n, p.y, f"|remainder| {abs(rem.value):.3g} >= 2"))
            continue
        val, tail = _line_value(series, p.y, w, policy)
        if abs(val) <= tail:
            voided.append(VoidedSample(sid, p.n, p.y, "series sign not certified"))
            continue
        good.append((p, _sign(val), 2 - bound))
    certs = []
    # stretches not covered by a pair of adjacent certified samples get scanned
    gaps = []
    edge = math.pi / 4
    for (p, sp, mp), (q, sq, mq) in zip(good, good[1:]):
        if q.n == p.n + 1:
            if sp != sq:
                certs.append(ZeroCertificate(sid, (p.y, q.y), (sp, sq), (mp, mq), method="sample", n=p.n))
        else:
            gaps.append((p.angle, q.angle))
    if good:
        gaps = [(edge, good[0][0].angle)] + gaps + [(good[-1][0].angle, angle_max(w))]
    else:
        gaps = [(edge, angle_max(w))]
    if edge_scan:
        for a_lo, a_hi in gaps:
            certs.extend(_scan_segment(series, a_lo, a_hi, w, policy))
        certs.sort(key=lambda c: c.bracket[0])
    return certs, voided


def bisect(f, lo: float, hi: float, s_lo: int, tol: float = DEFAULT_TOL) -> tuple[float, float, float]:
    """Bisect a certified sign change of f on [lo, hi].

    f(y) returns (value, tail); a midpoint with |value| <= tail raises
    SignAnomaly.  Returns the final (lo, hi, midpoint).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # float resolution reached
        val, tail = f(mid)
        if abs(val) <= tail:
            raise SignAnomaly(mid, val, tail)
        if _sign(val) == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi, 0.5 * (lo + hi)


def _tight(policy: TruncationPolicy | None) -> TruncationPolicy | None:
    return policy if policy is None else replace(policy, target_tail=min(policy.target_tail, 1e-14))


def refine_zero(cert: ZeroCertificate, k, policy: TruncationPolicy | None = None, tol: float = DEFAULT_TOL):
    w = as_weight(k)
    if cert.series_id == "P_axis":
        f = lambda y: _p_value(y, w, policy)  # noqa: E731
    else:
        series = "E0" if cert.series_id == "E0_line" else "Ehalf"
        f = lambda y: _line_value(series, y, w, policy)  # noqa: E731
    lo, hi, mid = bisect(f, cert.bracket[0], cert.bracket[1], cert.endpoint_signs[0], tol)
    residual = abs(f(mid)[0])
    return replace(cert, bracket=(lo, hi), refined_y=mid, residual=residual)


def _p_value(y: float, w: Weight, policy: TruncationPolicy | None) -> tuple[float, float]:
    """e(k/8) E_0(iy) e^(2 pi y), real part and tail; Fourier first, lattice if uncertified."""
    rot = cmath.exp(1j * math.pi * w.k / 4)
    scale = math.exp(2 * math.pi * y)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        res = eval_E_0_fourier(complex(0, y), w, policy)
    if not res.certified:
        res = eval_E_0_lattice(complex(0, y), w, None)
    v = rot * res.value * scale
    if abs(v.imag) > 1e-9 * abs(v) + res.tail_estimate * scale:
        raise ArithmeticError(f"e(k/8) E_0({y}i) is not real: {v}")
    return v.real, res.tail_estimate * scale


def find_P_zero(
    k,
    policy: TruncationPolicy | None = None,
    y_range: tuple[float, float] = (1.0, 12.0),
    step: float = 0.05,
    tol: float = DEFAULT_TOL,
) -> ZeroCertificate | None:
    """First certified sign change of e(k/8) E_0(iy) on the scan range, refined; None if absent."""
    w = as_weight(k)
    lo, hi = y_range
    n = round((hi - lo) / step)
    prev = None
    for i in range(n + 1):
        y = lo + i * step
        val, tail = _p_value(y, w, policy)
        if abs(val) <= tail:
            prev = None
            continue
        cur = (y, _sign(val), abs(val) - tail)
        if prev and prev[1] != cur[1]:
            cert = ZeroCertificate("P_axis", (prev[0], cur[0]), (prev[1], cur[1]), (prev[2], cur[2]), method="p-scan")
            return refine_zero(cert, w, policy, tol)
        prev = cur
    return None


def map_to_Finf(cert: ZeroCertificate) -> complex:
    y = cert.refined_y
    if cert.series_id == "E0_line":
        return map_from_F0(complex(-0.5, y))
    if cert.series_id == "Ehalf_line":
        return map_from_Fhalf(complex(0.5, y))
    return map_from_F0(complex(0.0, y))


def compile_report(
    k,
    policy: TruncationPolicy | None = None,
    tol: float = DEFAULT_TOL,
    p_scan: bool = True,
    p_range: tuple[float, float] = (1.0, 12.0),
    p_step: float = 0.05,
) -> ZeroReport:
    w = as_weight(k)
    certs = []
    voided = []
    per_series = {}
    for series in LINE_SERIES:
        found, bad = bracket_zeros(w, series, policy)
        refined = [refine_zero(c, w, policy, tol) for c in found]
        certs.extend(refined)
        voided.extend(bad)
        per_series[SERIES_IDS[series]] = len(refined)
    p_cert = find_P_zero(w, policy, p_range, p_step, tol) if p_scan else None
    if p_cert is not None:
        certs.append(p_cert)
    per_series["P_axis"] = int(p_cert is not None)

    mapped: list[complex] = []
    dev = 0.0
    for c in certs:
        z = map_to_Finf(c)
        if c.series_id != "P_axis":
            dev = max(dev, circle_deviation(z))
        if all(abs(z - m) > DEDUP_TOL for m in mapped):
            mapped.append(z)
    budget = w.k // 4
    report = ZeroReport(
        k=w,
        certificates=certs,
        mapped_points=mapped,
        circle_max_deviation=dev,
        count_found=len(mapped),
        valence_budget=budget,
        theorem_floor=theorem_floor(w),
        per_series=per_series,
        voided=voided,
        p_axis_found=p_cert is not None,
    )
    if report.count_found > budget:
        raise ValenceExceeded(f"k={w.k}: {report.count_found} zeros found, valence allows {budget}")
    return report
