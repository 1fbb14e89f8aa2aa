"""Numerical check suites: relations, reality, remainder bounds, coefficients.

Each suite returns a list of :class:`Check` rows (measured value against a
threshold) so callers can print a ledger or stop at the first failure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .approx import (
    LINE_SERIES,
    approximant,
    approximant_direct,
    measured_remainder,
    scaled_series,
    tail_bounds,
    window,
)
from .domains import RELATIONS, UncertifiedTruncation, relation_residual
from .series import TruncationWarning, as_weight, eval_E_0_fourier, eval_E_0_lattice, fourier_b, fourier_b_direct
from .zerofinder import sample_points

SUITES = ("relations", "reality", "bounds", "coefficients")
SEED = 20240607


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    measured: float
    threshold: float
    passed: bool

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.suite}/{self.name}: {self.measured:.3e} (threshold {self.threshold:.1e})"


def _check(suite, name, measured, threshold, strict=False) -> Check:
    ok = measured < threshold if strict else measured <= threshold
    return Check(suite, name, float(measured), float(threshold), bool(ok))


def relation_point(which: str, rng: np.random.Generator) -> complex:
    """A random point where both sides of ``which`` sit in well-converging territory."""
    if which == "e0_inversion":
        s = rng.uniform(0.9, 1.1)
        phi = rng.uniform(math.pi / 4, 3 * math.pi / 4)
        return 0.5 * s * complex(math.cos(phi), math.sin(phi))
    if which == "ehalf_translation":
        return complex(rng.uniform(-0.7, -0.3), rng.uniform(0.4, 1.5))
    return complex(rng.uniform(-0.7, -0.3), rng.uniform(0.35, 0.6))


def relation_residuals(which: str, k, n: int = 20, seed: int = SEED, max_draws: int = 200):
    """Residuals at the first n random points whose evaluations are all certified."""
    rng = np.random.default_rng([seed, RELATIONS.index(which), as_weight(k).k])
    out = []
    for _ in range(max_draws):
        z = relation_point(which, rng)
        try:
            out.append((z, relation_residual(which, z, k)))
        except UncertifiedTruncation:
            continue
        if len(out) == n:
            break
    return out


def suite_relations(k, n: int = 20, tol: float = 1e-8) -> list[Check]:
    checks = []
    for which in RELATIONS:
        res = relation_residuals(which, k, n)
        worst = max((r for _, r in res), default=math.inf)
        checks.append(_check("relations", f"{which} k={as_weight(k).k} max residual ({len(res)} pts)", worst, tol, True))
        if len(res) < n:
            checks.append(_check("relations", f"{which} certified points", n - len(res), 0))
    return checks


def window_grid(k, n: int) -> np.ndarray:
    lo, hi = window(k)
    return np.linspace(lo, hi, n)


def suite_reality(k, n: int = 100, tol: float = 1e-9) -> list[Check]:
    checks = []
    for series in LINE_SERIES:
        worst = 0.0
        for y in window_grid(k, n):
            v = scaled_series(series, float(y), k).value
            worst = max(worst, abs(v.imag) / abs(v))
        checks.append(_check("reality", f"{series} k={as_weight(k).k} max |Im|/|value|", worst, tol, True))
    return checks


def suite_bounds(k, n_grid: int = 50, direct_tol: float = 1e-12) -> list[Check]:
    """Domination of the measured remainder by the closed-form bounds."""
    w = as_weight(k)
    checks = []
    for series in LINE_SERIES:
        ratio = 0.0
        sample_rem = 0.0
        pts = sample_points(w, series)
        for p in pts:
            rem = measured_remainder(series, p.y, w)
            ratio = max(ratio, (abs(rem.value) + rem.tail) / tail_bounds(p.y, w).total(series))
            sample_rem = max(sample_rem, abs(rem.value) + rem.tail)
        grid_ratio = 0.0
        direct = 0.0
        for y in window_grid(w, n_grid):
            y = float(y)
            rem = measured_remainder(series, y, w)
            grid_ratio = max(grid_ratio, (abs(rem.value) + rem.tail) / tail_bounds(y, w).total(series))
            direct = max(direct, abs(approximant_direct(series, y, w) - approximant(series, y, w)))
        tag = f"{series} k={w.k}"
        checks += [
            _check("bounds", f"{tag} |remainder| < 2 at {len(pts)} sample points", sample_rem, 2.0, True),
            _check("bounds", f"{tag} (|remainder| + tail) / bound at sample points", ratio, 1.0),
            _check("bounds", f"{tag} (|remainder| + tail) / bound on {n_grid}-point grid", grid_ratio, 1.0),
            _check("bounds", f"{tag} closed form vs direct", direct, direct_tol),
        ]
    return checks


LADDER_LS = (4, 9, 12, 18, 25)
SQUAREFREE_LS = (1, 2, 3, 5, 6, 7)


def coefficient_errors(k, ls=LADDER_LS + SQUAREFREE_LS, n_max: int = 1000) -> dict[int, float]:
    """Relative gap between the reduced formula and the direct double sum."""
    out = {}
    for l in ls:
        fast = fourier_b(l, k).value
        slow, _ = fourier_b_direct(l, k, n_max)
        out[l] = abs(fast - slow) / abs(slow)
    return out


def suite_coefficients(k, tol: float = 1e-10, fourier_tol: float = 1e-8) -> list[Check]:
    w = as_weight(k)
    errs = coefficient_errors(w)
    checks = [_check("coefficients", f"b_{l} k={w.k} vs direct", e, tol, True) for l, e in errs.items()]
    worst = 0.0
    used = 0
    for y in np.linspace(0.8, 2.0, 13):
        z = complex(-0.5, float(y))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            f = eval_E_0_fourier(z, w)
        if not f.certified:
            continue  # large k: the expansion cancels too much at small y
        g = eval_E_0_lattice(z, w).value
        worst = max(worst, abs(f.value - g) / abs(g))
        used += 1
    name = f"Fourier vs lattice k={w.k}, {used} certified y in [0.8, 2]"
    checks.append(_check("coefficients", name, worst, fourier_tol, True))
    return checks


_RUNNERS = {
    "relations": suite_relations,
    "reality": suite_reality,
    "bounds": suite_bounds,
    "coefficients": suite_coefficients,
}


def run_suite(name: str, k) -> list[Check]:
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
    return _RUNNERS[name](k)
