"""Acceptance criteria, one test each, at the stated tolerances.

Every test records a PASS/FAIL line, printed in the pytest terminal summary
(and directly when this file is run as a script).
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from eisenzero.approx import approximant, approximant_direct, measured_remainder, tail_bounds, window
from eisenzero.domains import RELATIONS
from eisenzero.series import eval_E_0_fourier, eval_E_0_lattice, fourier_b, fourier_b_direct
from eisenzero.verify import relation_residuals, suite_reality
from eisenzero.zerofinder import compile_report, sample_points

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []

GRID = (101, 103, 105, 107)
_REPORTS = {}


def record(name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def report(k):
    if k not in _REPORTS:
        t = time.perf_counter()
        rep = compile_report(k)
        _REPORTS[k] = (rep, time.perf_counter() - t)
    return _REPORTS[k]


# 1. k = 15 zero pattern -------------------------------------------------------


def test_c1a_k15_line_zeros_on_circle():
    rep, _ = report(15)
    lines = [c for c in rep.certificates if c.series_id != "P_axis"]
    ids = sorted(c.series_id for c in lines)
    ok = ids == ["E0_line", "Ehalf_line"] and rep.circle_max_deviation < 1e-9
    record("C1a k=15 one zero on each line, circle deviation < 1e-9", ok,
           f"lines {ids}, deviation {rep.circle_max_deviation:.2e}")
    assert ok


def test_c1b_k15_total_count_is_3():
    rep, _ = report(15)
    ok = rep.count_found == 3 == 15 // 4
    record("C1b k=15 total zero count = 3", ok, f"found {rep.count_found} ({rep.per_series})")
    assert ok


def test_c1c_k15_p_axis_zero_at_5881():
    rep, _ = report(15)
    p = [c for c in rep.certificates if c.series_id == "P_axis"]
    ok = bool(p) and abs(p[0].refined_y - 5.881) <= 1e-3
    detail = f"refined y = {p[0].refined_y:.6f}" if p else "no sign change of e(k/8) E_0(iy) on [1, 12]"
    record("C1c k=15 P-axis zero at y = 5.881 +- 1e-3", ok, detail)
    assert ok


def test_c1d_k15_runtime():
    _REPORTS.pop(15, None)
    _, dt = report(15)
    ok = dt < 10
    record("C1d k=15 zero search runtime < 10 s", ok, f"{dt:.2f} s")
    assert ok


# 2. real-valuedness ------------------------------------------------------------


@pytest.mark.parametrize("k", [15, 101, 103])
def test_c2_real_valuedness(k):
    checks = suite_reality(k, n=100, tol=1e-9)
    worst = max(c.measured for c in checks)
    ok = all(c.passed for c in checks)
    record(f"C2 k={k} relative imaginary part < 1e-9 at 100 points", ok, f"max {worst:.2e}")
    assert ok


# 3. automorphy relations -------------------------------------------------------


@pytest.mark.parametrize("k", [15, 101])
def test_c3_automorphy_relations(k):
    parts = []
    ok = True
    for which in RELATIONS:
        res = relation_residuals(which, k, 20)
        worst = max(r for _, r in res)
        ok &= len(res) == 20 and worst < 1e-8
        parts.append(f"{which} {worst:.1e}")
    record(f"C3 k={k} relation residuals < 1e-8 at 20 certified points each", ok, ", ".join(parts))
    assert ok


# 4. dual expansion and coefficient ladders -------------------------------------


def test_c4a_fourier_vs_lattice():
    worst = 0.0
    for x in (-0.5, -0.25, 0.0, 0.4):
        for y in np.linspace(0.8, 3.0, 12):
            z = complex(x, float(y))
            f = eval_E_0_fourier(z, 15)
            g = eval_E_0_lattice(z, 15)
            assert f.certified and g.certified
            worst = max(worst, abs(f.value - g.value) / abs(g.value))
    ok = worst < 1e-8
    record("C4a k=15 Fourier vs lattice E_0, y >= 0.8, relative < 1e-8", ok, f"max {worst:.2e} over 48 points")
    assert ok


def test_c4b_ladders_vs_direct():
    errs = {}
    for l in (4, 9, 12, 18, 25):
        slow, _ = fourier_b_direct(l, 15, 2001)
        errs[l] = abs(fourier_b(l, 15).value - slow) / abs(slow)
    ok = max(errs.values()) < 1e-10
    record("C4b k=15 ladder coefficients vs direct sum < 1e-10", ok,
           ", ".join(f"b{l} {e:.1e}" for l, e in errs.items()))
    assert ok


# 5. approximant domination -------------------------------------------------------


@pytest.mark.parametrize("k", GRID)
def test_c5_domination(k):
    rem_max = 0.0
    ratio = 0.0
    direct = 0.0
    n = 0
    for series in ("E0", "Ehalf"):
        for p in sample_points(k, series):
            rem = measured_remainder(series, p.y, k)
            bound = tail_bounds(p.y, k).total(series)
            rem_max = max(rem_max, abs(rem.value) + rem.tail)
            ratio = max(ratio, (abs(rem.value) + rem.tail) / bound)
            n += 1
        for y in np.linspace(*window(k), 40):
            direct = max(direct, abs(approximant_direct(series, float(y), k) - approximant(series, float(y), k)))
    ok = rem_max < 2 and ratio <= 1 and direct < 1e-12
    record(f"C5 k={k} |remainder| < 2, <= j/n bound, closed form = direct", ok,
           f"{n} sample points, max |rem| {rem_max:.2e}, max rem/bound {ratio:.3f}, closed vs direct {direct:.1e}")
    assert ok


# 6. zero count sandwich ---------------------------------------------------------


@pytest.mark.parametrize("k", GRID)
def test_c6_count_sandwich(k):
    rep, dt = report(k)
    floor = math.ceil(k / 8) - math.ceil(math.sqrt(k * math.log(k)))
    lines_ok = all(rep.per_series[s] >= floor for s in ("E0_line", "Ehalf_line"))
    ok = lines_ok and rep.count_found <= k // 4 and dt < 120
    record(f"C6 k={k} per-line count >= {floor}, total <= {k // 4}, runtime < 120 s", ok,
           f"{rep.per_series}, total {rep.count_found}, {dt:.2f} s")
    assert ok


# 7. determinism --------------------------------------------------------------------


def test_c7_cli_determinism():
    cmd = [sys.executable, "-m", "eisenzero", "zeros", "--k", "101", "--json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    ok = a == b and len(a) > 0
    record("C7 `zeros --k 101 --json` byte-identical across runs", ok, f"{len(a)} bytes")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
