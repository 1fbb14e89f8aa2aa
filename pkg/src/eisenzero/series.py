"""Truncated evaluation of the three weight k/2 Eisenstein series of Gamma_0(4).

Lattice sums are taken row by row (one row per value of the coefficient of
``z``), each row over a window of the constant term centred on the row's
largest term.  Every evaluator returns an :class:`EvalResult` whose
``tail_estimate`` is an upper bound on the modulus of everything that was
dropped plus a floating-point rounding allowance.

Conventions
-----------
All powers ``w**(k/2)`` use the principal logarithm.  Every lattice point
``u*z + v`` with ``u > 0`` lies in the upper half-plane, so the branch is
never ambiguous inside the sums themselves.

``eval_E_inf`` includes the constant term 1 (the ``c = 0`` coset).  Without
it the relations linking E_inf to E_0 and E_half fail by exactly that term.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .arithmetic import (
    epsilon,
    gauss_phase_table,
    jacobi,
    jacobi_table,
    moebius,
    squarefree_decompose,
    squarefree_sieve,
)

EPS = np.finfo(float).eps


class TruncationWarning(UserWarning):
    """A requested tolerance could not be met within the policy's caps."""


@dataclass(frozen=True)
class Weight:
    """Odd k >= 5; the series have weight k/2."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or isinstance(self.k, bool):
            raise TypeError(f"k must be an integer, got {self.k!r}")
        if self.k < 5 or self.k % 2 == 0:
            raise ValueError(f"k must be odd and >= 5, got {self.k}")

    @property
    def half(self) -> Fraction:
        return Fraction(self.k, 2)

    @property
    def s(self) -> float:
        return self.k / 2

    @property
    def k_mod_4(self) -> int:
        return self.k % 4

    @property
    def lam(self) -> int:
        return (self.k - 1) // 2


def as_weight(k: "int | Weight") -> Weight:
    return k if isinstance(k, Weight) else Weight(int(k))


@dataclass(frozen=True)
class ComplexPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("point must be finite")
        if self.y <= 0:
            raise ValueError(f"point must lie in the upper half-plane, got y={self.y}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexPoint":
        return cls(float(z.real), float(z.imag))


def as_point(z: "complex | ComplexPoint") -> ComplexPoint:
    return z if isinstance(z, ComplexPoint) else ComplexPoint.from_complex(complex(z))


@dataclass(frozen=True)
class TruncationPolicy:
    """Cutoffs for lattice and Fourier sums.

    ``lattice_u_max`` bounds the row index (u for E_0, c for E_inf, d for
    E_half); ``lattice_v_max`` is the half-width of each row's window.  For
    the Fourier expansion, ``fourier_l_max`` is a hard cap on the number of
    coefficients and ``coeff_n0_max`` caps the inner sum defining each
    coefficient.  ``target_tail`` is relative to the largest term.
    """

    lattice_u_max: int = 50
    lattice_v_max: int = 200
    fourier_l_max: int = 400
    coeff_n0_max: int = 100_000
    target_tail: float = 1e-12

    def __post_init__(self):
        for name in ("lattice_u_max", "lattice_v_max", "fourier_l_max", "coeff_n0_max"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not self.target_tail > 0:
            raise ValueError("target_tail must be positive")

    def doubled(self) -> "TruncationPolicy":
        return replace(
            self,
            lattice_u_max=2 * self.lattice_u_max,
            lattice_v_max=2 * self.lattice_v_max,
            fourier_l_max=2 * self.fourier_l_max,
            coeff_n0_max=2 * self.coeff_n0_max,
        )


@dataclass(frozen=True)
class EvalResult:
    value: complex
    tail_estimate: float
    terms_used: int
    certified: bool = True
    scale: float = 0.0  # modulus of the largest term

    def __post_init__(self):
        if not self.tail_estimate >= 0:
            raise ValueError("tail_estimate must be >= 0")

    @property
    def sign_certified(self) -> bool:
        """True if the tail cannot flip the sign of the real part."""
        return abs(self.value.real) > self.tail_estimate


def half_power(w: complex, k: "int | Weight") -> complex:
    """w**(k/2) on the principal branch, arg w in (-pi, pi]."""
    s = as_weight(k).s if isinstance(k, Weight) else k / 2
    w = complex(w)
    if w == 0:
        raise ValueError("half_power is undefined at w = 0")
    return cmath.exp(s * cmath.log(w))


# ---------------------------------------------------------------------------
# lattice families


@dataclass(frozen=True)
class _Family:
    name: str
    rows: Callable[[int], Sequence[int]]  # row indices up to the cutoff
    u_of_row: Callable[[int], int]  # coefficient of z in the lattice point
    coef: Callable[[int, np.ndarray, int], np.ndarray]
    unit: int  # u = unit * row index, for the tail over dropped rows


def _e0_coef(u: int, v: np.ndarray, k: int) -> np.ndarray:
    # (-v/u) eps_u^k; the Jacobi symbol already vanishes unless gcd(u, v) = 1
    chi = jacobi_table(u)[(-v) % u].astype(float)
    return chi * complex(epsilon(u)) ** k


def _einf_coef(c: int, d: np.ndarray, k: int) -> np.ndarray:
    keep = (d % 2 == 1) & (np.gcd(d, c) == 1)
    g = gauss_phase_table(4 * c)[(-d) % (4 * c)]
    return np.where(keep, np.nan_to_num(g) ** k, 0)


def _ehalf_coef(d: int, c: np.ndarray, k: int) -> np.ndarray:
    keep = np.gcd(c, d) == 1
    g = gauss_phase_table(8 * d)[(d - 2 * c) % (8 * d)]
    return np.where(keep, np.nan_to_num(g) ** k, 0)


def _odd_rows(n: int) -> range:
    return range(1, n + 1, 2)


E0_FAMILY = _Family("E0", _odd_rows, lambda r: r, _e0_coef, 1)
EINF_FAMILY = _Family("Einf", lambda n: range(1, n + 1), lambda c: 4 * c, _einf_coef, 4)
EHALF_FAMILY = _Family("Ehalf", _odd_rows, lambda r: r, _ehalf_coef, 1)


@dataclass
class _LatticeSum:
    value: complex
    abs_sum: float
    lead: float
    terms: int
    rows: int
    max_log: float


def _lattice_sum(
    z: complex,
    k: int,
    fam: _Family,
    u_max: int,
    v_max: int,
    log_scale: float = 0.0,
    skip: frozenset = frozenset(),
) -> _LatticeSum:
    """Sum coef * exp(log_scale) * (u z + v)^(-k/2) over the truncated lattice.

    Order is fixed: ascending row, then ascending v, reduced with numpy's
    pairwise summation.  ``skip`` holds (row, v) pairs to leave out.
    """
    s = k / 2
    total = 0j
    abs_sum = 0.0
    lead = 0.0
    terms = 0
    rows = 0
    max_log = 0.0
    for r in fam.rows(u_max):
        rows += 1
        u = fam.u_of_row(r)
        centre = round(-u * z.real)
        v = np.arange(centre - v_max, centre + v_max + 1, dtype=np.int64)
        coef = fam.coef(r, v, k)
        keep = coef != 0
        if skip:
            for rr, vv in skip:
                if rr == r and centre - v_max <= vv <= centre + v_max:
                    keep[vv - (centre - v_max)] = False
        if not keep.any():
            continue
        logw = np.log(u * z + v[keep])
        t = coef[keep] * np.exp(log_scale - s * logw)
        total += t.sum()
        a = np.abs(t)
        abs_sum += float(a.sum())
        lead = max(lead, float(a.max()))
        max_log = max(max_log, float(np.abs(logw).max()))
        terms += int(keep.sum())
    return _LatticeSum(total, abs_sum, lead, terms, rows, max_log)


def _beta_integral(s: float) -> float:
    """Integral over R of (1 + w^2)^(-s/2)."""
    return math.exp(0.5 * math.log(math.pi) + math.lgamma(s / 2 - 0.5) - math.lgamma(s / 2))


def _row_window_tail(s: float, v_max: int, rows: int) -> float:
    # dropped v in a row satisfy |v + u x| >= v_max + 1/2; bound by t^(-s)
    a = v_max + 0.5
    per_side = math.exp(-s * math.log(a)) + math.exp((1 - s) * math.log(a)) / (s - 1)
    return 2 * rows * per_side


def _dropped_rows_tail(s: float, y: float, unit: int, u_max: int) -> float:
    # each dropped row sums to at most (Uy)^(-s) + I (Uy)^(1-s) with U = unit*row;
    # sum over all integer rows beyond u_max by the integral test
    Y = unit * y
    first = math.exp(-s * math.log(Y) + (1 - s) * math.log(u_max)) / (s - 1)
    second = _beta_integral(s) * math.exp((1 - s) * math.log(Y) + (2 - s) * math.log(u_max)) / (s - 2)
    return first + second


def lattice_tail(s: float, y: float, fam: _Family, u_max: int, v_max: int, rows: int) -> float:
    return _row_window_tail(s, v_max, rows) + _dropped_rows_tail(s, y, fam.unit, u_max)


def _first_row_lead(z: complex, s: float, fam: _Family, log_scale: float) -> float:
    u = fam.u_of_row(1)
    d = abs(u * z + round(-u * z.real))
    return math.exp(log_scale - s * math.log(d))


def auto_lattice_policy(
    z: "complex | ComplexPoint",
    k: "int | Weight",
    series: str,
    target_tail: float = 1e-12,
    base: TruncationPolicy | None = None,
    u_cap: int = 4096,
    v_cap: int = 1 << 16,
    max_terms: int = 1 << 23,
) -> TruncationPolicy:
    """Smallest cutoffs whose tail bound is below ``target_tail`` times the lead term.

    The lead term is estimated from the first row; for E_inf the constant 1
    also counts.  Cutoffs are capped, and so is the total number of lattice
    points (small k converges slowly); a capped policy evaluates uncertified.
    """
    z = as_point(z).z
    s = as_weight(k).s
    fam = _FAMILIES[series]
    lead = _first_row_lead(z, s, fam, 0.0)
    if series == "Einf":
        lead = max(lead, 1.0)
    budget = target_tail * lead / 2
    u_max = 1
    while _dropped_rows_tail(s, z.imag, fam.unit, u_max) > budget and u_max < u_cap:
        u_max *= 2
    rows = len(fam.rows(u_max))
    v_max = 4
    while _row_window_tail(s, v_max, rows) > budget and v_max < v_cap:
        v_max *= 2
    if rows * (2 * v_max + 1) > max_terms:
        warnings.warn(
            f"{series} at {z} with k={as_weight(k).k} needs more than {max_terms} lattice points "
            f"for tail {target_tail:g}; truncating",
            TruncationWarning,
            stacklevel=2,
        )
        while rows * (2 * v_max + 1) > max_terms:
            if v_max > 64 and (v_max >= u_max or u_max == 1):
                v_max //= 2
            else:
                u_max = max(1, u_max // 2)
            rows = len(fam.rows(u_max))
    base = base or TruncationPolicy()
    return replace(base, lattice_u_max=u_max, lattice_v_max=v_max, target_tail=target_tail)


_FAMILIES = {"E0": E0_FAMILY, "Einf": EINF_FAMILY, "Ehalf": EHALF_FAMILY}


def _rounding_allowance(k: int, acc: _LatticeSum) -> float:
    # each term is exp(log_scale - (k/2) log w): relative error grows with k|log w|
    return (k / 2 * acc.max_log + 16) * EPS * acc.abs_sum


def _evaluate(
    series: str,
    z: "complex | ComplexPoint",
    k: "int | Weight",
    policy: TruncationPolicy | None,
    log_scale: float = 0.0,
    skip: frozenset = frozenset(),
) -> EvalResult:
    w = as_weight(k)
    pt = as_point(z)
    if policy is None:
        policy = auto_lattice_policy(pt, w, series)
    fam = _FAMILIES[series]
    acc = _lattice_sum(pt.z, w.k, fam, policy.lattice_u_max, policy.lattice_v_max, log_scale, skip)
    tail = lattice_tail(w.s, pt.y, fam, policy.lattice_u_max, policy.lattice_v_max, acc.rows)
    tail = tail * math.exp(log_scale) + _rounding_allowance(w.k, acc)
    value = acc.value
    lead = acc.lead
    if series == "Einf":
        value = 1 + cmath.exp(1j * math.pi * w.k / 4) * value
        lead = max(lead, 1.0)
    elif series == "Ehalf":
        value = cmath.exp(-1j * math.pi * w.k / 4) * value
    certified = tail <= policy.target_tail * max(lead, abs(value))
    return EvalResult(complex(value), float(tail), acc.terms, bool(certified), float(lead))


def eval_E_inf(z, k, policy: TruncationPolicy | None = None) -> EvalResult:
    """1 + e(k/8) * sum over c > 0, (d, 2c) = 1 of G(-d/4c)^k (4cz + d)^(-k/2)."""
    return _evaluate("Einf", z, k, policy)


def eval_E_0_lattice(z, k, policy: TruncationPolicy | None = None) -> EvalResult:
    """Sum over u > 0, (u, 2v) = 1 of (-v/u) eps_u^k (uz + v)^(-k/2)."""
    return _evaluate("E0", z, k, policy)


def eval_E_half_lattice(z, k, policy: TruncationPolicy | None = None) -> EvalResult:
    """e(-k/8) * sum over d > 0, (2c, d) = 1 of G((d - 2c)/8d)^k (dz + c)^(-k/2)."""
    return _evaluate("Ehalf", z, k, policy)


# ---------------------------------------------------------------------------
# Fourier coefficients of E_0


@dataclass(frozen=True)
class LadderStep:
    p: int
    v: int
    branch: str  # "p=2", "p|l0" or "chi"
    l0: int
    chi: int  # chi_{(-1)^lambda l0}(p); 0 unless branch == "chi"
    ratio: float


@dataclass(frozen=True)
class FourierCoefficient:
    l: int
    value: complex
    lam: int
    squarefree_part: int
    ladder: tuple[LadderStep, ...] = ()
    tail: float = 0.0

    @property
    def chi_at_p(self) -> dict[int, int]:
        return {st.p: st.chi for st in self.ladder if st.branch == "chi"}

    @property
    def rotated(self) -> complex:
        """e(k/8) * b_l; real for every l."""
        k = 2 * self.lam + 1
        return cmath.exp(1j * math.pi * k / 4) * self.value


def _log_prefactor(l: int, s: float) -> float:
    return s * math.log(math.pi) + (s - 1) * math.log(l) - math.lgamma(s)


def ladder_ratio(p: int, v: int, l0: int, k: int) -> LadderStep:
    """b_{p^(2v) l0} / b_{l0} for p^2 not dividing l0."""
    lam = (k - 1) // 2
    geom = sum(float(p) ** (h * (k - 2)) for h in range(v + 1))
    if p == 2:
        return LadderStep(p, v, "p=2", l0, 0, float(2.0 ** ((k - 2) * v)))
    if l0 % p == 0:
        return LadderStep(p, v, "p|l0", l0, 0, geom)
    chi = jacobi(-1, p) ** lam * jacobi(l0, p)
    # the correction runs over h < v: b_{p^2 l0} / b_{l0} = 1 + p^(k-2) - chi p^(lam-1)
    corr = sum(float(p) ** (h * (k - 2)) for h in range(v))
    return LadderStep(p, v, "chi", l0, chi, geom - chi * float(p) ** (lam - 1) * corr)


def _chi_table(a: int, period: int) -> np.ndarray:
    # n -> (a/n) on odd n > 0 is periodic with period dividing 8|a|
    t = np.zeros(period, dtype=float)
    for n in range(1, period, 2):
        t[n] = jacobi(a, n)
    return t


def _b_squarefree(l: int, w: Weight, n0_max: int, rel_target: float = 1e-17) -> tuple[complex, float]:
    """Coefficient for squarefree l via the n0 / n1 double sum; returns (value, tail)."""
    k, s = w.k, w.s
    # the n1 sum factors out: sum over odd n1 | l of mu(n1) n1^(1-k)
    n1_sum = 0.0
    n1_abs = 0.0
    for n1 in range(1, l + 1, 2):
        if l % n1 == 0:
            mu = moebius(n1)
            n1_sum += mu * float(n1) ** (1 - k)
            n1_abs += abs(mu) * float(n1) ** (1 - k)
    decay = (k - 1) / 2  # n0 terms shrink like n0^(-decay)
    # smallest odd N with sum_{n0 > N} n0^(-decay) <= rel_target
    need = (rel_target * (decay - 1)) ** (-1 / (decay - 1))
    N = int(min(n0_max, max(3, math.ceil(need))))
    N -= 1 - N % 2
    n0 = np.arange(1, N + 1, 2, dtype=np.int64)
    n0 = n0[squarefree_sieve(N)[n0]]
    period = 8 * l
    chi = _chi_table(-l, period)[n0 % period]
    # eps_{n0}^(k+1) is +-1 since k + 1 is even
    eps_pow = np.where(n0 % 4 == 1, 1.0, (-1.0) ** ((k + 1) // 2))
    terms = eps_pow * chi * n0.astype(float) ** (-decay)
    inner = float(terms.sum())
    tail = n1_abs * (N ** (1 - decay)) / (decay - 1) + (N + 16) * EPS
    scale = math.exp(_log_prefactor(l, s))
    phase = cmath.exp(-1j * math.pi * k / 4)
    return scale * phase * n1_sum * inner, scale * tail


def fourier_b(l: int, k: "int | Weight", policy: TruncationPolicy | None = None) -> FourierCoefficient:
    """b_l from the squarefree-part formula and the prime-square ladder."""
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    w = as_weight(k)
    policy = policy or TruncationPolicy()
    dec = squarefree_decompose(l)
    core, tail = _b_squarefree(dec.squarefree_part, w, policy.coeff_n0_max)
    steps = []
    cur = dec.squarefree_part
    ratio = 1.0
    for p, v in dec.prime_square_ladder:
        st = ladder_ratio(p, v, cur, w.k)
        steps.append(st)
        ratio *= st.ratio
        cur *= p ** (2 * v)
    return FourierCoefficient(l, core * ratio, w.lam, dec.squarefree_part, tuple(steps), tail * abs(ratio))


def fourier_b_direct(l: int, k: "int | Weight", n_max: int = 1000) -> tuple[complex, float]:
    """b_l by the defining double sum over odd n <= n_max.  Returns (value, tail).

    Independent of :func:`fourier_b`: no squarefree reduction, no ladder.
    """
    w = as_weight(k)
    k_, s = w.k, w.s
    total = 0j
    for n in range(1, n_max + 1, 2):
        j = np.arange(n, dtype=np.int64)
        e = np.exp(-2j * np.pi * ((l * j) % n) / n)
        inner = complex((jacobi_table(n) * e).sum())
        total += complex(epsilon(n)) ** k_ * n ** (-s) * inner
    # |inner sum| <= n, so the dropped part is at most sum_{n > N} n^(1-s)
    tail = n_max ** (2 - s) / (s - 2)
    scale = math.exp(_log_prefactor(l, s))
    return scale * cmath.exp(-1j * math.pi * k_ / 4) * total, scale * tail


def _fourier_tail(L: int, s: float, rho: float) -> float:
    """Bound on sum_{l > L} 2^s |b_l| rho^l using |b_l| <= pi^s l^(s-1) Z / Gamma(s)."""
    kappa = ((L + 2) / (L + 1)) ** (s - 1) * rho
    if kappa >= 1:
        return math.inf
    Z = 1 + 1 / (s - 2)
    log_first = s * math.log(2 * math.pi) - math.lgamma(s) + (s - 1) * math.log(L + 1) + (L + 1) * math.log(rho)
    return Z * math.exp(log_first) / (1 - kappa)


_B_CACHE: dict[tuple[int, int, int], FourierCoefficient] = {}


def cached_fourier_b(l: int, w: Weight, policy: TruncationPolicy) -> FourierCoefficient:
    key = (l, w.k, policy.coeff_n0_max)
    if key not in _B_CACHE:
        _B_CACHE[key] = fourier_b(l, w, policy)
    return _B_CACHE[key]


def eval_E_0_fourier(z, k, policy: TruncationPolicy | None = None) -> EvalResult:
    """2^(k/2) * sum_{l >= 1} b_l q^l with q = e(z), truncated adaptively.

    The number of coefficients grows until the geometric tail bound drops
    below ``target_tail`` times the first term, up to ``fourier_l_max``.
    Rounding from cancellation between large terms is folded into the tail.
    """
    w = as_weight(k)
    pt = as_point(z)
    policy = policy or TruncationPolicy()
    s = w.s
    rho = math.exp(-2 * math.pi * pt.y)
    b1 = cached_fourier_b(1, w, policy)
    lead = 2**s * abs(b1.value) * rho
    L = 1
    while _fourier_tail(L, s, rho) > policy.target_tail * lead and L < policy.fourier_l_max:
        L += 1
    tail = _fourier_tail(L, s, rho)
    total = 0j
    abs_sum = 0.0
    coef_tail = 0.0
    for l in range(1, L + 1):
        b = cached_fourier_b(l, w, policy)
        frac = (l * pt.x) % 1.0
        ql = cmath.exp(2j * math.pi * frac) * math.exp(-2 * math.pi * l * pt.y)
        t = b.value * ql
        total += t
        abs_sum += abs(t)
        coef_tail += b.tail * rho**l
    value = 2**s * total
    tail = tail + 2**s * coef_tail + 2**s * (4 * L + 64) * EPS * abs_sum
    certified = math.isfinite(tail) and tail <= policy.target_tail * max(lead, abs(value))
    if not certified:
        warnings.warn(
            f"Fourier expansion at y={pt.y:.6g}, k={w.k} does not reach target "
            f"{policy.target_tail:g} with l <= {L} (tail {tail:.3g})",
            TruncationWarning,
            stacklevel=2,
        )
    return EvalResult(complex(value), float(tail) if math.isfinite(tail) else math.inf, L, bool(certified), float(lead))


def evaluate(series: str, z, k, policy: TruncationPolicy | None = None, expansion: str = "lattice") -> EvalResult:
    """Dispatch by name: series in {"einf", "e0", "ehalf"}."""
    series = series.lower()
    if series in ("einf", "e_inf", "inf"):
        return eval_E_inf(z, k, policy)
    if series in ("e0", "e_0", "zero"):
        if expansion == "fourier":
            return eval_E_0_fourier(z, k, policy)
        return eval_E_0_lattice(z, k, policy)
    if series in ("ehalf", "e_half", "half"):
        return eval_E_half_lattice(z, k, policy)
    raise ValueError(f"unknown series {series!r}")
