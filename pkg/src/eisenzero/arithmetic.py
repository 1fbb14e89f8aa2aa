"""Exact number-theoretic primitives used by every series term.

Jacobi symbols, the fourth-root-of-unity multiplier ``epsilon``, quadratic
Gauss sums, the Moebius function and square-part stripping.  Everything here
is a pure function of integer arguments.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

INT_LIMIT = 2**31


class ArithmeticInputError(ValueError):
    """Raised for arguments outside a primitive's domain."""


class ZeroGaussSum(ArithmeticInputError):
    """The Gauss sum vanishes, so it has no unit normalization."""


def _guard(*values: int) -> None:
    for v in values:
        if abs(v) >= INT_LIMIT:
            raise ArithmeticInputError(f"integer {v} exceeds the 2**31 guard")


@dataclass(frozen=True)
class UnitPhase:
    """A complex number of modulus one."""

    value: complex

    def __post_init__(self):
        if abs(abs(self.value) - 1.0) > 1e-12:
            raise ArithmeticInputError(f"|{self.value}| != 1")

    def __mul__(self, other: "UnitPhase") -> "UnitPhase":
        return UnitPhase(self.value * other.value)

    def __pow__(self, k: int) -> "UnitPhase":
        return UnitPhase(self.value**k)

    def __complex__(self) -> complex:
        return complex(self.value)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1 and any integer a."""
    if n < 1 or n % 2 == 0:
        raise ArithmeticInputError(f"Jacobi symbol needs odd positive n, got {n}")
    _guard(a, n)
    a %= n
    sign = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


@lru_cache(maxsize=4096)
def jacobi_table(n: int) -> np.ndarray:
    """Array t with t[j] = (j/n) for j = 0..n-1 (read-only)."""
    t = np.array([jacobi(j, n) for j in range(n)], dtype=np.int8)
    t.setflags(write=False)
    return t


def epsilon(u: int) -> UnitPhase:
    """1 if u = 1 (mod 4), i if u = 3 (mod 4)."""
    if u % 2 == 0:
        raise ArithmeticInputError(f"epsilon needs odd u, got {u}")
    return UnitPhase(1 + 0j) if u % 4 == 1 else UnitPhase(1j)


def gauss_sum(m: int, n: int) -> complex:
    """g(m/n) = sum over a mod n of exp(2 pi i a^2 m / n), summed directly."""
    if n < 1:
        raise ArithmeticInputError(f"Gauss sum needs n >= 1, got {n}")
    _guard(m, n)
    a = np.arange(n, dtype=np.int64)
    r = (a * a % n) * (m % n) % n
    return complex(np.exp(2j * np.pi * r / n).sum())


def normalized_gauss_sum(m: int, n: int) -> UnitPhase:
    """G(m/n) = g(m/n) / |g(m/n)|."""
    g = gauss_sum(m, n)
    # |g| is 0, sqrt(n), sqrt(2n) or a small multiple; anything below 1e-6
    # is rounding noise around an exact zero.
    if abs(g) < 1e-6:
        raise ZeroGaussSum(f"g({m}/{n}) = 0")
    return UnitPhase(g / abs(g))


@lru_cache(maxsize=2048)
def gauss_phase_table(n: int) -> np.ndarray:
    """G(m/n) for every residue m mod n at once.

    g(m/n) = sum_r N(r) e(mr/n), where N(r) counts square roots of r mod n,
    so the whole row is one inverse DFT of the square-root histogram.
    Entries where g vanishes are NaN.
    """
    if n < 1:
        raise ArithmeticInputError(f"Gauss sum needs n >= 1, got {n}")
    _guard(n)
    a = np.arange(n, dtype=np.int64)
    counts = np.bincount(a * a % n, minlength=n).astype(float)
    g = np.fft.ifft(counts) * n
    mod = np.abs(g)
    out = np.full(n, np.nan + 0j)
    ok = mod > 1e-6 * math.sqrt(n)
    out[ok] = g[ok] / mod[ok]
    out.setflags(write=False)
    return out


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (n stays small here)."""
    if n < 1:
        raise ArithmeticInputError(f"cannot factor {n}")
    _guard(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def moebius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def squarefree_sieve(limit: int) -> np.ndarray:
    """Boolean mask m with m[n] True iff n is squarefree, for 0 <= n <= limit."""
    mask = np.ones(limit + 1, dtype=bool)
    mask[0] = False
    p = 2
    while p * p <= limit:
        mask[p * p :: p * p] = False
        p += 1
    return mask


@dataclass(frozen=True)
class SquarefreeDecomposition:
    """l = squarefree_part * prod(p**(2*v) for p, v in ladder)."""

    original: int
    squarefree_part: int
    prime_square_ladder: tuple[tuple[int, int], ...]

    def reconstruct(self) -> int:
        out = self.squarefree_part
        for p, v in self.prime_square_ladder:
            out *= p ** (2 * v)
        return out


def squarefree_decompose(l: int) -> SquarefreeDecomposition:
    """Strip p^(2v) factors, primes in increasing order."""
    ladder = []
    core = 1
    for p, e in sorted(factorize(l).items()):
        if e >= 2:
            ladder.append((p, e // 2))
        if e % 2:
            core *= p
    return SquarefreeDecomposition(l, core, tuple(ladder))


def root_of_unity(num: int, den: int) -> complex:
    """exp(2 pi i num/den), reduced first so large num stays accurate."""
    return cmath.exp(2j * math.pi * ((num % den) / den))
