"""Exact-rational Taylor machinery for the rotation coefficient polynomials.

Everything here works in the variable ``x = sin^2(theta/2)``.  The spin-j
coefficient ``c_k(theta)`` is ``cos(theta/2)**eps`` times a Taylor truncation
of ``(arcsin(sqrt x)/sqrt x)**k / sqrt(1-x)**eps``, where ``eps`` is the parity
of ``2j - k``.  Coefficients stay as :class:`fractions.Fraction` until the
moment of evaluation.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from decimal import Context
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import DomainError, Spin, as_spin, central_difference

__all__ = [
    "RationalPoly",
    "SeriesCache",
    "series_inv_sqrt",
    "series_arcsin_power",
    "coefficient_polynomial",
    "eval_coefficient",
    "top_down_coefficient",
    "top_down_coefficients",
    "c0_half_integer",
    "eval_coefficient_ext",
    "to_longdouble",
    "verify_derivative_pairing",
    "verify_half_integer_closure",
]

_DECIMAL = Context(prec=40)


@dataclass(frozen=True)
class RationalPoly:
    """Polynomial in x with exact coefficients and a cos(theta/2) parity flag."""

    coeffs: tuple[Fraction, ...]
    parity: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def as_floats(self) -> tuple[float, ...]:
        return _float_coeffs(self.coeffs)

    def as_longdoubles(self) -> tuple:
        return _longdouble_coeffs(self.coeffs)

    def __str__(self):
        terms = []
        for m, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if m == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else f"{c}*"
                terms.append(f"{head}x" + (f"^{m}" if m > 1 else ""))
        body = " + ".join(terms) or "0"
        return f"cos(theta/2)*({body})" if self.parity else body


def _mul_trunc(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> list[Fraction]:
    # Cauchy product keeping terms x^0 .. x^(n-1).
    out = [Fraction(0)] * n
    for i, ai in enumerate(a[:n]):
        if ai == 0:
            continue
        for k, bk in enumerate(b[: n - i]):
            out[i + k] += ai * bk
    return out


def _inv_sqrt_term(n: int) -> Fraction:
    return Fraction(math.comb(2 * n, n), 4**n)


def _arcsin_ratio_term(n: int) -> Fraction:
    # arcsin(z) = sum (2n)! z^(2n+1) / (4^n (n!)^2 (2n+1)), divided by z.
    return Fraction(math.comb(2 * n, n), 4**n * (2 * n + 1))


class SeriesCache:
    """Thread-safe store of exact series prefixes.

    Entries only ever grow: a longer request extends the stored prefix and
    never changes the terms already there.
    """

    def __init__(self):
        self._lock = threading.RLock()
        self._inv_sqrt: list[Fraction] = []
        self._arcsin: list[Fraction] = []
        self._powers: dict[int, list[Fraction]] = {}

    def clear(self):
        with self._lock:
            self._inv_sqrt.clear()
            self._arcsin.clear()
            self._powers.clear()

    def inv_sqrt(self, n_terms: int) -> list[Fraction]:
        with self._lock:
            for n in range(len(self._inv_sqrt), n_terms):
                self._inv_sqrt.append(_inv_sqrt_term(n))
            return self._inv_sqrt[:n_terms]

    def _arcsin_ratio(self, n_terms: int) -> list[Fraction]:
        for n in range(len(self._arcsin), n_terms):
            self._arcsin.append(_arcsin_ratio_term(n))
        return self._arcsin[:n_terms]

    def arcsin_power(self, k: int, n_terms: int) -> list[Fraction]:
        with self._lock:
            if k == 0:
                return [Fraction(1)] + [Fraction(0)] * (n_terms - 1)
            cached = self._powers.get(k)
            if cached is not None and len(cached) >= n_terms:
                return cached[:n_terms]
            base = self._arcsin_ratio(n_terms)
            if k == 1:
                power = list(base)
            else:
                # k - 1 truncated multiplications, reusing the (k-1)th power.
                power = _mul_trunc(self.arcsin_power(k - 1, n_terms), base, n_terms)
            self._powers[k] = power
            return power[:n_terms]


_CACHE = SeriesCache()


def default_cache() -> SeriesCache:
    return _CACHE


def series_inv_sqrt(n_terms: int) -> list[Fraction]:
    """First ``n_terms`` Taylor coefficients of 1/sqrt(1-x), i.e. C(2n,n)/4^n."""
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    return list(_CACHE.inv_sqrt(n_terms))


def series_arcsin_power(k: int, n_terms: int) -> list[Fraction]:
    """First ``n_terms`` Taylor coefficients of (arcsin(sqrt x)/sqrt x)**k."""
    if k < 0:
        raise DomainError("k must be >= 0")
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    return list(_CACHE.arcsin_power(k, n_terms))


def coefficient_polynomial(spin, k: int) -> RationalPoly:
    """The exact polynomial part of c_k for the given spin.

    Degree is floor(j - k/2); the parity flag is (2j - k) mod 2 and, when
    set, both the cos(theta/2) prefactor and the 1/sqrt(1-x) series factor
    are in effect.
    """
    spin = as_spin(spin)
    if not 0 <= k <= spin.twice_j:
        raise DomainError(f"k={k} outside [0, {spin.twice_j}]")
    return _coefficient_polynomial(spin.twice_j, k)


@lru_cache(maxsize=None)
def _coefficient_polynomial(twice_j: int, k: int) -> RationalPoly:
    descent = twice_j - k
    parity = descent % 2
    n_terms = descent // 2 + 1
    series = _CACHE.arcsin_power(k, n_terms)
    if parity:
        series = _mul_trunc(series, _CACHE.inv_sqrt(n_terms), n_terms)
    series = list(series)
    # k = 0 at integer spin truncates the constant series 1; drop the zero tail
    while len(series) > 1 and series[-1] == 0:
        series.pop()
    return RationalPoly(tuple(series), parity)


def to_longdouble(value: Fraction) -> np.longdouble:
    """Round an exact rational to the nearest extended-precision float."""
    q = _DECIMAL.divide(value.numerator, value.denominator)
    return np.longdouble(format(q, "e"))


@lru_cache(maxsize=4096)
def _float_coeffs(coeffs: tuple[Fraction, ...]) -> tuple[float, ...]:
    return tuple(float(c) for c in coeffs)


@lru_cache(maxsize=4096)
def _longdouble_coeffs(coeffs: tuple[Fraction, ...]) -> tuple:
    return tuple(to_longdouble(c) for c in coeffs)


def _horner(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def eval_coefficient(poly: RationalPoly, theta: float) -> float:
    """Evaluate c_k(theta) from its exact polynomial in double precision."""
    half = 0.5 * theta
    x = math.sin(half) ** 2
    value = _horner(poly.as_floats(), x)
    if poly.parity:
        value *= math.cos(half)
    return value


def eval_coefficient_ext(poly: RationalPoly, theta) -> np.longdouble:
    """Same as :func:`eval_coefficient` but carried in extended precision."""
    half = np.longdouble(theta) / 2
    x = np.sin(half) ** 2
    value = _horner(poly.as_longdoubles(), x)
    if poly.parity:
        value *= np.cos(half)
    return value


def _scaled_power(z: complex, k: int) -> complex:
    # z**k / k! without forming k! (overflows a double past k = 170).
    out = 1.0 + 0j
    for i in range(1, k + 1):
        out *= z / i
    return out


def top_down_coefficient(spin, m: int, theta: float) -> complex:
    """C_{2j-m}[j](theta), the coefficient of (2 n.J)^(2j-m).

    ``m`` counts steps down from the top power, so ``m = 0`` gives the
    coefficient of the highest power (2 n.J)^(2j).
    """
    spin = as_spin(spin)
    if not 0 <= m <= spin.twice_j:
        raise DomainError(f"m={m} outside [0, {spin.twice_j}]")
    power = spin.twice_j - m
    poly = coefficient_polynomial(spin, power)
    return eval_coefficient(poly, theta) * _scaled_power(1j * math.sin(0.5 * theta), power)


def top_down_coefficients(spin, theta: float) -> list[complex]:
    """All C_m[j](theta), indexed by the power m = 0 .. 2j."""
    spin = as_spin(spin)
    return [top_down_coefficient(spin, spin.twice_j - p, theta) for p in range(spin.dim)]


def c0_half_integer(spin, theta: float) -> float:
    """C_0 for half-integer spin: cos(theta/2) times Trunc_{j-1/2} of 1/sqrt(1-x)."""
    spin = as_spin(spin)
    if spin.is_integer:
        raise DomainError("c0_half_integer needs half-integer spin")
    n_terms = (spin.twice_j - 1) // 2 + 1
    half = 0.5 * theta
    coeffs = [float(c) for c in _CACHE.inv_sqrt(n_terms)]
    return math.cos(half) * _horner(coeffs, math.sin(half) ** 2)


def verify_derivative_pairing(spin, theta: float, h: float = 1e-5) -> float:
    """max over n of |i C_{2j-2n-1} - 2 d/dtheta C_{2j-2n}|.

    Differentiating a no-cosine coefficient gives the next one down.
    """
    spin = as_spin(spin)
    worst = 0.0
    for m in range(0, spin.twice_j, 2):
        deriv = central_difference(lambda t: top_down_coefficient(spin, m, t), theta, h)
        below = top_down_coefficient(spin, m + 1, theta)
        worst = max(worst, abs(1j * below - 2 * deriv))
    return worst


def verify_half_integer_closure(spin, theta: float, h: float = 1e-5) -> float:
    """|dC_0/dalpha - (-1)^(j-1/2) ((2j)!/((j-1/2)! 2^(j-1/2)))^2 C_2j| for half-integer j.

    d/dalpha = -2i d/dtheta along alpha = i theta/2.
    """
    spin = as_spin(spin)
    if spin.is_integer:
        raise DomainError("closure relation needs half-integer spin")
    half_floor = (spin.twice_j - 1) // 2
    factor = Fraction(math.factorial(spin.twice_j), math.factorial(half_floor) * 2**half_floor) ** 2
    sign = -1 if half_floor % 2 else 1
    deriv = -2j * central_difference(lambda t: c0_half_integer(spin, t), theta, h)
    top = top_down_coefficient(spin, 0, theta)
    return abs(deriv - sign * float(factor) * top)
