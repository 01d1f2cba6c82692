"""Lagrange-Sylvester route to the expansion coefficients.

On the eigenvectors of M = 2 n.J the exponential exp(alpha M) is a
polynomial sum_m C_m M^m, so the C_m solve a Vandermonde system in the
eigenvalues 2j, 2j-2, ..., -2j.  The matrix is inverted exactly, once per
spin, and the inverse is then applied to the exponentials for any alpha.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import DomainError, Spin, as_spin
from .series import to_longdouble

__all__ = [
    "VANDERMONDE_MAX_TWICE_J",
    "VandermondeSystem",
    "DeterminantReport",
    "eigenvalues",
    "vandermonde_matrix",
    "exact_inverse",
    "solve_coefficients",
    "vandermonde_det",
    "prime_multiplicity_formula",
    "primes_up_to",
]

VANDERMONDE_MAX_TWICE_J = 60


@dataclass(frozen=True)
class VandermondeSystem:
    spin: Spin
    V: tuple[tuple[int, ...], ...]

    @property
    def eigenvalues(self) -> list[int]:
        return [row[1] if len(row) > 1 else 0 for row in self.V]


def eigenvalues(spin) -> list[int]:
    """Eigenvalues of 2 n.J ordered 2j, 2j-2, ..., -2j."""
    spin = as_spin(spin)
    return [spin.twice_j - 2 * i for i in range(spin.dim)]


def vandermonde_matrix(spin) -> VandermondeSystem:
    spin = as_spin(spin)
    rows = tuple(tuple(lam**p for p in range(spin.dim)) for lam in eigenvalues(spin))
    return VandermondeSystem(spin, rows)


def _gauss_jordan_inverse(matrix) -> list[list[Fraction]]:
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == k)) for k in range(n)]
         for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise DomainError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


@lru_cache(maxsize=None)
def exact_inverse(twice_j: int) -> tuple[tuple[Fraction, ...], ...]:
    """V[j]^-1 as exact rationals, cached per spin."""
    system = vandermonde_matrix(twice_j)
    return tuple(tuple(row) for row in _gauss_jordan_inverse(system.V))


@lru_cache(maxsize=None)
def _inverse_longdouble(twice_j: int) -> np.ndarray:
    inv = exact_inverse(twice_j)
    return np.array([[to_longdouble(x) for x in row] for row in inv], dtype=np.longdouble)


def solve_coefficients(spin, theta: float, *, extended: bool = False) -> np.ndarray:
    """C_m[j](alpha = i theta/2) for m = 0 .. 2j from V^-1 times the exponentials.

    With ``extended=True`` the result keeps long-double precision, which
    callers summing the full matrix polynomial need.
    """
    spin = as_spin(spin)
    if spin.twice_j > VANDERMONDE_MAX_TWICE_J:
        raise DomainError(
            f"2j={spin.twice_j} exceeds the exact-inverse ceiling {VANDERMONDE_MAX_TWICE_J}"
        )
    half = np.longdouble(theta) / 2
    lam = np.array(eigenvalues(spin), dtype=np.longdouble)
    # exp(lambda * alpha) with alpha = i theta/2
    phases = np.cos(lam * half) + 1j * np.sin(lam * half)
    coeffs = _inverse_longdouble(spin.twice_j) @ phases
    return coeffs if extended else coeffs.astype(complex)


@dataclass
class DeterminantReport:
    spin: Spin
    det: int
    factorization: dict[int, int] = field(default_factory=dict)
    formula: dict[int, int] = field(default_factory=dict)
    cofactor: int = 1

    @property
    def expected_sign(self) -> int:
        return -1 if (self.spin.dim // 2) % 2 else 1

    @property
    def sign_ok(self) -> bool:
        return (self.det > 0) - (self.det < 0) == self.expected_sign

    @property
    def mismatches(self) -> dict[int, tuple[int, int]]:
        """Primes where the floor-sum formula disagrees with trial division."""
        primes = set(self.factorization) | set(self.formula)
        return {
            p: (self.formula.get(p, 0), self.factorization.get(p, 0))
            for p in sorted(primes)
            if self.formula.get(p, 0) != self.factorization.get(p, 0)
        }

    @property
    def ok(self) -> bool:
        return self.sign_ok and self.cofactor == 1 and not self.mismatches


def _bareiss_det(matrix) -> int:
    a = [list(row) for row in matrix]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for col in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                a[i][col] = (a[i][col] * a[k][k] - a[i][k] * a[k][col]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(n + 1) if sieve[p]]


def _floor_log(k: int, p: int) -> int:
    # floor(ln k / ln p) without floating point
    e = 0
    while p ** (e + 1) <= k:
        e += 1
    return e


def prime_multiplicity_formula(spin, p: int) -> int:
    """Exponent of prime p in det V[j] from the double floor sum.

    For p >= 3 the sum equals m_p(j) + j(2j+1); for p = 2 it is m_2(j).
    """
    spin = as_spin(spin)
    total = sum(
        k // p**m for k in range(1, spin.twice_j + 1) for m in range(_floor_log(k, p) + 1)
    )
    if p == 2:
        return total
    # j(2j+1) = twice_j * (twice_j + 1) / 2, always an integer
    return total - spin.twice_j * (spin.twice_j + 1) // 2


def vandermonde_det(spin) -> DeterminantReport:
    """Exact det V[j] with its prime multiplicities, checked against the floor sums."""
    spin = as_spin(spin)
    det = _bareiss_det(vandermonde_matrix(spin).V)
    factors: dict[int, int] = {}
    rest = abs(det)
    # every difference of eigenvalues is even, so 2 divides det V[j] already at 2j = 1
    primes = primes_up_to(max(spin.twice_j, 2)) if spin.twice_j else []
    for p in primes:
        while rest % p == 0:
            rest //= p
            factors[p] = factors.get(p, 0) + 1
    formula = {p: prime_multiplicity_formula(spin, p) for p in primes}
    formula = {p: m for p, m in formula.items() if m}
    return DeterminantReport(spin, det, factors, formula, rest)
