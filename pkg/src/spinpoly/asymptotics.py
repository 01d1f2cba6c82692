"""Large-spin limits, generating-function partial sums, and the Gamma identity."""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import DomainError, Spin, as_spin
from .series import coefficient_polynomial, top_down_coefficient

__all__ = [
    "LimitSpec",
    "ConvergenceRow",
    "DISCONTINUITY_WINDOW",
    "GENERATING_ORDER_CAP",
    "periodicized_monomial",
    "scaled_coefficient",
    "convergence_report",
    "convergence_csv",
    "kummer_m",
    "generating_function_check",
    "characteristic_identity_check",
]

DISCONTINUITY_WINDOW = 0.3
GENERATING_ORDER_CAP = 60
EIGENVALUE_GUARD = 1e-6


@dataclass(frozen=True)
class LimitSpec:
    k: int
    parity: int

    def __post_init__(self):
        if self.k < 0:
            raise DomainError("k must be >= 0")
        if self.parity not in (0, 1):
            raise DomainError("parity must be 0 or 1")


def periodicized_monomial(spec: LimitSpec, theta):
    """Limit of c_k(theta) sin^k(theta/2) as j grows with the given spin parity.

    A 2pi-periodic copy of (theta/2)^k, sign-flipped on pi < |theta| < 2pi
    (mod 4pi) when the spin is half-integer.  Accepts scalars or arrays.
    """
    theta = np.asarray(theta, dtype=float)
    cell = np.floor(theta / (2 * np.pi) - 0.5)
    sign = np.where(((1 + cell) * spec.parity) % 2 == 0, 1.0, -1.0)
    value = sign * (0.5 * (theta - 2 * np.pi - 2 * np.pi * cell)) ** spec.k
    return value if value.ndim else float(value)


def scaled_coefficient(spin, k: int, theta):
    """c_k(theta) sin^k(theta/2), the quantity plotted against its limit."""
    poly = coefficient_polynomial(spin, k)
    coeffs = poly.as_floats()
    half = 0.5 * np.asarray(theta, dtype=float)
    s = np.sin(half)
    x = s * s
    acc = np.zeros_like(x)
    for c in reversed(coeffs):
        acc = acc * x + c
    if poly.parity:
        acc = acc * np.cos(half)
    value = acc * s**k
    return value if value.ndim else float(value)


@dataclass(frozen=True)
class ConvergenceRow:
    twice_j: int
    k: int
    sup_error: float


def interior_mask(theta_grid, delta: float = DISCONTINUITY_WINDOW) -> np.ndarray:
    """True where theta is farther than delta from every odd multiple of pi."""
    theta = np.asarray(theta_grid, dtype=float)
    distance = np.abs(np.mod(theta - np.pi, 2 * np.pi))
    distance = np.minimum(distance, 2 * np.pi - distance)
    return distance > delta


def convergence_report(
    k: int,
    parity: int,
    theta_grid: Sequence[float],
    spins: Iterable,
    delta: float = DISCONTINUITY_WINDOW,
) -> list[ConvergenceRow]:
    """Sup-distance to the limit for each spin, away from the jumps at theta = pi mod 2pi."""
    spins = [as_spin(s) for s in spins]
    if not spins:
        raise DomainError("no spins given")
    if any(s.bose_fermi_index != parity for s in spins):
        raise DomainError(f"all spins must have parity {parity}")
    if any(b.twice_j <= a.twice_j for a, b in zip(spins, spins[1:])):
        raise DomainError("spins must be strictly ascending")
    theta = np.asarray(theta_grid, dtype=float)
    theta = theta[interior_mask(theta, delta)]
    limit = periodicized_monomial(LimitSpec(k, parity), theta)
    rows = []
    for spin in spins:
        if k > spin.twice_j:
            raise DomainError(f"k={k} exceeds 2j={spin.twice_j}")
        err = np.max(np.abs(scaled_coefficient(spin, k, theta) - limit)) if theta.size else 0.0
        rows.append(ConvergenceRow(spin.twice_j, k, float(err)))
    return rows


def convergence_csv(rows: Iterable[ConvergenceRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["twice_j", "k", "sup_error"])
    for row in rows:
        writer.writerow([row.twice_j, row.k, f"{row.sup_error:.12e}"])
    return buf.getvalue()


def kummer_m(a: complex, b: complex, z: complex, max_terms: int = 10_000) -> complex:
    """Confluent hypergeometric M(a, b, z) summed term by term to convergence."""
    total = 1.0 + 0j
    term = 1.0 + 0j
    for n in range(max_terms):
        term *= (a + n) / (b + n) * z / (n + 1)
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
    raise ArithmeticError("Kummer series did not converge")


def generating_function_check(
    order: int, t: float, theta: float, M: int = GENERATING_ORDER_CAP
) -> tuple[complex, complex]:
    """(partial sum, closed form) of G_order(t) = sum_m t^m C_{m-order}[m/2]."""
    if order not in (0, 1, 2):
        raise DomainError("order must be 0, 1 or 2")
    if M < order:
        raise DomainError("M must be >= order")
    partial = 0j
    for m in range(order, M + 1):
        partial += t**m * top_down_coefficient(Spin(m), order, theta)

    half = 0.5 * theta
    s, c = math.sin(half), math.cos(half)
    z = 1j * t * s
    if order == 0:
        closed = cmath.exp(z)
    elif order == 1:
        closed = c * t * cmath.exp(z)
    elif s == 0.0:
        # M(a, b, 0) = 1 whatever the parameters
        closed = complex(t * t)
    else:
        b = 6.0 / (s * s)
        closed = t * t * kummer_m(b + 1.0, b, z)
    return partial, closed


def _log_abs_gamma_sign(x: float) -> tuple[float, int]:
    if x > 0:
        return math.lgamma(x), 1
    if x == math.floor(x):
        raise DomainError(f"Gamma pole at {x}")
    return math.lgamma(x), -1 if math.ceil(-x) % 2 else 1


def characteristic_identity_check(spin, lam: float) -> float:
    """Relative error between det(lam - 2 n.J) and its Gamma-function form.

    Both sides are taken in log space so large spins do not overflow.
    """
    spin = as_spin(spin)
    j = spin.j
    roots = [spin.twice_j - 2 * n for n in range(spin.dim)]
    if min(abs(lam - r) for r in roots) < EIGENVALUE_GUARD:
        raise DomainError(f"lambda={lam} is an eigenvalue of 2 n.J")

    log_lhs, sign_lhs = 0.0, 1
    for r in roots:
        d = lam - r
        log_lhs += math.log(abs(d))
        sign_lhs *= 1 if d > 0 else -1

    g1, s1 = _log_abs_gamma_sign(1 + j + lam / 2)
    g2, s2 = _log_abs_gamma_sign(1 + j - lam / 2)
    sine = math.sin(math.pi * (lam / 2 - j))
    if sine == 0.0:
        raise DomainError(f"lambda={lam} sits on a zero of the sine factor")
    log_rhs = spin.dim * math.log(2) - math.log(math.pi) + g1 + g2 + math.log(abs(sine))
    sign_rhs = s1 * s2 * (1 if sine > 0 else -1)

    ratio = sign_rhs * sign_lhs * math.exp(log_rhs - log_lhs)
    return abs(ratio - 1.0)
