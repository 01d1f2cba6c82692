"""Cayley-Hamilton resolution of (2 n.J)^(2j+1) and the coefficient ODEs.

The resolution polynomial is

    p_j(x) = x^(2j+1) - x^-(2j+1) * prod_{m=0}^{2j} (x^2 - [m = 2j mod 2] m^2)

whose integer coefficients A_m[j] satisfy (2 n.J)^(2j+1) = sum_m A_m (2 n.J)^m.
Polynomials are plain lists of Python ints, lowest power first.

The ``verify_*`` functions return raw residuals; differentiation in
alpha = i theta/2 is done along real theta, d/dalpha = -2i d/dtheta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import DomainError, Spin, as_spin, central_difference
from .series import top_down_coefficients
from .vandermonde import eigenvalues, solve_coefficients

__all__ = [
    "ResolutionPoly",
    "resolution_polynomial",
    "pj_by_recursion",
    "verify_pj_recursion",
    "eigenvalue_residuals",
    "central_factorial_triangles",
    "format_triangle",
    "double_factorial",
    "verify_dC_relation",
    "verify_hierarchy",
    "verify_simple_relations",
    "verify_mixed_spin_relations",
    "verify_endpoint_relations",
]


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for k, y in enumerate(b):
                out[i + k] += x * y
    return out


def _poly_sub(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _trim(a: list[int]) -> list[int]:
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


@dataclass(frozen=True)
class ResolutionPoly:
    spin: Spin
    A: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return sum(a * x**m for m, a in enumerate(self.A))

    def nonzero_row(self) -> list[int]:
        """A_m restricted to the powers allowed by the spin's reflection parity."""
        start = 1 if self.spin.is_integer else 0
        return list(self.A[start::2])


@lru_cache(maxsize=None)
def _resolution_coeffs(twice_j: int) -> tuple[int, ...]:
    product = [1]
    for m in range(twice_j + 1):
        shift = m * m if (m + twice_j) % 2 == 0 else 0
        product = _poly_mul(product, [-shift, 0, 1])
    power = twice_j + 1
    if any(product[:power]):
        raise ArithmeticError("product is not divisible by x^(2j+1)")
    quotient = product[power:]
    monomial = [0] * power + [1]
    coeffs = _trim(_poly_sub(monomial, quotient))
    return tuple(coeffs + [0] * (twice_j + 1 - len(coeffs)))


def resolution_polynomial(spin) -> ResolutionPoly:
    """p_j as exact integers A_0 .. A_2j."""
    spin = as_spin(spin)
    if spin.twice_j == 0:
        raise DomainError("spin 0 needs no resolution")
    return ResolutionPoly(spin, _resolution_coeffs(spin.twice_j))


def pj_by_recursion(spin) -> list[int]:
    """p_{j+1}(x) = (2j+2)^2 x^(2j+1) + (x^2 - (2j+2)^2) p_j(x)."""
    spin = as_spin(spin)
    shift = (spin.twice_j + 2) ** 2
    base = list(resolution_polynomial(spin).A)
    lifted = _poly_mul([-shift, 0, 1], base)
    lifted = _poly_sub(lifted, [0] * (spin.twice_j + 1) + [-shift])
    return _trim(lifted)


def verify_pj_recursion(spin) -> list[int]:
    """Exact difference between p_{j+1} computed directly and by recursion."""
    spin = as_spin(spin)
    direct = list(resolution_polynomial(Spin(spin.twice_j + 2)).A)
    return _trim(_poly_sub(direct, pj_by_recursion(spin)))


def eigenvalue_residuals(spin) -> list[int]:
    """lambda^(2j+1) - p_j(lambda) over the spectrum of 2 n.J; all zero."""
    poly = resolution_polynomial(spin)
    return [lam ** (poly.spin.twice_j + 1) - poly(lam) for lam in eigenvalues(poly.spin)]


def central_factorial_triangles(max_twice_j: int) -> tuple[list[list[int]], list[list[int]]]:
    """Rows of nonzero A_m[j]: fermionic (j = 1/2, 3/2, ...) and bosonic (j = 1, 2, ...)."""
    if max_twice_j < 1:
        raise DomainError("max_twice_j must be >= 1")
    fermionic, bosonic = [], []
    for twice_j in range(1, max_twice_j + 1):
        row = resolution_polynomial(twice_j).nonzero_row()
        (fermionic if twice_j % 2 else bosonic).append(row)
    return fermionic, bosonic


def format_triangle(rows: list[list[int]]) -> str:
    return "\n".join(" ".join(str(a) for a in row) for row in rows) + "\n"


def double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def _resolution_or_zero(spin: Spin) -> tuple[int, ...]:
    # (2 n.J)^1 = 0 for spin 0, i.e. A_0[0] = 0
    return (0,) if spin.twice_j == 0 else resolution_polynomial(spin).A


def _alpha_derivative(spin: Spin, theta: float, h: float) -> np.ndarray:
    d_theta = central_difference(lambda t: solve_coefficients(spin, t), theta, h)
    return -2j * d_theta


def verify_dC_relation(spin, theta: float, h: float = 1e-5) -> float:
    """max_m |dC_m/dalpha - C_{m-1} - C_2j A_m| with C_{-1} = 0."""
    spin = as_spin(spin)
    coeffs = solve_coefficients(spin, theta)
    deriv = _alpha_derivative(spin, theta, h)
    a = np.array(_resolution_or_zero(spin), dtype=float)
    shifted = np.concatenate([[0.0], coeffs[:-1]])
    return float(np.max(np.abs(deriv - shifted - coeffs[-1] * a)))


def verify_simple_relations(spin, theta: float, h: float = 1e-5) -> float:
    """dC_m/dalpha = C_{m-1} for the half of the indices where A_m vanishes.

    Even m for integer spin, odd m for half-integer spin.
    """
    spin = as_spin(spin)
    coeffs = solve_coefficients(spin, theta)
    deriv = _alpha_derivative(spin, theta, h)
    start = 0 if spin.is_integer else 1
    worst = 0.0
    for m in range(start, spin.dim, 2):
        below = coeffs[m - 1] if m else 0.0
        worst = max(worst, abs(deriv[m] - below))
    return worst


def verify_hierarchy(spin, theta: float, h: float = 1e-5, k: int | None = None) -> float:
    """Residual of the remaining relations, written with C_2j = sinh(alpha)^2j/(2j)!.

    Integer spin: dC_{2k+1}/dalpha = C_2k + sinh^2j(alpha) A_{2k+1}/(2j)!.
    Half-integer: dC_{2k}/dalpha = C_{2k-1} + sinh^2j(alpha) A_{2k}/(2j)!.
    ``k`` picks a single equation; by default the max over all is returned.
    """
    spin = as_spin(spin)
    if spin.twice_j == 0:
        return 0.0
    coeffs = solve_coefficients(spin, theta)
    deriv = _alpha_derivative(spin, theta, h)
    a = resolution_polynomial(spin).A
    # sinh(i theta/2) = i sin(theta/2)
    top = (1j * math.sin(0.5 * theta)) ** spin.twice_j / math.factorial(spin.twice_j)
    offset = 1 if spin.is_integer else 0
    indices = range(offset, spin.dim, 2)
    if k is not None:
        m = 2 * k + offset
        if m not in indices:
            raise DomainError(f"no hierarchy equation for k={k} at 2j={spin.twice_j}")
        indices = [m]
    worst = 0.0
    for m in indices:
        below = coeffs[m - 1] if m else 0.0
        worst = max(worst, abs(deriv[m] - below - top * a[m]))
    return worst


def _coefficient(spin: Spin, index: int, theta: float) -> complex:
    # C_index[spin], zero outside 0 .. 2j
    if index < 0 or index > spin.twice_j:
        return 0.0
    return top_down_coefficients(spin, theta)[index]


def verify_mixed_spin_relations(spin, n: int, theta: float, h: float = 1e-5) -> float:
    """Residual of the first-order relations tying spin j to all lower spins.

    Integer j:      (2 d/dtheta + tan(theta/2)) C_{2n+1}[j]
                    = sum_{m=0}^{j-n-1} (i c^2 s^2m C_2n[j-m-1] + c s^(2m+1) C_{2n+1}[j-m-1])
    Half-integer j: (2 d/dtheta + tan(theta/2)) C_{2n}[j]
                    = sum_{m=0}^{j-n-1/2} (i c^2 s^2m C_{2n-1}[j-m-1] + c s^(2m+1) C_{2n}[j-m-1])

    In the half-integer sum the last term (spin n - 1/2) carries the top
    coefficient C_{2n-1}[n-1/2] and cannot be dropped once n >= 1; for n = 0
    it would need spin -1/2 and is absent.
    """
    spin = as_spin(spin)
    if n < 0:
        raise DomainError("n must be >= 0")
    if spin.is_integer:
        top = spin.twice_j // 2 - n - 1
        target, low = 2 * n + 1, 2 * n
    else:
        top = (spin.twice_j - 2 * n - 1) // 2
        target, low = 2 * n, 2 * n - 1
    if top < 0:
        raise DomainError(f"need j - n >= {'1' if spin.is_integer else '1/2'} at 2j={spin.twice_j}")

    def lhs_coeff(t):
        return _coefficient(spin, target, t)

    derivative = central_difference(lhs_coeff, theta, h)
    half = 0.5 * theta
    s, c = math.sin(half), math.cos(half)
    lhs = 2 * derivative + math.tan(half) * lhs_coeff(theta)
    rhs = 0.0
    for m in range(top + 1):
        lower_twice = spin.twice_j - 2 * m - 2
        if lower_twice < 0:
            continue
        lower = Spin(lower_twice)
        rhs += 1j * c * c * s ** (2 * m) * _coefficient(lower, low, theta)
        rhs += c * s ** (2 * m + 1) * _coefficient(lower, target, theta)
    return float(abs(lhs - rhs))


def verify_endpoint_relations(spin, theta: float, h: float = 1e-5) -> float:
    """Residual of the closed forms linking the lowest and highest coefficients.

    Half-integer j: dC_0/dalpha = (-1)^floor(j) [(2j)!!]^2 C_2j.
    Integer j >= 1: dC_1/dalpha = 1 + (-1)^(j-1) [(2j)!!]^2 C_2j.
    """
    spin = as_spin(spin)
    if spin.twice_j == 0:
        raise DomainError("needs 2j >= 1")
    coeffs = solve_coefficients(spin, theta)
    deriv = _alpha_derivative(spin, theta, h)
    weight = double_factorial(spin.twice_j) ** 2
    if spin.is_integer:
        sign = -1 if (spin.twice_j // 2 - 1) % 2 else 1
        return float(abs(deriv[1] - 1 - sign * weight * coeffs[-1]))
    sign = -1 if ((spin.twice_j - 1) // 2) % 2 else 1
    return float(abs(deriv[0] - sign * weight * coeffs[-1]))
