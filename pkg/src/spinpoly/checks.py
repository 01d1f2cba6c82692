"""The verification battery behind ``spinpoly verify``.

Each check returns the worst residual it saw and the tolerance it is held
to; exact integer checks report 0 or 1 mismatches against tolerance 0.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import asymptotics, resolution, series, spin as spin_mod, vandermonde
from .core import Spin

FD_STEP = 1e-5
FD_TOL = 1e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28} max residual {self.residual:.3e}  (tol {self.tolerance:.0e})"


def thread_count() -> int:
    raw = os.environ.get("SPINPOLY_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def random_axis(rng: np.random.Generator) -> spin_mod.Axis:
    return spin_mod.Axis.normalized(rng.normal(size=3))


def _poly_rotation(fault: bool):
    if not fault:
        return spin_mod.rotation_from_polynomial

    def corrupted(spin, theta, axis):
        # deliberately perturb the k = 1 coefficient
        spin = Spin(spin) if isinstance(spin, int) else spin
        weights = spin_mod.polynomial_weights(spin, theta)
        if len(weights) > 1:
            weights[1] *= 1 + 1e-6
        generator = 2j * np.sin(np.longdouble(theta) / 2) * spin_mod._axis_dot_J_ext(axis, spin)
        return spin_mod.rotation_from_coefficients(weights, generator).astype(complex)

    return corrupted


def check_oracle(max_twice_j, rng, fault=False, pairs=20) -> CheckResult:
    rotate = _poly_rotation(fault)
    worst = 0.0
    for twice_j in range(max_twice_j + 1):
        for _ in range(pairs):
            theta = rng.uniform(-2 * np.pi, 2 * np.pi)
            axis = random_axis(rng)
            diff = rotate(twice_j, theta, axis) - spin_mod.rotation_oracle(twice_j, theta, axis)
            worst = max(worst, float(np.max(np.abs(diff))))
    return CheckResult("oracle equivalence", worst, 1e-10)


def check_paths(max_twice_j, points=25) -> CheckResult:
    worst = 0.0
    for twice_j in range(max_twice_j + 1):
        for theta in np.linspace(-2 * np.pi, 2 * np.pi, points):
            a = vandermonde.solve_coefficients(twice_j, theta)
            b = np.array(series.top_down_coefficients(twice_j, theta))
            worst = max(worst, float(np.max(np.abs(a - b))))
    return CheckResult("path equivalence", worst, 1e-10)


def check_unitarity_periodicity(max_twice_j, rng, samples=5) -> list[CheckResult]:
    unit = per = char = det = 0.0
    for twice_j in range(max_twice_j + 1):
        dim = twice_j + 1
        for _ in range(samples):
            theta = rng.uniform(-2 * np.pi, 2 * np.pi)
            axis = random_axis(rng)
            u = spin_mod.rotation_from_polynomial(twice_j, theta, axis)
            shifted = spin_mod.rotation_from_polynomial(twice_j, theta + 2 * np.pi, axis)
            unit = max(unit, float(np.max(np.abs(u.conj().T @ u - np.eye(dim)))) / dim)
            det = max(det, abs(abs(np.linalg.det(u)) - 1.0))
            per = max(per, float(np.max(np.abs(shifted - (-1) ** twice_j * u))))
            char = max(char, abs(np.trace(u) - spin_mod.character(twice_j, theta)))
    return [
        CheckResult("unitarity (per dim)", unit, 1e-10),
        CheckResult("|det U| = 1", det, 1e-9),
        CheckResult("periodicity", per, 1e-10),
        CheckResult("character", char, 1e-9),
    ]


def check_spin_reduction(max_twice_j, rng, samples=5) -> CheckResult:
    worst = 0.0
    for twice_j in range(2, max_twice_j + 1):
        for _ in range(samples):
            theta = rng.uniform(-2 * np.pi, 2 * np.pi)
            worst = max(worst, spin_mod.verify_spin_reduction(twice_j, theta, random_axis(rng)))
    return CheckResult("spin reduction", worst, 1e-10)


def check_odes(max_twice_j, thetas=(0.4, 0.9, 1.7, 2.6)) -> list[CheckResult]:
    worst: dict[str, float] = {}

    def record(name, value):
        worst[name] = max(worst.get(name, 0.0), value)

    for twice_j in range(1, max_twice_j + 1):
        spin = Spin(twice_j)
        for theta in thetas:
            record("dC/dalpha relation", resolution.verify_dC_relation(spin, theta, FD_STEP))
            record("simple relations", resolution.verify_simple_relations(spin, theta, FD_STEP))
            record("hierarchy", resolution.verify_hierarchy(spin, theta, FD_STEP))
            record("endpoint relations", resolution.verify_endpoint_relations(spin, theta, FD_STEP))
            record("derivative pairing", series.verify_derivative_pairing(spin, theta, FD_STEP))
            if not spin.is_integer:
                record("half-integer closure", series.verify_half_integer_closure(spin, theta, FD_STEP))
            max_n = (twice_j - 2) // 2 if spin.is_integer else (twice_j - 1) // 2
            for n in range(max_n + 1):
                record("mixed-spin relations",
                       resolution.verify_mixed_spin_relations(spin, n, theta, FD_STEP))
    return [CheckResult(name, value, FD_TOL) for name, value in worst.items()]


def _brute_force_resolution(twice_j: int) -> list[Fraction]:
    # solve V a = lambda^(2j+1) exactly
    inverse = vandermonde.exact_inverse(twice_j)
    rhs = [lam ** (twice_j + 1) for lam in vandermonde.eigenvalues(twice_j)]
    return [sum(row[i] * rhs[i] for i in range(len(rhs))) for row in inverse]


def check_resolution(max_twice_j) -> list[CheckResult]:
    parity = eigen = recursion = brute = 0
    for twice_j in range(1, max_twice_j + 1):
        poly = resolution.resolution_polynomial(twice_j)
        banned = 0 if twice_j % 2 == 0 else 1
        parity += any(poly.A[m] for m in range(banned, twice_j + 1, 2))
        eigen += any(resolution.eigenvalue_residuals(twice_j))
        recursion += any(resolution.verify_pj_recursion(twice_j))
        brute += list(poly.A) != _brute_force_resolution(twice_j)
    return [
        CheckResult("A_m parity vanishing", parity, 0),
        CheckResult("eigenvalue identity", eigen, 0),
        CheckResult("p_j recursion", recursion, 0),
        CheckResult("triangles vs Vandermonde", brute, 0),
    ]


def check_determinants(max_twice_j) -> CheckResult:
    bad = sum(not vandermonde.vandermonde_det(t).ok for t in range(max_twice_j + 1))
    return CheckResult("det V sign and primes", bad, 0)


def check_gamma(max_twice_j, lams=(0.3, 0.5, 1.1)) -> CheckResult:
    worst = 0.0
    for twice_j in range(1, max_twice_j + 1):
        for lam in lams:
            worst = max(worst, asymptotics.characteristic_identity_check(twice_j, lam))
    return CheckResult("Gamma identity", worst, 1e-8)


def check_generating(ts=(0.25, 0.5, 1.0), thetas=(0.6, 1.2, 2.0)) -> list[CheckResult]:
    out = []
    for order, tol in ((0, 1e-10), (1, 1e-10), (2, 1e-8)):
        worst = 0.0
        for t in ts:
            for theta in thetas:
                partial, closed = asymptotics.generating_function_check(order, t, theta)
                worst = max(worst, abs(partial - closed))
        out.append(CheckResult(f"generating function G{order}", worst, tol))
    return out


def run_verification(max_twice_j: int, seed: int = 0, inject_fault: bool = False) -> list[CheckResult]:
    """Run every check for spins 2j <= max_twice_j."""
    rngs = np.random.default_rng(seed).spawn(3)
    jobs: list[Callable[[], CheckResult | list[CheckResult]]] = [
        lambda: check_oracle(max_twice_j, rngs[0], fault=inject_fault),
        lambda: check_paths(max_twice_j),
        lambda: check_unitarity_periodicity(max_twice_j, rngs[1]),
        lambda: check_spin_reduction(max_twice_j, rngs[2]),
        lambda: check_odes(max_twice_j),
        lambda: check_resolution(max_twice_j),
        lambda: check_determinants(max_twice_j),
        lambda: check_gamma(max_twice_j),
        check_generating,
    ]
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        outcomes = list(pool.map(lambda job: job(), jobs))
    results: list[CheckResult] = []
    for item in outcomes:
        results.extend(item if isinstance(item, list) else [item])
    return results


def format_report(results: list[CheckResult]) -> str:
    lines = [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines)


