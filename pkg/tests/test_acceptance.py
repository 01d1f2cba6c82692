"""Acceptance suite: eleven criteria, each at its stated tolerance and time budget.

Every test records one PASS/FAIL line; pytest prints them in the terminal
summary, and running this file directly prints them as it goes.
"""

import math
import time
from fractions import Fraction as F

import numpy as np
import pytest

from spinpoly import Axis, Spin, asymptotics, cli, resolution, series, spin as S, vandermonde

from conftest import ACCEPTANCE_LINES

H = 1e-5
FD_TOL = 1e-6
BOSONIC = [8, 16, 32, 64, 128, 138]
FERMIONIC = [9, 17, 33, 65, 129, 137]
LIMIT_GRID = np.linspace(-2 * np.pi + 0.3, 2 * np.pi - 0.3, 2001)
DELTA = 0.3


def record(number: int, title: str, passed: bool, detail: str) -> None:
    line = f"{'PASS' if passed else 'FAIL'}  criterion {number:>2}  {title}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def _check(number, title, failures, budget, elapsed, detail):
    ok = not failures and elapsed < budget
    extra = f"; {failures[:3]}" if failures else ""
    record(number, title, ok, f"{detail}, {elapsed:.2f}s (budget {budget}s){extra}")
    assert not failures, failures
    assert elapsed < budget


GOLDEN = {
    (3, 0): [1, F(1, 2)],
    (3, 1): [1, F(1, 6)],
    (3, 2): [1],
    (3, 3): [1],
    (4, 0): [1],
    (4, 1): [1, F(2, 3)],
    (4, 2): [1, F(1, 3)],
    (4, 3): [1],
    (4, 4): [1],
    (5, 0): [1, F(1, 2), F(3, 8)],
    (5, 1): [1, F(1, 6), F(3, 40)],
    (5, 2): [1, F(5, 6)],
    (5, 3): [1, F(1, 2)],
    (5, 4): [1],
    (5, 5): [1],
    (10, 0): [1],
    (10, 1): [1, F(2, 3), F(8, 15), F(16, 35), F(128, 315)],
    (10, 2): [1, F(1, 3), F(8, 45), F(4, 35), F(128, 1575)],
    (10, 3): [1, 1, F(14, 15), F(164, 189)],
    (10, 4): [1, F(2, 3), F(7, 15), F(328, 945)],
    (10, 5): [1, F(4, 3), F(13, 9)],
    (10, 6): [1, 1, F(13, 15)],
    (10, 7): [1, F(5, 3)],
    (10, 8): [1, F(4, 3)],
    (10, 9): [1],
    (10, 10): [1],
}


def test_criterion_01_golden_coefficients():
    with Timer() as t:
        failures = []
        for (twice_j, k), want in GOLDEN.items():
            got = list(series.coefficient_polynomial(Spin(twice_j), k).coeffs)
            if got != [F(c) for c in want]:
                failures.append((twice_j, k))
    _check(1, "golden coefficients", failures, 1.0, t.elapsed, f"{len(GOLDEN)} rows exact")


def test_criterion_02_oracle_equivalence():
    rng = np.random.default_rng(2)
    worst = 0.0
    with Timer() as t:
        for twice_j in range(17):
            for _ in range(20):
                theta = rng.uniform(-2 * np.pi, 2 * np.pi)
                axis = Axis.normalized(rng.normal(size=3))
                diff = S.rotation_from_polynomial(twice_j, theta, axis) - S.rotation_oracle(
                    twice_j, theta, axis
                )
                worst = max(worst, float(np.max(np.abs(diff))))
    failures = [] if worst <= 1e-10 else [f"max diff {worst:.3e}"]
    _check(2, "oracle equivalence", failures, 30.0, t.elapsed, f"max |poly - expm| {worst:.2e}")


def test_criterion_03_path_equivalence():
    worst = 0.0
    with Timer() as t:
        for twice_j in range(17):
            for theta in np.linspace(-2 * np.pi, 2 * np.pi, 25):
                a = vandermonde.solve_coefficients(twice_j, theta)
                b = np.array(series.top_down_coefficients(twice_j, theta))
                worst = max(worst, float(np.max(np.abs(a - b))))
    failures = [] if worst <= 1e-10 else [f"max diff {worst:.3e}"]
    _check(3, "path equivalence", failures, 10.0, t.elapsed, f"max |Vandermonde - series| {worst:.2e}")


def test_criterion_04_resolution_exactness():
    failures = []
    with Timer() as t:
        for twice_j in range(1, 25):
            poly = resolution.resolution_polynomial(twice_j)
            banned = 0 if twice_j % 2 == 0 else 1
            if any(poly.A[m] for m in range(banned, twice_j + 1, 2)):
                failures.append(("parity", twice_j))
            if any(resolution.eigenvalue_residuals(twice_j)):
                failures.append(("eigenvalue", twice_j))
            if resolution.verify_pj_recursion(twice_j) != [0]:
                failures.append(("recursion", twice_j))
    _check(4, "resolution exactness", failures, 5.0, t.elapsed, "parity, eigenvalues, recursion for 2j <= 24")


def test_criterion_05_determinant_structure():
    failures = []
    with Timer() as t:
        for twice_j in range(11):
            report = vandermonde.vandermonde_det(twice_j)
            if not report.sign_ok:
                failures.append(("sign", twice_j))
            if report.mismatches or report.cofactor != 1:
                failures.append(("primes", twice_j, report.mismatches))
    _check(5, "determinant structure", failures, 10.0, t.elapsed, "sign and prime multiplicities for 2j <= 10")


def test_criterion_06_ode_residuals():
    worst: dict[str, float] = {}

    def note(name, value):
        worst[name] = max(worst.get(name, 0.0), value)

    with Timer() as t:
        for twice_j in (2, 3, 4, 5, 8):
            spin = Spin(twice_j)
            for theta in (0.4, 0.9, 1.7, 2.6, -1.3):
                note("full dC/dalpha", resolution.verify_dC_relation(spin, theta, H))
                note("simple relations", resolution.verify_simple_relations(spin, theta, H))
                note("hierarchy", resolution.verify_hierarchy(spin, theta, H))
                note("derivative pairing", series.verify_derivative_pairing(spin, theta, H))
                note("endpoint relations", resolution.verify_endpoint_relations(spin, theta, H))
                if not spin.is_integer:
                    note("half-integer closure", series.verify_half_integer_closure(spin, theta, H))
                max_n = (twice_j - 2) // 2 if spin.is_integer else (twice_j - 1) // 2
                for n in range(max_n + 1):
                    note("mixed-spin", resolution.verify_mixed_spin_relations(spin, n, theta, H))
    failures = [(k, v) for k, v in worst.items() if not v <= FD_TOL]
    _check(6, "ODE residuals", failures, 20.0, t.elapsed, f"max residual {max(worst.values()):.2e}")


def test_criterion_07_character_and_periodicity():
    rng = np.random.default_rng(7)
    char = per = 0.0
    with Timer() as t:
        for twice_j in range(13):
            for _ in range(10):
                theta = rng.uniform(-2 * np.pi, 2 * np.pi)
                axis = Axis.normalized(rng.normal(size=3))
                u = S.rotation_from_polynomial(twice_j, theta, axis)
                shifted = S.rotation_from_polynomial(twice_j, theta + 2 * np.pi, axis)
                half = theta / 2
                ref = math.sin((twice_j + 1) * half) / math.sin(half)
                char = max(char, abs(np.trace(u) - ref))
                per = max(per, float(np.max(np.abs(shifted - (-1) ** twice_j * u))))
    failures = []
    if not char <= 1e-9:
        failures.append(f"character {char:.3e}")
    if not per <= 1e-10:
        failures.append(f"periodicity {per:.3e}")
    _check(7, "character and periodicity", failures, 10.0, t.elapsed,
           f"character {char:.2e}, periodicity {per:.2e}")


def _monotone(errors):
    # non-increasing throughout, strictly decreasing wherever the error is nonzero
    for a, b in zip(errors, errors[1:]):
        if b > a or (a > 0 and not b < a):
            return False
    return True


def test_criterion_08_large_spin_limit():
    failures = []
    summary = []
    with Timer() as t:
        for parity, spins in ((0, BOSONIC), (1, FERMIONIC)):
            for k in range(4):
                rows = asymptotics.convergence_report(k, parity, LIMIT_GRID, spins, DELTA)
                errors = [r.sup_error for r in rows]
                if not _monotone(errors):
                    failures.append((parity, k, errors))
                summary.append(errors[-1])
        plateau = asymptotics.scaled_coefficient(137, 0, 1.5 * math.pi)
        if not abs(plateau + 1) <= 0.1:
            failures.append(f"plateau {plateau}")
    _check(8, "large-j behavior", failures, 60.0, t.elapsed,
           f"monotone in 8 series, worst final sup-error {max(summary):.3f}, plateau {plateau:.4f}")


def test_criterion_09_generating_functions():
    worst = {0: 0.0, 1: 0.0, 2: 0.0}
    with Timer() as t:
        for order in worst:
            for tt in (0.25, 0.5, 1.0):
                for theta in (0.6, 1.2, 2.0):
                    partial, closed = asymptotics.generating_function_check(order, tt, theta, M=60)
                    worst[order] = max(worst[order], abs(partial - closed))
    tol = {0: 1e-10, 1: 1e-10, 2: 1e-8}
    failures = [(o, v) for o, v in worst.items() if not v <= tol[o]]
    _check(9, "generating functions", failures, 5.0, t.elapsed,
           ", ".join(f"G{o} {v:.1e}" for o, v in worst.items()))


def test_criterion_10_gamma_identity():
    worst = 0.0
    with Timer() as t:
        for twice_j in (1, 2, 4, 8):
            for lam in (0.3, 0.5, 1.1):
                worst = max(worst, asymptotics.characteristic_identity_check(twice_j, lam))
    failures = [] if worst <= 1e-8 else [f"relative error {worst:.3e}"]
    _check(10, "Gamma identity", failures, 1.0, t.elapsed, f"max relative error {worst:.2e}")


def test_criterion_11_sweep_csvs(tmp_path, capsys):
    failures = []
    grid = np.linspace(-2 * np.pi, 2 * np.pi, cli.DEFAULT_SWEEP_POINTS)
    with Timer() as t:
        for twice_j in (137, 138):
            parity = twice_j % 2
            spins = BOSONIC if parity == 0 else FERMIONIC
            for k in range(4):
                paths = [tmp_path / f"j{twice_j}_k{k}_{run}.csv" for run in (0, 1)]
                for p in paths:
                    code = cli.main(["sweep", "--twice-j", str(twice_j), "--k", str(k), "--out", str(p)])
                    if code != 0:
                        failures.append(("exit", twice_j, k, code))
                capsys.readouterr()
                first, second = (p.read_bytes() for p in paths)
                if first != second:
                    failures.append(("nondeterministic", twice_j, k))
                text = first.decode("ascii")
                if not text.startswith("theta,value\n"):
                    failures.append(("header", twice_j, k))
                table = np.loadtxt(paths[0], delimiter=",", skiprows=1)
                theta, value = table[:, 0], table[:, 1]
                if len(theta) != len(grid) or np.max(np.abs(theta - grid)) > 1e-11:
                    failures.append(("grid", twice_j, k))
                    continue

                # pointwise agreement with the library and the criterion 8 trend
                mask = asymptotics.interior_mask(theta, DELTA)
                limit = asymptotics.periodicized_monomial(asymptotics.LimitSpec(k, parity), theta[mask])
                csv_err = float(np.max(np.abs(value[mask] - limit)))
                ref = asymptotics.convergence_report(k, parity, grid, [twice_j], DELTA)[0].sup_error
                if abs(csv_err - ref) > 1e-9:
                    failures.append(("csv vs report", twice_j, k, csv_err, ref))
                previous = asymptotics.convergence_report(k, parity, grid, [spins[-3]], DELTA)[0]
                if csv_err > previous.sup_error:
                    failures.append(("not below lower spin", twice_j, k))

                if twice_j == 138 and k == 0 and not np.all(value == 1.0):
                    failures.append("bosonic k=0 not constant 1")
                if twice_j == 137 and k == 0:
                    at_zero = value[np.argmin(np.abs(theta))]
                    plateau = value[np.argmin(np.abs(theta - 1.5 * np.pi))]
                    if at_zero != 1.0 or not abs(plateau + 1) <= 0.1:
                        failures.append(("square wave", at_zero, plateau))
    _check(11, "appendix CSV reproduction", failures, 60.0, t.elapsed, "8 curves, byte-identical reruns")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
