"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 request beyond a capability ceiling.
"""

from __future__ import annotations

import argparse
import math
import statistics
import sys
import time
from typing import Sequence

import numpy as np

from . import asymptotics, checks, resolution, series, spin as spin_mod, vandermonde
from .core import DomainError, Spin

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CEILING = 0, 1, 2, 3
DEFAULT_SWEEP_POINTS = 2001


class UsageError(Exception):
    pass


def _spin(value: str) -> Spin:
    try:
        return Spin(int(value))
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(f"--twice-j must be a non-negative integer: {exc}")


def _axis(text: str) -> spin_mod.Axis:
    try:
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError("need three components")
        return spin_mod.Axis.normalized(parts)
    except (ValueError, DomainError) as exc:
        raise UsageError(f"invalid axis {text!r}: {exc}")


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def _format_complex(z: complex) -> str:
    return f"{z.real:+.12e}{z.imag:+.12e}j"


def cmd_rotate(args) -> int:
    axis = _axis(args.axis)
    theta = _angle(args.theta, args.degrees)
    if args.method == "poly":
        u = spin_mod.rotation_from_polynomial(args.twice_j, theta, axis, precision=args.precision)
    elif args.method == "oracle":
        u = spin_mod.rotation_oracle(args.twice_j, theta, axis)
    else:
        if args.twice_j.twice_j > vandermonde.VANDERMONDE_MAX_TWICE_J:
            print(
                f"error: vandermonde path supports 2j <= {vandermonde.VANDERMONDE_MAX_TWICE_J}",
                file=sys.stderr,
            )
            return EXIT_CEILING
        coeffs = vandermonde.solve_coefficients(args.twice_j, theta, extended=True)
        generator = 2 * spin_mod._axis_dot_J_ext(axis, args.twice_j)
        u = spin_mod.rotation_from_coefficients(coeffs, generator).astype(complex)
    if args.out == "json":
        print(spin_mod.matrix_to_json(u))
    else:
        for row in u:
            print("  ".join(_format_complex(z) for z in row))
    return EXIT_OK


def coefficient_table(spin: Spin, fmt: str) -> list[str]:
    lines = []
    for k in range(spin.dim):
        poly = series.coefficient_polynomial(spin, k)
        if fmt == "rational":
            body = ", ".join(str(c) for c in poly.coeffs)
        else:
            body = ", ".join(f"{float(c):.15g}" for c in poly.coeffs)
        lines.append(f"k={k} parity={poly.parity} [{body}]")
    return lines


def cmd_coeffs(args) -> int:
    print("\n".join(coefficient_table(args.twice_j, args.format)))
    return EXIT_OK


def sweep_table(spin: Spin, k: int, theta_min: float, theta_max: float, n_points: int) -> str:
    """CSV text of c_k(theta) sin^k(theta/2) on an even grid."""
    if n_points < 2:
        raise UsageError("--n-points must be >= 2")
    if not theta_max > theta_min:
        raise UsageError("--theta-max must exceed --theta-min")
    if not 0 <= k <= spin.twice_j:
        raise UsageError(f"--k must lie in [0, {spin.twice_j}]")
    theta = np.linspace(theta_min, theta_max, n_points)
    values = asymptotics.scaled_coefficient(spin, k, theta)
    lines = ["theta,value"]
    lines.extend("%.12e,%.12e" % (t, v) for t, v in zip(theta, values))
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    text = sweep_table(
        args.twice_j,
        args.k,
        _angle(args.theta_min, args.degrees),
        _angle(args.theta_max, args.degrees),
        args.n_points,
    )
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.max_twice_j < 1:
        raise UsageError("--max-twice-j must be >= 1")
    results = checks.run_verification(args.max_twice_j, args.seed, inject_fault=args.inject_fault)
    print(checks.format_report(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _median_ns(fn, reps: int) -> tuple[float, float]:
    samples = []
    for _ in range(reps):
        start = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - start)
    spread = statistics.pstdev(samples) if len(samples) > 1 else 0.0
    return statistics.median(samples), spread


def bench_rows(spins: Sequence[Spin], reps: int, theta: float = 1.234) -> list[tuple]:
    """Median ns per rotation: polynomial (extended, double) and dense oracle."""
    axis = spin_mod.Axis.normalized(0.3, -0.5, 0.81)
    rows = []
    for spin in spins:
        # warm the coefficient cache so only per-theta work is timed
        spin_mod.rotation_from_polynomial(spin, theta, axis)
        ext = _median_ns(lambda: spin_mod.rotation_from_polynomial(spin, theta, axis), reps)
        dbl = _median_ns(
            lambda: spin_mod.rotation_from_polynomial(spin, theta, axis, precision="double"), reps
        )
        oracle = _median_ns(lambda: spin_mod.rotation_oracle(spin, theta, axis), reps)
        rows.append((spin.twice_j, ext, dbl, oracle))
    return rows


def _crossover(rows, column: int):
    # smallest 2j from which the polynomial column stays ahead of the oracle
    point = None
    for row in reversed(rows):
        if row[column][0] < row[3][0]:
            point = row[0]
        else:
            break
    return point


def cmd_bench(args) -> int:
    if not args.twice_j:
        raise UsageError("bench needs at least one --twice-j")
    if args.n_reps < 3:
        raise UsageError("--n-reps must be >= 3")
    rows = bench_rows(sorted(args.twice_j), args.n_reps)
    print(f"{'twice_j':>7} {'poly_ext_ns':>12} {'(sd)':>9} {'poly_dbl_ns':>12} {'(sd)':>9}"
          f" {'oracle_ns':>12} {'(sd)':>9}")
    for twice_j, ext, dbl, oracle in rows:
        print(f"{twice_j:>7} {ext[0]:>12.0f} {ext[1]:>9.0f} {dbl[0]:>12.0f} {dbl[1]:>9.0f}"
              f" {oracle[0]:>12.0f} {oracle[1]:>9.0f}")
    for label, column in (("extended", 1), ("double", 2)):
        point = _crossover(rows, column)
        if point is None:
            print(f"crossover ({label}): oracle faster at the largest spin listed")
        else:
            print(f"crossover ({label}): polynomial faster from 2j={point} upward on this list")
    return EXIT_OK


def cmd_triangles(args) -> int:
    fermionic, bosonic = resolution.central_factorial_triangles(args.max_twice_j)
    rows = fermionic if args.kind == "fermionic" else bosonic
    sys.stdout.write(resolution.format_triangle(rows))
    return EXIT_OK


def cmd_convergence(args) -> int:
    parity = args.spins[0].bose_fermi_index
    grid = np.linspace(-2 * np.pi, 2 * np.pi, args.n_points)
    rows = []
    for k in args.k:
        rows.extend(asymptotics.convergence_report(k, parity, grid, args.spins, args.delta))
    sys.stdout.write(asymptotics.convergence_csv(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinpoly", description="SU(2) rotations as finite spin-matrix polynomials."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rotate", help="print exp(i theta n.J)")
    p.add_argument("--twice-j", type=_spin, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--axis", default="0,0,1", help="comma separated nx,ny,nz")
    p.add_argument("--method", choices=["poly", "oracle", "vandermonde"], default="poly")
    p.add_argument("--out", choices=["json", "text"], default="text")
    p.add_argument("--precision", choices=["extended", "double"], default="extended",
                   help="arithmetic for the poly method")
    p.add_argument("--degrees", action="store_true")
    p.set_defaults(func=cmd_rotate)

    p = sub.add_parser("coeffs", help="exact coefficient polynomials c_k in x = sin^2(theta/2)")
    p.add_argument("--twice-j", type=_spin, required=True)
    p.add_argument("--format", choices=["rational", "decimal"], default="rational")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("sweep", help="CSV of c_k(theta) sin^k(theta/2) on a theta grid")
    p.add_argument("--twice-j", type=_spin, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--theta-min", type=float, default=-2 * math.pi)
    p.add_argument("--theta-max", type=float, default=2 * math.pi)
    p.add_argument("--n-points", type=int, default=DEFAULT_SWEEP_POINTS)
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--degrees", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the verification battery")
    p.add_argument("--max-twice-j", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time the polynomial path against the dense oracle")
    p.add_argument("--twice-j", type=_spin, nargs="*", default=[])
    p.add_argument("--n-reps", type=int, default=15)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("triangles", help="central factorial number rows, one spin per line")
    p.add_argument("--max-twice-j", type=int, required=True)
    p.add_argument("--kind", choices=["fermionic", "bosonic"], default="fermionic")
    p.set_defaults(func=cmd_triangles)

    p = sub.add_parser("convergence", help="CSV of sup-errors against the large-j limit")
    p.add_argument("--spins", type=_spin, nargs="+", required=True)
    p.add_argument("--k", type=int, nargs="+", default=[0, 1, 2, 3])
    p.add_argument("--n-points", type=int, default=DEFAULT_SWEEP_POINTS)
    p.add_argument("--delta", type=float, default=asymptotics.DISCONTINUITY_WINDOW)
    p.set_defaults(func=cmd_convergence)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
