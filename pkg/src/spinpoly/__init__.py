"""SU(2) rotation matrices as finite polynomials in the spin matrices."""

from .core import DomainError, Spin
from .series import (
    RationalPoly,
    c0_half_integer,
    coefficient_polynomial,
    eval_coefficient,
    series_arcsin_power,
    series_inv_sqrt,
    top_down_coefficient,
)
from .spin import (
    Axis,
    axis_dot_J,
    character,
    rotation_from_polynomial,
    rotation_oracle,
    spin_matrices,
    verify_spin_reduction,
)
from .vandermonde import solve_coefficients, vandermonde_det, vandermonde_matrix
from .resolution import central_factorial_triangles, resolution_polynomial
from .asymptotics import (
    LimitSpec,
    characteristic_identity_check,
    convergence_report,
    generating_function_check,
    periodicized_monomial,
)

__version__ = "0.1.0"
