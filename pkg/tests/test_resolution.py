import numpy as np
import pytest

from spinpoly import DomainError, Spin
from spinpoly import resolution as R
from spinpoly.spin import axis_dot_J

from conftest import random_axis

H = 1e-5
TOL = 1e-6


class TestResolutionPolynomial:
    def test_small_cases(self):
        assert R.resolution_polynomial(1).A == (1, 0)
        assert R.resolution_polynomial(2).A == (0, 4, 0)
        assert R.resolution_polynomial(4).A == (0, -64, 0, 20, 0)

    def test_spin_zero_rejected(self):
        with pytest.raises(DomainError):
            R.resolution_polynomial(0)

    @pytest.mark.parametrize("twice_j", range(1, 25))
    def test_parity_and_eigenvalues(self, twice_j):
        poly = R.resolution_polynomial(twice_j)
        banned = 0 if twice_j % 2 == 0 else 1
        assert all(poly.A[m] == 0 for m in range(banned, twice_j + 1, 2))
        assert all(r == 0 for r in R.eigenvalue_residuals(twice_j))

    @pytest.mark.parametrize("twice_j", range(1, 13))
    def test_against_characteristic_polynomial(self, twice_j):
        # x^(2j+1) - p_j(x) is the monic polynomial with roots 2j, 2j-2, ..., -2j
        roots = [twice_j - 2 * i for i in range(twice_j + 1)]
        char = [round(c) for c in np.poly(roots)]  # highest power first
        want = [-c for c in char[1:]][::-1]
        assert list(R.resolution_polynomial(twice_j).A) == want

    @pytest.mark.parametrize("twice_j", range(1, 11))
    def test_matrix_level(self, rng, twice_j):
        gen = 2 * axis_dot_J(random_axis(rng), twice_j)
        A = R.resolution_polynomial(twice_j).A
        powers = [np.eye(twice_j + 1, dtype=complex)]
        for _ in range(twice_j + 1):
            powers.append(powers[-1] @ gen)
        rhs = sum(a * powers[m] for m, a in enumerate(A))
        scale = float(twice_j) ** (twice_j + 1)
        assert np.max(np.abs(powers[-1] - rhs)) <= 1e-8 * scale

    def test_call(self):
        poly = R.resolution_polynomial(4)
        assert poly(3) == 20 * 27 - 64 * 3


class TestRecursion:
    def test_spin_one_to_two(self):
        assert R.pj_by_recursion(2) == [0, -64, 0, 20]
        assert R.verify_pj_recursion(2) == [0]

    @pytest.mark.parametrize("twice_j", range(1, 25))
    def test_zero_difference(self, twice_j):
        assert R.verify_pj_recursion(twice_j) == [0]


class TestTriangles:
    def test_rows(self):
        fermionic, bosonic = R.central_factorial_triangles(6)
        assert fermionic == [[1], [-9, 10], [225, -259, 35]]
        assert bosonic == [[4], [-64, 20], [2304, -784, 56]]

    def test_format(self):
        fermionic, _ = R.central_factorial_triangles(3)
        assert R.format_triangle(fermionic) == "1\n-9 10\n"

    def test_invalid(self):
        with pytest.raises(DomainError):
            R.central_factorial_triangles(0)

    def test_double_factorial(self):
        assert [R.double_factorial(n) for n in range(-1, 8)] == [1, 1, 1, 2, 3, 8, 15, 48, 105]


class TestCoefficientODEs:
    def test_spin_one_example(self):
        assert R.verify_dC_relation(2, 0.9, H) <= TOL

    @pytest.mark.parametrize("twice_j", range(0, 11))
    def test_full_relation(self, twice_j):
        for theta in (0.4, 1.3, 2.6, -1.9):
            assert R.verify_dC_relation(twice_j, theta, H) <= TOL

    @pytest.mark.parametrize("twice_j", range(0, 11))
    def test_simple_relations(self, twice_j):
        for theta in (0.4, 1.3, 2.6):
            assert R.verify_simple_relations(twice_j, theta, H) <= TOL

    def test_hierarchy_examples(self):
        assert R.verify_hierarchy(2, 0.9, H, k=0) <= TOL
        assert R.verify_hierarchy(3, 0.9, H, k=1) <= TOL
        with pytest.raises(DomainError):
            R.verify_hierarchy(3, 0.9, H, k=5)

    @pytest.mark.parametrize("twice_j", range(1, 11))
    def test_hierarchy(self, twice_j):
        for theta in (0.4, 1.3, 2.6):
            assert R.verify_hierarchy(twice_j, theta, H) <= TOL

    @pytest.mark.parametrize("twice_j", range(1, 11))
    def test_endpoint_relations(self, twice_j):
        for theta in (0.4, 1.3, 2.6):
            assert R.verify_endpoint_relations(twice_j, theta, H) <= TOL


class TestMixedSpin:
    def test_examples(self):
        assert R.verify_mixed_spin_relations(4, 0, 1.1, H) <= TOL
        assert R.verify_mixed_spin_relations(3, 0, 1.1, H) <= TOL
        assert R.verify_mixed_spin_relations(Spin(2), 0, 0.8, H) <= TOL

    @pytest.mark.parametrize("twice_j", range(2, 12))
    def test_all_admissible_n(self, twice_j):
        max_n = (twice_j - 2) // 2 if twice_j % 2 == 0 else (twice_j - 1) // 2
        for n in range(max_n + 1):
            for theta in (0.5, 1.7, -2.3):
                assert R.verify_mixed_spin_relations(twice_j, n, theta, H) <= TOL

    @pytest.mark.parametrize("twice_j, n", [(4, 2), (2, 1), (3, 2), (5, -1)])
    def test_index_constraints(self, twice_j, n):
        with pytest.raises(DomainError):
            R.verify_mixed_spin_relations(twice_j, n, 0.5, H)

    def test_perturbation_is_detected(self, monkeypatch):
        original = R._coefficient

        def skewed(spin, index, theta):
            value = original(spin, index, theta)
            return value * 1.01 if spin.twice_j < 6 else value

        monkeypatch.setattr(R, "_coefficient", skewed)
        assert R.verify_mixed_spin_relations(6, 1, 1.1, H) > 1e-4
