"""Tests for kernel_service - Fejer products, Riesz products and sparse test functions."""

from fractions import Fraction

import numpy as np
import pytest

from src.config.settings import Budgets
from src.exceptions import (
    ConstructionError,
    DomainError,
    PreconditionError,
    ResourceBudgetError,
)
from src.models.kernels import RieszProductSpec, TestPhiSpec
from src.models.lattice import SectorPartition
from src.models.trig_poly import GridSpec, TrigPoly
from src.services import kernel_service, lattice_service, trigpoly_service
from tests.fixtures.sample_data import create_point, create_riesz_spec


class TestFejer:
    """Test Fejer kernels and their products."""

    def test_fejer_coefficients(self):
        """Verify K^_3(k) = 1 - |k|/3."""
        kernel = kernel_service.fejer_coeffs(3)

        assert len(kernel) == 5
        assert kernel.reduced_coeff((0,)) == 1
        assert kernel.reduced_coeff((-1,)) == Fraction(2, 3)
        assert kernel.reduced_coeff((2,)) == Fraction(1, 3)
        assert kernel.reduced_coeff((3,)) == 0

    def test_fejer_degree(self):
        """Verify the ring-k factor has degree 3^(k+2)."""
        assert kernel_service.fejer_degree(0) == 9
        assert kernel_service.fejer_degree(2) == 81

    def test_invalid_degree(self):
        """Verify non-positive degrees raise."""
        with pytest.raises(DomainError):
            kernel_service.fejer_coeffs(0)

    def test_product_has_mean_one(self):
        """Verify the product kernel is exact with constant term 1."""
        phi = kernel_service.product_fejer(2, 0)

        assert phi.is_exact
        assert phi.mean == 1
        assert len(phi) == 17**2

    def test_product_matches_fejer_value(self):
        """Verify product coefficients equal the closed form."""
        phi = kernel_service.product_fejer(2, 0)
        for coords in [(3, 0), (-4, 2), (8, 8), (1, -7)]:
            expected = kernel_service.fejer_value(create_point(*coords), 0)
            assert phi.reduced_coeff(coords) == expected

    def test_fejer_value(self):
        """Verify phi^(3, 0) = 2/3 on ring 1 with k = 0."""
        assert kernel_service.fejer_value(create_point(3, 0), 0) == Fraction(2, 3)
        assert kernel_service.fejer_value(create_point(9, 0), 0) == 0

    def test_product_budget(self):
        """Verify the Fejer degree budget is enforced."""
        with pytest.raises(ResourceBudgetError):
            kernel_service.product_fejer(1, 2, Budgets(max_fejer_degree=27))

    @pytest.mark.parametrize("d,k", [(1, 0), (1, 2), (2, 0), (2, 1)])
    def test_ring_lower_bound(self, d, k):
        """Verify phi^(m) >= (2/3)^d on R_k by exact enumeration."""
        report = kernel_service.fejer_ring_lower_bound(d, k)

        assert report.passed
        assert report.observed["minimum"] >= report.observed["bound"]

    @pytest.mark.parametrize("d,k", [(1, 0), (2, 1)])
    def test_w11_bound(self, d, k):
        """Verify ||phi||_{1,1} <= 1 + d 3^(k+2)."""
        report = kernel_service.fejer_w11(d, k, 8.0)

        assert report.passed
        assert report.observed["kernel_l1"] == pytest.approx(1.0, abs=1e-6)
        assert report.observed["w11_normalized"] <= report.observed["bound"]


class TestRieszProducts:
    """Test Riesz product construction and identities."""

    def test_expansion_has_three_to_the_n_terms(self, riesz_spec):
        """Verify 3^N exact coefficients with constant term 1."""
        expansion = kernel_service.riesz_expand(riesz_spec)

        assert len(expansion) == 9
        assert expansion.reduced_coeff((0, 0)) == 1
        assert expansion.reduced_coeff((2, 1)) == Fraction(1, 2)
        assert expansion.reduced_coeff((22, 11)) == Fraction(1, 4)

    def test_expansion_matches_product(self, riesz_spec):
        """Verify expansion and direct product agree on the grid."""
        expansion = kernel_service.riesz_expand(riesz_spec)
        g = trigpoly_service.choose_quadrature(expansion, 4.0)
        report = kernel_service.riesz_expansion_check(riesz_spec, g)

        assert report.passed
        assert report.observed["max_abs_difference"] <= 1e-10

    def test_l1_norm_is_one(self, riesz_spec):
        """Verify ||R||_1 = 1."""
        expansion = kernel_service.riesz_expand(riesz_spec)
        g = trigpoly_service.choose_quadrature(expansion, 4.0)
        report = kernel_service.riesz_l1_certify(riesz_spec, g)

        assert report.passed
        assert report.observed["l1_quadrature"] == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("d,N", [(1, 3), (2, 4), (3, 2)])
    def test_decomposition_is_exact(self, d, N):
        """Verify R - 1 = sum_l cos(2 pi <n_l, t>) psi_l coefficient for coefficient."""
        spec = kernel_service.geometric_riesz_spec(d, N)

        assert kernel_service.riesz_decomposition_check(spec).passed

    def test_partial_riesz_first_is_constant(self, riesz_spec):
        """Verify psi_1 = 1."""
        assert kernel_service.partial_riesz(riesz_spec, 1) == TrigPoly.constant(2)

    def test_non_lacunary_frequencies_rejected(self):
        """Verify norm ratios of at most 3 are rejected."""
        with pytest.raises(ConstructionError):
            RieszProductSpec.from_points([create_point(1, 0), create_point(2, 0)])

    def test_riesz_length_budget(self, riesz_spec):
        """Verify the 3^N budget is enforced."""
        with pytest.raises(ResourceBudgetError):
            kernel_service.riesz_expand(riesz_spec, Budgets(max_riesz_length=1))

    def test_geometric_spec(self):
        """Verify n_i = 4^(i-1) e_1."""
        spec = kernel_service.geometric_riesz_spec(2, 3)

        assert [n.coords for n in spec.points] == [(1, 0), (4, 0), (16, 0)]
        with pytest.raises(ConstructionError):
            kernel_service.geometric_riesz_spec(2, 3, ratio=3)


class TestTestFunction:
    """Test the antiderivative test function on sparse sequences."""

    def test_derivative_is_riesz_minus_one(self, phi_spec):
        """Verify d_j0 phi = R - 1 coefficient for coefficient."""
        phi = kernel_service.test_phi(phi_spec)
        derivative = trigpoly_service.partial_derivative(phi, phi_spec.j0)
        target = kernel_service.riesz_expand(phi_spec.riesz) - TrigPoly.constant(2)

        assert derivative == target
        assert phi.mean == 0

    def test_vanishing_dominant_coordinate_rejected(self):
        """Verify a zero M(xi) coordinate on j0 is rejected."""
        with pytest.raises(ConstructionError):
            TestPhiSpec(create_riesz_spec((1, 0)), 2)

    def test_dominant_gradient_at_most_two(self, phi_spec):
        """Verify ||d_j0 phi||_1 <= 2 + tolerance."""
        phi = kernel_service.test_phi(phi_spec)
        g = trigpoly_service.choose_quadrature(phi, 4.0)
        partials, report = kernel_service.gradient_report(phi_spec, g)

        assert report.passed
        assert len(partials) == 2
        assert report.observed["grad_1"] <= 2.0 + report.tolerance

    def test_coefficient_bound_is_finite(self, phi_spec):
        """Verify the empirical C' of every H_l is finite."""
        report = kernel_service.wspol_constant(phi_spec)

        assert report.passed
        assert np.isfinite(report.observed["C_prime"])

    def test_coefficient_bound_rejects_dominant_axis(self, phi_spec):
        """Verify H_l bounds are taken on off-dominant axes only."""
        with pytest.raises(PreconditionError):
            kernel_service.hl_coefficient_bound(phi_spec, 1, phi_spec.j0)

    def test_gradient_split_identity(self, phi_spec):
        """Verify the two-term split of the off-axis derivative is exact."""
        report = kernel_service.gradient_split_bounds(phi_spec, 2)

        assert report.passed
        assert report.observed["theta"] == pytest.approx(0.5)
        assert report.observed["direction_bound"] == pytest.approx(2.0)

    def test_sector_theta(self, phi_spec):
        """Verify the bin center of the (2, 1) sector on axis 2."""
        assert kernel_service.sector_theta(phi_spec, 2) == Fraction(1, 2)

    def test_poincare_ratio_positive(self, phi_spec):
        """Verify ||phi||_1 / ||grad phi||_1 is positive and finite."""
        phi = kernel_service.test_phi(phi_spec)
        g = trigpoly_service.choose_quadrature(phi, 4.0)
        ratio = kernel_service.poincare_ratio(phi_spec, g)

        assert 0 < ratio.value < 1


class TestRandomSpecs:
    """Test the seeded sparse spec generator."""

    @pytest.mark.parametrize("d,N", [(1, 2), (2, 2), (2, 3), (3, 2)])
    def test_random_spec_is_sparse_and_single_sector(self, d, N):
        """Verify generated specs are N-sparse within one N-sector."""
        rng = np.random.default_rng([7, d, N])
        spec = kernel_service.random_sparse_spec(rng, d, N)
        points = spec.riesz.points
        part = SectorPartition(d, N)

        assert spec.N == N
        assert lattice_service.is_sparse(points, N)
        assert len({lattice_service.sector_of(p, part) for p in points}) == 1

    def test_random_spec_is_deterministic(self):
        """Verify the same seed yields the same spec."""
        first = kernel_service.random_sparse_spec(np.random.default_rng(3), 2, 3)
        second = kernel_service.random_sparse_spec(np.random.default_rng(3), 2, 3)

        assert first == second

    def test_random_spec_domain(self):
        """Verify N >= 1 is required."""
        with pytest.raises(DomainError):
            kernel_service.random_sparse_spec(np.random.default_rng(0), 2, 0)

    def test_uses_grid_quadrature(self, phi_spec):
        """Verify the reference spec fits a dense grid."""
        phi = kernel_service.test_phi(phi_spec)

        assert isinstance(trigpoly_service.choose_quadrature(phi, 4.0), GridSpec)
