"""Tests for trigpoly_service - evaluation, norms and calculus of trigonometric polynomials."""

import math
from fractions import Fraction

import numpy as np
import pytest

from src.config.settings import Budgets
from src.exceptions import DomainError, PreconditionError, ResourceBudgetError
from src.models.trig_poly import GridSpec, NormMethod, SampleSpec, TrigPoly
from src.services import trigpoly_service


class TestEvaluation:
    """Test grid and pointwise evaluation."""

    def test_constant_on_grid(self):
        """Verify a constant evaluates to itself everywhere."""
        samples = trigpoly_service.evaluate_on_grid(TrigPoly.constant(2, 3), GridSpec(4))

        assert samples.shape == (4, 4)
        assert np.allclose(samples, 3.0)

    def test_cosine_on_grid(self):
        """Verify cos(2 pi t) on the M = 8 grid."""
        samples = trigpoly_service.evaluate_on_grid(TrigPoly.cosine((1,)), GridSpec(8, 1))
        expected = np.cos(2 * np.pi * np.arange(8) / 8)

        assert np.allclose(samples.real, expected)
        assert np.allclose(samples.imag, 0.0)

    def test_grid_matches_direct_summation(self, rng):
        """Verify the FFT path agrees with direct summation at grid points."""
        f = trigpoly_service.random_trig_poly(rng, 2, 3, 6, real=False)
        g = GridSpec.for_degree(f.degree)
        on_grid = trigpoly_service.evaluate_on_grid(f, g).ravel()
        direct = trigpoly_service.evaluate_at_points(f, trigpoly_service.grid_points(g, 2))

        assert np.allclose(on_grid, direct, atol=1e-9)

    def test_undersampled_grid_rejected(self):
        """Verify M < 2 * degree + 1 raises."""
        with pytest.raises(PreconditionError):
            trigpoly_service.evaluate_on_grid(TrigPoly.cosine((3,)), GridSpec(6))

    def test_grid_budget(self):
        """Verify oversized grids raise a budget error."""
        with pytest.raises(ResourceBudgetError):
            trigpoly_service.check_grid_budget(16, 2, Budgets(max_grid_axis=8))


class TestNorms:
    """Test quadrature norms."""

    def test_cosine_l2_norm(self):
        """Verify ||cos||_2 = 1/sqrt(2) with a vanishing error hint."""
        report = trigpoly_service.lp_norm(TrigPoly.cosine((1, 0)), 2.0, GridSpec.for_degree(1))

        assert report.value == pytest.approx(1 / math.sqrt(2), abs=1e-12)
        assert report.error_hint < 1e-12
        assert report.method is NormMethod.QUADRATURE

    def test_zero_and_constant_are_exact(self):
        """Verify trivial polynomials take the exact-coefficient path."""
        g = GridSpec.for_degree(0)

        zero = trigpoly_service.lp_norm(TrigPoly.zero(1), 1.5, g)
        constant = trigpoly_service.lp_norm(TrigPoly.constant(1, -2), 1.5, g)

        assert zero.value == 0.0
        assert constant.value == 2.0
        assert constant.method is NormMethod.EXACT_COEFFICIENT

    def test_sampled_norm(self):
        """Verify the Sobol estimate of ||cos||_2 is close."""
        report = trigpoly_service.lp_norm(TrigPoly.cosine((1,)), 2.0, SampleSpec(12, seed=3))

        assert report.method is NormMethod.SAMPLED
        assert report.value == pytest.approx(1 / math.sqrt(2), abs=1e-2)

    def test_exponent_below_one_rejected(self):
        """Verify p < 1 raises DomainError."""
        with pytest.raises(DomainError):
            trigpoly_service.lp_norm(TrigPoly.cosine((1,)), 0.5, GridSpec.for_degree(1))

    def test_low_oversampling_rejected(self):
        """Verify grids below oversampling 4 raise."""
        with pytest.raises(PreconditionError):
            trigpoly_service.lp_norm(TrigPoly.cosine((1,)), 2.0, GridSpec(4, 1))

    def test_choose_quadrature_prefers_grid(self):
        """Verify small polynomials get a dense grid."""
        g = trigpoly_service.choose_quadrature(TrigPoly.cosine((3, 1)), 4.0)

        assert isinstance(g, GridSpec)
        assert g.M >= 4 * 7

    def test_choose_quadrature_falls_back_to_sampling(self):
        """Verify grids beyond the budget switch to Sobol sampling."""
        g = trigpoly_service.choose_quadrature(
            TrigPoly.cosine((10, 1)), 4.0, Budgets(max_grid_axis=64), seed=5
        )

        assert g == SampleSpec(16, 5)

    def test_coeff_l1_upper_bounds_sup(self):
        """Verify the coefficient sum bounds every sample."""
        f = TrigPoly(1, {(1,): Fraction(1, 2), (-2,): Fraction(1, 3)})
        samples = trigpoly_service.evaluate_on_grid(f, GridSpec.for_degree(2))

        assert trigpoly_service.coeff_l1_upper(f) == pytest.approx(5 / 6)
        assert np.abs(samples).max() <= 5 / 6 + 1e-12


class TestCalculus:
    """Test derivatives and antiderivatives."""

    def test_derivative_of_cosine(self):
        """Verify d/dt cos(2 pi t) carries the (2 pi i) factor exactly."""
        df = trigpoly_service.partial_derivative(TrigPoly.cosine((1,)), 1)

        assert df.twopi_i_power == 1
        assert df.reduced_coeff((1,)) == Fraction(1, 2)
        assert df.reduced_coeff((-1,)) == Fraction(-1, 2)
        assert df.coeff((1,)) == pytest.approx(0.5 * 2j * math.pi)

    def test_antiderivative_inverts_derivative(self):
        """Verify the antiderivative undoes differentiation coefficient-exactly."""
        f = TrigPoly(2, {(1, 2): Fraction(1, 3), (-4, 1): Fraction(2, 5)})
        for j in (1, 2):
            df = trigpoly_service.partial_derivative(f, j)
            assert trigpoly_service.antiderivative(df, j) == f

    def test_antiderivative_needs_nonzero_frequency(self):
        """Verify a term with n^(j) = 0 has no antiderivative."""
        with pytest.raises(PreconditionError):
            trigpoly_service.antiderivative(TrigPoly.constant(1), 1)

    def test_axis_out_of_range(self):
        """Verify the axis must be in 1..d."""
        with pytest.raises(PreconditionError):
            trigpoly_service.partial_derivative(TrigPoly.cosine((1,)), 2)

    def test_sobolev_norm_of_constant(self):
        """Verify ||1||_{1,1} = 1."""
        report = trigpoly_service.sobolev_norm_11(TrigPoly.constant(2), GridSpec.for_degree(0))

        assert report.value == pytest.approx(1.0)

    def test_normalized_sobolev_norm_of_cosine(self):
        """Verify the normalized derivative term divides by 2 pi."""
        f = TrigPoly.cosine((1,))
        g = GridSpec.for_degree(1, 64.0)
        raw = trigpoly_service.sobolev_norm_11(f, g)
        normalized = trigpoly_service.sobolev_norm_11(f, g, normalized=True)
        base = trigpoly_service.lp_norm(f, 1.0, g).value

        assert normalized.value == pytest.approx(base + (raw.value - base) / (2 * math.pi))


class TestInequalities:
    """Test the Hausdorff-Young and Bernstein checks."""

    def test_fourier_coeff_lq_exact(self):
        """Verify the exact rational path for even integer q."""
        assert trigpoly_service.fourier_coeff_lq(TrigPoly.cosine((1,)), 2) == pytest.approx(
            math.sqrt(0.5)
        )

    @pytest.mark.parametrize(
        "f,q,expected",
        [
            (TrigPoly.cosine((1,)), 2, NormMethod.EXACT_COEFFICIENT),
            (TrigPoly.cosine((1,)), 3, NormMethod.FLOAT_COEFFICIENT),
            (TrigPoly(1, {(1,): 0.5 + 0.5j}), 2, NormMethod.FLOAT_COEFFICIENT),
            (TrigPoly(1, {(1,): Fraction(1, 2)}, 1), 2, NormMethod.FLOAT_COEFFICIENT),
        ],
    )
    def test_fourier_coeff_norm_method(self, f, q, expected):
        """Verify only rational coefficients with even integer q are summed exactly."""
        assert trigpoly_service.fourier_coeff_norm(f, q).method is expected

    def test_fourier_coeff_norm_odd_exponent(self):
        """Verify (2 (1/2)^3)^(1/3) for the cosine at q = 3."""
        report = trigpoly_service.fourier_coeff_norm(TrigPoly.cosine((1,)), 3)

        assert report.value == pytest.approx(0.25 ** (1 / 3))
        assert report.grid is None

    @pytest.mark.parametrize("p,method", [(2.0, "exact-coefficient"), (1.5, "float-coefficient")])
    def test_hausdorff_young_names_coefficient_method(self, p, method):
        """Verify the report says how the coefficient norm was summed."""
        report = trigpoly_service.hausdorff_young_check(TrigPoly.cosine((1,)), p, GridSpec(8, 1))

        assert report.passed
        assert f"coeff_method={method}" in report.notes
        assert "lp_method=quadrature" in report.notes

    def test_dual_exponent(self):
        """Verify p' = p / (p - 1)."""
        assert trigpoly_service.dual_exponent(2.0) == 2.0
        assert trigpoly_service.dual_exponent(1.25) == pytest.approx(5.0)

    @pytest.mark.parametrize("p", [1.25, 1.5, 2.0])
    def test_hausdorff_young_on_random_polys(self, rng, p):
        """Verify ||f^||_p' <= ||f||_p on seeded random polynomials."""
        for _ in range(5):
            f = trigpoly_service.random_trig_poly(rng, 2, 4, 6)
            g = trigpoly_service.choose_quadrature(f, 8.0)
            report = trigpoly_service.hausdorff_young_check(f, p, g)
            assert report.passed, report.observed

    def test_hausdorff_young_range(self):
        """Verify p outside (1, 2] is rejected."""
        with pytest.raises(DomainError):
            trigpoly_service.hausdorff_young_check(TrigPoly.cosine((1,)), 2.5, GridSpec(8, 1))

    def test_bernstein_equality_for_cosine(self):
        """Verify cos(4 pi t) attains the Bernstein bound."""
        f = TrigPoly.cosine((2,))
        report = trigpoly_service.bernstein_check(f, GridSpec.for_degree(2, 8.0))

        assert report.passed
        assert report.observed["normalized_ratio"] == pytest.approx(1.0, abs=1e-9)

    def test_bernstein_needs_one_dimension(self):
        """Verify Bernstein is checked in d = 1 only."""
        with pytest.raises(PreconditionError):
            trigpoly_service.bernstein_check(TrigPoly.cosine((1, 1)), GridSpec(16, 1))

    def test_random_poly_is_real_valued(self, rng):
        """Verify real random polynomials are conjugate-symmetric."""
        f = trigpoly_service.random_trig_poly(rng, 2, 3, 5)

        assert f.is_real_valued()
        assert f.degree <= 3
