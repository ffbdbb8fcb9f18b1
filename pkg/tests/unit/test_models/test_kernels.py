"""Tests for kernel specifications."""

import numpy as np
import pytest

from src.exceptions import ConstructionError, PreconditionError
from src.models.kernels import FejerProductSpec, RieszProductSpec, SignPattern, pattern_matrix
from tests.fixtures.sample_data import create_point, create_riesz_spec


class TestSignPatterns:
    """Test sign patterns and the pattern matrix."""

    def test_pattern_matrix_order(self):
        """Verify 3^N rows in lexicographic order with zero in the middle."""
        patterns = pattern_matrix(2)

        assert patterns.shape == (9, 2)
        assert patterns[0].tolist() == [-1, -1]
        assert patterns[4].tolist() == [0, 0]
        assert pattern_matrix(0).shape == (1, 0)

    def test_sign_pattern(self):
        """Verify L and M of a pattern."""
        xi = SignPattern((1, 0, -1))
        freqs = [create_point(1, 0), create_point(4, 0), create_point(16, 1)]

        assert xi.L == 2
        assert xi.M(freqs) == create_point(-15, -1)
        assert xi.truncated(1) == SignPattern((1,))

    def test_invalid_entries(self):
        """Verify entries outside {-1, 0, 1} are rejected."""
        with pytest.raises(PreconditionError):
            SignPattern((2,))


class TestRieszProductSpec:
    """Test Riesz product specifications."""

    def test_pattern_frequencies(self, riesz_spec):
        """Verify M(xi) for every pattern row and the expansion degree."""
        frequencies = riesz_spec.pattern_frequencies

        assert frequencies.shape == (9, 2)
        assert len(np.unique(frequencies, axis=0)) == 9
        assert riesz_spec.max_frequency == 22
        assert riesz_spec.pattern_lengths.tolist() == [2, 1, 2, 1, 0, 1, 2, 1, 2]

    def test_prefix(self, riesz_spec):
        """Verify prefixes keep the leading frequencies."""
        assert riesz_spec.prefix(0) is None
        assert riesz_spec.prefix(1).points == [create_point(2, 1)]

    def test_zero_frequency_rejected(self):
        """Verify Riesz frequencies are nonzero."""
        with pytest.raises(ConstructionError):
            RieszProductSpec.from_points([create_point(0, 0)])

    def test_length_limit(self):
        """Verify N <= 12."""
        points = [create_point(4**i, 0) for i in range(13)]

        with pytest.raises(ConstructionError):
            RieszProductSpec.from_points(points)

    def test_empty_rejected(self):
        """Verify at least one frequency."""
        with pytest.raises(ConstructionError):
            RieszProductSpec.from_points([])

    def test_single_axis_factor(self):
        """Verify create_riesz_spec scales the base direction."""
        spec = create_riesz_spec((1, 1), factor=5, N=3)

        assert [n.coords for n in spec.points] == [(1, 1), (5, 5), (25, 25)]


class TestFejerProductSpec:
    """Test Fejer product specifications."""

    def test_degree(self):
        """Verify degree 3^(k+2)."""
        assert FejerProductSpec(2, 1).degree == 27

    def test_invalid(self):
        """Verify d >= 1 and k >= 0."""
        with pytest.raises(ConstructionError):
            FejerProductSpec(2, -1)
