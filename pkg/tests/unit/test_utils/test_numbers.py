"""Tests for number formatting and rational parsing."""

import math
from fractions import Fraction

import pytest

from src.utils.numbers import (
    POWERS_OF_3,
    format_decimal,
    format_rational,
    is_rational_text,
    parse_rational,
)


class TestFormatDecimal:
    """Test 17-digit decimal strings."""

    @pytest.mark.parametrize(
        "value,expected",
        [
            (0, "0"),
            (-0.0, "0"),
            (1, "1"),
            (2.0, "2"),
            (0.25, "0.25"),
            (0.1, "0.10000000000000001"),
            (Fraction(1, 3), "0.33333333333333331"),
            (math.inf, "inf"),
            (-math.inf, "-inf"),
            (math.nan, "nan"),
        ],
    )
    def test_format(self, value, expected):
        """Verify the canonical text of common values."""
        assert format_decimal(value) == expected

    def test_round_trips_through_float(self):
        """Verify 17 significant digits recover the float exactly."""
        x = 1 / 7
        assert float(format_decimal(x)) == x


class TestRationals:
    """Test exact rational text."""

    def test_format_rational(self):
        """Verify integers print without a denominator."""
        assert format_rational(Fraction(6, 3)) == "2"
        assert format_rational(Fraction(-3, 4)) == "-3/4"
        assert format_rational(5) == "5"

    @pytest.mark.parametrize(
        "text,expected",
        [("3/6", Fraction(1, 2)), (" -7 ", Fraction(-7)), ("0.25", Fraction(1, 4))],
    )
    def test_parse_rational(self, text, expected):
        """Verify p/q, integers and finite decimals parse exactly."""
        assert parse_rational(text) == expected

    @pytest.mark.parametrize("text", ["", "   ", "abc", "1/x"])
    def test_parse_rejects_garbage(self, text):
        """Verify malformed numbers raise ValueError."""
        with pytest.raises(ValueError):
            parse_rational(text)

    @pytest.mark.parametrize(
        "text,expected",
        [("3", True), ("-3/4", True), ("+12", True), ("1.5", False), ("1e3", False), ("", False)],
    )
    def test_is_rational_text(self, text, expected):
        """Verify only integers and p/q count as exact text."""
        assert is_rational_text(text) is expected


class TestPowersOfThree:
    """Test the power table."""

    def test_table(self):
        """Verify the first entries and the length."""
        assert POWERS_OF_3[:4] == (1, 3, 9, 27)
        assert len(POWERS_OF_3) == 41
