"""Tests for symbol_service - the symbol catalog, tables and the diagonal action."""

import math
from fractions import Fraction

import numpy as np
import pytest

from src.exceptions import ConfigError, DomainError, PreconditionError
from src.models.symbols import Boundedness, SymbolKind
from src.models.trig_poly import TrigPoly
from src.services import symbol_service
from tests.fixtures.sample_data import create_point


class TestCatalog:
    """Test the built-in symbols."""

    def test_one_symbol(self, one):
        """Verify lambda = 1 everywhere."""
        values = one.eval_many(np.array([[1, 0], [3, -4]]))

        assert np.allclose(values, 1.0)
        assert one.is_radial
        assert not one.is_table

    def test_power_symbol(self):
        """Verify lambda_n = |n|^(-s)."""
        sym = symbol_service.power_symbol(1.0)

        assert sym.name == "power:1"
        assert sym.eval(create_point(3, 4)) == pytest.approx(0.2)
        assert sym.decay_order == 1.0

    def test_norm_symbol(self, norm):
        """Verify lambda_n = |n|_2."""
        assert norm.eval(create_point(3, 4)) == pytest.approx(5.0)

    def test_zero_frequency_undefined(self, one):
        """Verify symbols reject the origin."""
        with pytest.raises(DomainError):
            one.eval(create_point(0, 0))

    def test_non_finite_power_rejected(self):
        """Verify the exponent must be finite."""
        with pytest.raises(DomainError):
            symbol_service.power_symbol(math.inf)

    @pytest.mark.parametrize(
        "name,p,d,expected",
        [
            ("one", 2.0, 1, Boundedness.YES),
            ("one", 1.5, 3, Boundedness.YES),
            ("one", 2.0, 3, Boundedness.NO),
            ("zero", 2.0, 3, Boundedness.YES),
            ("norm", 1.5, 2, Boundedness.NO),
            ("power:-1", 2.0, 2, Boundedness.NO),
            ("power:-0.5", 2.0, 2, Boundedness.UNKNOWN),
            ("power:2", 2.0, 2, Boundedness.YES),
            ("power:0", 2.0, 3, Boundedness.NO),
            ("power:1", 2.0, 3, Boundedness.YES),
            ("power:0.25", 2.0, 3, Boundedness.UNKNOWN),
        ],
    )
    def test_boundedness_flags(self, name, p, d, expected):
        """Verify the catalog boundedness rules."""
        assert symbol_service.get_symbol(name).boundedness(p, d) is expected


class TestGetSymbol:
    """Test name resolution."""

    @pytest.mark.parametrize("name", ["one", "zero", "norm", "power:0.5", " one "])
    def test_known_names(self, name):
        """Verify catalog names resolve."""
        assert symbol_service.get_symbol(name).name == name.strip()

    @pytest.mark.parametrize("name", ["bogus", "power:abc", ""])
    def test_unknown_names(self, name):
        """Verify unknown or malformed names raise ConfigError."""
        with pytest.raises(ConfigError):
            symbol_service.get_symbol(name)

    def test_table_name(self, table_file):
        """Verify table:<file> loads the table."""
        sym = symbol_service.get_symbol(f"table:{table_file}")

        assert sym.kind is SymbolKind.TABLE
        assert sym.name == f"table:{table_file}"


class TestTables:
    """Test CSV symbol tables."""

    def test_load_table(self, table_file):
        """Verify listed points take their values and others are zero."""
        sym = symbol_service.load_table_symbol(table_file)

        assert sym.d == 2
        assert sym.is_table
        assert sym.eval(create_point(1, 0)) == 2.0
        assert sym.eval(create_point(0, 1)) == 0.5
        assert sym.eval(create_point(5, 5)) == 0.0

    def test_table_dimension_is_fixed(self, table_file):
        """Verify a d = 2 table cannot be evaluated in d = 3."""
        sym = symbol_service.load_table_symbol(table_file)

        with pytest.raises(PreconditionError):
            sym.eval_many(np.array([[1, 0, 0]]))

    @pytest.mark.parametrize(
        "content,line",
        [
            ("0,0,1,0\n", 1),
            ("1,0,1,0\n1,0,2,0\n", 2),
            ("# header\n1,x,1,0\n", 2),
            ("1,0,1,0\n1,0,0,1,0\n", 2),
            ("1,0\n", 1),
        ],
    )
    def test_malformed_tables(self, tmp_path, content, line):
        """Verify bad rows raise ConfigError with their line number."""
        path = tmp_path / "bad.csv"
        path.write_text(content, encoding="utf-8")

        with pytest.raises(ConfigError) as exc_info:
            symbol_service.load_table_symbol(path)

        assert exc_info.value.line == line

    def test_missing_file(self, tmp_path):
        """Verify unreadable files raise ConfigError."""
        with pytest.raises(ConfigError):
            symbol_service.load_table_symbol(tmp_path / "missing.csv")


class TestComposition:
    """Test products, witnesses and the diagonal action."""

    def test_product_symbol(self):
        """Verify (alpha * beta)_n = alpha_n beta_n."""
        sym = symbol_service.product_symbol(
            symbol_service.power_symbol(1.0), symbol_service.norm_symbol()
        )

        assert sym.name == "power:1*norm"
        assert sym.eval(create_point(3, 4)) == pytest.approx(1.0)
        assert sym.decay_order == 0.0

    def test_catalog_witnesses(self):
        """Verify the three witnesses and their bounds."""
        witnesses = symbol_service.catalog_witnesses(2)

        assert [w.name for w in witnesses] == ["power1*power1", "one*power1", "one*zero"]
        assert [w.normB_bound for w in witnesses] == [1.0, 1.0, 0.0]

    def test_apply_keeps_exact_coefficients(self, one):
        """Verify integer symbol values keep rationals exact."""
        f = TrigPoly(2, {(0, 0): Fraction(1, 3), (1, 2): Fraction(1, 5)})

        assert symbol_service.apply(one, f) == f

    def test_apply_scales_coefficients(self):
        """Verify lambda_n f^(n) with the mean passed through."""
        f = TrigPoly(1, {(0,): Fraction(2), (2,): Fraction(1, 2)})
        result = symbol_service.apply(symbol_service.norm_symbol(), f)

        assert result.reduced_coeff((0,)) == 2
        assert result.reduced_coeff((2,)) == 1

    def test_apply_zero_symbol(self):
        """Verify the zero symbol annihilates non-constant terms."""
        result = symbol_service.apply(symbol_service.zero_symbol(), TrigPoly.cosine((1, 1)))

        assert result.is_zero
