"""Tests for JSON and CSV encoding."""

import json
import math
from fractions import Fraction

import pytest

from src.exceptions import ConfigError
from src.models.kernels import FejerProductSpec
from src.models.trig_poly import TrigPoly
from src.utils.serialization import (
    csv_text,
    dumps_json,
    kernel_spec_from_json,
    kernel_spec_to_json,
    parse_freqs,
    read_json,
    report_slug,
    report_to_document,
    slugify,
    trigpoly_from_json,
    trigpoly_to_json,
    write_csv,
)
from tests.fixtures.sample_data import create_point, create_report


class TestTrigPolyJson:
    """Test polynomial documents."""

    def test_exact_coefficients_stay_rational(self):
        """Verify rational coefficients are written as p/q and read back exactly."""
        f = TrigPoly(2, {(1, 0): Fraction(1, 3), (0, -1): 2})
        data = trigpoly_to_json(f)

        assert data["twopi_i_power"] == 0
        assert {"freq": [1, 0], "re": "1/3", "im": "0"} in data["terms"]
        assert trigpoly_from_json(data) == f

    def test_derivative_writes_full_and_reduced_coefficients(self):
        """Verify re/im hold (2 pi i) c_n and the exact c_n is kept beside them."""
        f = TrigPoly(2, {(1, 0): Fraction(1, 3), (0, -1): 2}, 1)
        data = trigpoly_to_json(f)
        term = next(t for t in data["terms"] if t["freq"] == [1, 0])

        assert data["twopi_i_power"] == 1
        assert term["re"] == "0"
        assert float(term["im"]) == pytest.approx(2 * math.pi / 3)
        assert (term["reduced_re"], term["reduced_im"]) == ("1/3", "0")
        assert trigpoly_from_json(data) == f

    def test_full_coefficients_without_reduced_fields(self):
        """Verify a (2 pi i) power without reduced terms reads re/im as full coefficients."""
        data = {"d": 1, "twopi_i_power": 1, "terms": [{"freq": [1], "re": "0", "im": "2"}]}
        f = trigpoly_from_json(data)

        assert f.twopi_i_power == 0
        assert f.coeff((1,)) == 2j

    def test_complex_coefficients(self):
        """Verify floating coefficients are written as decimal strings."""
        data = trigpoly_to_json(TrigPoly(1, {(2,): 0.5 + 0.25j}))

        assert data["terms"] == [{"freq": [2], "re": "0.5", "im": "0.25"}]

    def test_bare_term_list(self):
        """Verify a list of terms decodes with power zero and inferred dimension."""
        f = trigpoly_from_json([{"freq": [1, 1], "re": "1/2"}])

        assert f.d == 2
        assert f.twopi_i_power == 0
        assert f.reduced_coeff((1, 1)) == Fraction(1, 2)

    def test_empty_list_needs_dimension(self):
        """Verify an empty term list without d is rejected."""
        with pytest.raises(ConfigError):
            trigpoly_from_json([])
        assert trigpoly_from_json({"d": 3, "terms": []}).is_zero

    @pytest.mark.parametrize(
        "terms", [[{"re": "1"}], [{"freq": [1], "re": "x"}], [{"freq": [1], "re": "1/0"}]]
    )
    def test_malformed_terms(self, terms):
        """Verify broken terms raise ConfigError."""
        with pytest.raises(ConfigError):
            trigpoly_from_json(terms)


class TestKernelSpecJson:
    """Test kernel spec documents."""

    def test_fejer(self):
        """Verify Fejer products encode d and k."""
        data = kernel_spec_to_json(FejerProductSpec(2, 1))

        assert data == {"type": "fejer_product", "d": 2, "k": 1}
        assert kernel_spec_from_json(data) == FejerProductSpec(2, 1)

    def test_riesz_phi(self, phi_spec):
        """Verify test-function specs keep their axis and frequencies."""
        data = kernel_spec_to_json(phi_spec)

        assert data["type"] == "riesz_phi"
        assert data["freqs"] == [[2, 1], [20, 10]]
        assert data["j0"] == 1
        assert kernel_spec_from_json(data) == phi_spec

    def test_riesz_product(self, riesz_spec):
        """Verify plain Riesz products decode to RieszProductSpec."""
        data = kernel_spec_to_json(riesz_spec)

        assert data["type"] == "riesz_product"
        assert kernel_spec_from_json(data) == riesz_spec

    def test_unknown_type(self):
        """Verify unknown kernel types raise ConfigError."""
        with pytest.raises(ConfigError):
            kernel_spec_from_json({"type": "gauss"})


class TestParseFreqs:
    """Test the a,b;c,d frequency syntax."""

    def test_parse(self):
        """Verify points are read in order and empty chunks are ignored."""
        assert parse_freqs("2,1;20,10;") == [create_point(2, 1), create_point(20, 10)]

    @pytest.mark.parametrize("text", ["", ";", "1,a", "1,2;3"])
    def test_rejects(self, text):
        """Verify empty, non-integer and mixed-dimension input raise."""
        with pytest.raises(ConfigError):
            parse_freqs(text)


class TestReports:
    """Test report documents and slugs."""

    def test_document_formats_numbers(self):
        """Verify observed values, tolerance and float params become decimal strings."""
        report = create_report(observed={"C": 0.1}, series={"mu": [1.0, 0.5]})
        report.tolerance = 1e-9
        document = report_to_document(report)

        assert document.observed == {"C": "0.10000000000000001"}
        assert document.tolerance == "1.0000000000000001e-09"
        assert document.params == {"d": 2, "p": "2"}
        assert document.series == {"mu": ["1", "0.5"]}
        assert document.status == "passed"

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("krok1[d=2,p=2.0]", "krok1_d=2,p=2.0"),
            ("a b/c", "a_b_c"),
            ("power:1*norm", "power_1_norm"),
        ],
    )
    def test_slugify(self, text, expected):
        """Verify unsafe characters collapse to underscores."""
        assert slugify(text) == expected

    def test_report_slug(self, sample_report):
        """Verify the report slug follows its key."""
        assert report_slug(sample_report) == "krok1_d=2,p=2.0"


class TestFiles:
    """Test JSON and CSV files."""

    def test_dumps_json_is_canonical(self):
        """Verify sorted keys, indentation and a trailing newline."""
        assert dumps_json({"b": 1, "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": 1\n}\n'

    def test_read_json_errors(self, tmp_path):
        """Verify missing and malformed files raise ConfigError."""
        bad = tmp_path / "bad.json"
        bad.write_text("{", encoding="utf-8")

        with pytest.raises(ConfigError):
            read_json(tmp_path / "missing.json")
        with pytest.raises(ConfigError):
            read_json(bad)

    def test_csv_text(self):
        """Verify a header row, formatted floats and newline endings."""
        text = csv_text(["q", "K"], [{"q": 2.5, "K": 1}, {"q": 0.1, "K": 2}])

        assert text == "q,K\n2.5,1\n0.10000000000000001,2\n"

    def test_write_csv_creates_directories(self, tmp_path):
        """Verify parent directories are created."""
        path = write_csv(tmp_path / "tables" / "x.csv", ["a"], [{"a": 1}])

        assert path.read_text(encoding="utf-8") == "a\n1\n"
        assert json.loads(dumps_json([1])) == [1]
