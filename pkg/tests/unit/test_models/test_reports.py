"""Tests for certification report models."""

import pytest

from src.models.reports import (
    CertificationReport,
    CertificationStatus,
    Expectation,
    SharpnessReport,
    TrendClass,
    TrendReport,
)
from tests.fixtures.sample_data import create_report


class TestCertificationReport:
    """Test pass semantics and keys."""

    @pytest.mark.parametrize(
        "status,expectation,passed",
        [
            (CertificationStatus.PASSED, Expectation.HOLDS, True),
            (CertificationStatus.FAILED, Expectation.HOLDS, False),
            (CertificationStatus.PASSED, Expectation.FAILS, False),
            (CertificationStatus.FAILED, Expectation.FAILS, True),
            (CertificationStatus.SKIPPED, Expectation.HOLDS, True),
            (CertificationStatus.PREMISE_VIOLATION, Expectation.HOLDS, True),
            (CertificationStatus.REFUSED, Expectation.HOLDS, False),
            (CertificationStatus.BUDGET_EXCEEDED, Expectation.FAILS, False),
        ],
    )
    def test_passed(self, status, expectation, passed):
        """Verify passed folds the expectation into the status."""
        assert create_report(status=status, expectation=expectation).passed is passed

    def test_key_sorts_params(self):
        """Verify the key lists parameters alphabetically."""
        report = create_report(claim_id="r1", params={"p": 2.0, "d": 1, "N": 2})

        assert report.key == "r1[N=2,d=1,p=2.0]"

    def test_as_control(self, sample_report):
        """Verify as_control inverts the expectation on a copy."""
        control = sample_report.as_control()

        assert control.expectation is Expectation.FAILS
        assert sample_report.expectation is Expectation.HOLDS
        assert not control.passed

    def test_from_check(self):
        """Verify a boolean outcome maps to passed or failed."""
        assert CertificationReport.from_check("x", {}, True).status is CertificationStatus.PASSED
        assert CertificationReport.from_check("x", {}, False).status is CertificationStatus.FAILED

    def test_skipped(self):
        """Verify skipped reports carry their reason."""
        report = CertificationReport.skipped("sectors", {}, "N_values is empty")

        assert report.status is CertificationStatus.SKIPPED
        assert report.notes == ["N_values is empty"]


class TestSharpnessReport:
    """Test sharpness rows."""

    def test_rows_follow_q_then_k(self):
        """Verify flattened rows are ordered by exponent then ring count."""
        report = SharpnessReport(
            symbol="one",
            d=1,
            trends={
                3.0: TrendReport("q[3]", [1.0, 1.5], [], TrendClass.INCONCLUSIVE),
                2.0: TrendReport("q[2]", [1.0], [], TrendClass.INCONCLUSIVE),
            },
        )

        assert [(row.q, row.K) for row in report.rows] == [(2.0, 1), (3.0, 1), (3.0, 2)]
        assert report.classification(3.0) is TrendClass.INCONCLUSIVE
