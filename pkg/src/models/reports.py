"""Certification outcomes and diagnostic trend reports."""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Optional

from src.models.lattice import LatticePoint


class CertificationStatus(Enum):
    """Outcome of one certification run."""

    PASSED = "passed"
    FAILED = "failed"
    SKIPPED = "skipped"
    REFUSED = "refused"
    BUDGET_EXCEEDED = "budget_exceeded"
    PREMISE_VIOLATION = "premise_violation"


class Expectation(Enum):
    """Whether the checked inequality is expected to hold."""

    HOLDS = "holds"
    FAILS = "fails"  # Negative control


class TrendClass(Enum):
    """Heuristic classification of a partial-sum sequence."""

    CONVERGENT = "convergent-trend"
    DIVERGENT = "divergent-trend"
    INCONCLUSIVE = "inconclusive"


@dataclass
class CertificationReport:
    """Machine-readable outcome of one inequality-chain check.

    ``status`` records whether the inequality held; ``passed`` folds in the
    expectation, so a negative control that fails is a passing report.
    """

    claim_id: str
    params: dict[str, Any]
    status: CertificationStatus
    expectation: Expectation = Expectation.HOLDS
    observed: dict[str, float] = field(default_factory=dict)
    tolerance: float = 0.0
    series: dict[str, list[float]] = field(default_factory=dict)
    artifacts: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True when the outcome matches the expectation."""
        if self.status in (CertificationStatus.SKIPPED, CertificationStatus.PREMISE_VIOLATION):
            return True
        if self.status is CertificationStatus.PASSED:
            return self.expectation is Expectation.HOLDS
        if self.status is CertificationStatus.FAILED:
            return self.expectation is Expectation.FAILS
        return False

    @property
    def key(self) -> str:
        """Stable identifier claim_id[param=value,...] used to sort suite output."""
        params = ",".join(f"{name}={self.params[name]}" for name in sorted(self.params))
        return f"{self.claim_id}[{params}]"

    def as_control(self) -> "CertificationReport":
        """Copy with the expectation inverted to a negative control."""
        return replace(self, expectation=Expectation.FAILS)

    @classmethod
    def from_check(
        cls,
        claim_id: str,
        params: dict[str, Any],
        holds: bool,
        **kwargs: Any,
    ) -> "CertificationReport":
        """Build a passed or failed report from a boolean outcome."""
        status = CertificationStatus.PASSED if holds else CertificationStatus.FAILED
        return cls(claim_id=claim_id, params=params, status=status, **kwargs)

    @classmethod
    def skipped(cls, claim_id: str, params: dict[str, Any], reason: str) -> "CertificationReport":
        """A report for a claim that had nothing to check."""
        return cls(claim_id, params, CertificationStatus.SKIPPED, notes=[reason])


@dataclass(frozen=True)
class TrendReport:
    """Partial sums with their increment ratios and heuristic class."""

    label: str
    partial_sums: list[float]
    increment_ratios: list[float]
    classification: TrendClass


@dataclass(frozen=True)
class MainSumReport:
    """Partial sums of the main summability series, ring by ring."""

    q_main: float
    partial_sums: list[float]
    krok2_sums: list[float]
    mu: list[float]
    split_holds: bool
    split_violations: int
    trend: TrendReport


@dataclass(frozen=True)
class DecayReport:
    """Ring maxima mu_k and their decay trend."""

    mu: list[float]
    argmax_points: list[Optional[LatticePoint]]
    trend_ratio: float
    decays: bool

    @property
    def flagged(self) -> bool:
        """Non-decay is evidence against boundedness (never proof)."""
        return not self.decays


@dataclass(frozen=True)
class SharpnessRow:
    """One CSV row of the sharpness exploration."""

    q: float
    K: int
    partial_sum: float
    classifier: TrendClass


@dataclass(frozen=True)
class SharpnessReport:
    """Partial sums of sum (|lambda_n|/|n|_2)^q for several exponents q."""

    symbol: str
    d: int
    trends: dict[float, TrendReport]
    schatten_trends: dict[float, TrendReport] = field(default_factory=dict)

    @property
    def rows(self) -> list[SharpnessRow]:
        """Flattened rows (q, K, partial_sum, classifier) in q then K order."""
        rows = []
        for q in sorted(self.trends):
            trend = self.trends[q]
            for K, value in enumerate(trend.partial_sums, start=1):
                rows.append(SharpnessRow(q, K, value, trend.classification))
        return rows

    def classification(self, q: float) -> TrendClass:
        """Class assigned to exponent q."""
        return self.trends[q].classification
