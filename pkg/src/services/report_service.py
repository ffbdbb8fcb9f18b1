"""Writes suite.json, reports/*.json and tables/*.csv for a finished suite."""

import logging
from pathlib import Path
from typing import Any, Sequence

from src.config.suite_config import SuiteConfig
from src.models.report_schema import SuiteDocument, SuiteEntry
from src.models.reports import CertificationReport, CertificationStatus
from src.utils.numbers import format_decimal
from src.utils.serialization import report_slug, report_to_document, write_csv, write_json

logger = logging.getLogger(__name__)


def _config_value(value: Any) -> Any:
    if isinstance(value, float):
        return format_decimal(value)
    if isinstance(value, list):
        return [_config_value(v) for v in value]
    return value


def config_summary(cfg: SuiteConfig) -> dict[str, Any]:
    """The suite configuration with floats as decimal strings."""
    return {name: _config_value(value) for name, value in cfg.model_dump().items()}


def series_rows(report: CertificationReport) -> list[dict[str, Any]]:
    """One row per index; shorter series leave their cells empty."""
    names = sorted(report.series)
    length = max((len(report.series[n]) for n in names), default=0)
    rows = []
    for i in range(length):
        row: dict[str, Any] = {"index": i}
        for name in names:
            values = report.series[name]
            row[name] = float(values[i]) if i < len(values) else ""
        rows.append(row)
    return rows


def write_report(report: CertificationReport, out_dir: Path) -> str:
    """Write one report (and its series table) and return its relative path."""
    slug = report_slug(report)
    if report.series:
        table = Path("tables") / f"{slug}.csv"
        write_csv(out_dir / table, ["index", *sorted(report.series)], series_rows(report))
        report.artifacts.append(table.as_posix())
    relative = (Path("reports") / f"{slug}.json").as_posix()
    document = report_to_document(report)
    write_json(out_dir / relative, document.model_dump(by_alias=True))
    return relative


def build_suite_document(
    reports: Sequence[CertificationReport], cfg: SuiteConfig, paths: Sequence[str]
) -> SuiteDocument:
    """The validated suite.json summary."""
    counts = {status.value: 0 for status in CertificationStatus}
    for report in reports:
        counts[report.status.value] += 1
    counts["total"] = len(reports)
    counts["not_passed"] = sum(1 for r in reports if not r.passed)
    return SuiteDocument(
        passed=all(r.passed for r in reports),
        config=config_summary(cfg),
        counts=counts,
        reports=[
            SuiteEntry(
                key=r.key,
                claim_id=r.claim_id,
                passed=r.passed,
                status=r.status.value,
                report=path,
            )
            for r, path in zip(reports, paths)
        ],
    )


def write_suite(
    reports: Sequence[CertificationReport], cfg: SuiteConfig, out_dir: Path
) -> SuiteDocument:
    """Write every report, then suite.json, in key order.

    Args:
        reports: Suite reports.
        cfg: Configuration the suite ran with.
        out_dir: Output directory; created when missing.

    Returns:
        The suite summary that was written.
    """
    out_dir = Path(out_dir)
    ordered = sorted(reports, key=lambda r: r.key)
    paths = [write_report(report, out_dir) for report in ordered]
    document = build_suite_document(ordered, cfg, paths)
    write_json(out_dir / "suite.json", document.model_dump(by_alias=True))
    logger.info(f"Wrote {len(ordered)} reports to {out_dir}")
    return document
