"""Report schema for validating emitted JSON documents.

Pydantic models mirroring ``schemas/report.schema.json``. Numbers are
carried as decimal strings with 17 significant digits.
"""

import re
from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

SCHEMA_VERSION = "tml/1"

_DECIMAL = re.compile(r"^-?(\d+(\.\d+)?([eE][+-]?\d+)?|inf|nan)$")

ParamValue = Union[str, int, bool, list[str], list[int]]


def _check_decimal(value: str) -> str:
    if not _DECIMAL.match(value):
        raise ValueError(f"not a decimal string: {value!r}")
    return value


class ReportDocument(BaseModel):
    """One reports/<claim_id>.json document."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    schema_version: Literal["tml/1"] = Field(alias="schema", default=SCHEMA_VERSION)
    claim_id: str = Field(min_length=1)
    key: str
    params: dict[str, ParamValue] = Field(default_factory=dict)
    passed: bool
    status: Literal[
        "passed", "failed", "skipped", "refused", "budget_exceeded", "premise_violation"
    ]
    expectation: Literal["holds", "fails"]
    observed: dict[str, str] = Field(default_factory=dict)
    tolerance: str
    series: dict[str, list[str]] = Field(default_factory=dict)
    artifacts: list[str] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)

    @field_validator("observed")
    @classmethod
    def validate_observed(cls, v: dict[str, str]) -> dict[str, str]:
        """Observed values must be decimal strings."""
        for value in v.values():
            _check_decimal(value)
        return v

    @field_validator("tolerance")
    @classmethod
    def validate_tolerance(cls, v: str) -> str:
        """Tolerance must be a decimal string."""
        return _check_decimal(v)

    @field_validator("series")
    @classmethod
    def validate_series(cls, v: dict[str, list[str]]) -> dict[str, list[str]]:
        """Series entries must be decimal strings."""
        for values in v.values():
            for value in values:
                _check_decimal(value)
        return v


class SuiteEntry(BaseModel):
    """Summary line of one report inside suite.json."""

    model_config = ConfigDict(extra="forbid")

    key: str
    claim_id: str
    passed: bool
    status: str
    report: str = Field(description="Path of the report file relative to the output dir")


class SuiteDocument(BaseModel):
    """The suite.json summary."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    schema_version: Literal["tml/1"] = Field(alias="schema", default=SCHEMA_VERSION)
    passed: bool
    config: dict[str, Union[ParamValue, dict[str, int]]]
    counts: dict[str, int]
    reports: list[SuiteEntry]
