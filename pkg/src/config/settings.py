"""Configuration management using Pydantic Settings."""

from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


class Budgets(BaseModel):
    """Desk-scale resource limits.

    Exceeding any of them is a typed ResourceBudgetError, never a silent
    truncation.
    """

    max_dimension: int = Field(default=3, ge=1, description="Largest supported d")
    max_riesz_length: int = Field(
        default=8,
        ge=1,
        le=12,
        description="Largest N for Riesz expansions (3^N coefficients)",
    )
    max_grid_axis: int = Field(
        default=4096,
        description="Samples per axis for dense grids when d >= 2",
    )
    max_grid_axis_1d: int = Field(
        default=1 << 20,
        description="Samples for dense grids when d == 1",
    )
    max_grid_points: int = Field(default=1 << 24, description="Total dense grid samples")
    max_ring_points: int = Field(
        default=2_000_000_000,
        description="Largest ring cardinality a sweep may enumerate",
    )
    max_fejer_degree: int = Field(default=729, description="Largest Fejer degree 3^(k+2)")
    sample_log2: int = Field(
        default=16,
        ge=8,
        le=22,
        description="log2 of the Sobol sample count used by the sampled quadrature",
    )

    def grid_axis_limit(self, d: int) -> int:
        """Per-axis sample limit for a grid in dimension d."""
        return self.max_grid_axis_1d if d == 1 else self.max_grid_axis


class Settings(BaseSettings):
    """Application settings.

    Only the output directory is read from the environment (OUTPUT_DIR);
    everything else is configured through suite files and CLI flags.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    output_dir: Path = Field(
        default=Path("out"),
        description="Directory receiving suite.json, reports/, tables/ and fixtures/",
    )

    @field_validator("output_dir")
    @classmethod
    def validate_output_dir(cls, v: Path) -> Path:
        """Reject an empty output directory."""
        if str(v).strip() == "":
            raise ValueError("OUTPUT_DIR must not be empty")
        return v

    @property
    def reports_dir(self) -> Path:
        """Directory for per-claim JSON reports."""
        return self.output_dir / "reports"

    @property
    def tables_dir(self) -> Path:
        """Directory for plot-ready CSV tables."""
        return self.output_dir / "tables"

    @property
    def fixtures_dir(self) -> Path:
        """Directory for generated JSON fixtures."""
        return self.output_dir / "fixtures"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


@lru_cache
def get_budgets() -> Budgets:
    """Get the default budgets."""
    return Budgets()
