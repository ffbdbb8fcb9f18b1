"""Certification suite configuration.

The file format is flat ``key=value``, one entry per line. ``#`` starts a
comment, lists are comma separated and integer ranges are written ``a..b``
(inclusive). Keys ``d``, ``p``, ``N`` and ``k`` are accepted as short
aliases.
"""

import logging
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.config.settings import Budgets
from src.exceptions import ConfigError

logger = logging.getLogger(__name__)

KEY_ALIASES = {
    "d": "dims",
    "p": "p_values",
    "N": "N_values",
    "k": "k_range",
    "q": "sharpness_q",
}


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        value = value.strip()
        if value in ("", "[]"):
            return []
        return [item.strip() for item in value.strip("[]").split(",") if item.strip()]
    return value


def parse_int_range(value: Any) -> list[int]:
    """Parse ``"a..b"``, ``"a,b,c"`` or a single integer into a list of ints."""
    if isinstance(value, int):
        return [value]
    if isinstance(value, str) and ".." in value:
        start, _, stop = value.partition("..")
        lo, hi = int(start), int(stop)
        if hi < lo:
            raise ValueError(f"empty range {value!r}")
        return list(range(lo, hi + 1))
    return [int(item) for item in _split_list(value)]


class SuiteConfig(BaseModel):
    """Parameter grid of one certification suite run."""

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    dims: list[int] = Field(default=[1, 2], description="Dimensions d to certify")
    p_values: list[float] = Field(default=[2.0], description="Exponents p in (1, 2]")
    eps: float = Field(default=0.1, gt=0, description="Epsilon of the main exponent")
    N_values: list[int] = Field(
        default=[2, 3, 4], description="Sector granularities and Riesz lengths"
    )
    k_range: list[int] = Field(default=[0, 1, 2], description="Ring indices for ring claims")
    counting_N: list[int] = Field(
        default=[2], description="Sector granularities for the counting claim over N^(d+1) rings"
    )
    oversampling: int = Field(default=4, ge=4, description="Grid oversampling for quadrature")
    seed: int = Field(default=7, description="Master random seed")
    symbol: str = Field(default="one", description="Catalog symbol under certification")
    negative_controls: bool = Field(default=True, description="Run inverted-expectation controls")
    K_max: int = Field(default=5, ge=0, description="Largest ring index in summability sweeps")
    random_polys: int = Field(
        default=200, ge=0, description="Random polynomials for Hausdorff-Young"
    )
    spec_corpus: int = Field(default=20, ge=1, description="Random sparse specs per N")
    split_inputs: int = Field(default=50, ge=0, description="Random inputs for split_into_sparse")
    sharpness_q: list[float] = Field(
        default=[1.9, 2.1, 8.1], description="Exponents q explored by the sharpness claim"
    )
    sharpness_K: int = Field(default=6, ge=1, description="Rings explored by the sharpness claim")
    workers: int = Field(default=1, ge=1, description="Claim families run concurrently")
    budgets: Budgets = Field(default_factory=Budgets)

    @field_validator("dims", "N_values", "counting_N", mode="before")
    @classmethod
    def parse_int_list(cls, v: Any) -> Any:
        """Accept comma lists and ranges for integer lists."""
        if isinstance(v, (str, int)):
            return parse_int_range(v)
        return v

    @field_validator("k_range", mode="before")
    @classmethod
    def parse_k_range(cls, v: Any) -> Any:
        """Accept ``0..3`` style ranges."""
        if isinstance(v, (str, int)):
            return parse_int_range(v)
        return v

    @field_validator("p_values", "sharpness_q", mode="before")
    @classmethod
    def parse_float_list(cls, v: Any) -> Any:
        """Accept comma separated float lists."""
        if isinstance(v, (int, float)):
            return [float(v)]
        return _split_list(v)

    @field_validator("dims")
    @classmethod
    def validate_dims(cls, v: list[int]) -> list[int]:
        """Dimensions must be positive."""
        if not v or any(d < 1 for d in v):
            raise ValueError("dims must be a non-empty list of positive integers")
        return v

    @field_validator("p_values")
    @classmethod
    def validate_p_values(cls, v: list[float]) -> list[float]:
        """Exponents must lie in (1, 2]."""
        if not v or any(not 1.0 < p <= 2.0 for p in v):
            raise ValueError("p values must lie in (1, 2]")
        return v

    @field_validator("N_values", "counting_N")
    @classmethod
    def validate_n_values(cls, v: list[int]) -> list[int]:
        """Granularities must be positive; the list may be empty."""
        if any(n < 1 for n in v):
            raise ValueError("N values must be positive")
        return v

    @field_validator("k_range")
    @classmethod
    def validate_k_range(cls, v: list[int]) -> list[int]:
        """Ring indices must be non-negative."""
        if not v or any(k < 0 for k in v):
            raise ValueError("k_range must be a non-empty list of non-negative integers")
        return v

    def check_budgets(self) -> None:
        """Reject parameter grids outside the resource budgets."""
        if max(self.dims) > self.budgets.max_dimension:
            raise ConfigError(
                f"dimension {max(self.dims)} exceeds budget {self.budgets.max_dimension}"
            )
        if self.N_values and max(self.N_values) > self.budgets.max_riesz_length:
            raise ConfigError(
                f"N={max(self.N_values)} exceeds Riesz budget {self.budgets.max_riesz_length}"
            )

    def with_overrides(self, **overrides: Any) -> "SuiteConfig":
        """Return a copy with CLI flag values applied on top of file values."""
        data = self.model_dump()
        data.update({key: value for key, value in overrides.items() if value is not None})
        return SuiteConfig.model_validate(data)


def _coerce_bool(value: str) -> Any:
    lowered = value.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    return value


def parse_suite_config(text: str) -> SuiteConfig:
    """Parse the flat ``key=value`` format.

    Args:
        text: File contents.

    Returns:
        Validated suite configuration.

    Raises:
        ConfigError: On malformed lines, unknown keys or invalid values,
            carrying the offending line number.
    """
    raw: dict[str, Any] = {}
    budgets: dict[str, Any] = {}
    lines: dict[str, int] = {}
    budget_fields = set(Budgets.model_fields)

    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected key=value, got {stripped!r}", line=number)
        key, _, value = stripped.partition("=")
        key = KEY_ALIASES.get(key.strip(), key.strip())
        value = value.strip()
        if key.startswith("budget."):
            name = key.removeprefix("budget.")
            if name not in budget_fields:
                raise ConfigError(f"unknown budget {name!r}", line=number)
            budgets[name] = value
            lines["budgets"] = number
            continue
        if key not in SuiteConfig.model_fields or key == "budgets":
            raise ConfigError(f"unknown key {key!r}", line=number)
        if key in raw:
            raise ConfigError(f"duplicate key {key!r}", line=number)
        if SuiteConfig.model_fields[key].annotation is bool:
            raw[key] = _coerce_bool(value)
        else:
            raw[key] = value
        lines[key] = number

    if budgets:
        raw["budgets"] = budgets

    try:
        config = SuiteConfig.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        field = str(first["loc"][0]) if first["loc"] else ""
        raise ConfigError(f"{field}: {first['msg']}", line=lines.get(field)) from e

    logger.debug(f"Parsed suite config with keys {sorted(raw)}")
    return config


def load_suite_config(path: Path) -> SuiteConfig:
    """Load and validate a suite configuration file.

    Args:
        path: Path to the ``key=value`` file.

    Returns:
        Validated suite configuration.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    return parse_suite_config(text)
