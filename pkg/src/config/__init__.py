"""Configuration module."""

from .settings import LOG_FORMAT, Budgets, Settings, get_budgets, get_settings
from .suite_config import SuiteConfig, load_suite_config, parse_suite_config

__all__ = [
    "LOG_FORMAT",
    "Budgets",
    "Settings",
    "SuiteConfig",
    "get_budgets",
    "get_settings",
    "load_suite_config",
    "parse_suite_config",
]
