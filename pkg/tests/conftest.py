"""Pytest fixtures for testing."""

import numpy as np
import pytest

from src.config.settings import Budgets
from src.config.suite_config import SuiteConfig, parse_suite_config
from src.services import symbol_service
from tests.fixtures.sample_data import (
    create_report,
    create_riesz_spec,
    create_sample_reports,
    create_sector_run,
    create_suite_config_text,
    create_test_phi_spec,
)

# ============================================================================
# Configuration Fixtures
# ============================================================================


@pytest.fixture
def budgets():
    """Default desk-scale budgets."""
    return Budgets()


@pytest.fixture
def tight_budgets():
    """Budgets small enough to trip every guard."""
    return Budgets(
        max_riesz_length=1,
        max_grid_axis=8,
        max_grid_axis_1d=64,
        max_grid_points=4096,
        max_ring_points=100,
        max_fejer_degree=9,
    )


@pytest.fixture
def small_suite_text():
    """Contents of a small suite configuration file."""
    return create_suite_config_text()


@pytest.fixture
def small_suite(small_suite_text) -> SuiteConfig:
    """A parsed small suite configuration."""
    return parse_suite_config(small_suite_text)


@pytest.fixture
def suite_file(tmp_path, small_suite_text):
    """The small suite configuration written to disk."""
    path = tmp_path / "suite.cfg"
    path.write_text(small_suite_text, encoding="utf-8")
    return path


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(1234)


# ============================================================================
# Symbol Fixtures
# ============================================================================


@pytest.fixture
def one():
    """The identity symbol."""
    return symbol_service.one_symbol()


@pytest.fixture
def norm():
    """The unbounded |n|_2 symbol."""
    return symbol_service.norm_symbol()


@pytest.fixture
def table_file(tmp_path):
    """A two-point symbol table in d = 2."""
    path = tmp_path / "symbol.csv"
    path.write_text("# n1,n2,re,im\n1,0,2,0\n0,1,0.5,0\n", encoding="utf-8")
    return path


# ============================================================================
# Model Fixtures
# ============================================================================


@pytest.fixture
def riesz_spec():
    """Riesz spec over (2,1) and (20,10)."""
    return create_riesz_spec()


@pytest.fixture
def phi_spec():
    """Test-function spec over (2,1) and (20,10), dominant axis 1."""
    return create_test_phi_spec()


@pytest.fixture
def sector_run():
    """Six same-sector points, one per ring 0..5."""
    return create_sector_run()


@pytest.fixture
def sample_report():
    """A single passing report."""
    return create_report()


@pytest.fixture
def sample_reports():
    """Three passing reports."""
    return create_sample_reports()
