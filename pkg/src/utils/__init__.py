"""Utility functions."""

from .numbers import format_decimal, format_rational, parse_rational
from .serialization import (
    dumps_json,
    kernel_spec_from_json,
    kernel_spec_to_json,
    report_to_document,
    trigpoly_from_json,
    trigpoly_to_json,
    write_csv,
    write_json,
)

__all__ = [
    "dumps_json",
    "format_decimal",
    "format_rational",
    "kernel_spec_from_json",
    "kernel_spec_to_json",
    "parse_rational",
    "report_to_document",
    "trigpoly_from_json",
    "trigpoly_to_json",
    "write_csv",
    "write_json",
]
