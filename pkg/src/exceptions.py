"""Exception hierarchy shared by every service."""

from typing import Optional


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(ToolkitError, ValueError):
    """Input lies outside the mathematical domain of an operation."""


class PreconditionError(ToolkitError, ValueError):
    """An operation was called with arguments violating its precondition."""


class ConstructionError(ToolkitError, ValueError):
    """A kernel or test-function specification cannot be built."""


class ResourceBudgetError(ToolkitError):
    """A desk-scale budget (grid size, pattern count, ring size) was exceeded."""

    def __init__(self, message: str, required: Optional[int] = None):
        """Initialize budget error.

        Args:
            message: Human readable description.
            required: Estimate of the resource that would be needed.
        """
        super().__init__(message)
        self.required = required


class ConfigError(ToolkitError):
    """A suite configuration file could not be parsed or validated."""

    def __init__(self, message: str, line: Optional[int] = None):
        """Initialize config error.

        Args:
            message: Human readable description.
            line: 1-based line number in the config file, if known.
        """
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
