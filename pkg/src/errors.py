"""Error taxonomy and exit-code classification.

This module provides the error model shared by every computation:

- Error type classification (parse, precondition, stabilization, ...)
- Severity assessment
- Exit-code selection for the command line
- An exception hierarchy carrying structured context
"""

from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Any


class ErrorType(Enum):
    """Types of errors a computation can end with."""

    PARSE = auto()
    PRECONDITION = auto()
    NOT_STABILIZED = auto()
    RESOURCE = auto()
    RATIONALITY = auto()
    INVARIANT = auto()
    UNKNOWN = auto()


class ErrorSeverity(Enum):
    """Severity levels for errors."""

    LOW = 1
    WARNING = 2
    HIGH = 3
    CRITICAL = 4


SUCCESS_EXIT_CODE = 0
SUITE_MISMATCH_EXIT_CODE = 1

EXIT_CODES: dict[ErrorType, int] = {
    ErrorType.PARSE: 2,
    ErrorType.PRECONDITION: 3,
    ErrorType.NOT_STABILIZED: 4,
    ErrorType.RESOURCE: 4,
    ErrorType.RATIONALITY: 5,
    ErrorType.INVARIANT: 6,
    ErrorType.UNKNOWN: 6,
}

SEVERITY_MAP: dict[ErrorType, ErrorSeverity] = {
    ErrorType.PARSE: ErrorSeverity.LOW,
    ErrorType.PRECONDITION: ErrorSeverity.WARNING,
    ErrorType.NOT_STABILIZED: ErrorSeverity.HIGH,
    ErrorType.RESOURCE: ErrorSeverity.HIGH,
    ErrorType.RATIONALITY: ErrorSeverity.WARNING,
    ErrorType.INVARIANT: ErrorSeverity.CRITICAL,
    ErrorType.UNKNOWN: ErrorSeverity.CRITICAL,
}


class ToolkitError(Exception):
    """Base class for all errors raised by the toolkit."""

    error_type: ErrorType = ErrorType.UNKNOWN

    def __init__(self, message: str, **context: Any) -> None:
        """Initialize the error.

        Args:
            message: Human readable description
            **context: Structured values describing the failure
        """
        super().__init__(message)
        self.message = message
        self.context: dict[str, Any] = context


class ParseError(ToolkitError):
    """Malformed polynomial, ring or session text."""

    error_type = ErrorType.PARSE

    def __init__(self, message: str, line: int = 1, column: int = 1, **context: Any) -> None:
        super().__init__(f"{message} (line {line}, column {column})", line=line, column=column, **context)
        self.reason = message
        self.line = line
        self.column = column


class UnknownIdentifierError(ParseError):
    """An identifier was used before being declared."""


class PreconditionError(ToolkitError):
    """An operation was called outside its domain."""

    error_type = ErrorType.PRECONDITION


class ArityMismatchError(PreconditionError):
    """Monomials or points of different length were combined."""


class RingMismatchError(PreconditionError):
    """Polynomials from different ring contexts were combined."""


class ZeroPolynomialError(PreconditionError):
    """A nonzero polynomial was required."""


class ZeroIdealError(PreconditionError):
    """The zero ideal cannot be handled implicitly."""


class NotPrimaryError(PreconditionError):
    """The ideal is not primary to the maximal ideal at the origin."""


class DimensionMismatchError(PreconditionError):
    """Declared and inferred dimensions disagree."""


class NonReducedError(PreconditionError):
    """A plane curve has a repeated component."""


class NotStabilizedError(ToolkitError):
    """The Hilbert-Samuel function did not become polynomial within the cap."""

    error_type = ErrorType.NOT_STABILIZED


class ResourceCapExceeded(ToolkitError):
    """A configured size, depth or time cap was reached."""

    error_type = ErrorType.RESOURCE


class DepthExceeded(ResourceCapExceeded):
    """Curve resolution went deeper than the configured cap."""


class TimeBudgetExceeded(ResourceCapExceeded):
    """The wall-clock budget ran out."""


class SizeBudgetExceeded(ResourceCapExceeded):
    """An intermediate basis or generator list grew past its cap."""


class RationalityError(ToolkitError):
    """A singular infinitely near point is not defined over the rationals."""

    error_type = ErrorType.RATIONALITY


class InvariantViolation(ToolkitError):
    """A proven invariant failed; this is an implementation bug."""

    error_type = ErrorType.INVARIANT


class InequalityViolation(InvariantViolation):
    """A proven inequality between invariants failed."""


@dataclass
class ClassificationResult:
    """Result of error classification."""

    error_type: ErrorType
    severity: ErrorSeverity
    exit_code: int
    message: str
    context: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """Serialize for the JSON error report.

        Returns:
            Dictionary with stringified context values
        """
        return {
            "type": self.error_type.name.lower(),
            "severity": self.severity.name.lower(),
            "exit_code": str(self.exit_code),
            "message": self.message,
            "context": {key: str(value) for key, value in sorted(self.context.items())},
        }


class ErrorClassifier:
    """Maps exceptions to error types, severities and exit codes."""

    def classify(self, error: BaseException) -> ClassificationResult:
        """Classify an exception.

        Args:
            error: The raised exception

        Returns:
            ClassificationResult with type, severity and exit code
        """
        if isinstance(error, ToolkitError):
            error_type = error.error_type
            message = error.message
            context = dict(error.context)
        elif isinstance(error, RecursionError):
            error_type = ErrorType.RESOURCE
            message = f"recursion limit reached: {error}"
            context = {}
        else:
            error_type = ErrorType.UNKNOWN
            message = f"{type(error).__name__}: {error}"
            context = {}

        return ClassificationResult(
            error_type=error_type,
            severity=SEVERITY_MAP[error_type],
            exit_code=EXIT_CODES[error_type],
            message=message,
            context=context,
        )
