"""Exception hierarchy for skigp."""


class SkiGPError(Exception):
    """Base exception for all skigp errors."""

    pass


class ValidationError(SkiGPError):
    """Raised when an argument fails validation."""

    def __init__(self, message: str, field: str = "", value: object = None):
        """Initialize validation error with context.

        Args:
            message: Error message describing the validation failure
            field: The argument or field name that failed validation
            value: The invalid value that was provided
        """
        self.field = field
        self.value = value
        super().__init__(message)


class DimensionError(ValidationError):
    """Raised when array shapes or input dimensions do not match."""

    pass


class GridError(ValidationError):
    """Raised when a grid specification is degenerate."""

    pass


class OutOfRangeError(ValidationError):
    """Raised when an input lies outside the span of an interpolation grid."""

    pass


class SizeLimitError(ValidationError):
    """Raised when a dense expansion would exceed the configured cap."""

    pass


class ConfigError(ValidationError):
    """Raised when a configuration key or value is invalid."""

    pass


class StructureError(SkiGPError):
    """Raised when a matrix or grid lacks the structure an operation requires.

    Examples are a non-equispaced axis passed to a Toeplitz builder or to cubic
    interpolation, or a non-symmetric matrix passed to the eigensolver.
    """

    pass


class NotPositiveDefiniteError(SkiGPError):
    """Raised when a Cholesky factorization fails even after a jitter retry."""

    def __init__(self, message: str, jitter: float = 0.0):
        """Initialize with the last jitter tried.

        Args:
            message: Error message
            jitter: Diagonal jitter used on the final attempt
        """
        self.jitter = jitter
        super().__init__(message)


class ParseError(SkiGPError):
    """Raised when parsing a CSV, config or manifest file fails."""

    def __init__(self, message: str, line: int = 0, column: str = ""):
        """Initialize parse error with location.

        Args:
            message: Error message
            line: 1-based line number of the offending row (0 if unknown)
            column: Column name of the offending cell (empty if unknown)
        """
        self.line = line
        self.column = column
        super().__init__(message)


class ManifestError(ParseError):
    """Raised when a model manifest has an unsupported version or content."""

    pass


class NotFittedError(SkiGPError):
    """Raised when a model is queried before ``fit``."""

    pass
