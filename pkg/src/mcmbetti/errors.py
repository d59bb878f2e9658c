"""Exception types shared across the package."""


class McmBettiError(Exception):
    """Base class for all package errors."""


class SpecSyntaxError(McmBettiError):
    """Malformed .ring/.mod input; carries 1-based line and column."""

    def __init__(self, message, line, col):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class InhomogeneousError(McmBettiError):
    """A polynomial that was required to be homogeneous is not."""


class DegreeMismatchError(McmBettiError):
    """A presentation entry has the wrong degree for its row/column twists."""

    def __init__(self, row, col, expected, found):
        super().__init__(
            f"entry at row {row}, column {col} must be homogeneous of degree "
            f"{expected}, found degree {found}"
        )
        self.row = row
        self.col = col
        self.expected = expected
        self.found = found


class DegreeBoundExhausted(McmBettiError):
    """A computation would need ring degrees beyond the certified bound."""

    def __init__(self, message, witness_degree=None):
        super().__init__(message)
        self.witness_degree = witness_degree


class WindowTooSmall(McmBettiError):
    """A homological window does not cover the requested index."""


class NotCompleteIntersection(McmBettiError):
    """The ideal generators do not form a regular sequence."""
