"""Exception types raised across the library.

Everything inherits from :class:`ProductLearnError` so callers can catch
library failures with a single except clause; the parse- and
validation-related classes additionally inherit from :class:`ValueError`.
"""


class ProductLearnError(Exception):
    """Base class for all errors raised by productlearn."""


class InputSymbolError(ProductLearnError, ValueError):
    """A word contained a symbol outside the machine's input alphabet."""

    def __init__(self, symbol, position):
        super().__init__(f"symbol {symbol!r} at position {position} is not in the input alphabet")
        self.symbol = symbol
        self.position = position


class AlphabetMismatchError(ProductLearnError, ValueError):
    """Two machines were combined or compared over different alphabets."""


class DecompositionError(ProductLearnError, ValueError):
    """An output decomposition is malformed or does not fit a machine."""


class TableStateError(ProductLearnError, ValueError):
    """A hypothesis was requested from a table that is not ready for it."""


class ProtocolViolationError(ProductLearnError):
    """A teacher answered in a way that contradicts its own contract."""


class ResourceLimitError(ProductLearnError):
    """A construction would exceed a configured size cap."""


class ParseError(ProductLearnError, ValueError):
    """Syntax error in a machine description file."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class MissingTransitionError(ProductLearnError, ValueError):
    """A (state, input) pair has no transition, or a state has no output."""


class UndeclaredSymbolError(ProductLearnError, ValueError):
    """A transition or output line referenced an undeclared symbol."""


class OutputArityError(ProductLearnError, ValueError):
    """Output tuples of inconsistent arity were declared or parsed."""


class WidthMismatchError(ProductLearnError, ValueError):
    """A circuit transition line does not match the declared bit widths."""


class ConflictingTransitionError(ProductLearnError, ValueError):
    """Two circuit transitions disagree for the same concrete input."""


class UnknownResetStateError(ProductLearnError, ValueError):
    """The declared reset state never occurs as a source state."""
