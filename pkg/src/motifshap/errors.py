"""Exception hierarchy shared by all motifshap modules.

Exit-code mapping used by the CLI: parameter/configuration problems are
usage errors (2), unreadable or malformed input files are format errors
(3), and black-box transport failures are their own class (4).
"""


class MotifShapError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 2


class ParameterError(MotifShapError):
    """Invalid argument or configuration supplied by the caller."""

    exit_code = 2


class UniverseMismatchError(ParameterError):
    """Objects defined over different node universes were combined."""


class EmptyDatasetError(ParameterError):
    """An operation required a nonempty dataset."""


class ConfigurationError(ParameterError):
    """A strategy or component was configured inconsistently."""


class DegenerateTrainingError(ParameterError):
    """Training data does not contain both classes."""


class LatticeTooLargeError(ParameterError):
    """Exact lattice enumeration would exceed the configured motif limit."""


class UndefinedCorrelationError(ParameterError):
    """Correlation requested on a zero-variance sample."""


class InputFormatError(MotifShapError):
    """A file could not be parsed or violates its schema."""

    exit_code = 3


class TransportError(MotifShapError):
    """Communication with an external black-box process failed."""

    exit_code = 4
