class MSmacofError(Exception):
    """Base class for errors raised by this package."""


class DataError(MSmacofError, ValueError):
    """Invalid dissimilarities, weights, or input files."""


class ParseError(DataError):
    """Malformed lower-triangle matrix file."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class DisconnectedWeightsError(DataError):
    """The graph of positive weights is not connected."""


class ChecksumError(DataError):
    """A vendored data file does not match its recorded checksum."""


class NotDifferentiableError(MSmacofError, ValueError):
    """A map was differentiated at a point where it is not smooth."""


class FixedPointError(MSmacofError):
    """Spectral structure expected at a fixed point is missing."""


class EigenSolverError(MSmacofError, ArithmeticError):
    """The eigenvalue iteration did not converge."""


class NearTiedSingularValuesWarning(UserWarning):
    """Singular values too close for the PCA rotation to be unique."""
