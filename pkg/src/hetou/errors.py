"""Exception types raised across the package.

Everything derives from :class:`HetOUError`, and most classes also derive
from the closest builtin, so callers can catch ``ValueError`` or
``ArithmeticError`` without importing this module.
"""

from __future__ import annotations


class HetOUError(Exception):
    """Base class for all package errors."""


# -- linear algebra / model -------------------------------------------------


class NonSymmetric(HetOUError, ValueError):
    pass


class NotPositiveDefinite(HetOUError, ValueError):
    pass


class ConvergenceFailure(HetOUError, ArithmeticError):
    pass


class SingularSystem(HetOUError, ArithmeticError):
    pass


class DimensionTooLarge(HetOUError, ValueError):
    pass


class DimensionMismatch(HetOUError, ValueError):
    pass


class RoundTripFailure(HetOUError, ArithmeticError):
    pass


class IllConditioned(RoundTripFailure):
    """Condition number of the input exceeds the numeric policy cap."""


class NonPositiveDiagonal(HetOUError, ValueError):
    pass


class InvalidTemperatures(HetOUError, ValueError):
    pass


# -- sampling ---------------------------------------------------------------


class ConfigError(HetOUError, ValueError):
    pass


class RejectionLimitExceeded(HetOUError, RuntimeError):
    def __init__(self, message: str, sample_index: int | None = None):
        super().__init__(message)
        self.sample_index = sample_index


# -- spectral statistics ----------------------------------------------------


class NotNormalized(HetOUError, ValueError):
    pass


class NotOrthonormal(HetOUError, ValueError):
    pass


class EmptyEnsemble(HetOUError, ValueError):
    pass


class MixedDimensions(HetOUError, ValueError):
    pass


class TooFewRecords(HetOUError, ValueError):
    pass


class DegenerateSpectrum(HetOUError, ValueError):
    """A rank has zero mean spacing, so spacings cannot be normalized."""


# -- perturbation -----------------------------------------------------------


class EpsilonTooLarge(HetOUError, ValueError):
    pass


# -- dynamics ---------------------------------------------------------------


class UnstableStep(HetOUError, ValueError):
    pass


class NonFinite(HetOUError, ArithmeticError):
    pass


class FactorizationFailure(HetOUError, ArithmeticError):
    pass


class TooFewSamples(HetOUError, ValueError):
    pass


# -- data ingestion ---------------------------------------------------------


class ParseError(HetOUError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)
        self.line = line
        self.column = column


class EmptyPanel(HetOUError, ValueError):
    pass


class ZeroVarianceAsset(HetOUError, ValueError):
    def __init__(self, message: str, assets: list[str] | None = None):
        super().__init__(message)
        self.assets = list(assets or [])
