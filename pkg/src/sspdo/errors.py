"""Exception types shared across the package."""


class SspdoError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(SspdoError, ValueError):
    """Array shapes are inconsistent (square A, matching b/c/weights lengths)."""


class ZeroRowViolationError(SspdoError, ValueError):
    """A has a zero row at index >= 2, or more than one zero row."""


class AbscissaMismatchError(SspdoError, ValueError):
    """Supplied abscissas disagree with the row sums of A."""


class SingularMatrixError(SspdoError, ArithmeticError):
    """A pivot of magnitude below tolerance was met while factorizing I + r*A."""


class NonpositiveCError(SspdoError, ValueError):
    """A positive SSP coefficient is required for this conversion."""


class StructureError(SspdoError, ValueError):
    """Tableau lacks the structure required by the requested construction."""


class RepeatedAbscissaeError(SspdoError, ValueError):
    """Distinct abscissas are required."""


class DegreeTooHighError(SspdoError, ValueError):
    """Polynomial degree exceeds the certifier's limit."""


class NonfiniteStateError(SspdoError, FloatingPointError):
    """Integration produced an overflow or NaN."""

    def __init__(self, message, step_index=None):
        super().__init__(message)
        self.step_index = step_index


class ExactSolutionMissingError(SspdoError, ValueError):
    """The requested study needs a problem with an exact-solution oracle."""


class InvalidStepSizeError(SspdoError, ValueError):
    """Step size must be positive."""


class ParseError(SspdoError, ValueError):
    """Tableau file could not be parsed; message carries line/field context."""


class NumericalCycleError(SspdoError, RuntimeError):
    """Simplex exceeded its iteration budget (should not happen under Bland's rule)."""
