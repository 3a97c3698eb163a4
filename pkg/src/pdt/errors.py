"""Exception hierarchy shared by all modules.

The CLI maps :class:`MalformedInputError` (and subclasses) to exit code 2 and
:class:`HypothesisFailure` to exit code 1.
"""


class PdtError(Exception):
    """Base class for all library errors."""


class MalformedInputError(PdtError, ValueError):
    """Input violates a structural precondition (shape, symmetry, isotropy...)."""


class UnsupportedInputError(MalformedInputError):
    """Input is well formed but outside what the library handles."""


class DimensionMismatchError(MalformedInputError):
    """Objects living in different ambient spaces were combined."""


class ClassificationError(PdtError):
    """A subspace is not a limit datum of any of the three kinds."""


class ImpossibleConfigurationError(ClassificationError):
    """Configuration cannot occur in signature (n, 2)."""


class NeedsBaseChangeError(MalformedInputError):
    """Monodromy is not unipotent with (T - 1)^3 = 0; replace T by a power."""


class NotTypeIVError(MalformedInputError):
    """Nilpotent logarithm is not of the rank <= 2 form N = e ^ u."""


class InconsistentSamplesError(MalformedInputError):
    """Period samples violate P(w + 1) = T P(w) or the domain conditions."""


class NoConvergenceError(PdtError):
    """Extrapolation residual exceeds the acceptance threshold."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class OutsideChartError(MalformedInputError):
    """Point lies in J^perp where the tube chart is undefined."""


class NotABoundaryPairError(MalformedInputError):
    """w(F) outside {0, 1, 2}."""


class HypothesisFailure(PdtError):
    """A checked hypothesis is violated (reported, not a malformed input)."""
