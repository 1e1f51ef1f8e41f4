"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: validation/parse problems -> 1,
unsupported regimes -> 2, numeric failures -> 4.
"""


class QdiscError(Exception):
    """Base class for all package errors."""


class ValidationError(QdiscError):
    """Malformed input or violated structural invariant.

    ``code`` distinguishes machine-checkable causes, e.g. "malformed",
    "bloch-norm", "priors-sum".
    """

    def __init__(self, message: str, code: str = "invalid"):
        super().__init__(message)
        self.code = code


class DegenerateConfigurationError(ValidationError):
    """Collinear or duplicate Bloch vectors where a triple was required."""

    def __init__(self, message: str):
        super().__init__(message, code="degenerate")


class UnsupportedRegimeError(QdiscError):
    """Ensemble outside the constructive solver's coverage."""


class NumericFailureError(QdiscError):
    """An iterative routine failed to reach its tolerance."""


class SolverExhaustedError(NumericFailureError):
    """Case analysis ran out of candidates without a verified solution."""
