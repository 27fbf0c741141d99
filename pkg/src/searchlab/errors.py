"""Exception types shared across the package."""


class SearchLabError(Exception):
    """Base class for all package-specific errors."""


class NonIntegerLocationCount(SearchLabError):
    """B/delta is not an integer to within the snapping tolerance."""


class InvalidEpsilon(SearchLabError):
    """Reliability target epsilon outside (0, 1)."""


class InvalidNoiseModel(SearchLabError):
    """Noise model parameters are malformed (bad gamma, empty table, ...)."""


class NonMonotoneNoise(SearchLabError):
    """Noise variance fails to be positive and non-decreasing in probe count."""


class ProbeCountOutOfRange(SearchLabError):
    """Probe count outside [1, M]."""


class QuadratureNonConvergence(SearchLabError):
    """Adaptive quadrature failed to reach tolerance within the panel cap."""


class NoRootInBracket(SearchLabError):
    """Root bracketing for the threshold parameter exceeded the search cap."""


class EtaTooLarge(SearchLabError):
    """Slack eta is not strictly below the relevant capacity term."""


class NoFeasibleAlpha(SearchLabError):
    """No section fraction alpha is feasible for this configuration."""


class InvalidAlpha(SearchLabError):
    """Section fraction alpha is not of the form 1/s with s | M and s >= 2."""


class DegeneratePosterior(SearchLabError):
    """Posterior update produced non-finite entries (defensive; flooring
    normally prevents this)."""


class SizeOne(SearchLabError):
    """Operation undefined on a single-cell posterior."""


class StepLimitExceeded(SearchLabError):
    """A single trial exceeded the hard step budget."""


class ParseError(SearchLabError):
    """Plan text is not valid JSON."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        super().__init__(message)
        self.line = line
        self.col = col


class ValidationError(SearchLabError):
    """Plan is valid JSON but violates the plan schema."""
