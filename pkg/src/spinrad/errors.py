"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so front ends (the CLI
in particular) can map failures to exit codes without string matching.
"""


class SpinradError(Exception):
    """Base class for all library errors."""

    code = "error"


class DomainError(SpinradError):
    """Argument outside the mathematical domain of an operation."""

    code = "domain"


class PoleError(DomainError):
    """Evaluation exactly on a pole of a thermal occupation factor."""

    code = "pole"


class SingularityError(SpinradError):
    """Dielectric response hit a surface-mode pole (eps = -2 or eps = -1)."""

    code = "singularity"


class RegimeError(SpinradError):
    """Small-radius / slow-rotation validity guard violated."""

    code = "regime"


class UnsupportedChannelError(SpinradError):
    """Scattering channel outside the analytically supported set."""

    code = "channel"


class TabulationRangeError(SpinradError):
    """Requested frequency outside a tabulated grid (no extrapolation)."""

    code = "range"


class ChannelFileError(SpinradError):
    """Tabulated S-matrix or dielectric file failed to parse or validate."""

    code = "parse"


class QuadratureAccuracyError(SpinradError):
    """Adaptive quadrature did not converge within the panel budget.

    Carries the best available partial result.
    """

    code = "accuracy"

    def __init__(self, message, partial_value=None, partial_error=None):
        super().__init__(message)
        self.partial_value = partial_value
        self.partial_error = partial_error


class PathConsistencyError(SpinradError):
    """Two independent evaluation paths of the same quantity disagree."""

    code = "consistency"

    def __init__(self, message, first=None, second=None):
        super().__init__(message)
        self.first = first
        self.second = second


class StiffnessError(SpinradError):
    """ODE integrator step size underflowed."""

    code = "stiffness"


class ConfigError(SpinradError):
    """Invalid scenario configuration (a usage error, not a physics one)."""

    code = "config"
