"""Exception taxonomy.

Two families matter for the CLI exit codes: ``ValidationError`` covers bad
configuration or parameters outside the model's domain (exit code 2), while
``ComputationError`` covers runs that start from valid input but fail to
produce a result (exit code 1).
"""


class HubbardllError(Exception):
    """Base class for all package errors."""


class ValidationError(HubbardllError):
    """Input outside the documented domain of an operation."""


class ComputationError(HubbardllError):
    """A computation that could not be completed from valid input."""


# -- validation family -------------------------------------------------------

class ConfigError(ValidationError):
    """Malformed or missing configuration key."""


class DomainViolation(ValidationError):
    """Model parameters violate an invariant (sign, range, grid membership)."""


class InvalidVelocity(DomainViolation):
    pass


class InvalidGamma(DomainViolation):
    pass


class BandEdge(DomainViolation):
    """|mu| >= 1: empty or filled band, no Fermi point."""


class HalfFilling(DomainViolation):
    """mu = 0: half filling is excluded (umklapp would be relevant)."""


class StrongCouplingBreakdown(DomainViolation):
    """Anomalies large enough that a channel velocity squared is <= 0."""


class PerturbationBoundViolated(DomainViolation):
    """A schedule perturbation exceeds its admissibility bound c0*|g0|."""


class RangeError(ValidationError):
    """Scale indices outside the stored trace."""


class EmptyInput(ValidationError):
    pass


class OriginSingularity(ValidationError):
    """Correlation evaluated at coinciding points."""


class ZeroMomentum(ValidationError):
    pass


class TooClose(ValidationError):
    """|x| below the validity radius of an asymptotic form."""


# -- computation family ------------------------------------------------------

class DegenerateDenominator(ComputationError):
    """1 + g0*n*A_n fell below tolerance: closed-form approximant invalid."""


class Divergence(ComputationError):
    """An iterate left its containment region."""


class NotConverged(ComputationError):
    """Trace not deep enough to read off a fixed point."""


class NoRoot(ComputationError):
    """Counterterm tuning failed to bracket or to produce a decaying flow."""


class UndefinedAtScale(ComputationError):
    """Log-correction coefficient requested where its denominator vanishes."""
