"""Exception types shared across the package."""


class AirnomaError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(AirnomaError):
    """A value violates a documented invariant."""


class ParseError(AirnomaError):
    """Malformed configuration input; the message carries the field path."""


class PartialCoverageRequired(AirnomaError):
    """Operation defined only when the beam cannot cover the whole region."""


class OutOfScanRange(AirnomaError):
    """Boresight distance outside the admissible scan interval."""


class NonPositiveDistance(AirnomaError):
    """Path loss queried at a non-positive distance."""


class RankOutOfRange(AirnomaError):
    """Order-statistic rank outside the conditioning window."""


class RadiusOutOfRegion(AirnomaError):
    """Distance argument outside the annular user region."""


class OrderViolation(AirnomaError):
    """Joint distance density evaluated with the pair out of order."""


class InfeasiblePowerSplit(AirnomaError):
    """Power split cannot support the weak user's target rate."""


class ToleranceNotMet(AirnomaError):
    """Adaptive quadrature exhausted its subdivision budget."""


class EventImpossible(AirnomaError):
    """Requested event has zero probability under its conditioning set."""


# Integration failures surface under both names: the engine raises
# ToleranceNotMet, outage-level callers document QuadratureFailure.
QuadratureFailure = ToleranceNotMet
