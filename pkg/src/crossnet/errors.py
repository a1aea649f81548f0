"""Exception types raised across the pipeline."""


class CrossnetError(Exception):
    """Base class; ``stage`` names the pipeline step for CLI diagnostics."""

    stage = "crossnet"


class PanelError(CrossnetError, ValueError):
    stage = "ingest"


class MalformedHeader(PanelError):
    pass


class MalformedPeriod(PanelError):
    pass


class MalformedValue(PanelError):
    pass


class DuplicateRecord(PanelError):
    pass


class GapInPeriods(PanelError):
    pass


class EmptyPanel(PanelError):
    pass


class RangeOutOfBounds(CrossnetError, ValueError):
    stage = "ingest"


class UnknownEntity(CrossnetError, KeyError):
    stage = "ingest"

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class MetricError(CrossnetError, ValueError):
    stage = "metric"


class ZeroVariance(MetricError):
    """A constant series has no defined correlation."""

    def __init__(self, message, entity=None, window=None):
        super().__init__(message)
        self.entity = entity
        self.window = window


class TooShort(MetricError):
    pass


class LengthMismatch(MetricError):
    pass


class OutOfRange(MetricError):
    pass


class InvalidFactor(CrossnetError, ValueError):
    stage = "cluster"


class EmptyDenominator(CrossnetError, ValueError):
    stage = "topology"


class WindowTooLong(CrossnetError, ValueError):
    stage = "topology"


class SplitOutOfRange(CrossnetError, ValueError):
    stage = "compare"


class NearZeroDistanceWarning(UserWarning):
    """Distances below the inversion floor were clamped."""
