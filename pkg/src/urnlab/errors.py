"""Exception hierarchy shared by every urnlab module."""

from __future__ import annotations


class UrnError(Exception):
    """Base class for all urnlab errors."""


class InvalidDimensionError(UrnError, ValueError):
    """Color count or sample size outside the supported range."""


class InvalidArgumentError(UrnError, ValueError):
    pass


class ModelFileError(UrnError, ValueError):
    """A model file could not be parsed or does not cover its index set."""


class UnbalancedModelError(UrnError, ValueError):
    pass


class NonpositiveBalanceError(UrnError, ValueError):
    pass


class NonIntegralModelError(UrnError, ValueError):
    """Synthesis from a reduced matrix produced a fractional row."""


class InsufficientBallsError(UrnError, ValueError):
    pass


class TenabilityError(UrnError):
    """The model may demand removal of balls that are not present."""


class TenabilityViolation(UrnError, RuntimeError):
    """A simulated path went negative. Indicates a bug in the tenability checker."""


class NotLinearError(UrnError, ValueError):
    pass


class CapacityError(UrnError, RuntimeError):
    """Exact enumeration exceeded the configured support cap."""


class ConformanceError(UrnError, RuntimeError):
    """No recurrence constant (or more than one distinguishable one) matched enumeration."""
