"""Exception types raised by the public API.

Everything subclasses :class:`UnifitError` (and ``ValueError``) so callers
can catch input problems generically while tests can pin exact types.
"""


class UnifitError(ValueError):
    """Base class for all validation and numerical-contract errors."""


class EmptyInput(UnifitError):
    """An observation vector was empty."""


class OutOfRange(UnifitError):
    """An observation fell outside [0, 1]."""

    def __init__(self, index, value):
        self.index = int(index)
        self.value = float(value)
        super().__init__(f"observation {self.value!r} at position {self.index} is outside [0, 1]")


class InvalidIndices(UnifitError):
    """Order-statistic indices violate 1 <= k <= n."""


class ArityMismatch(UnifitError):
    """A kernel received the wrong number of arguments."""


class SampleTooSmall(UnifitError):
    def __init__(self, required, got=None):
        self.required = int(required)
        msg = f"sample size must be at least {required}"
        if got is not None:
            msg += f" (got {got})"
        super().__init__(msg)


class SampleTooLarge(UnifitError):
    def __init__(self, limit, got=None):
        self.limit = int(limit)
        msg = f"sample size capped at {limit} for this evaluator"
        if got is not None:
            msg += f" (got {got})"
        super().__init__(msg)


class DegenerateValue(UnifitError):
    """A statistic hit a value (0 or 1) where its logarithms diverge."""


class BadParameter(UnifitError):
    """A family or solver parameter is invalid."""


class ThetaOutOfRange(UnifitError):
    """Requested parameter lies outside the family's valid range."""


class DensityNotPositive(UnifitError):
    """A constructed density would be negative somewhere on [0, 1]."""


class NoBracketFound(UnifitError):
    """The eigenvalue scan exhausted its range without a sign change."""


class ToleranceNotMet(UnifitError):
    """A root/eigenvalue refinement failed to reach the requested tolerance."""


class ZeroDenominator(UnifitError):
    """Cumulative periodogram ratios are undefined (zero total power)."""


class SeriesTooShort(UnifitError):
    """Time series too short for periodogram analysis."""


class InsufficientReplicates(UnifitError):
    """Too few Monte Carlo replicates for the requested tail quantile."""


class QuadratureDivergence(UnifitError):
    """An efficiency integrand could not be integrated reliably."""


class NegativeDelta(UnifitError):
    """The quadratic form <h, Sh> came out negative: kernel/score bug."""
