"""Exception types shared across the package."""


class EnumerationCapExceeded(ValueError):
    """An operation would enumerate more elements than the configured cap."""


class HypothesisError(ValueError):
    """The inputs do not satisfy the hypotheses of a bound or construction."""


class TheoremViolation(AssertionError):
    """A proven statement failed on a concrete instance.

    Raised only when exact computation contradicts a theorem, a prediction
    or a defining identity; it always indicates a bug somewhere.
    """


class InternalInconsistency(AssertionError):
    """Two independent computations of the same quantity disagree."""
