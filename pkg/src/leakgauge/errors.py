"""Exception types shared across the package."""


class LeakGaugeError(Exception):
    """Base class for all errors raised by leakgauge."""


class DataError(LeakGaugeError, ValueError):
    """Input data is malformed, degenerate, or out of range."""


class AlignmentError(DataError):
    """Original and randomized series are not index-aligned.

    Risk estimates compare the two series position by position, so the
    randomizer must keep record order (no shuffling) and length.
    """
