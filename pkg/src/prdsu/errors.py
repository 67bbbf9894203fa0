"""Exception types raised by the engine."""


class PRDSUError(Exception):
    """Base class for engine errors."""


class NonConvergentRegimeError(PRDSUError):
    """The recycling loop gain satisfies ``|A| >= 1 - eps`` so no steady state exists."""


class ComputationalInconsistencyError(PRDSUError):
    """A quantity that must be non-negative came out clearly negative."""


class UndefinedBoundError(PRDSUError):
    """SNL or QCRB requested for a zero resource (``N_total == 0`` or ``F_Q == 0``)."""
