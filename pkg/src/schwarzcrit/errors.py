"""Exception types raised by the toolkit."""


class SchwarzCritError(Exception):
    """Base class for all toolkit errors."""


class NearZeroConstantTerm(SchwarzCritError, ZeroDivisionError):
    """Series division by a series whose constant term is (numerically) zero."""


class NearZeroDenominator(SchwarzCritError, ZeroDivisionError):
    """A pointwise quotient hit a denominator below the evaluation floor."""

    def __init__(self, message, z=None):
        super().__init__(message)
        self.z = z


class DomainError(SchwarzCritError, ValueError):
    """An argument lies outside the domain of the operation."""


class NonConvergence(SchwarzCritError, RuntimeError):
    """A fixed-point iteration failed to settle within its budget."""


class HypothesisViolated(SchwarzCritError, ValueError):
    """The integral-inequality hypothesis of Gronwall's lemma fails on the samples."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class GenerationFailed(SchwarzCritError, RuntimeError):
    """The random function generator could not meet its budgets."""


class TruncationWarning(UserWarning):
    """Series tail too large at the evaluation radius; values may be inaccurate."""
