"""Exception types shared across the package."""


class ProbDistortError(Exception):
    """Base class for all library-specific errors."""


class ZeroProbabilityEvent(ProbDistortError):
    """Conditioning event (or signal event) carries no probability mass."""


class ZeroProbabilitySignal(ProbDistortError):
    """Posterior denominator for the requested signal is zero."""


class NonPositiveOutput(ProbDistortError):
    """A distortion produced a zero or negative entry where positivity is required."""


class MarginalityViolation(ProbDistortError):
    """Column embeddings of the same state marginal produced different outputs."""


class SignalSpaceTooLarge(ProbDistortError):
    """Signal-event enumeration requested on too many signals."""


class StateSpaceTooLarge(ProbDistortError):
    """Fixed-point enumeration requested on too many states."""


class SpaceTooSmall(ProbDistortError):
    """A checker was configured with fewer states or signals than its result requires."""


class NoConvergence(ProbDistortError):
    """Iteration budget exhausted before the requested tolerance was reached."""
