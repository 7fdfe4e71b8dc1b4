"""Exception hierarchy shared by all modules."""


class InvalidArgumentError(ValueError):
    """Input violates a documented precondition."""


class NumericalFailure(ArithmeticError):
    """A numerical routine could not produce a trustworthy result."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class RankDeficiencyError(NumericalFailure):
    """Least-squares or shift system is rank deficient / ill-conditioned."""

    def __init__(self, message, condition=float("inf"), **diagnostics):
        super().__init__(message, condition=condition, **diagnostics)
        self.condition = condition


class IllPosedError(NumericalFailure):
    """Kernel or corner problem does not have the expected dimension."""


class CornerSingularError(NumericalFailure):
    """The leading corner of a Hankel matrix is numerically singular."""


class ExtractionFailure(NumericalFailure):
    """Node extraction produced fewer nodes than requested."""


class InsufficientDataError(ValueError):
    """Not enough history to compute the requested statistic."""
