"""Exception hierarchy shared by every evaluator."""


class LevyIntError(Exception):
    """Base class; the CLI maps any subclass to exit code 2."""


class PoleError(LevyIntError, ValueError):
    pass


class DomainError(LevyIntError, ValueError):
    pass


class ToleranceNotMet(LevyIntError):
    """Budget exhausted before the error estimate reached the target.

    The best value and the achieved estimate are kept so callers can
    decide whether the result is still usable.
    """

    def __init__(self, message, value=None, err_estimate=None):
        super().__init__(message)
        self.value = value
        self.err_estimate = err_estimate


class DivergentMoment(LevyIntError):
    def __init__(self, message, sign=0):
        super().__init__(message)
        self.sign = sign


class CancellationError(LevyIntError):
    pass


class DivergenceError(LevyIntError):
    pass


class MaxTermsExceeded(LevyIntError):
    pass


class PrefactorCalibrationError(LevyIntError):
    def __init__(self, message, ratio=None):
        super().__init__(message)
        self.ratio = ratio


class OutsideAsymptoticRegime(LevyIntError):
    pass


class BudgetExceeded(LevyIntError):
    pass
