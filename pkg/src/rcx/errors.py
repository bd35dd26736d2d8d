"""Exception hierarchy shared by every layer of the library."""


class RcxError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 1)."""


class DivisionByZero(RcxError, ZeroDivisionError):
    pass


class NegativeEvenRoot(RcxError, ValueError):
    pass


class EvenDegree(RcxError, ValueError):
    pass


class NotPurelyInfinite(RcxError, ValueError):
    pass


class LogIncomplete(RcxError):
    """A generator at the bottom of the ladder has no stored logarithm."""


class LadderTooShallow(RcxError):
    pass


class ZeroSeries(RcxError, ZeroDivisionError):
    pass


class UndeterminedSign(RcxError):
    """All known terms cancelled; the sign sits below a cutoff marker."""


class UndeterminedTail(UndeterminedSign):
    pass


class NonPositive(RcxError, ValueError):
    pass


class CutoffExhausted(RcxError):
    def __init__(self, msg, development=None):
        super().__init__(msg)
        self.development = development


class AlreadyPresent(RcxError):
    pass


class InfinitesimalExponent(RcxError, ValueError):
    pass


class IrrationalConstantExponent(RcxError, ValueError):
    pass


class NotLogRepresentable(RcxError, ValueError):
    pass
