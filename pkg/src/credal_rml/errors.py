"""Exception hierarchy shared by every module."""


class CredalError(Exception):
    """Base class for all library errors."""


class EmptyInput(CredalError, ValueError):
    pass


class InvalidPrior(CredalError, ValueError):
    pass


class DimensionMismatch(CredalError, ValueError):
    pass


class BadAlpha(CredalError, ValueError):
    pass


class ZeroLikelihood(CredalError, ValueError):
    pass


class NotStrictNonnull(CredalError, ValueError):
    """Conditioning event has zero probability under some retained prior."""


class MissingAlpha(CredalError, KeyError):
    pass


class Unbounded(CredalError, ValueError):
    pass


class InconsistentData(CredalError, ValueError):
    """Conditional value cannot be rationalized by any member of the RML family."""


class UnknownAxiom(CredalError, KeyError):
    pass


class BoundedBoxRequired(CredalError, ValueError):
    pass


class RootBracketFailure(CredalError, RuntimeError):
    pass


class BadModel(CredalError, ValueError):
    pass


class BadLambda(CredalError, ValueError):
    pass


class NotTwoStates(CredalError, ValueError):
    pass
