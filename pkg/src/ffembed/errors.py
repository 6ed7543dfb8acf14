"""Exception hierarchy shared by every ffembed module."""


class FFEmbedError(Exception):
    """Base class for all library errors."""


class NotOddPrimePower(FFEmbedError, ValueError):
    pass


class FieldTooLarge(FFEmbedError, ValueError):
    pass


class FieldMismatch(FFEmbedError, ValueError):
    pass


class DivisionByZero(FFEmbedError, ZeroDivisionError):
    pass


class SpaceMismatch(FFEmbedError, ValueError):
    pass


class EmptySet(FFEmbedError, ValueError):
    pass


class NoSqrtMinusOne(FFEmbedError, ValueError):
    pass


class ZeroDistance(FFEmbedError, ValueError):
    pass


class BadParams(FFEmbedError, ValueError):
    pass


class NotATree(BadParams):
    pass


class Disconnected(BadParams):
    pass


class BadDensity(BadParams):
    pass


class MissingParam(FFEmbedError, KeyError):
    pass


class HypothesisNotMet(FFEmbedError):
    """Raised only on request; refinements normally report this as a flag."""


class BudgetExceeded(FFEmbedError, RuntimeError):
    def __init__(self, estimate, budget):
        self.estimate = estimate
        self.budget = budget
        super().__init__(f"estimated work {estimate} exceeds budget {budget}")
