class UCrystalError(Exception):
    pass


class EvenP(UCrystalError):
    pass


class CompositeP(UCrystalError):
    pass


class CtxMismatch(UCrystalError):
    pass


class NonIntegralDivision(UCrystalError):
    """Exact division in the universal-polynomial recursion failed (a bug, not bad input)."""


class NotDivisible(UCrystalError):
    pass


class NotCoprime(UCrystalError):
    pass


class NonUnitLeading(UCrystalError):
    pass


class NonDivisibleMiddle(UCrystalError):
    pass


class AsymmetricPolygon(UCrystalError):
    pass


class HasEtaleSlope(UCrystalError):
    pass


class FieldTooSmall(UCrystalError):
    pass


class NotStable(UCrystalError):
    pass


class PrecisionExhausted(UCrystalError):
    pass


class NonIntegerResult(UCrystalError):
    pass


class BudgetExceeded(UCrystalError):
    def __init__(self, msg, stats=None, partial=None):
        super().__init__(msg)
        self.stats = stats or {}
        self.partial = partial


class Inconclusive(UCrystalError):
    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


class ParseError(UCrystalError):
    def __init__(self, msg, position=None):
        if position is not None:
            msg = f"{msg} (at position {position})"
        super().__init__(msg)
        self.position = position
