"""Exception types raised across the package."""


class GBCryptError(Exception):
    pass


class InversionOfZero(GBCryptError, ZeroDivisionError):
    pass


class ZeroPolynomial(GBCryptError, ValueError):
    pass


class RingMismatch(GBCryptError, ValueError):
    pass


class BudgetExceeded(GBCryptError):
    pass


class NotZeroDimensional(GBCryptError):
    pass


class InvalidParams(GBCryptError, ValueError):
    pass


class SingularMatrix(GBCryptError, ValueError):
    pass


class ShapeUnavailable(GBCryptError):
    pass


class VariantUnsupported(GBCryptError):
    pass


class AffineRankDeficit(GBCryptError):
    def __init__(self, rank: int, expected: int):
        super().__init__(f"affine rank {rank}, expected {expected}")
        self.rank = rank
        self.expected = expected


class ChangeOfCoordinatesFailed(GBCryptError):
    pass


class NotBoolean(GBCryptError, ValueError):
    pass


class NotFoundWithin(GBCryptError):
    def __init__(self, d_max: int):
        super().__init__(f"no solving degree found up to {d_max}")
        self.d_max = d_max


class ShapeViolation(GBCryptError, ValueError):
    pass


class NoSolution(GBCryptError):
    pass
