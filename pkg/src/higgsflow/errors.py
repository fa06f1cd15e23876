"""Exception types shared across the package."""


class HiggsflowError(Exception):
    """Base class for all package errors."""


class NotPrime(HiggsflowError):
    pass


class EvenPrime(HiggsflowError):
    pass


class DegreeNotDivisor(HiggsflowError):
    pass


class DivisionByZeroPoly(HiggsflowError):
    pass


class ZeroPolynomial(HiggsflowError):
    pass


class BothZero(HiggsflowError):
    pass


class NotFrobeniusComposite(HiggsflowError):
    pass


class InsufficientSamples(HiggsflowError):
    pass


class InconsistentSamples(HiggsflowError):
    pass


class DegreeOverflow(HiggsflowError):
    pass


class PointsOnDifferentCurves(HiggsflowError):
    pass


class FieldTooLarge(HiggsflowError):
    pass


class LambdaNotInPrimeField(HiggsflowError):
    pass


class NoValidFiltration(HiggsflowError):
    pass


class NonUniqueFiltration(HiggsflowError):
    pass


class LiftNotFound(HiggsflowError):
    pass
