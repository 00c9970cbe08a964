"""Exception hierarchy shared by all corrdyn modules."""


class CorrdynError(Exception):
    """Base class for all package errors."""


class NotPrime(CorrdynError):
    pass


class DegreeZero(CorrdynError):
    pass


class BoundExceeded(CorrdynError):
    pass


class CtxMismatch(CorrdynError):
    pass


class DivisionByZero(CorrdynError):
    pass


class ZeroModulus(CorrdynError):
    pass


class ZeroPolynomial(CorrdynError):
    pass


class ParseError(CorrdynError):
    pass


class DegenerateComponent(CorrdynError):
    pass


class NotOnCurve(CorrdynError):
    pass


class SmallCharacteristic(CorrdynError):
    pass


class ExcludedJ(CorrdynError):
    pass


class Truncated(CorrdynError):
    pass


class Disconnected(CorrdynError):
    pass


class NotSelfCorrespondence(CorrdynError):
    pass


class NotSymmetricClump(CorrdynError):
    pass


class TypeMismatch(CorrdynError):
    pass


class UnsupportedRamified(CorrdynError):
    pass


class BudgetTooSmall(CorrdynError):
    pass
