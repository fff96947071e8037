"""Exception hierarchy shared by every subordlab module."""


class SubordlabError(Exception):
    """Base class for all toolkit errors."""


class NonFiniteValue(SubordlabError, ValueError):
    pass


# series arithmetic
class DivisionByNearZeroConstantTerm(SubordlabError, ZeroDivisionError):
    pass


class ConstantTermOnBranchCut(SubordlabError, ValueError):
    pass


class InnerNotZeroAtOrigin(SubordlabError, ValueError):
    pass


# zoo parameter validation
class ParameterError(SubordlabError, ValueError):
    pass


class ParameterOrderViolated(ParameterError):
    pass


class ZeroB(ParameterError):
    pass


class ZeroLambda(ParameterError):
    pass


class COutOfRange(ParameterError):
    pass


class ExponentOutsideRoysterRegion(UserWarning):
    """Warning only: the dominant is built but univalence is not claimed."""


# disk analysis
class PointTooCloseToCurve(SubordlabError, ValueError):
    pass


class QNotVanishingAtOrigin(SubordlabError, ValueError):
    pass


class DegenerateDerivative(SubordlabError, ValueError):
    pass


class MissingDerivative(SubordlabError, NotImplementedError):
    pass


# operators
class BaseOnBranchCut(SubordlabError, ValueError):
    pass


class VanishingBase(SubordlabError, ZeroDivisionError):
    pass


class DerivativeVanishes(SubordlabError, ZeroDivisionError):
    pass


class QVanishes(SubordlabError, ZeroDivisionError):
    pass


class VanishingDenominator(SubordlabError, ZeroDivisionError):
    pass


class QNotAdmissible(SubordlabError, ValueError):
    pass


# front end
class ParseError(SubordlabError, ValueError):
    def __init__(self, line: int, col: int, expected: str, text: str = ""):
        self.line = line
        self.col = col
        self.expected = expected
        self.text = text
        super().__init__(f"line {line}, col {col}: expected {expected}")


class UsageError(SubordlabError):
    pass
