"""Exception hierarchy shared by every equiloc module."""


class EquilocError(Exception):
    """Base class; the CLI maps subclasses to exit code 3 (4 for ParseError)."""


class RankMismatch(EquilocError):
    pass


class NotPolynomial(EquilocError):
    pass


class PoleAtZero(EquilocError):
    pass


class NonGenericPolarization(EquilocError):
    pass


class UnsupportedType(EquilocError):
    pass


class NotDominant(EquilocError):
    pass


class NotWeylSymmetric(EquilocError):
    pass


class UnpointedParts(EquilocError):
    pass


class NotDelzant(EquilocError):
    pass


class NonIntegralVertex(EquilocError):
    pass


class NotRegular(EquilocError):
    pass


class FixedSubmanifold(EquilocError):
    pass


class RankUnsupported(EquilocError):
    pass


class SingularMeasure(EquilocError):
    """The DH measure has no density (half-dimension smaller than rank)."""


class OnWall(EquilocError):
    pass


class NotAWallPoint(EquilocError):
    pass


class MissingKStructure(EquilocError):
    pass


class InvalidParameter(EquilocError):
    pass


class ValidationFailed(EquilocError):
    pass


class ParseError(EquilocError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}, column {column}"
        super().__init__(f"{message}{where}")
