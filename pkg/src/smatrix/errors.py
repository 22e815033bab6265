"""Exception hierarchy shared by every module."""


class SMatrixError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(SMatrixError, ValueError):
    pass


class DomainError(SMatrixError, ValueError):
    """Input outside the domain where an operation is defined."""


class SingularError(SMatrixError, ArithmeticError):
    pass


class IllConditionedError(SMatrixError, ArithmeticError):
    pass


class SizeCapError(SMatrixError, ValueError):
    pass


class NotPrimeError(DomainError):
    pass


class ResidueClassError(DomainError):
    pass


class InternalError(SMatrixError, RuntimeError):
    pass


class MatrixFormatError(SMatrixError, ValueError):
    """Malformed matrix text; carries the 1-based line and column of the fault."""

    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
            if column is not None:
                where += f"{column}:"
        super().__init__(f"{where} {message}" if where else message)
