"""Exception hierarchy shared by every nilclass module."""


class NilclassError(Exception):
    """Base class for all errors raised by nilclass."""


class FieldMismatch(NilclassError):
    pass


class DimensionMismatch(NilclassError):
    pass


class SingularMatrix(NilclassError):
    pass


class BadPrime(NilclassError):
    """A prime divides a denominator, so reduction mod p is undefined."""


class InvalidAlgebra(NilclassError):
    """Base for structure-constant tables that do not define a Lie algebra."""


class AntisymmetryViolation(InvalidAlgebra):
    pass


class JacobiViolation(InvalidAlgebra):
    """Carries every failing basis triple as ``(i, j, k, residual)``."""

    def __init__(self, witnesses):
        self.witnesses = list(witnesses)
        shown = ", ".join(f"({i},{j},{k})" for i, j, k, _ in self.witnesses[:5])
        more = "" if len(self.witnesses) <= 5 else f" and {len(self.witnesses) - 5} more"
        super().__init__(f"Jacobi identity fails on basis triples {shown}{more}")


class NotNilpotent(NilclassError):
    pass


class NotAnIdeal(NilclassError):
    pass


class PresentationSyntaxError(InvalidAlgebra):
    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class UnknownGenerator(InvalidAlgebra):
    pass


class InconsistentRelation(InvalidAlgebra):
    pass


class UnknownLabel(NilclassError):
    pass


class ParamOutOfRange(NilclassError):
    pass


class InvalidAction(InvalidAlgebra):
    pass


class NotCentral(NilclassError):
    pass


class NotHeisenberg(NilclassError):
    pass


class RouteMismatch(NilclassError):
    """The two multiplier computations disagree; always an implementation bug."""


class ConsistencyError(NilclassError):
    """An internal cross-check failed (e.g. two capability routes disagree)."""


class NotEligible(NilclassError):
    pass


class NoCatalogMatch(NilclassError):
    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class AmbiguousMatch(NilclassError):
    def __init__(self, message, candidates=()):
        self.candidates = tuple(candidates)
        super().__init__(message)


class BudgetExceeded(NilclassError):
    """Isomorphism search hit its node budget; the answer is indeterminate."""
