"""Exception hierarchy.

Every error carries the CLI exit code it maps to: 2 for bad input,
3 for mathematical failures, 4 for exceeded search caps.
"""


class MagnitudeError(Exception):
    exit_code = 3


class ValidationError(MagnitudeError, ValueError):
    exit_code = 2


class MathError(MagnitudeError, ArithmeticError):
    exit_code = 3


class CapExceeded(MagnitudeError):
    exit_code = 4


class ParseError(ValidationError):
    pass


# metric axioms

class EmptySpace(ValidationError):
    pass


class NonzeroDiagonal(ValidationError):
    def __init__(self, i):
        super().__init__(f"d[{i}][{i}] must be 0")
        self.i = i


class NegativeOrZeroOffDiagonal(ValidationError):
    def __init__(self, i, j):
        super().__init__(f"d[{i}][{j}] must be positive")
        self.i, self.j = i, j


class NotSymmetric(ValidationError):
    def __init__(self, i, j):
        super().__init__(f"d[{i}][{j}] != d[{j}][{i}]")
        self.i, self.j = i, j


class TriangleViolation(ValidationError):
    """``d[i][k] > d[i][via] + d[via][k]``; ``args`` is ``(i, k, via)``."""

    def __init__(self, i, k, via):
        super().__init__(i, k, via)
        self.i, self.k, self.via = i, k, via

    def __str__(self):
        return (f"triangle inequality fails: d[{self.i}][{self.k}] exceeds "
                f"the path through {self.via}")


class NonpositiveScale(ValidationError):
    pass


class InvalidTarget(ValidationError):
    pass


class NotAForest(ValidationError):
    pass


class InfiniteDistanceUnsupported(MathError):
    pass


class DiameterExceedsTwo(MathError):
    pass


class NotHomogeneous(MathError):
    pass


class AssumptionViolated(MathError):
    pass


class OutOfRange(MathError):
    pass


class SingularAtThisScale(MathError):
    def __init__(self, t, detail=""):
        msg = f"similarity matrix is singular or ill-conditioned at t={t!r}"
        super().__init__(msg + (f" ({detail})" if detail else ""))
        self.t = t


# generalized polynomials

class ExactnessUnavailable(MathError):
    pass


class ZeroDenominatorPolynomial(MathError, ZeroDivisionError):
    pass


class DivisionByZeroGenRat(MathError, ZeroDivisionError):
    pass


class SizeCapExceeded(CapExceeded):
    pass


class IterationCapExceeded(CapExceeded):
    pass


class InternalError(MagnitudeError, AssertionError):
    """A proven identity failed to hold; always a bug."""
