"""Finite spaces with a prescribed small-scale magnitude limit ``R >= 1``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .closed_forms import family_limit, family_partner
from .errors import InternalError, InvalidTarget, IterationCapExceeded
from .genfun import as_rational
from .spaces import FiniteMetricSpace, join, uniform_space

MAX_BISECTIONS = 256
DEFAULT_TOL = Fraction(1, 10 ** 6)


@dataclass(frozen=True)
class ConstructionResult:
    n: int
    r: Fraction
    space: FiniteMetricSpace
    achieved: Fraction
    target: Fraction
    gap: Fraction
    iterations: int = 0

    @property
    def s(self) -> Fraction:
        return family_partner(self.n, self.r)


def minimal_family_size(R) -> int:
    """Smallest ``n >= 2`` whose family reaches ``R`` at ``r = 2``."""
    R = as_rational(R)
    if R < 1:
        raise InvalidTarget(f"target {R} is below 1")
    n = 2
    while family_limit(n, 2) < R:
        n += 1
    return n


def family_space(n: int, r) -> FiniteMetricSpace:
    r = as_rational(r)
    return join(uniform_space(n, r), uniform_space(n, family_partner(n, r)))


def construct_target_limit(R, tol=DEFAULT_TOL) -> ConstructionResult:
    """Bisect on ``r`` with exact rational midpoints until the family's limit
    is within ``tol`` of ``R``.

    The bracket ``family_limit(lo) <= R <= family_limit(hi)`` holds throughout.
    """
    R, tol = as_rational(R), as_rational(tol)
    if R < 1:
        raise InvalidTarget(f"target {R} is below 1")
    if tol <= 0:
        raise InvalidTarget("tolerance must be positive")
    n = minimal_family_size(R)

    def done(r, value, it):
        return ConstructionResult(n, r, family_space(n, r), value, R, abs(value - R), it)

    lo, hi = Fraction(n, n - 1), Fraction(2)
    f_lo, f_hi = family_limit(n, lo), family_limit(n, hi)
    if f_lo == R:
        return done(lo, f_lo, 0)
    if f_hi == R:
        return done(hi, f_hi, 0)
    if not f_lo <= R <= f_hi:
        raise InternalError("target not bracketed by the family endpoints")
    if f_hi - R <= tol:
        return done(hi, f_hi, 0)
    if R - f_lo <= tol:
        return done(lo, f_lo, 0)
    for it in range(1, MAX_BISECTIONS + 1):
        mid = (lo + hi) / 2
        f_mid = family_limit(n, mid)
        if abs(f_mid - R) <= tol:
            return done(mid, f_mid, it)
        if f_mid < R:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        if not f_lo <= R <= f_hi:
            raise InternalError("bisection lost its bracket")
    raise IterationCapExceeded(f"no r within {tol} of {R} after {MAX_BISECTIONS} bisections")
