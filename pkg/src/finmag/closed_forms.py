"""Closed-form formal magnitudes and the small-scale limit of homogeneous joins."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import AssumptionViolated, DiameterExceedsTwo, InternalError, NotAForest, OutOfRange
from .genfun import GenPoly, GenRat, as_rational
from .spaces import (
    HOMOGENEITY_CAP,
    FiniteMetricSpace,
    Graph,
    n_profile,
    uniform_space,
)

Q = GenPoly.monomial(1)
ONE = GenPoly.constant(1)


def speyer_magnitude(x: FiniteMetricSpace, *, assume_homogeneous: bool = False,
                     cap: int = HOMOGENEITY_CAP) -> GenRat:
    """``1 / N_X`` for a homogeneous space."""
    return GenRat(ONE, n_profile(x, assume_homogeneous=assume_homogeneous, cap=cap))


def forest_magnitude(g: Graph) -> GenRat:
    """``#components + #edges (1 - q) / (1 + q)``."""
    if not g.is_forest():
        raise NotAForest("graph has a cycle")
    return GenRat(g.components()) + GenRat(len(g.edges)) * GenRat(ONE - Q, ONE + Q)


def bipartite_magnitude(m: int, n: int) -> GenRat:
    if m < 1 or n < 1:
        raise ValueError("both sides need at least one vertex")
    num = GenPoly.constant(m + n) - Q * (2 * m * n - m - n)
    den = (ONE + Q) * (ONE - Q * Q * ((m - 1) * (n - 1)))
    return GenRat(num, den)


def _check_join_inputs(x, y, assume_homogeneous, cap):
    for name, s in (("first", x), ("second", y)):
        if s.diameter() > 2:
            raise DiameterExceedsTwo(f"{name} space has diameter {s.diameter()}")
    return (n_profile(x, assume_homogeneous=assume_homogeneous, cap=cap),
            n_profile(y, assume_homogeneous=assume_homogeneous, cap=cap))


def join_magnitude(x: FiniteMetricSpace, y: FiniteMetricSpace, *,
                   assume_homogeneous: bool = False, cap: int = HOMOGENEITY_CAP) -> GenRat:
    """``(N_X + N_Y - 2q) / (N_X N_Y - q^2)`` for homogeneous ``x``, ``y``."""
    nx, ny = _check_join_inputs(x, y, assume_homogeneous, cap)
    return GenRat(nx + ny - Q * 2, nx * ny - Q * Q)


@dataclass(frozen=True)
class HomogeneousProfile:
    size: int
    n_poly: GenPoly
    n1: Fraction        # N_X'(1)
    n2: Fraction        # N_X''(1)
    lagrange: Fraction  # (1/n^2) sum_{i<j} (d_i - d_j)^2


def homogeneous_profile(x: FiniteMetricSpace, *, assume_homogeneous: bool = False,
                        cap: int = HOMOGENEITY_CAP) -> HomogeneousProfile:
    poly = n_profile(x, assume_homogeneous=assume_homogeneous, cap=cap)
    row = x.dist[0]
    n = x.n
    n1 = sum(row, Fraction(0)) / n
    n2 = sum((d * d - d for d in row), Fraction(0)) / n
    lag = sum(((a - b) ** 2 for a, b in itertools.combinations(row, 2)), Fraction(0)) / (n * n)
    if lag != n2 + n1 - n1 * n1:
        raise InternalError("Lagrange identity failed")
    return HomogeneousProfile(n, poly, n1, n2, lag)


def join_limit(x: FiniteMetricSpace, y: FiniteMetricSpace, *,
               assume_homogeneous: bool = False, cap: int = HOMOGENEITY_CAP) -> Fraction:
    """Exact ``lim_{t -> 0} |t(X * Y)|`` when ``N_X'(1) + N_Y'(1) = 2``.

    Both the sum form and the ``(n2x + n2y) / (n2x + n2y - (n1x - n1y)^2 / 2)``
    form are computed and must agree.
    """
    for name, s in (("first", x), ("second", y)):
        if s.diameter() > 2:
            raise DiameterExceedsTwo(f"{name} space has diameter {s.diameter()}")
    px = homogeneous_profile(x, assume_homogeneous=assume_homogeneous, cap=cap)
    py = homogeneous_profile(y, assume_homogeneous=assume_homogeneous, cap=cap)
    if px.n1 + py.n1 != 2:
        raise AssumptionViolated(
            f"mean distances must sum to 2, got {px.n1} + {py.n1}")
    top = px.n2 + py.n2
    value = top / (px.lagrange + py.lagrange)
    alt = top / (top - (px.n1 - py.n1) ** 2 / 2)
    if value != alt:
        raise InternalError(f"limit formulas disagree: {value} vs {alt}")
    if value < 1:
        raise InternalError(f"join limit {value} below 1")
    return value


def family_partner(n: int, r) -> Fraction:
    """``s(n, r) = 2n/(n-1) - r``."""
    return Fraction(2 * n, n - 1) - as_rational(r)


def family_limit(n: int, r) -> Fraction:
    """Small-scale limit of ``X_r^n * X_s^n`` with ``s = s(n, r)``."""
    if n < 2:
        raise OutOfRange("family needs n >= 2")
    r = as_rational(r)
    if not Fraction(n, n - 1) <= r <= 2:
        raise OutOfRange(f"r = {r} outside [{Fraction(n, n - 1)}, 2]")
    s = family_partner(n, r)
    return join_limit(uniform_space(n, r), uniform_space(n, s), assume_homogeneous=True)


def family_upper_bound(n: int) -> Fraction:
    """``(n^3/2 - 3n^2/2 + 2n) / (n^2 - 2n + 2)``: the family's value at ``r = 2``."""
    n = Fraction(n)
    return (n ** 3 / 2 - 3 * n ** 2 / 2 + 2 * n) / (n ** 2 - 2 * n + 2)
