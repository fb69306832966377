"""Magnitude of finite metric spaces: numeric, formal, and at small scale."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable

import flint
import numpy as np
import scipy.linalg

from .errors import (
    InfiniteDistanceUnsupported,
    InternalError,
    NonpositiveScale,
    SingularAtThisScale,
)
from .genfun import (
    DENSE_DEGREE_CAP,
    GenPoly,
    GenRat,
    LimitResult,
    as_rational,
    genrat_limit_q1,
)
from .laurent import series_small_scale_limit
from .spaces import FiniteMetricSpace

CONDITION_LIMIT = 1e12

# small_scale_limit switches from the formal route to the series route here
FORMAL_LIMIT_MAX_POINTS = 12
# auto routing also sends spaces with a large lattice degree n * L * diam to the series route
FORMAL_LIMIT_MAX_DEGREE = 2000


# -- numeric ------------------------------------------------------------------

def similarity_matrix(x: FiniteMetricSpace, t: float) -> np.ndarray:
    """``exp(-t d)`` with infinite distances mapped to 0."""
    return np.exp(-float(t) * x.as_float_matrix())


def numeric_magnitude(x: FiniteMetricSpace, t: float,
                      condition_limit: float = CONDITION_LIMIT) -> float:
    """``|tX|``: sum of the weighting solving ``Z_tX w = 1``."""
    t = float(t)
    if not t > 0:
        raise NonpositiveScale(f"t must be positive, got {t}")
    z = similarity_matrix(x, t)
    cond = np.linalg.cond(z, 1)
    if not np.isfinite(cond) or cond > condition_limit:
        raise SingularAtThisScale(t, f"condition number {cond:.3g}")
    with warnings.catch_warnings():
        warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
        try:
            lu = scipy.linalg.lu_factor(z)
        except (scipy.linalg.LinAlgWarning, np.linalg.LinAlgError) as exc:
            raise SingularAtThisScale(t, str(exc)) from exc
    w = scipy.linalg.lu_solve(lu, np.ones(x.n))
    return float(w.sum())


def magnitude_profile(x: FiniteMetricSpace, t_grid: Iterable[float]) -> list:
    """``[(t, |tX| or None)]``; None marks a scale where ``Z_tX`` is singular."""
    out = []
    for t in t_grid:
        try:
            out.append((float(t), numeric_magnitude(x, t)))
        except SingularAtThisScale:
            out.append((float(t), None))
    return out


def t_grid(t_min: float, t_max: float, count: int, log: bool = True) -> list:
    if t_min <= 0 or t_max < t_min or count < 1:
        raise ValueError("need 0 < t_min <= t_max and count >= 1")
    if count == 1:
        return [float(t_min)]
    pts = np.geomspace(t_min, t_max, count) if log else np.linspace(t_min, t_max, count)
    return [float(v) for v in pts]


# -- formal -------------------------------------------------------------------

class _DenseRing:
    """``Z[u]`` as dense FLINT polynomials."""

    zero = flint.fmpz_poly([])
    one = flint.fmpz_poly([1])

    @staticmethod
    def monomial(e: int):
        return flint.fmpz_poly([0] * e + [1])

    @staticmethod
    def to_dict(p) -> dict:
        return {k: int(c) for k, c in enumerate(p.coeffs()) if c != 0}


class _SparseRing:
    """``Z[u]`` as sparse FLINT polynomials, for very wide exponent lattices."""

    ctx = flint.fmpz_mpoly_ctx.get(("u",), "lex")
    zero = ctx.from_dict({})
    one = ctx.from_dict({(0,): 1})

    @classmethod
    def monomial(cls, e: int):
        return cls.ctx.from_dict({(e,): 1})

    @staticmethod
    def to_dict(p) -> dict:
        return {int(k[0]): int(c) for k, c in p.to_dict().items()}


def exponent_lattice(x: FiniteMetricSpace) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b),
                  (d.denominator for d in x.finite_distances()), 1)


def fraction_free_solve(a: list, ring) -> tuple:
    """Fraction-free Gauss-Jordan on the augmented matrix ``[A | b]`` (in place).

    Returns ``(D, y)`` with ``D = +-det A`` and ``A (y / D) = b``; each
    ``y_i`` is, up to the common sign, the determinant of ``A`` with column
    ``i`` replaced by ``b``.  Every division is exact because each
    intermediate entry is a minor of the input.
    """
    n = len(a)
    prev = ring.one
    for k in range(n):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    break
            else:
                raise InternalError("singular formal similarity matrix")
        p = a[k][k]
        rowk = a[k]
        for i in range(n):
            if i == k:
                continue
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n + 1):
                rowi[j] = (p * rowi[j] - aik * rowk[j]) / prev
            rowi[k] = ring.zero
            if i < k:
                rowi[i] = p
        prev = p
    return prev, [a[i][n] for i in range(n)]


def formal_magnitude_parts(x: FiniteMetricSpace) -> tuple:
    """Unreduced ``(sum adj Z, det Z)`` of the formal similarity matrix, up to
    a common sign, as GenPolys."""
    L = exponent_lattice(x)
    exps = [[None if math.isinf(d) else int(d * L) for d in row] for row in x.dist]
    widest = max((e for row in exps for e in row if e is not None), default=0)
    ring = _DenseRing if x.n * widest <= DENSE_DEGREE_CAP else _SparseRing
    a = [[ring.zero if e is None else ring.monomial(e) for e in row] + [ring.one]
         for row in exps]
    det, y = fraction_free_solve(a, ring)
    total = reduce(lambda s, v: s + v, y, ring.zero)
    return (GenPoly.from_lattice(ring.to_dict(total), L),
            GenPoly.from_lattice(ring.to_dict(det), L))


def formal_magnitude(x: FiniteMetricSpace) -> GenRat:
    """``Mag(X)(q)``: sum of the entries of the inverse of ``(q^d(x, y))``."""
    num, den = formal_magnitude_parts(x)
    return GenRat(num, den)


def _formal_is_cheap(x: FiniteMetricSpace) -> bool:
    if x.n > FORMAL_LIMIT_MAX_POINTS:
        return False
    dists = x.finite_distances()
    top = max(dists) * exponent_lattice(x) if dists else 0
    return x.n * top <= FORMAL_LIMIT_MAX_DEGREE


def small_scale_limit(x: FiniteMetricSpace, method: str = "auto") -> LimitResult:
    """``lim_{t -> 0} |tX|``, exactly.

    ``method="formal"`` takes the limit of the formal magnitude;
    ``method="series"`` eliminates over Laurent series in ``t``; ``"auto"``
    uses the formal route for small spaces on a coarse exponent lattice.
    """
    if method == "auto":
        method = "formal" if _formal_is_cheap(x) else "series"
    if method == "formal":
        num, den = formal_magnitude_parts(x)
        return genrat_limit_q1(GenRat(num, den, reduce=False))
    if method == "series":
        return series_small_scale_limit(x.dist)
    raise ValueError(f"unknown method {method!r}")


# -- genericity diagnostics ---------------------------------------------------

def _require_finite(x: FiniteMetricSpace):
    if x.has_infinite_distance():
        raise InfiniteDistanceUnsupported("distance-matrix diagnostics need finite distances")


def rational_det(rows) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = flint.fmpq_mat(n, n, [flint.fmpq(v.numerator, v.denominator)
                              for row in rows for v in row])
    return as_rational(m.det())


def _columns_replaced(d, repl: dict) -> list:
    """Copy of ``d`` with column ``j`` replaced by ``repl[j]`` for each key."""
    return [[repl[j][i] if j in repl else d[i][j] for j in range(len(d))]
            for i in range(len(d))]


def f_n(x: FiniteMetricSpace) -> Fraction:
    """Sum over ``j`` of ``det(d)`` with column ``j`` replaced by ones."""
    _require_finite(x)
    d = x.dist
    ones = [Fraction(1)] * x.n
    return sum((rational_det(_columns_replaced(d, {j: ones})) for j in range(x.n)),
               Fraction(0))


def distance_det(x: FiniteMetricSpace) -> Fraction:
    _require_finite(x)
    return rational_det(x.dist)


def c_coefficients(x: FiniteMetricSpace) -> tuple:
    """``(C_n, C_n')``: order-``n`` coefficients of ``sum adj Z_tX`` and
    ``det Z_tX`` in powers of ``-t``."""
    _require_finite(x)
    d, n = x.dist, x.n
    ones = [Fraction(1)] * n
    c = Fraction(0)
    for i in range(n):
        for j in range(n):
            if i != j:
                sq = [d[k][j] ** 2 for k in range(n)]
                c += rational_det(_columns_replaced(d, {i: ones, j: sq}))
    c /= 2
    return c, c + rational_det(d)


@dataclass(frozen=True)
class MagnitudeReport:
    n: int
    f_n: Fraction
    det_d: Fraction
    c_n: Fraction
    c_n_prime: Fraction
    limit: LimitResult
    one_point: bool
    fast_path_limit: Fraction | None
    verified: bool

    def to_dict(self) -> dict:
        s = lambda v: None if v is None else str(v)
        return {
            "n": self.n,
            "f_n": s(self.f_n),
            "det_d": s(self.det_d),
            "c_n": s(self.c_n),
            "c_n_prime": s(self.c_n_prime),
            "limit": str(self.limit),
            "one_point": self.one_point,
            "fast_path_limit": s(self.fast_path_limit),
            "verified": self.verified,
        }


def one_point_report(x: FiniteMetricSpace, verify: bool = False,
                     method: str = "auto") -> MagnitudeReport:
    """Decide the one-point property and collect the expansion coefficients.

    If ``F_n != 0`` the limit is 1 without further work unless ``verify`` is
    set; otherwise the exact engine runs and, when ``C_n' != 0``, must agree
    with ``C_n / C_n'``.
    """
    fn = f_n(x)
    det = distance_det(x)
    c, cp = c_coefficients(x)
    if fn != 0:
        fast = Fraction(1)
    elif cp != 0:
        fast = c / cp
    else:
        fast = None
    ran_exact = verify or fn == 0
    if ran_exact:
        limit = small_scale_limit(x, method)
        if fast is not None and limit != LimitResult.finite(fast):
            raise InternalError(f"exact limit {limit} disagrees with expansion value {fast}")
    else:
        limit = LimitResult.finite(1)
    return MagnitudeReport(
        n=x.n, f_n=fn, det_d=det, c_n=c, c_n_prime=cp, limit=limit,
        one_point=limit == LimitResult.finite(1), fast_path_limit=fast,
        verified=ran_exact)
