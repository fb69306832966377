"""Exact small-scale limits by elimination over truncated Laurent series in t.

Entries of the similarity matrix ``exp(-t d)`` are expanded in ``t`` with
exact rational coefficients, and the system ``Z w = 1`` is solved over the
field of Laurent series.  Every value carries an absolute precision
``O(t^prec)`` that the arithmetic propagates rigorously, so a coefficient is
only ever reported when it is fully determined.  When the working precision
is too low to decide a pivot or the final coefficient, the whole solve is
repeated at twice the precision.
"""

from __future__ import annotations

import math
from fractions import Fraction

from gmpy2 import mpq

from .errors import InternalError
from .genfun import LimitResult

EXACT = 1 << 40  # precision of values known exactly


class _NeedPrecision(Exception):
    pass


class Laurent:
    """``sum c[i] t^(val + i) + O(t^prec)`` with ``c[0] != 0`` unless ``c`` is empty.

    An empty ``c`` means the value is ``O(t^prec)`` and ``val == prec``.
    """

    __slots__ = ("val", "c", "prec")

    def __init__(self, val: int, c: list, prec: int):
        i = 0
        while i < len(c) and not c[i]:
            i += 1
        if i:
            c = c[i:]
            val += i
        if val + len(c) > prec:
            c = c[:max(prec - val, 0)]
        if not c:
            val = prec
        self.val, self.c, self.prec = val, c, prec

    @classmethod
    def exact(cls, x) -> "Laurent":
        return cls(0, [mpq(x.numerator, x.denominator) if isinstance(x, Fraction) else mpq(x)], EXACT)

    @classmethod
    def exp_distance(cls, d, K: int) -> "Laurent":
        """``exp(-t d)`` through ``t^(K-1)``; ``d = inf`` gives exact zero."""
        if math.isinf(d):
            return cls(EXACT, [], EXACT)
        if d == 0:
            return cls.exact(1)
        md = -mpq(d.numerator, d.denominator)
        c, term = [], mpq(1)
        for k in range(K):
            if k:
                term = term * md / k
            c.append(term)
        return cls(0, c, K)

    def is_known_zero(self) -> bool:
        return not self.c

    def __sub__(self, other: "Laurent") -> "Laurent":
        prec = min(self.prec, other.prec)
        if not other.c:
            return Laurent(self.val, self.c, prec)
        if not self.c:
            return Laurent(other.val, [-x for x in other.c], prec)
        v = min(self.val, other.val)
        top = max(self.val + len(self.c), other.val + len(other.c))
        out = [mpq(0)] * max(min(prec, top) - v, 0)
        for i, x in enumerate(self.c):
            k = self.val - v + i
            if k < len(out):
                out[k] = x
        for i, x in enumerate(other.c):
            k = other.val - v + i
            if k < len(out):
                out[k] -= x
        return Laurent(v, out, prec)

    def __add__(self, other: "Laurent") -> "Laurent":
        return self - other.negate()

    def negate(self) -> "Laurent":
        return Laurent(self.val, [-x for x in self.c], self.prec)

    def __mul__(self, other: "Laurent") -> "Laurent":
        va, vb = self.val, other.val
        prec = min(self.prec + vb, other.prec + va)
        if prec > EXACT:
            prec = EXACT
        if not self.c or not other.c:
            return Laurent(prec, [], prec)
        a, b = self.c, other.c
        # exact operands have finitely many terms; never allocate up to EXACT
        n = min(prec - va - vb, len(a) + len(b) - 1)
        la, lb = min(len(a), n), min(len(b), n)
        out = [mpq(0)] * n
        for i in range(la):
            ai = a[i]
            for j in range(min(lb, n - i)):
                out[i + j] += ai * b[j]
        return Laurent(va + vb, out, prec)

    def inverse(self) -> "Laurent":
        if not self.c:
            raise _NeedPrecision
        c = self.c
        n = len(c) if self.prec < EXACT else 1
        if self.prec >= EXACT and len(c) > 1:
            # exact non-monomial values never reach here in practice
            raise InternalError("inverse of an exact polynomial is not a finite series")
        inv0 = 1 / c[0]
        out = [inv0]
        for k in range(1, n):
            s = mpq(0)
            for j in range(1, min(k, len(c) - 1) + 1):
                s += c[j] * out[k - j]
            out.append(-s * inv0)
        prec = EXACT if self.prec >= EXACT else -self.val + n
        return Laurent(-self.val, out, prec)

    def leading(self):
        return self.c[0] if self.c else None


def _solve_sum(dist, K: int) -> Laurent:
    """``1^T Z^{-1} 1`` with entries expanded through ``t^(K-1)``."""
    n = len(dist)
    a = [[Laurent.exp_distance(x, K) for x in row] for row in dist]
    rhs = [Laurent.exact(1) for _ in range(n)]
    pinv = [None] * n
    for k in range(n):
        best = None
        for i in range(k, n):
            row = a[i]
            for j in range(k, n):
                e = row[j]
                if e.c and (best is None or e.val < best[0]):
                    best = (e.val, i, j)
        if best is None:
            raise _NeedPrecision
        _, pi, pj = best
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            rhs[k], rhs[pi] = rhs[pi], rhs[k]
        if pj != k:
            # column order does not affect the sum of the solution
            for row in a:
                row[k], row[pj] = row[pj], row[k]
        inv = a[k][k].inverse()
        pinv[k] = inv
        rowk = a[k]
        for i in range(k + 1, n):
            e = a[i][k]
            if e.prec >= EXACT and not e.c:
                continue
            f = e * inv
            rowi = a[i]
            for j in range(k + 1, n):
                rowi[j] = rowi[j] - f * rowk[j]
            rhs[i] = rhs[i] - f * rhs[k]
    w = [None] * n
    for k in range(n - 1, -1, -1):
        s = rhs[k]
        for j in range(k + 1, n):
            s = s - a[k][j] * w[j]
        w[k] = s * pinv[k]
    total = w[0]
    for x in w[1:]:
        total = total + x
    return total


def _as_limit(m: Laurent) -> LimitResult:
    if not m.c:
        if m.prec > 0:
            return LimitResult.finite(0)
        raise _NeedPrecision
    lead = m.c[0]
    if m.val < 0:
        return LimitResult(LimitResult.PLUS_INF if lead > 0 else LimitResult.MINUS_INF)
    if m.val > 0:
        return LimitResult.finite(0)
    return LimitResult.finite(Fraction(int(lead.numerator), int(lead.denominator)))


def series_small_scale_limit(dist, start_order: int = 8, max_order: int | None = None) -> LimitResult:
    """``lim_{t -> 0+} |tX|`` for the distance matrix ``dist`` (Fractions or inf)."""
    n = len(dist)
    if max_order is None:
        max_order = 4 * n + 32
    K = start_order
    while K <= max_order:
        try:
            return _as_limit(_solve_sum(dist, K))
        except _NeedPrecision:
            K *= 2
    raise InternalError(f"series precision {max_order} was not enough")
