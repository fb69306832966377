"""Generalized polynomials and rational functions in ``q`` with rational exponents.

A generalized polynomial is a finite sum ``a1 q^r1 + ... + ak q^rk`` with
rational coefficients and rational exponents ``r >= 0``.  Whenever division
or gcd is needed, a polynomial is rewritten in ``u = q^(1/L)`` where ``L`` is
the lcm of the exponent denominators; it is then an ordinary polynomial and
FLINT does the work.

The limit ``q -> 1`` is taken through the substitution ``q = exp(-t)``:
numerator and denominator become power series in ``t`` whose coefficients
are exact rationals.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping

import flint

from .errors import (
    DivisionByZeroGenRat,
    ExactnessUnavailable,
    InternalError,
    ParseError,
    ZeroDenominatorPolynomial,
)

Rational = Fraction

# Dense lattice representations above this u-degree are not attempted.
DENSE_DEGREE_CAP = 200_000

MINUS = "−"


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"4/3"`` or ``"1e-6"``.

    Floats are rejected so that binary rounding never leaks into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip().replace(MINUS, "-"))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {x!r}") from exc
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _fmt_rational(x: Fraction) -> str:
    return str(x)


class GenPoly:
    """Immutable generalized polynomial with ``terms`` sorted by exponent.

    Terms with exponent ``inf`` are dropped (``q^inf = 0``), as are zero
    coefficients.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple] | Mapping = ()):
        if isinstance(terms, Mapping):
            terms = terms.items()
        acc: dict[Fraction, Fraction] = {}
        for e, c in terms:
            if isinstance(e, float) and math.isinf(e) and e > 0:
                continue
            e = as_rational(e)
            if e < 0:
                raise ValueError(f"negative exponent {e}")
            c = as_rational(c)
            if c:
                acc[e] = acc.get(e, 0) + c
        object.__setattr__(
            self, "terms", tuple((e, c) for e, c in sorted(acc.items()) if c))

    def __setattr__(self, name, value):
        raise AttributeError("GenPoly is immutable")

    @classmethod
    def _raw(cls, terms: tuple) -> "GenPoly":
        # terms already canonical
        self = object.__new__(cls)
        object.__setattr__(self, "terms", terms)
        return self

    @classmethod
    def monomial(cls, exponent=0, coefficient=1) -> "GenPoly":
        return cls([(exponent, coefficient)])

    @classmethod
    def constant(cls, c) -> "GenPoly":
        return cls([(0, c)])

    @classmethod
    def from_lattice(cls, coeffs: Mapping[int, object], L: int, shift: int = 0):
        """Build from ``{k: a_k}`` meaning ``sum a_k u^(k+shift)``, ``u = q^(1/L)``."""
        return cls((Fraction(k + shift, L), c) for k, c in coeffs.items())

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def exponents(self) -> tuple:
        return tuple(e for e, _ in self.terms)

    @property
    def coefficients(self) -> tuple:
        return tuple(c for _, c in self.terms)

    def lowest(self) -> tuple:
        """``(exponent, coefficient)`` of the lowest-order term."""
        if not self.terms:
            raise ValueError("zero polynomial has no lowest term")
        return self.terms[0]

    def degree(self) -> Fraction:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return self.terms[-1][0]

    def lattice(self) -> int:
        """Lcm of the exponent denominators."""
        return reduce(_lcm, (e.denominator for e, _ in self.terms), 1)

    def coefficient_sum(self) -> Fraction:
        return sum(self.coefficients, Fraction(0))

    def has_integer_exponents(self) -> bool:
        return all(e.denominator == 1 for e, _ in self.terms)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, GenPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == GenPoly.constant(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    # -- ring operations ----------------------------------------------------

    @staticmethod
    def _coerce(x) -> "GenPoly":
        if isinstance(x, GenPoly):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return GenPoly.constant(x)
        return NotImplemented

    def __neg__(self):
        return GenPoly._raw(tuple((e, -c) for e, c in self.terms))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GenPoly(self.terms + other.terms)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GenPoly._raw(tuple((e, c * other) for e, c in self.terms)) if other else GenPoly()
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return GenPoly()
        if len(self.terms) * len(other.terms) > 4000:
            dense = _dense_mul(self, other)
            if dense is not None:
                return dense
        acc: dict[Fraction, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                acc[e] = acc.get(e, 0) + c1 * c2
        return GenPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out, base = GenPoly.constant(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale_exponents(self, t) -> "GenPoly":
        """``p(q^t)``: every exponent multiplied by ``t > 0``."""
        t = as_rational(t)
        if t <= 0:
            raise ValueError("scale must be positive")
        return GenPoly._raw(tuple((e * t, c) for e, c in self.terms))

    def shift_down(self, e) -> "GenPoly":
        """Divide by the monomial ``q^e``; all exponents must stay >= 0."""
        return GenPoly(((x - e, c) for x, c in self.terms))

    # -- evaluation ---------------------------------------------------------

    def __call__(self, q0):
        return genpoly_eval(self, q0)

    def at_scale(self, t):
        """Evaluate at ``q = exp(-t)`` in float or mpmath precision."""
        if _is_mp(t):
            import mpmath
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator
                               * mpmath.exp(-t * mpmath.mpf(e.numerator) / e.denominator)
                               for e, c in self.terms)
        t = float(t)
        return math.fsum(float(c) * math.exp(-t * float(e)) for e, c in self.terms)

    # -- text ---------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.terms):
            mag = abs(c)
            if e == 0:
                body = _fmt_rational(mag)
            elif mag == 1:
                body = f"q^{{{_fmt_rational(e)}}}"
            else:
                body = f"{_fmt_rational(mag)} q^{{{_fmt_rational(e)}}}"
            if i == 0:
                parts.append(MINUS + body if c < 0 else body)
            else:
                parts.append((f" {MINUS} " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"GenPoly({str(self)!r})"


def _is_mp(x) -> bool:
    return type(x).__module__.startswith("mpmath")


# -- lattice helpers ----------------------------------------------------------

def lattice_of(*polys: GenPoly) -> int:
    return reduce(_lcm, (p.lattice() for p in polys), 1)


def _to_fmpq_poly(p: GenPoly, L: int, shift: int = 0) -> "flint.fmpq_poly":
    if not p.terms:
        return flint.fmpq_poly([])
    top = int(p.degree() * L) - shift
    coeffs = [flint.fmpq(0)] * (top + 1)
    for e, c in p.terms:
        coeffs[int(e * L) - shift] = flint.fmpq(c.numerator, c.denominator)
    return flint.fmpq_poly(coeffs)


def _from_flint_poly(fp, L: int, shift: int = 0) -> GenPoly:
    return GenPoly.from_lattice(
        {k: as_rational(c) for k, c in enumerate(fp.coeffs()) if c != 0}, L, shift)


def _dense_mul(a: GenPoly, b: GenPoly):
    L = lattice_of(a, b)
    if (a.degree() + b.degree()) * L > DENSE_DEGREE_CAP:
        return None
    return _from_flint_poly(_to_fmpq_poly(a, L) * _to_fmpq_poly(b, L), L)


def _reduce_pair(num: GenPoly, den: GenPoly) -> tuple[GenPoly, GenPoly]:
    """Cancel common monomial and polynomial factors, then make the
    lowest-order denominator coefficient equal to 1."""
    if not den.terms:
        raise ZeroDenominatorPolynomial("denominator is the zero polynomial")
    if not num.terms:
        return GenPoly(), GenPoly.constant(1)
    L = lattice_of(num, den)
    shift = int(min(num.terms[0][0], den.terms[0][0]) * L)
    top = max(num.degree(), den.degree()) * L - shift
    if top <= DENSE_DEGREE_CAP:
        fn, fd = _to_fmpq_poly(num, L, shift), _to_fmpq_poly(den, L, shift)
        g = fn.gcd(fd)
        if g.degree() > 0:
            fn, r1 = divmod(fn, g)
            fd, r2 = divmod(fd, g)
            if r1 != 0 or r2 != 0:
                raise InternalError("gcd does not divide")
        num, den = _from_flint_poly(fn, L), _from_flint_poly(fd, L)
    elif shift:
        # too wide for a dense gcd: only the monomial content is removed
        e = Fraction(shift, L)
        num, den = num.shift_down(e), den.shift_down(e)
    lead = den.terms[0][1]
    if lead != 1:
        num, den = num * (1 / lead), den * (1 / lead)
    return num, den


class GenRat:
    """Immutable generalized rational function ``num / den``.

    The stored pair is reduced by the lattice gcd (when the dense degree is
    below ``DENSE_DEGREE_CAP``) and scaled so that the denominator's
    lowest-order coefficient is 1.  Equality is decided by
    cross-multiplication, so it is correct even for unreduced pairs.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduce: bool = True):
        num = GenPoly._coerce(num)
        den = GenPoly.constant(1) if den is None else GenPoly._coerce(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("GenRat needs GenPoly or rational parts")
        if not den.terms:
            raise ZeroDenominatorPolynomial("denominator is the zero polynomial")
        if reduce:
            num, den = _reduce_pair(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("GenRat is immutable")

    __hash__ = None

    @staticmethod
    def _coerce(x):
        if isinstance(x, GenRat):
            return x
        if isinstance(x, GenPoly) or (isinstance(x, (int, Fraction)) and not isinstance(x, bool)):
            return GenRat(x)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.num.terms

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __neg__(self):
        return GenRat(-self.num, self.den, reduce=False)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return GenRat(self.num + other.num, self.den)
        return GenRat(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GenRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "GenRat":
        if self.is_zero():
            raise DivisionByZeroGenRat("inverse of zero")
        return GenRat(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZeroGenRat("division by the zero function")
        return GenRat(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return GenRat(self.num ** k, self.den ** k)

    def scale_exponents(self, t) -> "GenRat":
        return GenRat(self.num.scale_exponents(t), self.den.scale_exponents(t))

    def __call__(self, q0):
        return genpoly_eval(self.num, q0) / genpoly_eval(self.den, q0)

    def at_scale(self, t):
        return self.num.at_scale(t) / self.den.at_scale(t)

    def __str__(self):
        n, d = str(self.num), str(self.den)
        if self.den == 1:
            return n
        if len(self.num) > 1:
            n = f"({n})"
        if len(self.den) > 1:
            d = f"({d})"
        return f"{n} / {d}"

    def __repr__(self):
        return f"GenRat({str(self)!r})"


# -- text parsing -------------------------------------------------------------

_TERM = re.compile(
    r"^(?P<sign>-)?\s*(?P<coef>\d+(?:/\d+)?)?\s*(?P<q>q(?:\^\{(?P<exp>\d+(?:/\d+)?)\}|\^(?P<bare>\d+))?)?$")


def _split_top(s: str, seps: tuple) -> list:
    """Split on separators that are not inside braces or parentheses."""
    out, depth, start, i = [], 0, 0, 0
    while i < len(s):
        ch = s[i]
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        elif depth == 0:
            for sep in seps:
                if s.startswith(sep, i) and i > start:
                    out.append((s[start:i], sep))
                    start = i + len(sep)
                    i = start - 1
                    break
        i += 1
    out.append((s[start:], None))
    return out


def parse_genpoly(text: str) -> GenPoly:
    s = text.strip().replace(MINUS, "-")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    if not s:
        raise ParseError("empty polynomial")
    terms, sign = [], 1
    for chunk, sep in _split_top(s, (" + ", " - ")):
        m = _TERM.match(chunk.strip())
        if not m or not (m.group("coef") or m.group("q")):
            raise ParseError(f"bad term {chunk!r} in {text!r}")
        c = Fraction(m.group("coef") or 1) * sign * (-1 if m.group("sign") else 1)
        if m.group("q"):
            e = Fraction(m.group("exp") or m.group("bare") or 1)
        else:
            e = Fraction(0)
        terms.append((e, c))
        sign = -1 if sep == " - " else 1
    return GenPoly(terms)


def parse_genrat(text: str) -> GenRat:
    parts = _split_top(text.strip(), (" / ",))
    if len(parts) == 1:
        return GenRat(parse_genpoly(parts[0][0]))
    if len(parts) != 2:
        raise ParseError(f"expected 'num / den': {text!r}")
    return GenRat(parse_genpoly(parts[0][0]), parse_genpoly(parts[1][0]))


# -- evaluation ---------------------------------------------------------------

def genpoly_eval(p: GenPoly, q0):
    """Value of ``p`` at ``q0 in (0, 1]``.

    Exact for rational ``q0`` when all exponents are integers or ``q0 == 1``;
    float (or mpmath) otherwise.
    """
    if isinstance(q0, (int, Fraction)) and not isinstance(q0, bool):
        q0 = Fraction(q0)
        if q0 <= 0:
            raise ValueError("q0 must be positive")
        if q0 == 1:
            return p.coefficient_sum()
        if not p.has_integer_exponents():
            raise ExactnessUnavailable(
                "fractional exponents at q0 != 1 have no exact rational value")
        return sum((c * q0 ** int(e) for e, c in p.terms), Fraction(0))
    if _is_mp(q0):
        import mpmath
        if q0 <= 0:
            raise ValueError("q0 must be positive")
        lq = mpmath.log(q0)
        return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator
                           * mpmath.exp(lq * e.numerator / e.denominator)
                           for e, c in p.terms)
    q0 = float(q0)
    if q0 <= 0:
        raise ValueError("q0 must be positive")
    if q0 == 1.0:
        return float(p.coefficient_sum())
    lq = math.log(q0)
    return math.fsum(float(c) * math.exp(lq * float(e)) for e, c in p.terms)


def genpoly_arith(a: GenPoly, b: GenPoly, op: str) -> GenPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def genrat_arith(a: GenRat, b: GenRat, op: str) -> GenRat:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


# -- power series in t --------------------------------------------------------

@dataclass(frozen=True)
class TruncatedSeries:
    """Power series in ``t`` known through ``t^order``."""

    order: int
    coefficients: tuple

    def __post_init__(self):
        if self.order < 0 or len(self.coefficients) != self.order + 1:
            raise ValueError("need exactly order + 1 coefficients")
        object.__setattr__(self, "coefficients",
                           tuple(as_rational(c) for c in self.coefficients))

    @classmethod
    def zero(cls, order: int):
        return cls(order, (Fraction(0),) * (order + 1))

    def _check(self, other):
        if self.order != other.order:
            raise ValueError("series orders differ")

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries(self.order, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other):
        self._check(other)
        return TruncatedSeries(self.order, tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.order, tuple(a * other for a in self.coefficients))
        self._check(other)
        a, b = self.coefficients, other.coefficients
        return TruncatedSeries(self.order, tuple(
            sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(self.order + 1)))

    def __getitem__(self, k):
        return self.coefficients[k]

    def leading_order(self):
        """Index of the first nonzero coefficient, or None."""
        return next((k for k, c in enumerate(self.coefficients) if c), None)


def series_of_exponential_sum(p: GenPoly, K: int) -> TruncatedSeries:
    """Taylor coefficients of ``p(exp(-t))`` at ``t = 0`` through ``t^K``."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    coeffs = []
    fact = 1
    for k in range(K + 1):
        if k:
            fact *= k
        coeffs.append(sum((c * (-e) ** k for e, c in p.terms), Fraction(0)) / fact)
    return TruncatedSeries(K, tuple(coeffs))


@dataclass(frozen=True)
class LimitResult:
    """``Finite(value)``, ``PlusInfinity`` or ``MinusInfinity``."""

    kind: str
    value: Fraction | None = None

    FINITE = "finite"
    PLUS_INF = "+inf"
    MINUS_INF = "-inf"

    def __post_init__(self):
        if self.kind == self.FINITE:
            if self.value is None:
                raise ValueError("finite limit needs a value")
            object.__setattr__(self, "value", as_rational(self.value))
        elif self.kind in (self.PLUS_INF, self.MINUS_INF):
            if self.value is not None:
                raise ValueError("infinite limit carries no value")
        else:
            raise ValueError(f"unknown limit kind {self.kind!r}")

    @classmethod
    def finite(cls, v):
        return cls(cls.FINITE, as_rational(v))

    @property
    def is_finite(self) -> bool:
        return self.kind == self.FINITE

    def __str__(self):
        return str(self.value) if self.is_finite else self.kind

    @classmethod
    def parse(cls, s: str) -> "LimitResult":
        s = s.strip()
        if s in ("+inf", "inf"):
            return cls(cls.PLUS_INF)
        if s == "-inf":
            return cls(cls.MINUS_INF)
        return cls.finite(as_rational(s))


def _signed_infinity(x: Fraction) -> LimitResult:
    return LimitResult(LimitResult.PLUS_INF if x > 0 else LimitResult.MINUS_INF)


def _moment(p: GenPoly, k: int) -> Fraction:
    """``k``-th Taylor coefficient of ``p(exp(-t))``."""
    return sum((c * (-e) ** k for e, c in p.terms), Fraction(0)) / math.factorial(k)


def genrat_limit_q1(f: GenRat) -> LimitResult:
    """``lim_{q -> 1^-} f(q)`` via the series of ``f(exp(-t))`` at ``t = 0+``."""
    den = f.den
    if not den.terms:
        raise ZeroDenominatorPolynomial("denominator is the zero polynomial")
    # m distinct exponents cannot all have vanishing moments of order < m,
    # so this scan stops after at most len(den.terms) steps
    p = 0
    while (lead := _moment(den, p)) == 0:
        p += 1
        if p >= len(den.terms):
            raise InternalError("denominator series vanished below the Vandermonde bound")
    for j in range(p):
        a = _moment(f.num, j)
        if a:
            return _signed_infinity(a / lead)
    return LimitResult.finite(_moment(f.num, p) / lead)
