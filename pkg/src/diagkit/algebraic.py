"""Exact real algebraic numbers.

An AlgebraicReal is either an exact rational (fast path) or an irrational
value held as an irreducible primitive integer polynomial together with an
isolating open interval with rational endpoints carrying a sign change.
Defining polynomials of operation results are obtained by resultant
composition, then reduced to the irreducible factor that vanishes at the
value; keeping factors irreducible makes rationality testing and equality
trivial and bounds degree growth through long operation chains.

Values are immutable; interval refinement only tightens the isolating
interval around the same value and is semantically invisible, so instances
may be shared freely.
"""

from __future__ import annotations

import enum
import math
import os
from fractions import Fraction

from . import intpoly
from .errors import DegreeOverflow, NegativeRadicand

DEFAULT_MAX_DEGREE = 64


def max_defining_degree() -> int:
    raw = os.environ.get("DIAGKIT_MAX_DEGREE", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_DEGREE
    except ValueError:
        return DEFAULT_MAX_DEGREE


class Comparison(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


def _sqrt_bounds(v: Fraction, k: int) -> tuple[Fraction, Fraction]:
    """Rationals l <= sqrt(v) < h for v >= 0, tightening as k grows."""
    scale = 1 << (2 * k)
    n = (v.numerator * scale) // v.denominator
    r = math.isqrt(n)
    return Fraction(r, 1 << k), Fraction(r + 1, 1 << k)


def _rational_sqrt(v: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    rn = math.isqrt(v.numerator)
    rd = math.isqrt(v.denominator)
    if rn * rn == v.numerator and rd * rd == v.denominator:
        return Fraction(rn, rd)
    return None


class AlgebraicReal:
    """An exact real algebraic number."""

    __slots__ = ("_rat", "_poly", "_lo", "_hi", "_slo")

    def __init__(self, value=0):
        v = _coerce_fraction(value)
        if v is None:
            raise TypeError(f"cannot build AlgebraicReal from {value!r}")
        self._rat = v
        self._poly = None
        self._lo = self._hi = None
        self._slo = 0

    # -- constructors -------------------------------------------------------

    @classmethod
    def _rational(cls, v: Fraction) -> "AlgebraicReal":
        self = object.__new__(cls)
        self._rat = Fraction(v)
        self._poly = None
        self._lo = self._hi = None
        self._slo = 0
        return self

    @classmethod
    def _irrational(cls, poly, lo: Fraction, hi: Fraction) -> "AlgebraicReal":
        # poly must already be irreducible primitive of degree >= 2 and
        # (lo, hi) must isolate a single root with a sign change.
        self = object.__new__(cls)
        self._rat = None
        self._poly = poly
        self._lo = Fraction(lo)
        self._hi = Fraction(hi)
        self._slo = intpoly.sign_at(poly, self._lo)
        if self._slo == 0 or self._slo == intpoly.sign_at(poly, self._hi):
            raise ValueError("interval does not carry a sign change")
        return self

    @classmethod
    def from_root(cls, poly, lo, hi) -> "AlgebraicReal":
        """The unique root of `poly` in [lo, hi].

        `poly` is any nonzero integer polynomial (lowest degree first); it is
        reduced to its squarefree part.  Raises ValueError if the interval
        does not contain exactly one root.
        """
        p = intpoly.normalize(poly)
        if not p:
            raise ValueError("zero polynomial does not define a number")
        p = intpoly.squarefree_part(p)
        lo, hi = Fraction(lo), Fraction(hi)
        return cls._select_root(p, lambda: (lo, hi), static=True)

    @classmethod
    def _select_root(cls, p, interval_fn, static=False) -> "AlgebraicReal":
        """Pick the unique root of p in the (shrinking) interval stream."""
        factors = [f for f in intpoly.factor_irreducible(p)
                   if intpoly.degree(f) >= 1]
        cap = max_defining_degree()
        rounds = 0
        lo, hi = interval_fn()
        while True:
            hits = []
            total = 0
            for f in factors:
                c = intpoly.count_closed(f, lo, hi)
                if c:
                    hits.append(f)
                    total += c
            if total == 1:
                f = hits[0]
                if intpoly.degree(f) == 1:
                    return cls._rational(Fraction(-f[0], f[1]))
                if intpoly.degree(f) > cap:
                    raise DegreeOverflow(
                        f"defining polynomial degree {intpoly.degree(f)} "
                        f"exceeds DIAGKIT_MAX_DEGREE={cap}")
                return cls._irrational(f, lo, hi)
            if total == 0 or static:
                raise ValueError(
                    f"interval ({lo}, {hi}) does not isolate one root "
                    f"(found {total})")
            lo, hi = interval_fn()
            rounds += 1
            if rounds > 10000:  # cannot happen; guards a broken interval_fn
                raise RuntimeError("root selection failed to converge")

    # -- basic queries ------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self._rat is not None

    def as_fraction(self) -> Fraction:
        if self._rat is None:
            raise ValueError("value is irrational")
        return self._rat

    def defining_polynomial(self):
        """Minimal defining polynomial, lowest degree first (x - r for
        rationals)."""
        if self._rat is not None:
            r = self._rat
            return intpoly.normalize((-r.numerator, r.denominator))
        return self._poly

    def isolating_interval(self) -> tuple[Fraction, Fraction]:
        if self._rat is not None:
            return (self._rat, self._rat)
        return (self._lo, self._hi)

    def _refine(self):
        """Halve the isolating interval (no-op for rationals)."""
        if self._rat is not None:
            return
        mid = (self._lo + self._hi) / 2
        # irreducible of degree >= 2 never vanishes at a rational point
        if intpoly.sign_at(self._poly, mid) == self._slo:
            self._lo = mid
        else:
            self._hi = mid

    def refine_below(self, width: Fraction):
        while self._rat is None and self._hi - self._lo >= width:
            self._refine()

    def sign(self) -> int:
        if self._rat is not None:
            v = self._rat
            return (v > 0) - (v < 0)
        while self._lo < 0 < self._hi:
            self._refine()
        return 1 if self._lo >= 0 else -1

    def __bool__(self):
        return self._rat is None or self._rat != 0

    def __float__(self):
        if self._rat is not None:
            return float(self._rat)
        self.refine_below(Fraction(1, 1 << 30))
        return float((self._lo + self._hi) / 2)

    def __repr__(self):
        if self._rat is not None:
            return f"AlgebraicReal({self._rat})"
        return (f"AlgebraicReal(~{float(self):.6g}, "
                f"poly={list(self._poly)})")

    # -- comparison ---------------------------------------------------------

    def compare(self, other) -> Comparison:
        other = _coerce(other)
        a, b = self, other
        if a._rat is not None and b._rat is not None:
            d = a._rat - b._rat
            return Comparison.EQ if d == 0 else (
                Comparison.GT if d > 0 else Comparison.LT)
        if b._rat is not None:
            return a._compare_rational(b._rat)
        if a._rat is not None:
            c = b._compare_rational(a._rat)
            return Comparison(-c.value)
        if a._poly == b._poly:
            while True:
                if a._hi <= b._lo:
                    return Comparison.LT
                if b._hi <= a._lo:
                    return Comparison.GT
                h_lo, h_hi = min(a._lo, b._lo), max(a._hi, b._hi)
                if intpoly.sturm_count(a._poly, h_lo, h_hi) == 1:
                    return Comparison.EQ
                a._refine()
                b._refine()
        # distinct irreducibles define distinct values
        while True:
            if a._hi <= b._lo:
                return Comparison.LT
            if b._hi <= a._lo:
                return Comparison.GT
            a._refine()
            b._refine()

    def _compare_rational(self, r: Fraction) -> Comparison:
        # self is irrational, so never EQ
        while self._lo < r < self._hi:
            self._refine()
        return Comparison.GT if r <= self._lo else Comparison.LT

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.compare(o) is Comparison.EQ

    def __ne__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.compare(o) is not Comparison.EQ

    def __lt__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.compare(o) is Comparison.LT

    def __le__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.compare(o) is not Comparison.GT

    def __gt__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.compare(o) is Comparison.GT

    def __ge__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.compare(o) is not Comparison.LT

    __hash__ = None  # exact equality is a decision procedure, not a hash

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _add(self, o)

    __radd__ = __add__

    def __neg__(self):
        if self._rat is not None:
            return AlgebraicReal._rational(-self._rat)
        poly = intpoly.primitive(
            intpoly.normalize(((-1) ** i) * c for i, c in enumerate(self._poly)))
        return AlgebraicReal._irrational(poly, -self._hi, -self._lo)

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _add(self, -o)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _add(o, -self)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _mul(self, o._inverse())

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _mul(o, self._inverse())

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = AlgebraicReal._rational(Fraction(1))
        base = self
        while n:
            if n & 1:
                out = _mul(out, base)
            base = _mul(base, base) if n > 1 else base
            n >>= 1
        return out

    def _inverse(self) -> "AlgebraicReal":
        if self._rat is not None:
            if self._rat == 0:
                raise ZeroDivisionError("division by zero")
            return AlgebraicReal._rational(1 / self._rat)
        while self._lo <= 0 <= self._hi:
            self._refine()
        poly = intpoly.reverse(self._poly)
        lo, hi = 1 / self._hi, 1 / self._lo
        return AlgebraicReal._irrational(poly, lo, hi)


def _coerce_fraction(value) -> Fraction | None:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return None


def _coerce(value) -> AlgebraicReal | None:
    if isinstance(value, AlgebraicReal):
        return value
    v = _coerce_fraction(value)
    if v is None:
        return None
    return AlgebraicReal._rational(v)


def _check_compose_degree(da: int, db: int):
    cap = max_defining_degree()
    if da * db > cap:
        raise DegreeOverflow(
            f"resultant degree {da * db} exceeds DIAGKIT_MAX_DEGREE={cap}")


def _add(a: AlgebraicReal, b: AlgebraicReal) -> AlgebraicReal:
    if a._rat is not None and b._rat is not None:
        return AlgebraicReal._rational(a._rat + b._rat)
    if b._rat is not None:
        a, b = b, a
    if a._rat is not None:
        r = a._rat
        if r == 0:
            return b
        poly = intpoly.shift(b._poly, r)
        return AlgebraicReal._irrational(poly, b._lo + r, b._hi + r)
    _check_compose_degree(intpoly.degree(a._poly), intpoly.degree(b._poly))
    res = intpoly.compose_add(a._poly, b._poly)

    def interval_fn():
        iv = (a._lo + b._lo, a._hi + b._hi)
        a._refine()
        b._refine()
        return iv

    return AlgebraicReal._select_root(res, interval_fn)


def _mul(a: AlgebraicReal, b: AlgebraicReal) -> AlgebraicReal:
    if a._rat is not None and b._rat is not None:
        return AlgebraicReal._rational(a._rat * b._rat)
    if b._rat is not None:
        a, b = b, a
    if a._rat is not None:
        r = a._rat
        if r == 0:
            return AlgebraicReal._rational(Fraction(0))
        poly = intpoly.dilate(b._poly, r)
        pts = (b._lo * r, b._hi * r)
        return AlgebraicReal._irrational(poly, min(pts), max(pts))
    _check_compose_degree(intpoly.degree(a._poly), intpoly.degree(b._poly))
    res = intpoly.compose_mul(a._poly, b._poly)

    def interval_fn():
        pts = (a._lo * b._lo, a._lo * b._hi, a._hi * b._lo, a._hi * b._hi)
        iv = (min(pts), max(pts))
        a._refine()
        b._refine()
        return iv

    return AlgebraicReal._select_root(res, interval_fn)


def sqrt_nonneg(a: AlgebraicReal) -> AlgebraicReal:
    """The nonnegative exact square root of a >= 0."""
    a = _coerce(a)
    s = a.sign()
    if s < 0:
        raise NegativeRadicand(f"sqrt of negative value {a!r}")
    if s == 0:
        return AlgebraicReal._rational(Fraction(0))
    if a._rat is not None:
        v = a._rat
        exact = _rational_sqrt(v)
        if exact is not None:
            return AlgebraicReal._rational(exact)
        poly = intpoly.primitive(
            intpoly.normalize((-v.numerator, 0, v.denominator)))
        k = 4
        while True:
            lo, hi = _sqrt_bounds(v, k)
            if lo > 0 and intpoly.sign_at(poly, lo) != 0:
                return AlgebraicReal._irrational(poly, lo, hi)
            k += 4
    # irrational positive value
    while a._lo <= 0:
        a._refine()
    cap = max_defining_degree()
    if 2 * intpoly.degree(a._poly) > cap:
        raise DegreeOverflow(
            f"sqrt would need degree {2 * intpoly.degree(a._poly)} "
            f"> DIAGKIT_MAX_DEGREE={cap}")
    q = intpoly.substitute_square(a._poly)
    prec = [4]

    def interval_fn():
        lo, _ = _sqrt_bounds(a._lo, prec[0])
        _, hi = _sqrt_bounds(a._hi, prec[0])
        a._refine()
        prec[0] += 2
        return (lo, hi)

    return AlgebraicReal._select_root(q, interval_fn)


def hypot(a, b) -> AlgebraicReal:
    """Exact sqrt(a^2 + b^2); zero only when a = b = 0."""
    a, b = _coerce(a), _coerce(b)
    return sqrt_nonneg(a * a + b * b)
