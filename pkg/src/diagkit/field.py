"""Field tags and the element-level facade over Q and the real algebraics.

Elements of Q are `fractions.Fraction`; elements of RealAlg are
`AlgebraicReal`.  Every matrix, subspace and matrix map carries exactly one
FieldTag and mixing tags is an error.
"""

from __future__ import annotations

import enum
import functools
from fractions import Fraction

from . import intpoly
from .algebraic import AlgebraicReal, Comparison
from .algebraic import hypot as _alg_hypot
from .algebraic import sqrt_nonneg as _alg_sqrt
from .errors import MixedFieldError, NegativeRadicand, UnsupportedField

__all__ = [
    "FieldTag", "Comparison", "zero", "one", "from_int", "from_fraction",
    "coerce", "is_zero", "sign", "as_fraction", "compare", "arith",
    "sqrt_nonneg", "hypot", "sturm_count", "isolate_roots", "roots_in_field",
    "elem_to_json", "elem_from_json",
]


class FieldTag(enum.Enum):
    Q = "Q"
    REAL_ALG = "RealAlg"

    @classmethod
    def parse(cls, name: str) -> "FieldTag":
        for tag in cls:
            if tag.value == name:
                return tag
        raise ValueError(f"unknown field tag {name!r}")


def zero(tag: FieldTag):
    return Fraction(0) if tag is FieldTag.Q else AlgebraicReal(0)


def one(tag: FieldTag):
    return Fraction(1) if tag is FieldTag.Q else AlgebraicReal(1)


def from_int(tag: FieldTag, n: int):
    return Fraction(n) if tag is FieldTag.Q else AlgebraicReal(n)


def from_fraction(tag: FieldTag, r) -> object:
    r = Fraction(r)
    return r if tag is FieldTag.Q else AlgebraicReal(r)


def coerce(tag: FieldTag, x):
    """Coerce x (int, Fraction or AlgebraicReal) into the tag's element type."""
    if tag is FieldTag.Q:
        if isinstance(x, AlgebraicReal):
            if not x.is_rational:
                raise MixedFieldError("irrational value cannot enter Q")
            return x.as_fraction()
        return Fraction(x)
    if isinstance(x, AlgebraicReal):
        return x
    return AlgebraicReal(Fraction(x))


def is_zero(x) -> bool:
    if isinstance(x, AlgebraicReal):
        return not bool(x)
    return x == 0


def sign(x) -> int:
    if isinstance(x, AlgebraicReal):
        return x.sign()
    return (x > 0) - (x < 0)


def as_fraction(x) -> Fraction:
    """Exact rational value; raises ValueError for irrational elements."""
    if isinstance(x, AlgebraicReal):
        return x.as_fraction()
    return Fraction(x)


def compare(a, b) -> Comparison:
    if isinstance(a, AlgebraicReal) or isinstance(b, AlgebraicReal):
        if not isinstance(a, AlgebraicReal):
            a = AlgebraicReal(Fraction(a))
        return a.compare(b)
    d = Fraction(a) - Fraction(b)
    return Comparison.EQ if d == 0 else (Comparison.GT if d > 0 else Comparison.LT)


def arith(a, b, op: str):
    """Exact field arithmetic; op is one of add, sub, mul, div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if is_zero(b):
            raise ZeroDivisionError("division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def sqrt_nonneg(x, tag: FieldTag):
    """Nonnegative b with b*b = x.  Over Q the argument must be a rational
    square; over RealAlg every nonnegative element has a square root."""
    if tag is FieldTag.Q:
        v = as_fraction(x)
        if v < 0:
            raise NegativeRadicand(f"sqrt of negative rational {v}")
        s = _alg_sqrt(AlgebraicReal(v))
        if not s.is_rational:
            raise UnsupportedField(
                f"{v} is not a square in Q (Q is not Pythagorean)")
        return s.as_fraction()
    return _alg_sqrt(coerce(tag, x))


def hypot(a, b, tag: FieldTag):
    """sqrt(a^2 + b^2) in the field; over Q only when the sum is a square."""
    if tag is FieldTag.Q:
        return sqrt_nonneg(as_fraction(a) ** 2 + as_fraction(b) ** 2, tag)
    a, b = coerce(tag, a), coerce(tag, b)
    return _alg_hypot(a, b)


def sturm_count(p, lo, hi) -> int:
    """Real roots of the squarefree integer polynomial p in (lo, hi)."""
    return intpoly.sturm_count(intpoly.normalize(p), lo, hi)


def _cmp_key(values):
    return sorted(values, key=functools.cmp_to_key(
        lambda a, b: compare(a, b).value))


def isolate_roots(p) -> list[AlgebraicReal]:
    """All distinct real roots of (the squarefree part of) p, increasing."""
    p = intpoly.normalize(p)
    if not p:
        raise ValueError("zero polynomial")
    roots: list[AlgebraicReal] = []
    for f in intpoly.factor_irreducible(intpoly.squarefree_part(p)):
        if intpoly.degree(f) < 1:
            continue
        if intpoly.degree(f) == 1:
            roots.append(AlgebraicReal(Fraction(-f[0], f[1])))
            continue
        for lo, hi in intpoly.isolate_real_roots(f):
            roots.append(AlgebraicReal._irrational(f, lo, hi))
    return _cmp_key(roots)


def roots_in_field(p, tag: FieldTag) -> list:
    """Roots of p lying in the field: rational roots over Q, all real roots
    over RealAlg.  Increasing order."""
    p = intpoly.normalize(p)
    if not p:
        raise ValueError("zero polynomial")
    if tag is FieldTag.REAL_ALG:
        return isolate_roots(p)
    roots = []
    for f in intpoly.factor_irreducible(intpoly.squarefree_part(p)):
        if intpoly.degree(f) == 1:
            roots.append(Fraction(-f[0], f[1]))
    return sorted(roots)


# -- serialization ----------------------------------------------------------

def _fraction_to_str(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def elem_to_json(x, tag: FieldTag):
    if tag is FieldTag.Q or (isinstance(x, AlgebraicReal) and x.is_rational):
        return _fraction_to_str(as_fraction(x))
    if not isinstance(x, AlgebraicReal):
        return _fraction_to_str(Fraction(x))
    lo, hi = x.isolating_interval()
    return {
        "minpoly": [int(c) for c in x.defining_polynomial()],
        "lo": _fraction_to_str(lo),
        "hi": _fraction_to_str(hi),
    }


def elem_from_json(obj, tag: FieldTag):
    if isinstance(obj, str):
        return from_fraction(tag, Fraction(obj))
    if isinstance(obj, int):
        return from_int(tag, obj)
    if isinstance(obj, dict):
        if tag is FieldTag.Q:
            raise MixedFieldError("algebraic element not representable over Q")
        return AlgebraicReal.from_root(
            obj["minpoly"], Fraction(obj["lo"]), Fraction(obj["hi"]))
    raise ValueError(f"cannot parse field element from {obj!r}")
