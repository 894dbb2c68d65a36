"""Primitive integer polynomials and real-root machinery.

A polynomial is a tuple of Python ints, lowest degree first, with a nonzero
last entry (the zero polynomial is the empty tuple).  These hold defining
polynomials of real algebraic numbers; gcd, squarefree part, factorization
and bivariate resultants are delegated to sympy's dense ZZ kernel, while the
Sturm chain and the bisection-based isolator are implemented here directly.
"""

from __future__ import annotations

import math
from fractions import Fraction

from sympy.polys import euclidtools, factortools, sqfreetools
from sympy.polys.domains import ZZ

from .errors import EndpointRoot

Poly = tuple  # tuple of ints, lowest degree first

ZERO: Poly = ()
X: Poly = (0, 1)


def normalize(coeffs) -> Poly:
    """Strip high-order zeros."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(int(c) for c in coeffs)


def degree(p: Poly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(p) - 1


def constant(c: int) -> Poly:
    return (int(c),) if c else ()


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return normalize([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                      for i in range(n)])


def neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ZERO
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return normalize(out)


def derivative(p: Poly) -> Poly:
    return normalize([i * p[i] for i in range(1, len(p))])


def content(p: Poly) -> int:
    return math.gcd(*p) if p else 0


def primitive(p: Poly) -> Poly:
    """Divide out the content and make the leading coefficient positive."""
    if not p:
        return ZERO
    c = content(p)
    if p[-1] < 0:
        c = -c
    return tuple(a // c for a in p)


def eval_fraction(p: Poly, x: Fraction) -> Fraction:
    """Exact Horner evaluation at a rational point."""
    if not p:
        return Fraction(0)
    num, den = x.numerator, x.denominator
    acc = 0
    dpow = 1
    for c in reversed(p):
        acc = acc * num + c * dpow
        dpow *= den
    return Fraction(acc, den ** (len(p) - 1))


def sign_at(p: Poly, x: Fraction) -> int:
    """Sign of p(x), computed in integers."""
    if not p:
        return 0
    num, den = x.numerator, x.denominator
    acc = 0
    dpow = 1
    for c in reversed(p):
        acc = acc * num + c * dpow
        dpow *= den
    return (acc > 0) - (acc < 0)


# -- sympy bridge -----------------------------------------------------------

def _to_dup(p: Poly):
    return [ZZ(c) for c in reversed(p)]


def _from_dup(f) -> Poly:
    return normalize(reversed([int(c) for c in f]))


def squarefree_part(p: Poly) -> Poly:
    if not p:
        return ZERO
    return primitive(_from_dup(sqfreetools.dup_sqf_part(_to_dup(p), ZZ)))


def gcd(p: Poly, q: Poly) -> Poly:
    h, _, _ = euclidtools.dup_inner_gcd(_to_dup(p), _to_dup(q), ZZ)
    return primitive(_from_dup(h))


def factor_irreducible(p: Poly) -> list[Poly]:
    """Irreducible factors over Z (each primitive, positive leading
    coefficient), multiplicities dropped."""
    _, factors = factortools.dup_factor_list(_to_dup(p), ZZ)
    return [primitive(_from_dup(f)) for f, _ in factors]


def _dmp_from_coeffs_y(coeffs_y: list[Poly]):
    """Build a sympy dmp in (y outer, x inner) from y-power -> x-poly."""
    return [[ZZ(int(c)) for c in reversed(cy)] if cy else [ZZ(0)]
            for cy in reversed(coeffs_y)]


def compose_add(p: Poly, q: Poly) -> Poly:
    """An integer polynomial vanishing at a+b whenever p(a)=0, q(b)=0:
    Res_y(p(y), q(x-y))."""
    m = degree(q)
    coeffs_y: list[Poly] = [ZERO] * (m + 1)
    for j, qj in enumerate(q):
        if not qj:
            continue
        for k in range(j + 1):
            c = qj * math.comb(j, k) * (-1) ** k
            coeffs_y[k] = add(coeffs_y[k], normalize([0] * (j - k) + [c]))
    p_y = [[c] if c else [] for c in _to_dup(p)]
    res = euclidtools.dmp_resultant(p_y, _dmp_from_coeffs_y(coeffs_y), 1, ZZ)
    return normalize(reversed([int(c) for c in res]))


def compose_mul(p: Poly, q: Poly) -> Poly:
    """An integer polynomial vanishing at a*b whenever p(a)=0, q(b)=0:
    Res_y(p(y), y^m q(x/y))."""
    m = degree(q)
    coeffs_y: list[Poly] = [ZERO] * (m + 1)
    for j, qj in enumerate(q):
        if qj:
            coeffs_y[m - j] = normalize([0] * j + [qj])
    p_y = [[c] if c else [] for c in _to_dup(p)]
    res = euclidtools.dmp_resultant(p_y, _dmp_from_coeffs_y(coeffs_y), 1, ZZ)
    return normalize(reversed([int(c) for c in res]))


def shift(p: Poly, r: Fraction) -> Poly:
    """Primitive integer multiple of p(x - r); vanishes at a+r when p(a)=0."""
    res = [Fraction(0)] * len(p)
    res[0] = Fraction(p[-1])
    deg = 0
    for c in reversed(p[:-1]):
        # res <- res * (x - r) + c, exact Horner over Q
        for i in range(deg, -1, -1):
            res[i + 1] += res[i]
            res[i] = -res[i] * r
        deg += 1
        res[0] += c
    den = math.lcm(*[c.denominator for c in res])
    return primitive(normalize([int(c * den) for c in res]))


def dilate(p: Poly, s: Fraction) -> Poly:
    """Primitive integer multiple of p(x / s); vanishes at a*s when p(a)=0."""
    d = degree(p)
    num, den = s.numerator, s.denominator
    out = [p[i] * den ** i * num ** (d - i) for i in range(len(p))]
    return primitive(normalize(out))


def reverse(p: Poly) -> Poly:
    """Coefficient reversal; vanishes at 1/a when p(a)=0 and a != 0."""
    return primitive(normalize(reversed(p)))


def substitute_square(p: Poly) -> Poly:
    """p(x^2); vanishes at +-sqrt(a) when p(a)=0."""
    out = [0] * (2 * len(p) - 1)
    for i, c in enumerate(p):
        out[2 * i] = c
    return normalize(out)


# -- Sturm machinery --------------------------------------------------------

_chain_cache: dict[Poly, tuple[Poly, ...]] = {}


def sturm_chain(p: Poly) -> tuple[Poly, ...]:
    """Sturm chain of a squarefree polynomial, each entry primitive.

    Cached per polynomial; the cache is append-only and semantically
    invisible.
    """
    chain = _chain_cache.get(p)
    if chain is not None:
        return chain
    seq = [p, _shrink(derivative(p))]
    while seq[-1] and degree(seq[-1]) > 0:
        rem = _rem_neg(seq[-2], seq[-1])
        if not rem:
            break
        seq.append(_shrink(rem))
    chain = tuple(s for s in seq if s)
    _chain_cache[p] = chain
    return chain


def _shrink(p: Poly) -> Poly:
    """Divide out the content, preserving the sign (unlike `primitive`);
    Sturm chains need sign-faithful entries."""
    if not p:
        return ZERO
    c = content(p)
    return tuple(a // c for a in p)


def _rem_neg(p: Poly, q: Poly) -> Poly:
    """-rem(p, q), cleared to integers (positive factor, sign-faithful)."""
    r = [Fraction(c) for c in p]
    qf = [Fraction(c) for c in q]
    dq = len(qf) - 1
    lead = qf[-1]
    while True:
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dq:
            break
        f = r[-1] / lead
        off = len(r) - 1 - dq
        for i, c in enumerate(qf):
            r[off + i] -= f * c
        r.pop()
    if not r:
        return ZERO
    den = math.lcm(*[c.denominator for c in r])
    return normalize([-(c * den) for c in r])


def _variations(chain, x: Fraction) -> int:
    signs = []
    for p in chain:
        s = sign_at(p, x)
        if s:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: Poly, lo, hi) -> int:
    """Number of real roots of squarefree p in the open interval (lo, hi)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        return 0
    if sign_at(p, lo) == 0 or sign_at(p, hi) == 0:
        raise EndpointRoot(f"polynomial vanishes at an endpoint of ({lo}, {hi})")
    chain = sturm_chain(p)
    return _variations(chain, lo) - _variations(chain, hi)


def separation_bound(p: Poly) -> Fraction:
    """A positive rational lower bound on the distance between distinct real
    roots of the squarefree polynomial p (crude Mahler-style bound)."""
    d = degree(p)
    if d < 2:
        return Fraction(1)
    H = sum(abs(c) for c in p) + 1
    return Fraction(1, d ** (d + 2) * H ** d)


def count_closed(p: Poly, lo, hi) -> int:
    """Number of real roots of squarefree p in the closed interval [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        return 0
    if lo == hi:
        return int(sign_at(p, lo) == 0)
    n = 0
    a, b = lo, hi
    sep = None
    if sign_at(p, lo) == 0:
        n += 1
        sep = separation_bound(p)
        a = lo + min(sep / 2, (hi - lo) / 3)
    if sign_at(p, hi) == 0:
        n += 1
        sep = sep or separation_bound(p)
        b = hi - min(sep / 2, (hi - lo) / 3)
    if a < b:
        n += sturm_count(p, a, b)
    return n


def cauchy_bound(p: Poly) -> Fraction:
    """A power-of-two bound B with all real roots of p inside (-B, B)."""
    lead = abs(p[-1])
    m = max(abs(c) for c in p[:-1]) if len(p) > 1 else 0
    b = Fraction(m, lead) + 2
    B = Fraction(1)
    while B < b:
        B *= 2
    return B


def isolate_real_roots(p: Poly) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for every real root of the squarefree primitive
    polynomial p, sorted increasingly.  Non-degenerate intervals carry a sign
    change and root-free endpoints; exact rational roots are returned as
    degenerate intervals (r, r)."""
    if degree(p) <= 0:
        return []
    out: list[tuple[Fraction, Fraction]] = []
    B = cauchy_bound(p)
    stack: list[tuple[Fraction, Fraction]] = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = sturm_count(p, lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if sign_at(p, mid) == 0:
            out.append((mid, mid))
            eps = min(separation_bound(p) / 2, (hi - lo) / 4)
            stack.append((lo, mid - eps))
            stack.append((mid + eps, hi))
        else:
            stack.append((lo, mid))
            stack.append((mid, hi))
    out.sort(key=lambda iv: iv[0])
    return out
