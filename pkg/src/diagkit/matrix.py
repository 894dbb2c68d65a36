"""Exact dense matrices over Q or the real algebraic numbers.

Matrices are immutable value objects.  Everything is exact: Gaussian
elimination pivots on the first nonzero entry (magnitude pivoting is
meaningless here), the characteristic polynomial comes from the
Faddeev-LeVerrier recurrence, and diagonalizability is decided by comparing
the sum of geometric multiplicities over the spectrum-in-field with the
dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import field, intpoly
from .algebraic import AlgebraicReal
from .errors import (InputNotDiagonalizable, MixedFieldError, NonSquareMatrix,
                     NotCommuting, NotDiagonalizableError, SingularMatrix,
                     SizeMismatch, UnsupportedField)
from .field import FieldTag


class Matrix:
    """Dense matrix over an exact field; value semantics."""

    __slots__ = ("tag", "rows", "cols", "data")

    def __init__(self, tag: FieldTag, rows_of_entries):
        data = tuple(
            tuple(field.coerce(tag, e) for e in row) for row in rows_of_entries)
        if not data or not data[0]:
            raise ValueError("matrix must have at least one row and column")
        ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged rows")
        self.tag = tag
        self.rows = len(data)
        self.cols = ncols
        self.data = data

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, tag, rows, cols=None):
        cols = rows if cols is None else cols
        z = field.zero(tag)
        return cls(tag, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, tag, n):
        z, o = field.zero(tag), field.one(tag)
        return cls(tag, [[o if i == j else z for j in range(n)]
                         for i in range(n)])

    @classmethod
    def diagonal(cls, tag, values):
        values = list(values)
        n = len(values)
        z = field.zero(tag)
        return cls(tag, [[values[i] if i == j else z for j in range(n)]
                         for i in range(n)])

    @classmethod
    def column(cls, tag, entries):
        return cls(tag, [[e] for e in entries])

    @classmethod
    def row_vector(cls, tag, entries):
        return cls(tag, [list(entries)])

    @classmethod
    def elementary(cls, tag, n, i, j):
        m = [[field.zero(tag)] * n for _ in range(n)]
        m[i][j] = field.one(tag)
        return cls(tag, m)

    # -- basics -------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return list(self.data[i])

    def col(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def entries(self):
        """Row-major flat list."""
        return [e for r in self.data for e in r]

    def transpose(self) -> "Matrix":
        return Matrix(self.tag, [[self.data[i][j] for i in range(self.rows)]
                                 for j in range(self.cols)])

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(field.is_zero(e) for r in self.data for e in r)

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.data[i][j] == self.data[j][i]
            for i in range(self.rows) for j in range(i))

    def is_diagonal_matrix(self) -> bool:
        return self.is_square() and all(
            field.is_zero(self.data[i][j])
            for i in range(self.rows) for j in range(self.cols) if i != j)

    def trace(self):
        if not self.is_square():
            raise NonSquareMatrix("trace needs a square matrix")
        t = field.zero(self.tag)
        for i in range(self.rows):
            t = t + self.data[i][i]
        return t

    def _check(self, other):
        if not isinstance(other, Matrix):
            raise TypeError("matrix expected")
        if other.tag is not self.tag:
            raise MixedFieldError("mixed field tags")

    def __add__(self, other):
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise SizeMismatch("addition shape mismatch")
        return Matrix(self.tag, [[a + b for a, b in zip(ra, rb)]
                                 for ra, rb in zip(self.data, other.data)])

    def __sub__(self, other):
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise SizeMismatch("subtraction shape mismatch")
        return Matrix(self.tag, [[a - b for a, b in zip(ra, rb)]
                                 for ra, rb in zip(self.data, other.data)])

    def __neg__(self):
        return Matrix(self.tag, [[-e for e in r] for r in self.data])

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise SizeMismatch("product shape mismatch")
        ot = list(zip(*other.data))
        out = []
        z = field.zero(self.tag)
        for ra in self.data:
            row = []
            for cb in ot:
                s = z
                for a, b in zip(ra, cb):
                    if not (field.is_zero(a) or field.is_zero(b)):
                        s = s + a * b
                row.append(s)
            out.append(row)
        return Matrix(self.tag, out)

    def scale(self, c) -> "Matrix":
        c = field.coerce(self.tag, c)
        return Matrix(self.tag, [[c * e for e in r] for r in self.data])

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.tag, self.rows, self.cols) != (other.tag, other.rows, other.cols):
            return False
        return all(a == b for ra, rb in zip(self.data, other.data)
                   for a, b in zip(ra, rb))

    __hash__ = None

    def __repr__(self):
        body = "; ".join(
            ", ".join(str(e) if isinstance(e, Fraction) else repr(e) for e in r)
            for r in self.data)
        return f"Matrix({self.tag.value}, [{body}])"

    def block(self, r0, r1, c0, c1) -> "Matrix":
        return Matrix(self.tag, [row[c0:c1] for row in self.data[r0:r1]])

    @classmethod
    def from_blocks(cls, grid) -> "Matrix":
        rows = []
        tag = grid[0][0].tag
        for band in grid:
            for i in range(band[0].rows):
                rows.append([e for blk in band for e in blk.data[i]])
        return cls(tag, rows)

    def retag(self, tag: FieldTag) -> "Matrix":
        return Matrix(tag, self.data)


# -- elimination ------------------------------------------------------------

def rref(M: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot column list (exact, first
    nonzero pivoting)."""
    a = [list(r) for r in M.data]
    rows, cols = M.rows, M.cols
    pivots: list[int] = []
    pr = 0
    for c in range(cols):
        pivot = None
        for r in range(pr, rows):
            if not field.is_zero(a[r][c]):
                pivot = r
                break
        if pivot is None:
            continue
        a[pr], a[pivot] = a[pivot], a[pr]
        inv = a[pr][c]
        a[pr] = [e / inv for e in a[pr]]
        for r in range(rows):
            if r != pr and not field.is_zero(a[r][c]):
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[pr])]
        pivots.append(c)
        pr += 1
        if pr == rows:
            break
    return Matrix(M.tag, a), pivots


def rank(M: Matrix) -> int:
    return len(rref(M)[1])


def kernel(M: Matrix) -> list[Matrix]:
    """Reduced basis of {v : Mv = 0} as column matrices ([] when injective)."""
    R, pivots = rref(M)
    free = [c for c in range(M.cols) if c not in pivots]
    z, o = field.zero(M.tag), field.one(M.tag)
    basis = []
    for fc in free:
        v = [z] * M.cols
        v[fc] = o
        for r, pc in enumerate(pivots):
            v[pc] = -R.data[r][fc]
        basis.append(Matrix.column(M.tag, v))
    return basis


def solve(A: Matrix, b: Matrix) -> Matrix | None:
    """One exact solution of Ax = b (b may have several columns), or None."""
    A._check(b)
    if A.rows != b.rows:
        raise SizeMismatch("solve shape mismatch")
    aug = Matrix(A.tag, [ra + tuple(rb) for ra, rb in zip(A.data, b.data)])
    R, pivots = rref(aug)
    if any(p >= A.cols for p in pivots):
        return None
    z = field.zero(A.tag)
    out = [[z] * b.cols for _ in range(A.cols)]
    for r, pc in enumerate(pivots):
        for k in range(b.cols):
            out[pc][k] = R.data[r][A.cols + k]
    return Matrix(A.tag, out)


def inverse(M: Matrix) -> Matrix:
    if not M.is_square():
        raise NonSquareMatrix("inverse needs a square matrix")
    sol = solve(M, Matrix.identity(M.tag, M.rows))
    if sol is None or rank(M) < M.rows:
        raise SingularMatrix("matrix is singular")
    return sol


def det(M: Matrix):
    if not M.is_square():
        raise NonSquareMatrix("determinant needs a square matrix")
    a = [list(r) for r in M.data]
    n = M.rows
    d = field.one(M.tag)
    for c in range(n):
        pivot = None
        for r in range(c, n):
            if not field.is_zero(a[r][c]):
                pivot = r
                break
        if pivot is None:
            return field.zero(M.tag)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            d = -d
        d = d * a[c][c]
        inv = a[c][c]
        for r in range(c + 1, n):
            if not field.is_zero(a[r][c]):
                f = a[r][c] / inv
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return d


# -- characteristic and minimal polynomials ---------------------------------

def charpoly(M: Matrix) -> list:
    """Coefficients of det(X I - M), lowest degree first, monic; exact
    Faddeev-LeVerrier recurrence (valid in characteristic zero)."""
    if not M.is_square():
        raise NonSquareMatrix("charpoly needs a square matrix")
    n = M.rows
    tag = M.tag
    coeffs = [field.zero(tag)] * n + [field.one(tag)]
    N = M
    for k in range(1, n + 1):
        c = -(N.trace() / field.from_int(tag, k))
        coeffs[n - k] = c
        if k < n:
            N = M @ (N + Matrix.identity(tag, n).scale(c))
    return coeffs


def charpoly_int(M: Matrix) -> intpoly.Poly:
    """charpoly cleared to a primitive integer polynomial (requires all
    coefficients rational, which holds for matrices with rational entries)."""
    coeffs = [field.as_fraction(c) for c in charpoly(M)]
    den = math.lcm(*[c.denominator for c in coeffs])
    return intpoly.normalize([int(c * den) for c in coeffs])


def minimal_polynomial(M: Matrix) -> list:
    """Monic minimal polynomial coefficients (lowest first) over the field,
    found by the first linear dependency among vectorized powers of M."""
    if not M.is_square():
        raise NonSquareMatrix("minimal polynomial needs a square matrix")
    n = M.rows
    tag = M.tag
    powers = [Matrix.identity(tag, n)]
    for d in range(1, n + 1):
        powers.append(powers[-1] @ M)
        cols = Matrix(tag, [[P.entries()[k] for P in powers]
                            for k in range(n * n)])
        ker = kernel(cols)
        if ker:
            v = ker[0].col(0)
            lead = v[d]
            return [c / lead for c in v[: d + 1]]
    raise AssertionError("unreachable: Cayley-Hamilton")


# -- field-coefficient polynomial helpers (for irrational spectra) ----------

def _fp_normalize(p):
    while p and field.is_zero(p[-1]):
        p.pop()
    return p


def _fp_rem(p, q):
    p = list(p)
    dq = len(q) - 1
    lead = q[-1]
    while len(p) - 1 >= dq:
        f = p[-1] / lead
        off = len(p) - 1 - dq
        for i, c in enumerate(q):
            p[off + i] = p[off + i] - f * c
        p.pop()
        _fp_normalize(p)
        if not p:
            break
    return p


def _fp_derivative(p, tag):
    return _fp_normalize([field.from_int(tag, i) * p[i] for i in range(1, len(p))])


def _fp_gcd_is_constant(p, q) -> bool:
    a, b = list(p), list(q)
    while b:
        a, b = b, _fp_rem(a, b)
    return len(a) == 1


def _fp_eval(p, x, tag):
    acc = field.zero(tag)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _abs_upper(x) -> Fraction:
    if isinstance(x, AlgebraicReal):
        if x.is_rational:
            return abs(x.as_fraction())
        lo, hi = x.isolating_interval()
        return max(abs(lo), abs(hi))
    return abs(Fraction(x))


def _fp_count_real_roots(p, tag) -> int:
    """Sturm count of all real roots of a squarefree polynomial with
    field coefficients."""
    bound = Fraction(2)
    lead_abs = None
    x = p[-1]
    if isinstance(x, AlgebraicReal) and not x.is_rational:
        while True:
            lo, hi = x.isolating_interval()
            if lo > 0 or hi < 0:
                lead_abs = min(abs(lo), abs(hi))
                break
            x._refine()
    else:
        lead_abs = abs(field.as_fraction(x))
    m = max((_abs_upper(c) for c in p[:-1]), default=Fraction(0))
    while bound < m / lead_abs + 2:
        bound *= 2
    chain = [list(p), _fp_derivative(p, tag)]
    while chain[-1] and len(chain[-1]) > 1:
        r = _fp_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    chain = [c for c in chain if c]

    def variations(x0):
        signs = []
        for q in chain:
            s = field.sign(_fp_eval(q, field.from_fraction(tag, x0), tag))
            if s:
                signs.append(s)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    return variations(-bound) - variations(bound)


# -- eigen machinery --------------------------------------------------------

@dataclass
class EigenData:
    """Spectrum in the field with exact eigenbases, increasing eigenvalues."""
    eigenvalues: list
    eigenbases: list  # per eigenvalue: list of n x 1 Matrix
    geometric_dims: list

    @property
    def total_dim(self):
        return sum(self.geometric_dims)


def _field_poly_roots(coeffs, tag: FieldTag) -> list:
    """Roots in the field of a polynomial given by field coefficients."""
    coeffs = list(coeffs)
    try:
        rat = [field.as_fraction(c) for c in coeffs]
    except ValueError:
        rat = None
    if rat is not None:
        import math
        den = math.lcm(*[c.denominator for c in rat])
        p = intpoly.normalize([int(c * den) for c in rat])
        return field.roots_in_field(p, tag)
    # irrational coefficients: only the quadratic case is supported; the
    # normalizer pipelines never need more.
    deg = len(coeffs) - 1
    if deg == 1:
        return [-coeffs[0] / coeffs[1]]
    if deg == 2:
        a, b, c = coeffs[2], coeffs[1], coeffs[0]
        disc = b * b - field.from_int(tag, 4) * a * c
        s = field.sign(disc)
        if s < 0:
            return []
        root = field.sqrt_nonneg(disc, tag)
        two_a = field.from_int(tag, 2) * a
        r1 = (-b - root) / two_a
        r2 = (-b + root) / two_a
        d = field.sign(r2 - r1)
        if d == 0:
            return [r1]
        return [r1, r2] if d > 0 else [r2, r1]
    raise UnsupportedField(
        "spectrum of degree > 2 with irrational coefficients is not supported")


def eigendata(M: Matrix) -> EigenData:
    """Spectrum in the field and exact eigenbases."""
    if not M.is_square():
        raise NonSquareMatrix("eigendata needs a square matrix")
    values = _field_poly_roots(charpoly(M), M.tag)
    bases, dims = [], []
    I = Matrix.identity(M.tag, M.rows)
    kept = []
    for lam in values:
        b = kernel(M - I.scale(lam))
        if b:
            kept.append(lam)
            bases.append(b)
            dims.append(len(b))
    return EigenData(kept, bases, dims)


@dataclass
class DiagDecision:
    """Outcome of the diagonalizability decision."""
    diagonalizable: bool
    eigen: EigenData | None = None
    Q: Matrix | None = None
    D: Matrix | None = None
    reason: str | None = None  # SpectrumNotInField | GeometricDeficiency
    detail: str = ""


def is_diagonalizable(M: Matrix) -> DiagDecision:
    """Decide membership in the diagonalizable matrices over M's field,
    with an exact conjugation certificate (Q, D) in the positive case."""
    if not M.is_square():
        raise NonSquareMatrix("is_diagonalizable needs a square matrix")
    n = M.rows
    try:
        cp = [field.as_fraction(c) for c in charpoly(M)]
    except ValueError:
        return _is_diagonalizable_irrational(M)
    eig = eigendata(M)
    if eig.total_dim == n:
        cols = []
        dvals = []
        for lam, basis in zip(eig.eigenvalues, eig.eigenbases):
            for v in basis:
                cols.append(v.col(0))
                dvals.append(lam)
        Q = Matrix(M.tag, [[cols[j][i] for j in range(n)] for i in range(n)])
        D = Matrix.diagonal(M.tag, dvals)
        return DiagDecision(True, eig, Q, D)
    # distinguish missing spectrum from geometric deficiency
    den = math.lcm(*[c.denominator for c in cp])
    p = intpoly.squarefree_part(intpoly.normalize([int(c * den) for c in cp]))
    n_roots = len(field.roots_in_field(p, M.tag))
    if n_roots < intpoly.degree(p):
        return DiagDecision(False, eig, reason="SpectrumNotInField",
                            detail=f"{n_roots} of {intpoly.degree(p)} "
                                   "distinct eigenvalues lie in the field")
    return DiagDecision(False, eig, reason="GeometricDeficiency",
                        detail=f"geometric multiplicities sum to "
                               f"{eig.total_dim} < {n}")


def _is_diagonalizable_irrational(M: Matrix) -> DiagDecision:
    """Fallback for irrational entries: minimal polynomial squarefree and
    totally real (no eigenvector certificate is produced)."""
    mp = minimal_polynomial(M)
    tag = M.tag
    if tag is not FieldTag.REAL_ALG:
        raise UnsupportedField("irrational entries require RealAlg")
    if not _fp_gcd_is_constant(mp, _fp_derivative(mp, tag)):
        return DiagDecision(False, reason="GeometricDeficiency",
                            detail="minimal polynomial is not squarefree")
    if _fp_count_real_roots(mp, tag) < len(mp) - 1:
        return DiagDecision(False, reason="SpectrumNotInField",
                            detail="minimal polynomial has non-real roots")
    return DiagDecision(True, detail="via squarefree totally-real minimal "
                                     "polynomial; no eigenbasis computed")


# -- simultaneous diagonalization -------------------------------------------

def commute(A: Matrix, B: Matrix) -> bool:
    return (A @ B - B @ A).is_zero()


def simdiag_family(mats: list[Matrix]) -> Matrix:
    """A single P with P^-1 M P diagonal for every M in the commuting family."""
    if not mats:
        raise ValueError("empty family")
    n = mats[0].rows
    tag = mats[0].tag
    for i, A in enumerate(mats):
        if not A.is_square() or A.rows != n:
            raise SizeMismatch("family members must share a square size")
        for B in mats[i + 1:]:
            if not commute(A, B):
                raise NotCommuting("family members do not commute")
    basis = _simdiag_rec(mats, Matrix.identity(tag, n), "A")
    cols = [v.col(0) for v in basis]
    return Matrix(tag, [[cols[j][i] for j in range(n)] for i in range(n)])


def _simdiag_rec(mats, frame: Matrix, label: str) -> list[Matrix]:
    """Common eigenbasis of the family restricted to span(frame columns)."""
    tag = frame.tag
    k = frame.cols
    if not mats:
        return [frame.block(0, frame.rows, j, j + 1) for j in range(k)]
    A, rest = mats[0], mats[1:]
    restricted = solve(frame, A @ frame)
    if restricted is None:
        raise AssertionError("restriction left the invariant subspace")
    dec = is_diagonalizable(restricted)
    if not dec.diagonalizable:
        raise NotDiagonalizableError(label, dec.detail)
    eig = dec.eigen
    if eig is None:
        # the minimal-polynomial route decides without an eigenbasis;
        # recover one explicitly
        eig = eigendata(restricted)
        if eig.total_dim != k:
            raise NotDiagonalizableError(label, "eigenbasis unavailable")
    out = []
    for basis in eig.eigenbases:
        sub = Matrix(tag, [[b.col(0)[i] for b in basis] for i in range(k)])
        out.extend(_simdiag_rec(rest, frame @ sub, "restriction"))
    return out


def simdiag(A: Matrix, B: Matrix) -> Matrix:
    """Nonsingular P with P^-1 A P and P^-1 B P diagonal."""
    A._check(B)
    if not commute(A, B):
        raise NotCommuting("AB != BA")
    decA = is_diagonalizable(A)
    if not decA.diagonalizable:
        raise NotDiagonalizableError("A", decA.detail)
    return simdiag_family([A, B])


# -- the block-triangular image test ----------------------------------------

@dataclass
class BlockImageReport:
    """Outcome of the eigenvector-image membership test on [[A,C],[0,B]]."""
    passed: bool
    failing_eigenvalue: object = None
    failing_vector: Matrix | None = None

    def __bool__(self):
        return self.passed


def assemble_block(A: Matrix, C: Matrix, B: Matrix) -> Matrix:
    Z = Matrix.zeros(A.tag, B.rows, A.cols)
    return Matrix.from_blocks([[A, C], [Z, B]])


def block_image_test(A: Matrix, C: Matrix, B: Matrix) -> BlockImageReport:
    """For each eigenvalue lam of B with eigenvector X, decide whether
    C X lies in im(A - lam I); the first failure certifies that the block
    matrix [[A, C], [0, B]] is not diagonalizable."""
    for M, name in ((A, "A"), (B, "B")):
        dec = is_diagonalizable(M)
        if not dec.diagonalizable:
            raise InputNotDiagonalizable(f"{name} is not diagonalizable")
    I = Matrix.identity(A.tag, A.rows)
    for lam, basis in zip(*_eig_pairs(B)):
        shifted = A - I.scale(lam)
        for X in basis:
            target = C @ X
            if solve(shifted, target) is None:
                return BlockImageReport(False, lam, X)
    return BlockImageReport(True)


def _eig_pairs(B: Matrix):
    eig = eigendata(B)
    return eig.eigenvalues, eig.eigenbases
