"""Exact orthonormalization, orthogonal diagonalization, and SVD.

Everything here lives over the real algebraic numbers, where every sum of
squares has a square root, so classical Gram-Schmidt runs exactly.  Over Q
the norm square roots generally do not exist; `orth_diagonalize` and `svd`
reject Q up front, while `gram_schmidt` is allowed to try (and fails with
UnsupportedField on the first non-square norm).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import field
from .errors import (DependentInput, NonSquareMatrix, NotSymmetric, NotUnit,
                     SingularMatrix, UnsupportedField)
from .field import FieldTag
from .matrix import Matrix, eigendata, rank


def _inner(u: Matrix, v: Matrix):
    """Standard bilinear form u^T v of two column vectors."""
    s = field.zero(u.tag)
    for a, b in zip(u.col(0), v.col(0)):
        s = s + a * b
    return s


def _fix_sign(v: Matrix) -> Matrix:
    """Flip so the first nonzero entry is positive (canonical orientation)."""
    for e in v.col(0):
        s = field.sign(e)
        if s:
            return v if s > 0 else -v
    return v


def _orthonormalize(fixed: list[Matrix], new: list[Matrix]) -> list[Matrix]:
    """Extend the orthonormal family `fixed` by Gram-Schmidt over `new`,
    dropping dependent vectors; only the new vectors get the sign fix."""
    out = list(fixed)
    for v in new:
        w = v
        for b in out:
            w = w - b.scale(_inner(b, v))
        n2 = _inner(w, w)
        if field.is_zero(n2):
            continue
        n = field.sqrt_nonneg(n2, v.tag)
        out.append(_fix_sign(w.scale(field.one(v.tag) / n)))
    return out


def gram_schmidt(vectors: list[Matrix]) -> list[Matrix]:
    """Orthonormal family spanning the same subspace as the independent
    column vectors, first-nonzero-pivot-positive orientation."""
    if not vectors:
        return []
    out = _orthonormalize([], vectors)
    if len(out) != len(vectors):
        raise DependentInput("input vectors are linearly dependent")
    return out


def extend_orthonormal(v: Matrix, position: int = 0) -> Matrix:
    """Orthogonal matrix whose row `position` equals the unit column v."""
    if v.cols != 1:
        raise ValueError("expected a column vector")
    if not field.is_zero(_inner(v, v) - field.one(v.tag)):
        raise NotUnit("vector is not a unit vector")
    n = v.rows
    basis = _orthonormalize(
        [v], [Matrix.elementary(v.tag, n, i, 0).block(0, n, 0, 1)
              for i in range(n)])
    if len(basis) != n:
        raise AssertionError("completion fell short of a full basis")
    ordered = basis[1: position + 1] + [basis[0]] + basis[position + 1:]
    return Matrix(v.tag, [b.col(0) for b in ordered])


def orth_diagonalize(S: Matrix) -> tuple[Matrix, Matrix]:
    """(O, D) with O orthogonal, D diagonal (eigenvalues increasing) and
    S = O D O^T exactly; S must be symmetric over the real algebraics."""
    if S.tag is FieldTag.Q:
        raise UnsupportedField(
            "orthogonal diagonalization needs a Pythagorean field; Q is not")
    if not S.is_symmetric():
        raise NotSymmetric("input is not symmetric")
    eig = eigendata(S)
    if eig.total_dim != S.rows:
        raise AssertionError("symmetric matrix with deficient eigenspaces")
    cols: list[Matrix] = []
    dvals = []
    for lam, basis in zip(eig.eigenvalues, eig.eigenbases):
        cols.extend(gram_schmidt(basis))
        dvals.extend([lam] * len(basis))
    O = Matrix(S.tag, [[cols[j].col(0)[i] for j in range(S.rows)]
                       for i in range(S.rows)])
    return O, Matrix.diagonal(S.tag, dvals)


@dataclass
class SvdTriple:
    """Exact decomposition input = O @ D @ U with O, U orthogonal and D
    diagonal nonsingular."""
    O: Matrix
    D: Matrix
    U: Matrix

    def product(self) -> Matrix:
        return self.O @ self.D @ self.U


def svd(P: Matrix) -> SvdTriple:
    """Exact SVD of a nonsingular matrix over the real algebraics."""
    if P.tag is FieldTag.Q:
        raise UnsupportedField("exact SVD needs a Pythagorean field; Q is not")
    if not P.is_square():
        raise NonSquareMatrix("svd needs a square matrix")
    if rank(P) < P.rows:
        raise SingularMatrix("svd needs a nonsingular matrix")
    O1, D1 = orth_diagonalize(P.transpose() @ P)
    lams = []
    for i in range(P.rows):
        ev = D1[i, i]
        if field.sign(ev) <= 0:
            raise AssertionError("P^T P eigenvalue not positive")
        lams.append(field.sqrt_nonneg(ev, P.tag))
    D = Matrix.diagonal(P.tag, lams)
    one = field.one(P.tag)
    Dinv = Matrix.diagonal(P.tag, [one / v for v in lams])
    O1t = O1.transpose()
    S_inv = O1 @ Dinv @ O1t
    O2 = P @ S_inv
    return SvdTriple(O2 @ O1, D, O1t)
