"""Subspaces of M_n and the normalizer onto the symmetric matrices.

A MatSubspace stores a canonical reduced-row-echelon basis of row-major
vectorized matrices, so subspace equality is literal equality of echelon
rows.  The normalizer runs the constructive conjugation argument: success
returns a Certificate P with P V P^-1 = S_n (verified by echelon equality);
each failure branch of the argument pins down a concrete member of V that is
not diagonalizable and returns it as a Witness with its negative decision;
the few stages that can fail without exposing an explicit member report an
Obstruction instead of guessing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import field
from .errors import (MissingCertificate, PreconditionViolated,
                     SingularConjugator, SingularMatrix, WrongDimension)
from .field import FieldTag
from .matrix import (DiagDecision, Matrix, block_image_test, det, eigendata,
                     inverse, is_diagonalizable, kernel, rank, simdiag_family,
                     solve)


# -- vectorization (row-major, fixed convention) ----------------------------

def vec(M: Matrix) -> list:
    return M.entries()


def unvec(tag: FieldTag, n: int, entries) -> Matrix:
    entries = list(entries)
    return Matrix(tag, [entries[i * n:(i + 1) * n] for i in range(n)])


class MatSubspace:
    """A linear subspace of M_n with a canonical echelon basis."""

    __slots__ = ("tag", "n", "basis")

    def __init__(self, tag: FieldTag, n: int, matrices):
        mats = list(matrices)
        if any(m.rows != n or m.cols != n for m in mats):
            raise ValueError("basis matrices must be n x n")
        self.tag = tag
        self.n = n
        self.basis = self._canonical(tag, n, mats)

    @staticmethod
    def _canonical(tag, n, mats) -> list[Matrix]:
        if not mats:
            return []
        from .matrix import rref
        rows = Matrix(tag, [vec(m.retag(tag)) for m in mats])
        R, pivots = rref(rows)
        return [unvec(tag, n, R.row(i)) for i in range(len(pivots))]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, M: Matrix):
        """Coefficients of M in the canonical basis, or None."""
        if not self.basis:
            return [] if M.is_zero() else None
        cols = Matrix(self.tag, [[vec(b)[k] for b in self.basis]
                                 for k in range(self.n * self.n)])
        target = Matrix.column(self.tag, vec(M.retag(self.tag)))
        sol = solve(cols, target)
        if sol is None:
            return None
        x = sol.col(0)
        combo = Matrix.zeros(self.tag, self.n)
        for c, b in zip(x, self.basis):
            combo = combo + b.scale(c)
        return x if combo == M.retag(self.tag) else None

    def contains(self, M: Matrix) -> bool:
        return self.coordinates(M) is not None

    def __eq__(self, other):
        if not isinstance(other, MatSubspace):
            return NotImplemented
        return (self.tag, self.n) == (other.tag, other.n) and \
            len(self.basis) == len(other.basis) and \
            all(a == b for a, b in zip(self.basis, other.basis))

    __hash__ = None

    def __repr__(self):
        return f"MatSubspace({self.tag.value}, n={self.n}, dim={self.dim})"

    def sum(self, other: "MatSubspace") -> "MatSubspace":
        self._compat(other)
        return MatSubspace(self.tag, self.n, self.basis + other.basis)

    def intersect(self, other: "MatSubspace") -> "MatSubspace":
        self._compat(other)
        if not self.basis or not other.basis:
            return MatSubspace(self.tag, self.n, [])
        cols = []
        for b in self.basis:
            cols.append(vec(b))
        for b in other.basis:
            cols.append([-e for e in vec(b)])
        stacked = Matrix(self.tag, [[cols[j][k] for j in range(len(cols))]
                                    for k in range(self.n * self.n)])
        out = []
        for kv in kernel(stacked):
            x = kv.col(0)[: len(self.basis)]
            combo = Matrix.zeros(self.tag, self.n)
            for c, b in zip(x, self.basis):
                combo = combo + b.scale(c)
            out.append(combo)
        return MatSubspace(self.tag, self.n, out)

    def conjugate(self, P: Matrix) -> "MatSubspace":
        try:
            Pi = inverse(P)
        except SingularMatrix as exc:
            raise SingularConjugator(str(exc)) from None
        return MatSubspace(self.tag, self.n,
                           [P @ b @ Pi for b in self.basis])

    def _compat(self, other):
        if (self.tag, self.n) != (other.tag, other.n):
            raise ValueError("incompatible subspaces")


# -- stock subspaces --------------------------------------------------------

def symmetric_subspace(tag: FieldTag, n: int) -> MatSubspace:
    mats = [Matrix.elementary(tag, n, i, i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            mats.append(Matrix.elementary(tag, n, i, j) +
                        Matrix.elementary(tag, n, j, i))
    return MatSubspace(tag, n, mats)


def diagonal_subspace(tag: FieldTag, n: int) -> MatSubspace:
    return MatSubspace(tag, n, [Matrix.elementary(tag, n, i, i)
                                for i in range(n)])


def strictly_upper_subspace(tag: FieldTag, n: int) -> MatSubspace:
    return MatSubspace(tag, n, [Matrix.elementary(tag, n, i, j)
                                for i in range(n) for j in range(i + 1, n)])


# -- block view of the last row/column --------------------------------------

@dataclass
class BlockView:
    """The (n-1, 1) block decomposition of an n x n matrix."""
    K_part: Matrix
    C_part: Matrix
    L_part: Matrix
    alpha: object

    @classmethod
    def of(cls, M: Matrix) -> "BlockView":
        n = M.rows
        return cls(K_part=M.block(0, n - 1, 0, n - 1),
                   C_part=M.block(0, n - 1, n - 1, n),
                   L_part=M.block(n - 1, n, 0, n - 1),
                   alpha=M[n - 1, n - 1])

    def reassemble(self) -> Matrix:
        top = [list(self.K_part.row(i)) + [self.C_part[i, 0]]
               for i in range(self.K_part.rows)]
        bottom = [list(self.L_part.row(0)) + [self.alpha]]
        return Matrix(self.K_part.tag, top + bottom)


# -- affine solving inside a subspace ---------------------------------------

def solve_affine(V: MatSubspace, constraints):
    """Elements of V matching entry constraints {(i, j): value}.

    Returns (particular, homogeneous) where particular is a member of V with
    the prescribed entries (or None if infeasible) and homogeneous is a basis
    of the solution space of the zero-valued version of the constraints.
    """
    items = list(constraints.items())
    if not V.basis:
        ok = all(field.is_zero(field.coerce(V.tag, v)) for _, v in items)
        return (Matrix.zeros(V.tag, V.n) if ok else None), []
    if not items:
        return Matrix.zeros(V.tag, V.n), list(V.basis)
    A = Matrix(V.tag, [[b[i, j] for b in V.basis] for (i, j), _ in items])
    rhs = Matrix.column(V.tag, [v for _, v in items])
    part = solve(A, rhs)
    particular = None
    if part is not None:
        particular = _combine(V, part.col(0))
    homogeneous = [_combine(V, kv.col(0)) for kv in kernel(A)]
    return particular, homogeneous


def _combine(V: MatSubspace, coeffs) -> Matrix:
    out = Matrix.zeros(V.tag, V.n)
    for c, b in zip(coeffs, V.basis):
        out = out + b.scale(c)
    return out


def _entry_rank(V: MatSubspace, positions) -> int:
    """Dimension of the image of V under entry extraction at `positions`."""
    if not V.basis:
        return 0
    return rank(Matrix(V.tag, [[b[i, j] for (i, j) in positions]
                               for b in V.basis]))


# -- outcome types ----------------------------------------------------------

@dataclass
class Certificate:
    """P V P^-1 = S_n, verified; chain records the elementary conjugators."""
    P: Matrix
    chain: list = dc_field(default_factory=list)


@dataclass
class Witness:
    """A member of V together with its negative diagonalizability decision."""
    M: Matrix
    proof: DiagDecision


@dataclass
class Obstruction:
    """A structural failure with no explicit non-diagonalizable member."""
    stage: str
    detail: str


# -- the dimension bound ----------------------------------------------------

@dataclass
class NtBoundReport:
    intersection_dim: int
    nilpotent: Matrix | None
    dim_v: int
    bound: int
    bound_certified: bool


def nt_bound_check(V: MatSubspace) -> NtBoundReport:
    """Intersect V with the strictly upper triangular matrices; a trivial
    intersection certifies dim V <= n(n+1)/2, a nonzero member is a
    nilpotent (hence non-diagonalizable) witness candidate."""
    inter = V.intersect(strictly_upper_subspace(V.tag, V.n))
    bound = V.n * (V.n + 1) // 2
    if inter.dim == 0:
        return NtBoundReport(0, None, V.dim, bound, V.dim <= bound)
    return NtBoundReport(inter.dim, inter.basis[0], V.dim, bound, False)


# -- shared helpers for the normalizers -------------------------------------

def _witness_in(V_orig: MatSubspace, G: Matrix, M_cur: Matrix):
    """Map a bad matrix from the conjugated frame G V G^-1 back to V."""
    M = inverse(G) @ M_cur.retag(V_orig.tag) @ G
    dec = is_diagonalizable(M)
    if dec.diagonalizable:
        return Obstruction("witness-check",
                           "candidate witness turned out diagonalizable")
    return Witness(M, dec)


def _square_root_in_field(c, tag: FieldTag):
    """The positive b with b*b = c when c is a nonzero square in the field,
    else None."""
    if field.is_zero(c):
        return None
    if tag is FieldTag.Q:
        v = field.as_fraction(c)
        if v <= 0:
            return None
        from .algebraic import AlgebraicReal, sqrt_nonneg
        s = sqrt_nonneg(AlgebraicReal(v))
        return s.as_fraction() if s.is_rational else None
    if field.sign(c) <= 0:
        return None
    return field.sqrt_nonneg(c, tag)


# -- the 2 x 2 normalizer ---------------------------------------------------

def normalize2(V: MatSubspace):
    """Normalize a 3-dimensional subspace of M_2 to S_2, or find a
    non-diagonalizable member."""
    if V.n != 2 or V.dim != 3:
        raise WrongDimension("normalize2 needs n = 2 and dim V = 3")
    tag = V.tag
    I2 = Matrix.identity(tag, 2)
    E12 = Matrix.elementary(tag, 2, 0, 1)

    # (1) I in V, else M_2 = span(I) + V exposes a shifted nilpotent in V
    if not V.contains(I2):
        cols = Matrix(tag, [[b.entries()[k] for b in V.basis] +
                            [I2.entries()[k]] for k in range(4)])
        sol = solve(cols, Matrix.column(tag, vec(E12)))
        alpha = sol.col(0)[V.dim]
        v = E12 - I2.scale(alpha)
        return Witness(v, is_diagonalizable(v))

    chain = []
    G = I2
    V_cur = V

    # (2) diagonalize some non-scalar member
    A = next(b for b in V_cur.basis
             if not (b - I2.scale(b[0, 0])).is_zero())
    dec = is_diagonalizable(A)
    if not dec.diagonalizable:
        return Witness(A, dec)
    G1 = inverse(dec.Q)
    chain.append(("diagonalize-member", G1))
    G = G1 @ G
    V_cur = V_cur.conjugate(G1)

    # (3) strip the diagonal off a member outside D_2
    B = next(b for b in V_cur.basis
             if not field.is_zero(b[0, 1]) or not field.is_zero(b[1, 0]))
    B0 = B - Matrix.diagonal(tag, [B[0, 0], B[1, 1]])
    b_val, c_val = B0[0, 1], B0[1, 0]
    if field.is_zero(b_val) or field.is_zero(c_val):
        return _witness_in(V, G, B0)
    B1 = B0.scale(field.one(tag) / c_val)

    # (4) the off-diagonal entry must be a nonzero square
    lam = _square_root_in_field(B1[0, 1], tag)
    if lam is None:
        return _witness_in(V, G, B1)
    G2 = Matrix.diagonal(tag, [field.one(tag), lam])
    chain.append(("scale-offdiagonal", G2))
    G = G2 @ G
    V_cur = V_cur.conjugate(G2)

    if V_cur == symmetric_subspace(tag, 2):
        return Certificate(G, chain)
    return Obstruction("verify-2", "conjugated subspace is not S_2")


# -- the finalisation step --------------------------------------------------

def finalisation(V: MatSubspace, _depth: int = 0):
    """Normalize a subspace already structured as: last-row-zero members
    have symmetric top-left block (uniquely per symmetric matrix) and
    E_nn in V.  The structure is checked, not assumed."""
    n, tag = V.n, V.tag
    if V.dim != n * (n + 1) // 2:
        raise WrongDimension("finalisation needs dim V = n(n+1)/2")
    Enn = Matrix.elementary(tag, n, n - 1, n - 1)
    if not V.contains(Enn):
        raise PreconditionViolated("(iii)", "E_nn not in V")

    # last-row-zero members: L = 0 and alpha = 0
    zero_row = {(n - 1, j): 0 for j in range(n)}
    _, W0 = solve_affine(V, zero_row)
    for M in W0:
        if not BlockView.of(M).K_part.is_symmetric():
            raise PreconditionViolated(
                "(i)", "a last-row-zero member has non-symmetric top block")
    m = n - 1
    if len(W0) != m * (m + 1) // 2:
        return Obstruction(
            "finalisation-(ii)",
            f"last-row-zero members have dimension {len(W0)}, "
            f"expected {m * (m + 1) // 2}")
    injective = solve_affine(
        V, {**zero_row, **{(i, j): 0 for i in range(m) for j in range(m)}})[1]
    if injective:
        return Obstruction("finalisation-(ii)",
                           "top-block map is not injective on last-row-zero "
                           "members")

    # (A) every symmetric top block occurs with zero last column
    sym_basis = symmetric_subspace(tag, m).basis
    M_of_sym = {}
    for idx, S in enumerate(sym_basis):
        constraints = dict(zero_row)
        for i in range(m):
            for j in range(m):
                constraints[(i, j)] = S[i, j]
        M_S, _ = solve_affine(V, constraints)
        if M_S is None:
            return Obstruction("finalisation-(ii)",
                               "a symmetric top block has no preimage")
        C = BlockView.of(M_S).C_part
        if not C.is_zero():
            w = _hunt_column_witness(V, S, C, M_S, Enn)
            if w is not None:
                return w
            return Obstruction(
                "claim1-hunt",
                "nonzero coupling column but no in-field eigenvalue "
                "exposes a witness")
        M_of_sym[idx] = M_S

    def sym_member(S: Matrix) -> Matrix:
        """The unique member of V with top block S and zero elsewhere."""
        coords = symmetric_subspace(tag, m).coordinates(S)
        out = Matrix.zeros(tag, n)
        for c, idx in zip(coords, range(len(sym_basis))):
            out = out + M_of_sym[idx].scale(c)
        return out

    # (B) one member per standard bottom row, top block reduced to
    # strictly-upper form
    rows = []
    for i in range(m):
        constraints = {(n - 1, j): (1 if j == i else 0) for j in range(m)}
        constraints[(n - 1, n - 1)] = 0
        M_i, _ = solve_affine(V, constraints)
        if M_i is None:
            return Obstruction("row-solve",
                               f"no member with bottom row e_{i + 1}")
        K = BlockView.of(M_i).K_part
        N = Matrix(tag, [[K[r, c] - K[c, r] if r < c else field.zero(tag)
                          for c in range(m)] for r in range(m)])
        M_red = M_i - sym_member(K - N)
        rows.append(M_red)

    # (C) each reduced member must be the symmetric elementary pattern
    # lambda^2 (E_{i,n} + flip): strictly-upper part zero, column c * e_i
    c_vals = [None] * m
    failing = None
    # probe the last standard row first: its failures yield direct
    # witnesses, so rotations never loop
    for i in [m - 1] + list(range(m - 1)):
        bv = BlockView.of(rows[i])
        ok = bv.K_part.is_zero()
        col = bv.C_part.col(0)
        for r in range(m):
            if r != i and not field.is_zero(col[r]):
                ok = False
        if ok:
            c_vals[i] = col[i]
            if _square_root_in_field(col[i], tag) is None:
                ok = False
        if not ok:
            failing = i
            break

    if failing is not None:
        if failing == m - 1:
            return _l1_witness(V, rows[m - 1], sym_member)
        return _rotated_witness(V, _swap_rotation(tag, n, failing), _depth)

    for i in range(m - 1):
        if not field.is_zero(c_vals[i] - c_vals[m - 1]):
            return _rotated_witness(V, _mix_rotation(tag, n, i, m - 1), _depth)

    # (D) scale the last coordinate and verify literal equality with S_n
    lam = _square_root_in_field(c_vals[m - 1], tag)
    Gf = Matrix.diagonal(tag, [field.one(tag)] * m + [lam])
    V1 = V.conjugate(Gf)
    if V1 == symmetric_subspace(tag, n):
        return Certificate(Gf, [("scale-last", Gf)])
    return Obstruction("final-verify", "conjugated subspace is not S_n")


def _hunt_column_witness(V, S, C, M_S, Enn):
    """A nonzero coupling column C on top of symmetric block S: some
    eigenvalue lam of S makes M_S + lam E_nn non-diagonalizable."""
    eig = eigendata(S)
    for lam in eig.eigenvalues:
        B1 = Matrix(V.tag, [[lam]])
        if not block_image_test(S, C, B1):
            cand = M_S + Enn.scale(lam)
            dec = is_diagonalizable(cand)
            if not dec.diagonalizable:
                return Witness(cand, dec)
    return None


def _l1_witness(V, M_red, sym_member):
    """Extract the witness hiding in a failed last-standard-row member
    M_red = [[U1, C1, C2], [0, 0, a], [0, 1, 0]]."""
    n, tag = V.n, V.tag
    bv = BlockView.of(M_red)
    U_block = bv.K_part  # strictly upper with last row zero
    a = bv.C_part[n - 2, 0]
    U1 = U_block.block(0, n - 2, 0, n - 2) if n > 2 else None
    if U1 is not None and not U1.is_zero():
        dec = is_diagonalizable(M_red)
        if not dec.diagonalizable:
            return Witness(M_red, dec)
        return Obstruction("l1-nilpotent", "expected non-diagonalizable "
                                           "member with nilpotent corner")
    lam = _square_root_in_field(a, tag)
    if lam is None:
        dec = is_diagonalizable(M_red)
        if not dec.diagonalizable:
            return Witness(M_red, dec)
        return Obstruction("l1-square", "expected non-diagonalizable member "
                                        "with non-square pivot")
    # remaining failure: a coupling block C = [C1 C2] != 0; some eigenvalue
    # of the bottom 2 x 2 block rejects it
    p = n - 2
    C = Matrix(tag, [[U_block[i, p], bv.C_part[i, 0]] for i in range(p)])
    B = Matrix(tag, [[field.zero(tag), a], [field.one(tag), field.zero(tag)]])
    for lam1 in (lam, -lam):
        A1 = Matrix.diagonal(tag, [lam1] * p)
        if not block_image_test(A1, C, B):
            S_top = Matrix.diagonal(
                tag, [lam1] * p + [field.zero(tag)])
            cand = sym_member(S_top) + M_red
            dec = is_diagonalizable(cand)
            if not dec.diagonalizable:
                return Witness(cand, dec)
    return Obstruction("l1-coupling", "no eigenvalue rejected the coupling "
                                      "block")


def _swap_rotation(tag, n, i):
    """Permutation conjugator moving standard row i to the last-row slot."""
    rows = []
    perm = list(range(n))
    perm[i], perm[n - 2] = perm[n - 2], perm[i]
    for r in range(n):
        rows.append([1 if c == perm[r] else 0 for c in range(n)])
    return Matrix(tag, rows)


def _mix_rotation(tag, n, i, j):
    """Rational rotation conjugator whose row n-2 is (3/5) e_i + (4/5) e_j,
    probing the mixed direction where unequal scaling factors collide."""
    O = [[Fraction(1) if r == c else Fraction(0) for c in range(n)]
         for r in range(n)]
    O[i][i] = Fraction(3, 5)
    O[i][j] = Fraction(4, 5)
    O[j][i] = Fraction(-4, 5)
    O[j][j] = Fraction(3, 5)
    M = Matrix(tag, O)
    return _swap_rotation(tag, n, i) @ M


def _rotated_witness(V, P, depth):
    """Re-run the finalisation analysis in an orthogonally rotated frame
    where the failure becomes a last-standard-row failure, then map the
    witness back."""
    if depth >= V.n:
        return Obstruction("rotation", "rotation depth exceeded")
    out = finalisation(V.conjugate(P), _depth=depth + 1)
    if isinstance(out, Witness):
        return _witness_in(V, P, out.M)
    if isinstance(out, Certificate):
        return Obstruction("rotation", "rotated frame unexpectedly "
                                       "normalized")
    return out


# -- the full normalizer ----------------------------------------------------

def normalize_maximal(V: MatSubspace):
    """Decide whether the n(n+1)/2-dimensional subspace V is conjugate to
    S_n; produce the conjugator, a non-diagonalizable member, or a
    structural obstruction."""
    n, tag = V.n, V.tag
    if n < 2 or V.dim != n * (n + 1) // 2:
        raise WrongDimension("normalize_maximal needs dim V = n(n+1)/2, "
                             "n >= 2")
    if n == 2:
        return normalize2(V)

    zero_L = {(n - 1, j): 0 for j in range(n - 1)}
    zero_K = {(i, j): 0 for i in range(n - 1) for j in range(n - 1)}

    # a nonzero member with zero last row and zero top block is nilpotent
    _, nil = solve_affine(V, {**zero_L, **zero_K, (n - 1, n - 1): 0})
    if nil:
        M0 = nil[0]
        return Witness(M0, is_diagonalizable(M0))

    # forced dimension counts
    d_L = _entry_rank(V, [(n - 1, j) for j in range(n - 1)])
    _, W = solve_affine(V, zero_L)
    W_space = MatSubspace(tag, n, W)
    _, Wp = solve_affine(V, {**zero_L, **zero_K})
    d_KW = _entry_rank(W_space, [(i, j) for i in range(n - 1)
                                 for j in range(n - 1)])
    want_KW = n * (n - 1) // 2
    if d_L != n - 1 or len(Wp) != 1 or d_KW != want_KW:
        return Obstruction(
            "counts",
            f"dim L(V) = {d_L} (want {n - 1}), dim W' = {len(Wp)} (want 1), "
            f"dim K(W) = {d_KW} (want {want_KW})")

    # move the W' generator onto E_nn
    gen = Wp[0]
    alpha = gen[n - 1, n - 1]
    gen = gen.scale(field.one(tag) / alpha)
    C1 = [gen[i, n - 1] for i in range(n - 1)]
    P_rows = [[field.one(tag) if r == c else field.zero(tag)
               for c in range(n - 1)] + [C1[r]] for r in range(n - 1)]
    P_rows.append([field.zero(tag)] * (n - 1) + [field.one(tag)])
    P = Matrix(tag, P_rows)
    G1 = inverse(P)
    chain = [("w-prime", G1)]
    V1 = V.conjugate(G1)

    # recurse on the top blocks of the zero-bottom-row members
    _, W1 = solve_affine(V1, zero_L)
    KW = MatSubspace(tag, n - 1, [BlockView.of(M).K_part for M in W1])
    rec = normalize_maximal(KW)
    if isinstance(rec, Witness):
        lifted, _ = solve_affine(V1, {**zero_L, **{
            (i, j): rec.M[i, j] for i in range(n - 1) for j in range(n - 1)}})
        if lifted is None:
            return Obstruction("lift", "recursive witness has no preimage")
        return _witness_in(V, G1, lifted)
    if isinstance(rec, Obstruction):
        return Obstruction(f"recurse/{rec.stage}", rec.detail)

    Q = rec.P
    G2_rows = [[Q[r, c] if r < n - 1 and c < n - 1 else
                (field.one(tag) if r == c == n - 1 else field.zero(tag))
                for c in range(n)] for r in range(n)]
    G2 = Matrix(tag, G2_rows)
    chain.append(("recurse", G2))
    V2 = V1.conjugate(G2)

    fin = finalisation(V2)
    if isinstance(fin, Witness):
        return _witness_in(V, G2 @ G1, fin.M)
    if isinstance(fin, Obstruction):
        return fin
    G = fin.P @ G2 @ G1
    if V.conjugate(G) == symmetric_subspace(tag, n):
        return Certificate(G, chain + fin.chain)
    return Obstruction("final-verify", "composed conjugator misses S_n")


# -- intersection of two normalized subspaces -------------------------------

@dataclass
class IntersectionReport:
    dim: int
    lower_bound: int
    bound_ok: bool
    R: Matrix | None  # conjugates the intersection onto the diagonals


def min_intersection_report(V: MatSubspace, W: MatSubspace,
                            cert_v: Certificate,
                            cert_w: Certificate) -> IntersectionReport:
    """dim(V cap W) >= n for two certified subspaces; in the minimal case
    the intersection is a commuting family conjugated onto D_n."""
    n, tag = V.n, V.tag
    S = symmetric_subspace(tag, n)
    for name, U, cert in (("V", V, cert_v), ("W", W, cert_w)):
        if cert is None:
            raise MissingCertificate(f"{name} carries no certificate")
        if U.conjugate(cert.P) != S:
            raise MissingCertificate(f"certificate for {name} does not "
                                     "normalize it")
    inter = V.intersect(W)
    bound_ok = inter.dim >= n
    R = None
    if bound_ok and inter.dim == n:
        fam = list(inter.basis)
        if all((A @ B - B @ A).is_zero() for A in fam for B in fam):
            P = simdiag_family(fam)
            R = inverse(P)
            if inter.conjugate(R) != diagonal_subspace(tag, n):
                R = None
    return IntersectionReport(inter.dim, n, bound_ok, R)


# -- symmetrizability obstruction -------------------------------------------

@dataclass
class FeasibleWitness:
    G: Matrix


@dataclass
class Infeasible:
    x: Matrix


@dataclass
class Inconclusive:
    detail: str


def _commuting_symmetric_space(V: MatSubspace) -> list[Matrix]:
    """Basis of {G symmetric : A^T G = G A for all A in V}."""
    n, tag = V.n, V.tag
    sym = symmetric_subspace(tag, n).basis
    if not V.basis:
        return list(sym)
    # one column per symmetric basis element, constraint rows stacked over
    # all basis members A
    stacked = []
    for A in V.basis:
        for k in range(n * n):
            stacked.append([vec(A.transpose() @ G - G @ A)[k] for G in sym])
    M = Matrix(tag, stacked)
    return [_sym_combine(sym, kv.col(0)) for kv in kernel(M)]


def _sym_combine(sym_basis, coeffs) -> Matrix:
    out = Matrix.zeros(sym_basis[0].tag, sym_basis[0].rows)
    for c, b in zip(coeffs, sym_basis):
        out = out + b.scale(c)
    return out


def _positive_definite(G: Matrix) -> bool:
    """Sylvester's criterion with exact leading principal minors."""
    for k in range(1, G.rows + 1):
        if field.sign(det(G.block(0, k, 0, k))) <= 0:
            return False
    return True


def symmetrizability_obstruction(V: MatSubspace):
    """Search for a positive definite G making every member of V
    G-self-adjoint, or a vector isotropic for every candidate G."""
    n, tag = V.n, V.tag
    if all(b.is_symmetric() for b in V.basis):
        return FeasibleWitness(Matrix.identity(tag, n))
    space = _commuting_symmetric_space(V)
    if not space:
        return Infeasible(Matrix.column(tag, [field.one(tag)] +
                                        [field.zero(tag)] * (n - 1)))
    # small-coefficient combinations, single elements first
    candidates = [g for g in space] + [-g for g in space]
    for size in (2, 3):
        for combo in itertools.combinations(range(len(space)), size):
            for signs in itertools.product((1, -1), repeat=size):
                c = Matrix.zeros(tag, n)
                for k, s in zip(combo, signs):
                    c = c + space[k].scale(field.from_int(tag, s))
                candidates.append(c)
    for G in candidates:
        if _positive_definite(G):
            return FeasibleWitness(G)
    # isotropic-vector test: standard vectors and rational eigenvectors of
    # basis members
    probes = [Matrix.column(tag, [field.one(tag) if r == i else
                                  field.zero(tag) for r in range(n)])
              for i in range(n)]
    for A in V.basis:
        try:
            eig = eigendata(A)
        except Exception:
            continue
        for basis in eig.eigenbases:
            probes.extend(basis)
    for x in probes:
        if all(field.is_zero((x.transpose() @ G @ x)[0, 0]) for G in space):
            return Infeasible(x)
    return Inconclusive("no positive definite candidate found and no "
                        "isotropic direction detected")


# -- the fixed 3 x 3 fixture ------------------------------------------------

@dataclass
class FixtureReport:
    checked_pairs: int
    all_spectra_ok: bool
    obstruction_infeasible: bool
    isotropic: Matrix | None


def counterexample_2_3_check(grid=None) -> FixtureReport:
    """The span of A = Diag(0, 1, -1) and B = E_12 + E_23 + E_32 is
    diagonalizable pointwise with spectrum {0, +-hypot(a, b)} yet admits no
    symmetrizing positive definite form."""
    tag = FieldTag.REAL_ALG
    A = Matrix.diagonal(tag, [0, 1, -1])
    B = Matrix(tag, [[0, 1, 0], [0, 0, 1], [0, 1, 0]])
    if grid is None:
        grid = [(a, b) for a in range(-2, 3) for b in range(-2, 3)
                if (a, b) != (0, 0)] + [(Fraction(3), Fraction(4))]
    zero = field.zero(tag)
    spectra_ok = True
    for a, b in grid:
        M = A.scale(Fraction(a)) + B.scale(Fraction(b))
        d = field.hypot(a, b, tag)
        eig = eigendata(M)
        want = [-d, zero, d]
        ok = (len(eig.eigenvalues) == 3 and eig.geometric_dims == [1, 1, 1]
              and all(field.is_zero(x - y)
                      for x, y in zip(eig.eigenvalues, want)))
        spectra_ok = spectra_ok and ok
    out = symmetrizability_obstruction(MatSubspace(tag, 3, [A, B]))
    infeasible = isinstance(out, Infeasible)
    return FixtureReport(len(grid), spectra_ok, infeasible,
                         out.x if infeasible else None)
