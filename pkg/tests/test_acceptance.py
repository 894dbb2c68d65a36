"""Acceptance suite: exact, property-based checks for every component.

Every assertion here is exact (tolerance zero).  Randomized corpora use
fixed seeds so failures reproduce.  Where a check has an independent route
(sympy-based oracles, assembled-matrix cross-checks), the two routes are
compared rather than collapsed.
"""

import json
import random
import time
from fractions import Fraction as F

import pytest
import sympy

from diagkit import field
from diagkit.cli import run as cli_run
from diagkit.errors import SingularMap
from diagkit.field import FieldTag
from diagkit.matrix import (Matrix, assemble_block, block_image_test,
                            inverse, is_diagonalizable, kernel, rank)
from diagkit.orthosvd import svd
from diagkit.preservers import (MatrixMap, NotPhiPsi, Phi, Psi,
                                SingularRejected, classify, make_phi,
                                make_psi, refute_preservation,
                                strong_classify)
from diagkit.subspaces import (Certificate, Infeasible, MatSubspace, Witness,
                               counterexample_2_3_check, diagonal_subspace,
                               min_intersection_report, normalize2,
                               normalize_maximal, strictly_upper_subspace,
                               symmetric_subspace,
                               symmetrizability_obstruction)

Q = FieldTag.Q
R = FieldTag.REAL_ALG


def rand_inv(rng, tag, n, lo=-3, hi=3):
    while True:
        G = Matrix(tag, [[rng.randint(lo, hi) for _ in range(n)]
                         for _ in range(n)])
        if rank(G) == n:
            return G


# -- 1. field suite ---------------------------------------------------------

def test_field_suite_exact_and_fast():
    """>= 1000 field/order/formal-reality/Pythagorean checks, < 60 s."""
    rng = random.Random(100)
    start = time.monotonic()
    checks = 0

    def sample():
        # rational, or rational plus a rational multiple of a square root
        q = field.from_fraction(R, F(rng.randint(-8, 8), rng.randint(1, 4)))
        if rng.random() < 0.5:
            return q
        r = field.from_int(R, rng.randint(0, 7))
        s = field.from_fraction(R, F(rng.randint(-3, 3), rng.randint(1, 3)))
        return q + field.sqrt_nonneg(r, R) * s

    zero, one = field.zero(R), field.one(R)
    for _ in range(110):
        a, b, c = sample(), sample(), sample()
        # field axioms
        assert field.is_zero((a + b) - (b + a)); checks += 1
        assert field.is_zero(a * b - b * a); checks += 1
        assert field.is_zero((a + b) + c - (a + (b + c))); checks += 1
        assert field.is_zero(a * (b + c) - (a * b + a * c)); checks += 1
        assert field.is_zero(a + (-a)); checks += 1
        assert field.is_zero(a * one - a); checks += 1
        if not field.is_zero(a):
            assert field.is_zero(a * (one / a) - one); checks += 1
        # order axioms
        sa, sb = field.sign(a), field.sign(b)
        assert field.sign(-a) == -sa; checks += 1
        if sa > 0 and sb > 0:
            assert field.sign(a * b) > 0 and field.sign(a + b) > 0
            checks += 1
        # formal reality
        s = a * a + b * b + c * c
        assert field.sign(s) >= 0; checks += 1
        if field.is_zero(s):
            assert all(field.is_zero(x) for x in (a, b, c)); checks += 1
        # Pythagorean property
        h = field.hypot(a, b, R)
        assert field.sign(h) >= 0; checks += 1
        assert field.is_zero(h * h - (a * a + b * b)); checks += 1
    elapsed = time.monotonic() - start
    assert checks >= 1000
    assert elapsed < 60.0


# -- 2. diagonalizability oracle --------------------------------------------

def _sympy_oracle(A: Matrix) -> bool:
    """Independent route: rational roots of the characteristic polynomial by
    factoring over Q with sympy, eigenspace dimensions by sympy rank."""
    n = A.rows
    S = sympy.Matrix([[sympy.Rational(e) for e in row] for row in A.data])
    x = sympy.Symbol("x")
    poly = sympy.Poly(S.charpoly(x).as_expr(), x, domain="QQ")
    total = 0
    for fac, mult in poly.factor_list()[1]:
        if fac.degree() != 1:
            continue
        c1, c0 = fac.all_coeffs()
        lam = sympy.Rational(-c0, c1)
        total += n - (S - lam * sympy.eye(n)).rank()
    return total == n


def test_diagonalizability_matches_bruteforce_oracle():
    rng = random.Random(200)
    agree = 0
    for _ in range(500):
        A = Matrix(Q, [[rng.randint(-3, 3) for _ in range(3)]
                       for _ in range(3)])
        assert is_diagonalizable(A).diagonalizable == _sympy_oracle(A)
        agree += 1
    assert agree == 500


# -- 3. block-triangular image test -----------------------------------------

def _random_diagonalizable(rng, n, values):
    G = rand_inv(rng, Q, n, -2, 2)
    d = [F(rng.choice(values)) for _ in range(n)]
    return G @ Matrix.diagonal(Q, d) @ inverse(G)


def test_block_image_suite():
    rng = random.Random(300)
    passes = violations = 0
    while passes < 100:
        p = rng.choice([1, 2])
        q = rng.choice([1, 2])
        # disjoint spectra make every coupling block harmless
        A = _random_diagonalizable(rng, p, [0, 1])
        B = _random_diagonalizable(rng, q, [2, 3])
        C = Matrix(Q, [[rng.randint(-2, 2) for _ in range(q)]
                       for _ in range(p)])
        rep = block_image_test(A, C, B)
        assert rep.passed
        assert is_diagonalizable(assemble_block(A, C, B)).diagonalizable
        passes += 1
    while violations < 100:
        # shared eigenvalue 0 with a coupling that leaves the image
        p = rng.choice([1, 2])
        q = rng.choice([1, 2])
        A0 = Matrix.diagonal(Q, [F(0)] + [F(1)] * (p - 1))
        B0 = Matrix.diagonal(Q, [F(0)] + [F(2)] * (q - 1))
        C0 = Matrix.zeros(Q, p, q)
        base = [[C0[i, j] for j in range(q)] for i in range(p)]
        base[0][0] = F(rng.randint(1, 3))
        C0 = Matrix(Q, base)
        P1, P2 = rand_inv(rng, Q, p, -2, 2), rand_inv(rng, Q, q, -2, 2)
        A = P1 @ A0 @ inverse(P1)
        B = P2 @ B0 @ inverse(P2)
        C = P1 @ C0 @ inverse(P2)
        rep = block_image_test(A, C, B)
        assert not rep.passed
        assert not is_diagonalizable(assemble_block(A, C, B)).diagonalizable
        violations += 1


# -- 4. SVD exactness -------------------------------------------------------

def _structured_invertible(rng, n):
    """Nonsingular rational matrices whose singular values stay in quadratic
    extensions: signed permutations around a 2x2-block-diagonal core.
    Fully generic 3x3/4x4 samples push the defining-polynomial degree of
    the singular values past DIAGKIT_MAX_DEGREE."""
    while True:
        blocks = []
        left = n
        while left >= 2:
            blocks.append(2)
            left -= 2
        if left:
            blocks.append(1)
        core = [[F(0)] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b):
                for j in range(b):
                    core[off + i][off + j] = F(rng.randint(-4, 4))
            off += b
        M = Matrix(R, core)
        if rank(M) < n:
            continue
        perm1 = rng.sample(range(n), n)
        perm2 = rng.sample(range(n), n)
        S1 = Matrix(R, [[rng.choice([-1, 1]) if j == perm1[i] else 0
                         for j in range(n)] for i in range(n)])
        S2 = Matrix(R, [[rng.choice([-1, 1]) if j == perm2[i] else 0
                         for j in range(n)] for i in range(n)])
        return S1 @ M @ S2


def test_svd_exactness_corpus():
    rng = random.Random(400)
    start = time.monotonic()
    done = 0
    for n, count in ((2, 50), (3, 30), (4, 20)):
        for _ in range(count):
            if n == 2:
                P = rand_inv(rng, R, 2, -4, 4)
            else:
                P = _structured_invertible(rng, n)
            t = svd(P)
            I = Matrix.identity(R, n)
            assert t.O.transpose() @ t.O == I
            assert t.U.transpose() @ t.U == I
            assert t.D.is_diagonal_matrix()
            assert t.O @ t.D @ t.U == P
            done += 1
    assert done == 100
    assert time.monotonic() - start < 300.0


# -- 5. normalizer round trip -----------------------------------------------

def test_normalizer_round_trip_and_sabotage():
    rng = random.Random(500)
    for n in (2, 3, 4):
        S = symmetric_subspace(R, n)
        for _ in range(20):
            V = S.conjugate(rand_inv(rng, R, n))
            out = normalize_maximal(V)
            assert isinstance(out, Certificate)
            assert V.conjugate(out.P) == S
        uppers = strictly_upper_subspace(R, n).basis
        for k in range(10):
            basis = list(S.basis)
            basis[k % len(basis)] = uppers[k % len(uppers)]
            V = MatSubspace(R, n, basis)
            out = normalize_maximal(V)
            assert not isinstance(out, Certificate)
            if isinstance(out, Witness):
                assert V.contains(out.M)
                assert not is_diagonalizable(out.M).diagonalizable


# -- 6. Pythagorean contrast ------------------------------------------------

def test_normalize2_contrast_fixture():
    def space(tag):
        return MatSubspace(tag, 2, [Matrix.identity(tag, 2),
                                    Matrix.diagonal(tag, [1, 0]),
                                    Matrix(tag, [[0, 2], [1, 0]])])
    out_q = normalize2(space(Q))
    assert isinstance(out_q, Witness)
    assert space(Q).contains(out_q.M)
    assert not is_diagonalizable(out_q.M).diagonalizable
    out_r = normalize2(space(R))
    assert isinstance(out_r, Certificate)
    assert space(R).conjugate(out_r.P) == symmetric_subspace(R, 2)


# -- 7. pointwise-diagonalizable span with no symmetrizer -------------------

def test_counterexample_full_grid():
    grid = [(a, b) for a in range(-3, 4) for b in range(-3, 4)
            if (a, b) != (0, 0)]
    rep = counterexample_2_3_check(grid)
    assert rep.checked_pairs == 48
    assert rep.all_spectra_ok
    assert rep.obstruction_infeasible
    assert rep.isotropic == Matrix.column(R, [1, 0, 0])


# -- 8. intersection trick --------------------------------------------------

def test_intersection_fixed_and_random():
    for n in (2, 3, 4, 5):
        S = symmetric_subspace(Q, n)
        D = Matrix.diagonal(Q, [F(i + 1) for i in range(n)])
        W = S.conjugate(inverse(D))
        assert S.intersect(W) == diagonal_subspace(Q, n)
    rng = random.Random(800)
    pairs = 0
    for n, reps in ((2, 30), (3, 20)):
        S = symmetric_subspace(R, n)
        for _ in range(reps):
            V = S.conjugate(rand_inv(rng, R, n))
            W = S.conjugate(rand_inv(rng, R, n))
            cv = normalize_maximal(V)
            cw = normalize_maximal(W)
            assert isinstance(cv, Certificate)
            assert isinstance(cw, Certificate)
            rep = min_intersection_report(V, W, cv, cw)
            assert rep.dim >= n and rep.bound_ok
            pairs += 1
    assert pairs == 50


# -- 9. classifier round trip -----------------------------------------------

def test_classifier_round_trips_and_refutation():
    rng = random.Random(900)
    done_phi = done_psi = 0
    while done_phi < 50 or done_psi < 50:
        n = rng.choice([2, 3])
        P = rand_inv(rng, Q, n, -2, 2)
        lam = Matrix.row_vector(
            Q, [F(rng.randint(-2, 2)) for _ in range(n * n)])
        mu = F(rng.choice([-3, -2, -1, 1, 2, 3]))
        maker, counter = (make_phi, "phi") if done_phi <= done_psi \
            else (make_psi, "psi")
        f = maker(lam, P, mu)
        try:
            out = classify(f)
        except SingularMap:
            # lambda(I) = -mu samples are singular; the strong path still
            # recovers the shape
            out = strong_classify(f)
        assert isinstance(out, (Phi, Psi))
        rebuilt = (make_phi if isinstance(out, Phi) else make_psi)(
            out.lambda_row, out.P, out.mu)
        assert rebuilt == f
        # invertibility flag agrees with the coefficient matrix
        assert out.invertible == (rank(f.coeffs) == n * n)
        if counter == "phi":
            done_phi += 1
        else:
            done_psi += 1

    def rot(M):
        return Matrix(Q, [[M[0, 0], M[0, 1] - 2 * M[1, 0]],
                          [M[1, 0], M[1, 1]]])
    h = MatrixMap.from_action(Q, 2, rot)
    out = classify(h)
    assert isinstance(out, NotPhiPsi)
    assert out.witness is not None
    rep = refute_preservation(h, trials=200, seed=0)
    assert rep.found and rep.trial_index < 200
    assert is_diagonalizable(rep.witness).diagonalizable
    assert not is_diagonalizable(h.apply(rep.witness)).diagonalizable


# -- 10. singular maps are rejected with verified pairs ---------------------

def _singular_corpus(rng):
    maps = [MatrixMap.from_action(Q, 2, lambda M: Matrix.zeros(Q, 2)),
            MatrixMap.from_action(Q, 3, lambda M: Matrix.zeros(Q, 3))]
    for n in (2, 3):
        for _ in range(4):
            G = rand_inv(rng, Q, n, -2, 2)
            d = [F(rng.randint(-2, 2)) for _ in range(n)]
            while len(set(d)) < 2:
                d = [F(rng.randint(-2, 2)) for _ in range(n)]
            A = G @ Matrix.diagonal(Q, d) @ inverse(G)
            # project along A measured by a linear functional it does not kill
            w = sum(x * x for x in [e for r in A.data for e in r])

            def act(M, A=A, w=w):
                t = sum(a * m for a, m in zip(
                    [e for r in A.data for e in r],
                    [e for r in M.data for e in r]))
                return M - A.scale(t / w)
            maps.append(MatrixMap.from_action(Q, n, act))
    return maps


def test_singular_maps_all_rejected():
    rng = random.Random(1000)
    for f in _singular_corpus(rng):
        assert len(kernel(f.coeffs)) > 0
        out = strong_classify(f)
        assert isinstance(out, SingularRejected)
        A = out.kernel_elem
        B, AB = out.counterpair
        assert f.apply(A).is_zero()
        assert is_diagonalizable(B).diagonalizable
        assert not AB.is_zero()
        assert not is_diagonalizable(AB).diagonalizable
        assert f.apply(AB) == f.apply(B)


# -- 11. end-to-end selftest ------------------------------------------------

def test_cli_selftest_under_budget(tmp_path):
    out = str(tmp_path / "selftest.json")
    start = time.monotonic()
    code = cli_run(["selftest", "--out", out])
    elapsed = time.monotonic() - start
    assert code == 0
    with open(out) as fh:
        rep = json.load(fh)
    assert rep["result"]["ok"] is True
    assert elapsed < 600.0
