"""Unit tests for exact matrices, eigendata, and diagonalizability."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diagkit import field
from diagkit.errors import NotCommuting, NotDiagonalizableError, SingularMatrix
from diagkit.field import FieldTag
from diagkit.matrix import (Matrix, assemble_block, block_image_test,
                            charpoly, commute, det, eigendata, inverse,
                            is_diagonalizable, kernel, minimal_polynomial,
                            rank, rref, simdiag, simdiag_family, solve)

Q = FieldTag.Q
R = FieldTag.REAL_ALG

small_matrices = st.integers(-4, 4).flatmap(
    lambda _: st.lists(
        st.lists(st.integers(-4, 4), min_size=3, max_size=3),
        min_size=3, max_size=3))


def qmat(rows):
    return Matrix(Q, rows)


def test_value_semantics():
    A = qmat([[1, 2], [3, 4]])
    assert A == qmat([[1, 2], [3, 4]])
    assert A != qmat([[1, 2], [3, 5]])
    assert A.transpose().transpose() == A
    assert (A - A).is_zero()


def test_matmul_and_identity():
    A = qmat([[1, 2], [3, 4]])
    I = Matrix.identity(Q, 2)
    assert A @ I == A
    assert I @ A == A
    assert A @ qmat([[0, 0], [0, 0]]) == Matrix.zeros(Q, 2)


def test_rref_and_rank():
    A = qmat([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    Rm, pivots = rref(A)
    assert rank(A) == 2
    assert list(pivots) == [0, 1]


def test_kernel_members_annihilate():
    A = qmat([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    ker = kernel(A)
    assert len(ker) == 1
    assert (A @ ker[0]).is_zero()


def test_solve_and_inverse():
    A = qmat([[2, 1], [1, 1]])
    b = Matrix.column(Q, [F(3), F(2)])
    x = solve(A, b)
    assert A @ x == b
    assert A @ inverse(A) == Matrix.identity(Q, 2)
    with pytest.raises(SingularMatrix):
        inverse(qmat([[1, 2], [2, 4]]))


def test_det_known_values():
    assert det(qmat([[1, 2], [3, 4]])) == F(-2)
    assert det(Matrix.identity(Q, 4)) == F(1)
    assert det(qmat([[1, 2], [2, 4]])) == F(0)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3),
                min_size=3, max_size=3))
@settings(max_examples=100, deadline=None)
def test_charpoly_cayley_hamilton(rows):
    A = qmat(rows)
    cp = charpoly(A)
    acc = Matrix.zeros(Q, 3)
    power = Matrix.identity(Q, 3)
    for c in cp:
        acc = acc + power.scale(c)
        power = power @ A
    assert acc.is_zero()


def test_minimal_polynomial_divides_structure():
    A = Matrix.diagonal(Q, [F(1), F(1), F(2)])
    mp = minimal_polynomial(A)
    # (x-1)(x-2) = 2 - 3x + x^2, monic
    assert mp == [F(2), F(-3), F(1)]


def test_eigendata_rational():
    A = qmat([[2, 1], [0, 3]])
    eig = eigendata(A)
    assert [field.as_fraction(v) for v in eig.eigenvalues] == [F(2), F(3)]
    for lam, basis in zip(eig.eigenvalues, eig.eigenbases):
        for v in basis:
            assert A @ v == v.scale(lam)


def test_diagonalizable_with_certificate():
    A = qmat([[0, 2], [1, 1]])  # eigenvalues 2, -1
    dec = is_diagonalizable(A)
    assert dec.diagonalizable
    assert A @ dec.Q == dec.Q @ dec.D


def test_not_diagonalizable_reasons():
    nil = qmat([[0, 1], [0, 0]])
    dec = is_diagonalizable(nil)
    assert not dec.diagonalizable and dec.reason == "GeometricDeficiency"

    rot = qmat([[0, -1], [1, 0]])
    dec = is_diagonalizable(rot)
    assert not dec.diagonalizable and dec.reason == "SpectrumNotInField"
    # the same matrix stays non-diagonalizable over the real algebraics
    dec = is_diagonalizable(rot.retag(R))
    assert not dec.diagonalizable and dec.reason == "SpectrumNotInField"


def test_field_contrast_symmetric():
    A = qmat([[0, 2], [1, 0]])  # eigenvalues +-sqrt(2)
    assert not is_diagonalizable(A).diagonalizable
    dec = is_diagonalizable(A.retag(R))
    assert dec.diagonalizable
    assert A.retag(R) @ dec.Q == dec.Q @ dec.D


def test_simdiag_commuting_pair():
    G = qmat([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    Gi = inverse(G)
    A = G @ Matrix.diagonal(Q, [F(1), F(2), F(2)]) @ Gi
    B = G @ Matrix.diagonal(Q, [F(0), F(3), F(5)]) @ Gi
    assert commute(A, B)
    P = simdiag(A, B)
    Pi = inverse(P)
    assert (Pi @ A @ P).is_diagonal_matrix()
    assert (Pi @ B @ P).is_diagonal_matrix()


def test_simdiag_rejects_noncommuting():
    with pytest.raises(NotCommuting):
        simdiag(qmat([[0, 1], [0, 0]]), qmat([[0, 0], [1, 0]]))


def test_simdiag_family_irrational_spectrum():
    # members with irrational eigenvalues force the algebraic eigen route
    A = Matrix(R, [[0, 2], [1, 0]])
    B = Matrix(R, [[1, 0], [0, 1]])
    P = simdiag_family([A, B])
    Pi = inverse(P)
    assert (Pi @ A @ P).is_diagonal_matrix()


def test_block_image_test_fixture():
    A = Matrix.diagonal(Q, [F(0), F(1)])
    B = qmat([[0]])
    good = Matrix(Q, [[0], [5]])
    bad = Matrix(Q, [[1], [0]])
    assert block_image_test(A, good, B).passed
    rep = block_image_test(A, bad, B)
    assert not rep.passed
    assert field.as_fraction(rep.failing_eigenvalue) == F(0)
    # the failing coupling really breaks diagonalizability of the block form
    assert is_diagonalizable(assemble_block(A, good, B)).diagonalizable
    assert not is_diagonalizable(assemble_block(A, bad, B)).diagonalizable


def _random_diagonalizable(rng, n):
    while True:
        G = qmat([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if rank(G) == n:
            break
    d = [F(rng.randint(-2, 2)) for _ in range(n)]
    return G @ Matrix.diagonal(Q, d) @ inverse(G)


def test_block_test_agrees_with_assembled_matrix():
    rng = random.Random(5)
    agreements = 0
    for _ in range(40):
        A = _random_diagonalizable(rng, 2)
        B = _random_diagonalizable(rng, 2)
        C = qmat([[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)])
        rep = block_image_test(A, C, B)
        dec = is_diagonalizable(assemble_block(A, C, B))
        assert rep.passed == dec.diagonalizable
        agreements += 1
    assert agreements == 40
