from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_rank
from vkit.qlinalg import (
    EchelonBasis,
    Inconsistent,
    LinalgError,
    SparseMatrix,
    in_span,
    quotient_dim,
    rank,
    rref,
    solve_affine,
)


def M(rows):
    return SparseMatrix.from_rows(rows, len(rows[0]))


def test_identity_rref():
    R, r, piv = rref(SparseMatrix.identity(2))
    assert r == 2 and piv == [0, 1]
    assert R == SparseMatrix.identity(2)


def test_proportional_rows():
    assert rank(M([[1, 2], [2, 4]])) == 1


def test_random_rational_matrix_against_dense_oracle():
    rng = random.Random(0)
    rows = [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(8)] for _ in range(8)]
    assert rank(M(rows)) == dense_rank(rows)
    assert rref(M(rows))[1] == dense_rank(rows)


small = st.integers(1, 12).flatmap(
    lambda r: st.integers(1, 12).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=60, deadline=None)
@given(small)
def test_rank_matches_dense(rows):
    A = M(rows)
    R, r, piv = rref(A)
    assert r == dense_rank(rows)
    # a projection: applying again changes nothing
    assert rref(R)[0] == R
    # threads do not change the answer
    assert rref(A, threads=2)[0] == R
    assert rref(A, threads=8)[0] == R


@settings(max_examples=60, deadline=None)
@given(small, st.randoms(use_true_random=False))
def test_solve_affine_consistent(rows, rnd):
    A = M(rows)
    x0 = [rnd.randint(-3, 3) for _ in range(A.cols)]
    b = A.matvec(x0)
    x = solve_affine(A, b)
    assert not isinstance(x, Inconsistent)
    assert A.matvec(x) == b


def test_solve_identity_and_free_zero():
    b = [Fraction(3), Fraction(-1, 2)]
    assert solve_affine(SparseMatrix.identity(2), b) == b
    assert solve_affine(M([[1, 1]]), [2]) == [2, 0]


def test_inconsistent_certificate():
    A = M([[1, 1], [2, 2]])
    res = solve_affine(A, [1, 3])
    assert isinstance(res, Inconsistent)
    assert res.verify(A, [1, 3])
    yA = [sum(res.y[r] * A.to_dense()[r][c] for r in range(2)) for c in range(2)]
    assert yA == [0, 0]
    assert res.y[0] * 1 + res.y[1] * 3 != 0


def test_quotient_and_span():
    assert quotient_dim(5, []) == 5
    assert quotient_dim(3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 0
    # degree-2 chord diagrams "1 1 2 2", "1 2 1 2"; FI kills the first
    assert quotient_dim(2, [[1, 0]]) == 1
    r1, r2 = [1, 2, 0], [0, 1, 1]
    assert in_span([0, 0, 0], [r1, r2])
    assert in_span([1, 5, 3], [r1, r2])
    assert not in_span([1, 0, 0], [], length=3)


def test_length_mismatch():
    with pytest.raises(LinalgError):
        quotient_dim(2, [[1, 2, 3]])


def test_text_roundtrip():
    A = M([[Fraction(1, 3), 0, 2], [0, 0, Fraction(-5, 7)]])
    assert SparseMatrix.from_text(A.to_text()) == A


def test_reduce_full_is_class_function():
    eb = EchelonBasis(4)
    eb.add({0: 1, 1: 1})
    eb.add({1: 2, 3: -1})
    v = {0: 3, 2: 1}
    w = dict(v)
    w[0] = w.get(0, 0) + 5
    w[1] = w.get(1, 0) + 5  # v + 5 * first row
    assert eb.reduce_full(v) == eb.reduce_full(w)
    assert eb.contains({0: 2, 1: 4, 3: -1})
    assert not eb.contains({2: 1})
