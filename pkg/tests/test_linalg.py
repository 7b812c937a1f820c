"""Exact dense linear algebra: elimination, determinants, the left solver."""

from __future__ import annotations

import itertools
import random

import pytest

from convec import field
from convec.errors import DimensionMismatch, IndexOutOfRange
from convec.linalg import (
    Mat,
    det,
    left_kernel,
    minor,
    rank,
    right_kernel,
    solve_right,
)


def _perm_det(a: Mat):
    """Permutation-expansion determinant, the independent oracle."""
    n = a.nrows
    fld = a.field
    total = fld.zero
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n)
                         if perm[i] > perm[j])
        term = fld.one
        for i in range(n):
            term = term * a.data[i][perm[i]]
        total = total + (-term if inversions % 2 else term)
    return total


@pytest.mark.parametrize("p", [2, 3])
def test_det_matches_permutation_expansion(p):
    F = field(p)
    rng = random.Random(40 + p)
    for n in range(1, 7):
        for _ in range(8):
            a = Mat(F, [[F.random_element(rng) for _ in range(n)] for _ in range(n)])
            assert det(a) == _perm_det(a)


def test_det_multiplicative():
    F = field(7)
    rng = random.Random(9)
    for _ in range(25):
        a = Mat(F, [[F.random_element(rng) for _ in range(3)] for _ in range(3)])
        b = Mat(F, [[F.random_element(rng) for _ in range(3)] for _ in range(3)])
        assert det(a * b) == det(a) * det(b)


def test_det_identity_and_empty():
    F = field(5)
    assert det(Mat.identity(F, 4)) == F.one
    assert det(Mat(F, [], 0)) == F.one
    with pytest.raises(DimensionMismatch):
        det(Mat.zeros(F, 2, 3))


def test_minor_validation():
    F = field(2)
    a = Mat.identity(F, 3)
    assert minor(a, [0, 1], [0, 1]) == F.one
    assert minor(a, [0, 1], [1, 2]) == F.zero
    with pytest.raises(DimensionMismatch):
        minor(a, [0, 1], [0])
    with pytest.raises(IndexOutOfRange):
        minor(a, [0, 3], [0, 1])
    with pytest.raises(IndexOutOfRange):
        minor(a, [1, 0], [0, 1])


def test_rank_examples():
    F = field(2)
    g0 = Mat.from_packed(F, [[1, 1, 0, 1, 1], [1, 0, 1, 1, 0]])
    assert rank(g0) == 2
    assert rank(Mat.zeros(F, 3, 4)) == 0
    assert rank(Mat.identity(F, 5)) == 5
    assert rank(Mat.from_packed(F, [[1, 1], [1, 1]])) == 1


def test_solve_unique_known_system():
    # punctured sliding system from a hand-worked GF(2) decode: the solution
    # (1,1,0,0) is forced.
    F = field(2)
    a = Mat.from_packed(F, [
        [1, 1, 1, 1, 1, 1],
        [1, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 0, 1],
        [0, 0, 0, 0, 1, 1],
    ])
    b = Mat.from_packed(F, [[0, 1, 1, 1, 1, 0]])
    res = solve_right(a, b)
    assert res.is_unique
    assert res.solution.to_packed() == [[1, 1, 0, 0]]
    assert res.kernel.nrows == 0
    assert res.solution * a == b


def test_solve_identity():
    F = field(7)
    b = Mat.from_packed(F, [[3, 1, 4], [1, 5, 2]])
    res = solve_right(Mat.identity(F, 3), b)
    assert res.is_unique and res.solution == b


def test_solve_inconsistent():
    F = field(2)
    a = Mat.from_packed(F, [[1, 0], [0, 0]])
    b = Mat.from_packed(F, [[0, 1]])
    assert solve_right(a, b).status == "inconsistent"


def test_solve_underdetermined():
    F = field(2)
    a = Mat.from_packed(F, [[1, 1], [1, 1]])
    b = Mat.from_packed(F, [[1, 1]])
    res = solve_right(a, b)
    assert res.status == "underdetermined"
    assert res.solution * a == b
    assert res.kernel.nrows == 1
    assert (res.kernel * a).is_zero
    # every kernel translate solves too
    sol2 = res.solution + res.kernel
    assert sol2 * a == b


@pytest.mark.parametrize("p,m", [(2, 1), (5, 1), (2, 3)])
def test_solve_random_round_trip(p, m):
    F = field(p, m)
    rng = random.Random(100 * p + m)
    for _ in range(30):
        r = rng.randrange(1, 5)
        c = rng.randrange(1, 6)
        a = Mat(F, [[F.random_element(rng) for _ in range(c)] for _ in range(r)])
        x0 = Mat(F, [[F.random_element(rng) for _ in range(r)]])
        b = x0 * a
        res = solve_right(a, b)
        assert res.status != "inconsistent"
        assert res.solution * a == b
        if res.is_unique:
            assert res.solution == x0
            assert rank(a) == r
        else:
            assert rank(a) < r


def test_kernels():
    F = field(3)
    rng = random.Random(77)
    for _ in range(20):
        r = rng.randrange(1, 5)
        c = rng.randrange(1, 6)
        a = Mat(F, [[F.random_element(rng) for _ in range(c)] for _ in range(r)])
        rk = right_kernel(a)
        assert rk.nrows == a.ncols - rank(a)
        for row in rk.data:
            prod = a * Mat(F, [list(row)]).transpose()
            assert prod.is_zero
        lk = left_kernel(a)
        assert lk.nrows == a.nrows - rank(a)
        if lk.nrows:
            assert (lk * a).is_zero


def test_stack_and_slice():
    F = field(2)
    a = Mat.from_packed(F, [[1, 0], [0, 1]])
    b = Mat.from_packed(F, [[1, 1], [0, 0]])
    assert Mat.hstack([a, b]).to_packed() == [[1, 0, 1, 1], [0, 1, 0, 0]]
    assert Mat.vstack([a, b]).to_packed() == [[1, 0], [0, 1], [1, 1], [0, 0]]
    assert a.transpose().to_packed() == [[1, 0], [0, 1]]
    assert Mat.hstack([a, b]).take_cols([0, 3]).to_packed() == [[1, 1], [0, 0]]
    assert Mat.vstack([a, b]).take_rows([2]).to_packed() == [[1, 1]]


def test_matmul_shapes():
    F = field(2)
    a = Mat.zeros(F, 2, 3)
    b = Mat.zeros(F, 4, 2)
    with pytest.raises(DimensionMismatch):
        a * b
