"""Sliding-window layouts, non-trivial index sets, puncturing."""

from __future__ import annotations

import itertools
import random

import pytest

from convec import field
from convec.errors import (
    BadCardinality,
    BudgetExceeded,
    DimensionMismatch,
    IndexOutOfRange,
)
from convec.linalg import Mat, minor
from convec.polymat import PolyMatrix
from convec.sliding import (
    IndexSet,
    PunctureMask,
    count_bounded,
    count_nontrivial,
    enumerate_bounded,
    enumerate_nontrivial,
    generator_band,
    generator_truncation,
    is_nontrivial_set,
    parity_band,
    parity_truncation,
    puncture,
)


def grid(m: Mat):
    return [[e.val for e in row] for row in m.data]


def flatten(pm: PolyMatrix, lo: int, hi: int):
    """Row-vector coefficients of a 1 x n polynomial vector, blocks lo..hi."""
    return [pm.coeff(i).data[0][c] for i in range(lo, hi + 1)
            for c in range(pm.ncols)]


# ---------------------------------------------------------------------------
# layouts
# ---------------------------------------------------------------------------

def test_generator_truncation_layout(code522):
    g0 = [[1, 1, 0, 1, 1], [1, 0, 1, 1, 0]]
    g1 = [[1, 1, 1, 1, 1], [0, 0, 0, 1, 1]]
    m = generator_truncation(code522.G, 1)
    assert (m.nrows, m.ncols) == (4, 10)
    assert grid(m) == [
        g0[0] + g1[0],
        g0[1] + g1[1],
        [0] * 5 + g0[0],
        [0] * 5 + g0[1],
    ]


def test_generator_band_layout(code522):
    g0 = [[1, 1, 0, 1, 1], [1, 0, 1, 1, 0]]
    g1 = [[1, 1, 1, 1, 1], [0, 0, 0, 1, 1]]
    m = generator_band(code522.G, 1)
    assert (m.nrows, m.ncols) == (6, 10)
    assert grid(m) == [
        g1[0] + [0] * 5,
        g1[1] + [0] * 5,
        g0[0] + g1[0],
        g0[1] + g1[1],
        [0] * 5 + g0[0],
        [0] * 5 + g0[1],
    ]


def test_parity_layouts(pair_2_1, gf2):
    code = pair_2_1(gf2, [1, 1], [1, 0])  # g = (1+z, 1), h = (1, 1+z)
    m = parity_truncation(code.H, 1)
    assert grid(m) == [[1, 1, 0, 0], [0, 1, 1, 1]]
    b = parity_band(code.H, 1)
    assert (b.nrows, b.ncols) == (2, 6)
    assert grid(b) == [[0, 1, 1, 1, 0, 0], [0, 0, 0, 1, 1, 1]]


def test_band_length_override(code522):
    m = generator_band(code522.G, 0, mu=2)
    assert (m.nrows, m.ncols) == (6, 5)
    assert all(e.val == 0 for e in m.data[0]) and all(e.val == 0 for e in m.data[1])
    with pytest.raises(DimensionMismatch):
        generator_band(code522.G, 0, mu=0)
    with pytest.raises(DimensionMismatch):
        parity_band(code522.G, 0, nu=0)


def test_truncation_is_windowed_encoding(code522, msg522):
    # stacking the first j+1 coefficients of u against G_j^c reproduces the
    # first j+1 codeword blocks, for every window length
    v = code522.encode(msg522)
    for j in range(5):
        m = generator_truncation(code522.G, j)
        ubar = Mat.row_vector(code522.field, flatten(msg522, 0, j))
        assert (ubar * m).data[0] == flatten(v, 0, j)


def test_band_maps_history_and_window(code522, msg522):
    # rows of the band correspond to u_{t-mu} .. u_{t+j}; the product gives
    # the codeword window v_t .. v_{t+j}
    v = code522.encode(msg522)
    f = code522.field
    for t, j in [(1, 0), (1, 2), (2, 1)]:
        b = generator_band(code522.G, j)
        ubar = Mat.row_vector(f, flatten(msg522, t - 1, t + j))
        assert (ubar * b).data[0] == flatten(v, t, t + j)


def test_parity_band_annihilates_codewords(pair_2_1, gf2):
    code = pair_2_1(gf2, [1, 1, 1], [1, 0, 1])  # degree 2 pair
    rng = random.Random(7)
    for _ in range(10):
        u = PolyMatrix.from_packed(gf2, [[[rng.randrange(2)]] for _ in range(5)])
        v = code.encode(u)
        for t, j in [(2, 0), (2, 1), (3, 0)]:
            b = parity_band(code.H, j)
            vbar = Mat.row_vector(gf2, flatten(v, t - 2, t + j))
            assert (b * vbar.transpose()).is_zero


# ---------------------------------------------------------------------------
# non-trivial index sets
# ---------------------------------------------------------------------------

def test_known_generator_sets():
    # (n, k, mu, j) = (3, 1, 1, 1): sets of size 4 out of 9 columns with
    # l_1 <= 3, l_2 <= 6, l_3 >= 4, l_4 >= 7
    yes = [(1, 5, 6, 9), (1, 4, 7, 8), (2, 3, 4, 7), (3, 6, 7, 9)]
    no = [(1, 2, 3, 4), (4, 5, 6, 7), (1, 2, 3, 9), (1, 7, 8, 9)]
    for t in yes:
        assert is_nontrivial_set(IndexSet("generator", t), 3, 1, 1, 1)
    for t in no:
        assert not is_nontrivial_set(IndexSet("generator", t), 3, 1, 1, 1)


def test_known_parity_sets():
    # (n, k, nu, j) = (3, 2, 2, 1): pairs out of 12 columns with
    # l_1 <= 9 and l_2 >= 4
    assert is_nontrivial_set(IndexSet("parity", (1, 4)), 3, 2, 2, 1)
    assert is_nontrivial_set(IndexSet("parity", (9, 12)), 3, 2, 2, 1)
    assert not is_nontrivial_set(IndexSet("parity", (1, 2)), 3, 2, 2, 1)
    assert not is_nontrivial_set(IndexSet("parity", (10, 11)), 3, 2, 2, 1)


def test_index_set_validation():
    with pytest.raises(IndexOutOfRange):
        IndexSet("generator", (1, 1, 2, 3))
    with pytest.raises(BadCardinality):
        is_nontrivial_set(IndexSet("generator", (1, 2, 3)), 3, 1, 1, 1)
    with pytest.raises(IndexOutOfRange):
        is_nontrivial_set(IndexSet("generator", (1, 2, 3, 10)), 3, 1, 1, 1)
    with pytest.raises(ValueError):
        count_nontrivial("other", 3, 1, 1, 1)


@pytest.mark.parametrize("kind,n,k,deg,j", [
    ("generator", 3, 1, 1, 1),
    ("generator", 2, 1, 1, 2),
    ("parity", 3, 2, 2, 1),
    ("parity", 3, 1, 1, 2),
])
def test_enumeration_matches_filter(kind, n, k, deg, j):
    if kind == "generator":
        size, ncols = (j + 1 + 2 * deg) * k, n * (j + 1 + deg)
    else:
        size, ncols = (j + 1) * (n - k), (j + 1 + deg) * n
    brute = [c for c in itertools.combinations(range(1, ncols + 1), size)
             if is_nontrivial_set(IndexSet(kind, c), n, k, deg, j)]
    got = [s.indices for s in enumerate_nontrivial(kind, n, k, deg, j)]
    assert got == brute  # same sets, lexicographic order
    assert count_nontrivial(kind, n, k, deg, j) == len(brute)


def test_bounded_count_random_property():
    rng = random.Random(31)
    for _ in range(40):
        ncols = rng.randrange(1, 13)
        size = rng.randrange(0, min(ncols, 6) + 1)
        lo = {p: rng.randrange(1, ncols + 1) for p in range(1, size + 1)
              if rng.random() < 0.4}
        hi = {p: rng.randrange(1, ncols + 1) for p in range(1, size + 1)
              if rng.random() < 0.4}
        got = list(enumerate_bounded(size, ncols, lo, hi))
        brute = [c for c in itertools.combinations(range(1, ncols + 1), size)
                 if all(c[p - 1] >= v for p, v in lo.items())
                 and all(c[p - 1] <= v for p, v in hi.items())]
        assert got == brute
        assert count_bounded(size, ncols, lo, hi) == len(brute)


def test_enumeration_budget():
    n, k, delta = 3, 1, 18
    j = 2 * delta + 9  # window deep enough to blow past any sane budget
    count = count_nontrivial("parity", n, k, delta, j)
    assert count > 10 ** 7
    with pytest.raises(BudgetExceeded) as ei:
        enumerate_nontrivial("parity", n, k, delta, j)
    assert ei.value.estimate == count
    # an explicit budget large enough lets the same enumeration start
    it = enumerate_nontrivial("parity", 3, 1, 1, 1, budget=10 ** 9)
    assert next(it).indices[0] == 1


def test_enumeration_budget_env(monkeypatch):
    monkeypatch.setenv("CONVEC_BUDGET", "5")
    with pytest.raises(BudgetExceeded):
        enumerate_nontrivial("generator", 3, 1, 1, 1)
    monkeypatch.setenv("CONVEC_BUDGET", "1000")
    assert len(list(enumerate_nontrivial("generator", 3, 1, 1, 1))) == 90


def test_trivial_sets_are_structurally_zero():
    # sets rejected by the bounds must give a singular submatrix for every
    # coefficient choice; try random matrices over a couple of fields
    rng = random.Random(11)
    for fld in (field(2), field(3), field(7)):
        n, k, mu, j = 3, 1, 1, 1
        for _ in range(6):
            grids = [[[rng.randrange(fld.q) for _ in range(n)]]
                     for _ in range(mu + 1)]
            g = PolyMatrix.from_packed(fld, grids)
            band = generator_band(g, j + mu, mu=mu)
            rows = list(range(band.nrows))
            for cols in itertools.combinations(range(1, band.ncols + 1), band.nrows):
                if is_nontrivial_set(IndexSet("generator", cols), n, k, mu, j):
                    continue
                assert minor(band, rows, [c - 1 for c in cols]).val == 0


def test_trivial_parity_sets_are_structurally_zero():
    rng = random.Random(13)
    fld = field(5)
    n, k, nu, j = 3, 2, 1, 1
    for _ in range(6):
        grids = [[[rng.randrange(5) for _ in range(n)] for _ in range(n - k)]
                 for _ in range(nu + 1)]
        h = PolyMatrix.from_packed(fld, grids)
        band = parity_band(h, j, nu=nu)
        rows = list(range(band.nrows))
        for cols in itertools.combinations(range(1, band.ncols + 1), band.nrows):
            if is_nontrivial_set(IndexSet("parity", cols), n, k, nu, j):
                continue
            assert minor(band, rows, [c - 1 for c in cols]).val == 0


def test_nontrivial_sets_are_realizable():
    # every accepted set admits coefficients with a nonzero minor; over a
    # large field a few random draws find one with high probability
    rng = random.Random(17)
    fld = field(251)
    n, k, mu, j = 3, 1, 1, 1
    for iset in enumerate_nontrivial("generator", n, k, mu, j):
        cols = [c - 1 for c in iset.indices]
        hit = False
        for _ in range(6):
            grids = [[[rng.randrange(251) for _ in range(n)]] for _ in range(mu + 1)]
            band = generator_band(PolyMatrix.from_packed(fld, grids), j + mu, mu=mu)
            if minor(band, list(range(band.nrows)), cols).val != 0:
                hit = True
                break
        assert hit, f"no witness for {iset.indices}"


# ---------------------------------------------------------------------------
# puncturing
# ---------------------------------------------------------------------------

def test_puncture_reference_window(code522):
    # erasing positions {3, 4, 6, 10} of the 4 x 10 two-block window leaves
    # the system whose unique solution is pinned in the linear algebra tests
    mask = PunctureMask.of(10, {3, 4, 6, 10})
    assert mask.kept == (1, 2, 5, 7, 8, 9)
    m = puncture(generator_truncation(code522.G, 1), mask)
    assert grid(m) == [
        [1, 1, 1, 1, 1, 1],
        [1, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 0, 1],
        [0, 0, 0, 0, 1, 1],
    ]


def test_puncture_validation(code522):
    with pytest.raises(IndexOutOfRange):
        PunctureMask.of(10, {0})
    with pytest.raises(IndexOutOfRange):
        PunctureMask.of(10, {11})
    with pytest.raises(DimensionMismatch):
        puncture(generator_truncation(code522.G, 1), PunctureMask.of(5, {1}))


def test_mask_composition():
    a = PunctureMask.of(6, {2, 5})       # keeps 1 3 4 6
    b = PunctureMask.of(4, {3})          # drops the survivor "4"
    assert a.compose(b).erased == frozenset({2, 4, 5})
    with pytest.raises(DimensionMismatch):
        a.compose(PunctureMask.of(3, {1}))
