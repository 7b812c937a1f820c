"""Sliding-window matrices and the index sets whose minors decide optimality.

Column indices in this module are 1-based, matching the inequality arithmetic
the index-set criteria are stated in; they are converted to 0-based only at
the matrix-slicing boundary.

Four block layouts are built from a k x n generator G of degree mu or an
(n-k) x n parity check H of degree nu:

  generator_truncation(G, j)   (j+1)k     x (j+1)n      upper block triangular
  parity_truncation(H, j)      (j+1)(n-k) x (j+1)n      lower block triangular
  parity_band(H, j)            (j+1)(n-k) x (j+1+nu)n   rows slide [H_nu .. H_0]
  generator_band(G, j)         (j+1+mu)k  x (j+1)n      columns stack [G_mu .. G_0]

A full-size minor of a band matrix is "trivially zero" when its column set
forces a short row set against the band's zero pattern regardless of the
coefficient values.  The predicates below characterize the complementary
(non-trivial) column sets by per-position interval constraints, which is also
what makes counting and lexicographic enumeration cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from . import budget as _budget
from .errors import (
    BadCardinality,
    BudgetExceeded,
    DimensionMismatch,
    IndexOutOfRange,
)
from .linalg import Mat
from .polymat import PolyMatrix

ENUM_BUDGET_DEFAULT = 10_000_000


# ---------------------------------------------------------------------------
# block layouts
# ---------------------------------------------------------------------------

def _block_grid(pm: PolyMatrix, block_rows: int, block_cols: int, coeff_at) -> Mat:
    """Assemble a block matrix; coeff_at(r, c) names the coefficient index or None."""
    fld = pm.field
    br, bc = pm.nrows, pm.ncols
    zero = fld.zero
    data = []
    for r in range(block_rows):
        rows = [[zero] * (block_cols * bc) for _ in range(br)]
        for c in range(block_cols):
            i = coeff_at(r, c)
            if i is None:
                continue
            blk = pm.coeff(i)
            if blk.is_zero:
                continue
            off = c * bc
            for ii in range(br):
                src = blk.data[ii]
                dst = rows[ii]
                for jj in range(bc):
                    dst[off + jj] = src[jj]
        data.extend(rows)
    return Mat(fld, data, block_cols * bc)


def generator_truncation(g: PolyMatrix, j: int) -> Mat:
    """(j+1)k x (j+1)n matrix taking (u_0..u_j) to (v_0..v_j)."""
    mu = g.degree
    return _block_grid(g, j + 1, j + 1,
                       lambda r, c: c - r if 0 <= c - r <= mu else None)


def parity_truncation(h: PolyMatrix, j: int) -> Mat:
    """(j+1)(n-k) x (j+1)n lower block triangular parity window."""
    nu = h.degree
    return _block_grid(h, j + 1, j + 1,
                       lambda r, c: r - c if 0 <= r - c <= nu else None)


def parity_band(h: PolyMatrix, j: int, nu: int | None = None) -> Mat:
    """(j+1)(n-k) x (j+1+nu)n band; block row i is [H_nu ... H_0] at offset i."""
    nu = h.degree if nu is None else nu
    if nu < h.degree:
        raise DimensionMismatch("band length below the actual degree")
    return _block_grid(h, j + 1, j + 1 + nu,
                       lambda r, c: nu - (c - r) if 0 <= c - r <= nu else None)


def generator_band(g: PolyMatrix, j: int, mu: int | None = None) -> Mat:
    """(j+1+mu)k x (j+1)n band; block column c is [G_mu ... G_0] at offset c.

    Row block r corresponds to the message coefficient u_{t-mu+r} when the
    window covers codeword blocks v_t .. v_{t+j}.
    """
    mu = g.degree if mu is None else mu
    if mu < g.degree:
        raise DimensionMismatch("band length below the actual degree")
    return _block_grid(g, j + 1 + mu, j + 1,
                       lambda r, c: mu - (r - c) if 0 <= r - c <= mu else None)


# ---------------------------------------------------------------------------
# bounded increasing index tuples (the enumeration backbone)
# ---------------------------------------------------------------------------

def tighten_bounds(size: int, ncols: int, lo: dict[int, int], hi: dict[int, int]):
    """Per-position inclusive bounds for strictly increasing 1-based tuples."""
    lo_arr = [0] * (size + 1)
    hi_arr = [0] * (size + 2)
    prev = 0
    for pos in range(1, size + 1):
        prev = max(prev + 1, lo.get(pos, 1))
        lo_arr[pos] = prev
    nxt = ncols + 1
    hi_arr[size + 1] = ncols + 1
    for pos in range(size, 0, -1):
        nxt = min(nxt - 1, hi.get(pos, ncols))
        hi_arr[pos] = nxt
    return lo_arr, hi_arr


def count_bounded(size: int, ncols: int, lo: dict[int, int], hi: dict[int, int]) -> int:
    """Number of strictly increasing tuples obeying the position bounds."""
    if size == 0:
        return 1
    lo_arr, hi_arr = tighten_bounds(size, ncols, lo, hi)
    if any(lo_arr[p] > hi_arr[p] for p in range(1, size + 1)):
        return 0
    # ways[v] = completions of positions pos..size given l_pos = v; entries
    # outside the position's bounds stay zero, so suffix sums need no clipping
    ways = [0] * (ncols + 2)
    for v in range(lo_arr[size], hi_arr[size] + 1):
        ways[v] = 1
    for pos in range(size - 1, 0, -1):
        new = [0] * (ncols + 2)
        run = 0
        for v in range(ncols, 0, -1):
            run += ways[v + 1]
            if lo_arr[pos] <= v <= hi_arr[pos]:
                new[v] = run
        ways = new
    return sum(ways)


def enumerate_bounded(size: int, ncols: int, lo: dict[int, int],
                      hi: dict[int, int]) -> Iterator[tuple[int, ...]]:
    """Strictly increasing bounded tuples in lexicographic order."""
    if size == 0:
        yield ()
        return
    lo_arr, hi_arr = tighten_bounds(size, ncols, lo, hi)

    def rec(pos: int, start: int, acc: list[int]):
        if pos > size:
            yield tuple(acc)
            return
        for v in range(max(start, lo_arr[pos]), hi_arr[pos] + 1):
            acc.append(v)
            yield from rec(pos + 1, v + 1, acc)
            acc.pop()

    yield from rec(1, 1, [])


# ---------------------------------------------------------------------------
# non-trivial column sets of the band matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndexSet:
    """A 1-based strictly increasing column set tagged with its band kind."""

    kind: str  # "generator" or "parity"
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = self.indices
        if any(idx[i] >= idx[i + 1] for i in range(len(idx) - 1)):
            raise IndexOutOfRange("indices must be strictly increasing")

    def zero_based(self) -> tuple[int, ...]:
        return tuple(i - 1 for i in self.indices)


def generator_set_bounds(n: int, k: int, mu: int, j: int):
    """Bounds for non-trivial sets of the depth mu+j generator band.

    The band has (j+1+2*mu)k rows and n(j+1+mu) columns; a column set of full
    row size avoids structural zeros exactly when, for every s = 1..j+mu, at
    most sk of its members sit in the first sn columns and at least (mu+s)k
    of them sit in the first sn columns' complement, i.e. l_{sk} <= sn and
    l_{(mu+s)k+1} >= sn+1.
    """
    size = (j + 1 + 2 * mu) * k
    ncols = n * (j + 1 + mu)
    lo: dict[int, int] = {}
    hi: dict[int, int] = {}
    for s in range(1, j + mu + 1):
        hi[s * k] = s * n
        lo[(mu + s) * k + 1] = s * n + 1
    return size, ncols, lo, hi


def parity_set_bounds(n: int, k: int, nu: int, j: int):
    """Bounds for non-trivial sets of the depth j parity band.

    Size (j+1)(n-k) out of (j+1+nu)n columns with, for s = 1..j,
    l_{(n-k)s+1} >= sn+1 and l_{(n-k)s} <= n(s+nu).
    """
    size = (j + 1) * (n - k)
    ncols = (j + 1 + nu) * n
    lo: dict[int, int] = {}
    hi: dict[int, int] = {}
    for s in range(1, j + 1):
        lo[(n - k) * s + 1] = s * n + 1
        hi[(n - k) * s] = n * (s + nu)
    return size, ncols, lo, hi


def _bounds_for(kind: str, n: int, k: int, deg: int, j: int):
    if kind == "generator":
        return generator_set_bounds(n, k, deg, j)
    if kind == "parity":
        return parity_set_bounds(n, k, deg, j)
    raise ValueError(f"unknown index set kind {kind!r}")


def _check_members(indices, size: int, ncols: int, kind: str):
    if len(indices) != size:
        raise BadCardinality(f"{kind} set needs {size} indices, got {len(indices)}")
    if indices and (indices[0] < 1 or indices[-1] > ncols):
        raise IndexOutOfRange(f"indices must lie in 1..{ncols}")


def is_nontrivial_set(iset: IndexSet, n: int, k: int, deg: int, j: int) -> bool:
    size, ncols, lo, hi = _bounds_for(iset.kind, n, k, deg, j)
    idx = iset.indices
    _check_members(idx, size, ncols, iset.kind)
    ok_lo = all(idx[pos - 1] >= v for pos, v in lo.items())
    return ok_lo and all(idx[pos - 1] <= v for pos, v in hi.items())


def count_nontrivial(kind: str, n: int, k: int, deg: int, j: int) -> int:
    size, ncols, lo, hi = _bounds_for(kind, n, k, deg, j)
    return count_bounded(size, ncols, lo, hi)


def enumerate_nontrivial(kind: str, n: int, k: int, deg: int, j: int,
                         budget: int | None = None) -> Iterator[IndexSet]:
    """Non-trivial column sets in lexicographic order.

    The count is computed up front; if it exceeds the budget (argument, then
    CONVEC_BUDGET, then the module default) nothing is enumerated.
    """
    size, ncols, lo, hi = _bounds_for(kind, n, k, deg, j)
    total = count_bounded(size, ncols, lo, hi)
    cap = _budget.resolve(budget, ENUM_BUDGET_DEFAULT)
    if total > cap:
        raise BudgetExceeded(
            f"{total} {kind} sets exceed the budget of {cap}", estimate=total)
    return (IndexSet(kind, t) for t in enumerate_bounded(size, ncols, lo, hi))


# ---------------------------------------------------------------------------
# puncturing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PunctureMask:
    """Erased column positions (1-based) out of a given column count."""

    total: int
    erased: frozenset[int]

    def __post_init__(self):
        if self.total < 0:
            raise DimensionMismatch("column count must be nonnegative")
        bad = [i for i in self.erased if not 1 <= i <= self.total]
        if bad:
            raise IndexOutOfRange(f"erased positions {sorted(bad)} outside 1..{self.total}")

    @classmethod
    def of(cls, total: int, erased) -> "PunctureMask":
        return cls(total, frozenset(erased))

    @property
    def kept(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.total + 1) if i not in self.erased)

    def compose(self, other: "PunctureMask") -> "PunctureMask":
        """Erasing under self, then erasing positions of the survivors."""
        kept = self.kept
        if other.total != len(kept):
            raise DimensionMismatch("mask sizes do not chain")
        extra = {kept[i - 1] for i in other.erased}
        return PunctureMask(self.total, self.erased | extra)


def puncture(a: Mat, mask: PunctureMask) -> Mat:
    """Keep the surviving columns of a, in order."""
    if a.ncols != mask.total:
        raise DimensionMismatch(f"mask covers {mask.total} columns, matrix has {a.ncols}")
    return a.take_cols([i - 1 for i in mask.kept])
