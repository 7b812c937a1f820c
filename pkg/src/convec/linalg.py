"""Dense exact linear algebra over a finite field.

Matrices are lists of rows of field Elements.  Everything is exact; there is
no pivoting strategy beyond "first nonzero", which is all a field needs.

The solver convention matches how the rest of the package states systems:
``solve_right(A, B)`` solves X * A = B for the row vector(s) X, i.e. the
unknowns multiply A from the left.  Uniqueness is therefore equivalent to A
having full row rank.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, FieldMismatch, IndexOutOfRange
from .gf import Element, Field


class Mat:
    __slots__ = ("field", "nrows", "ncols", "data")

    def __init__(self, field: Field, data: list[list[Element]], ncols: int | None = None):
        self.field = field
        self.data = data
        self.nrows = len(data)
        if self.nrows:
            self.ncols = len(data[0])
        elif ncols is not None:
            self.ncols = ncols
        else:
            self.ncols = 0
        for row in data:
            if len(row) != self.ncols:
                raise DimensionMismatch("ragged rows")
            for e in row:
                if not isinstance(e, Element) or e.field != field:
                    raise FieldMismatch("matrix entry from a different field")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Mat":
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        out = cls.zeros(field, n, n)
        for i in range(n):
            out.data[i][i] = field.one
        return out

    @classmethod
    def from_packed(cls, field: Field, grid) -> "Mat":
        """Rows of packed integer values; convenient in tests and fixtures."""
        return cls(field, [[field.el(v) for v in row] for row in grid],
                   len(grid[0]) if grid else 0)

    @classmethod
    def row_vector(cls, field: Field, entries) -> "Mat":
        return cls(field, [list(entries)])

    @classmethod
    def hstack(cls, blocks: list["Mat"]) -> "Mat":
        if not blocks:
            raise DimensionMismatch("nothing to stack")
        nrows = blocks[0].nrows
        if any(b.nrows != nrows for b in blocks):
            raise DimensionMismatch("hstack with differing row counts")
        data = [[e for b in blocks for e in b.data[i]] for i in range(nrows)]
        return cls(blocks[0].field, data, sum(b.ncols for b in blocks))

    @classmethod
    def vstack(cls, blocks: list["Mat"]) -> "Mat":
        if not blocks:
            raise DimensionMismatch("nothing to stack")
        ncols = blocks[0].ncols
        if any(b.ncols != ncols for b in blocks):
            raise DimensionMismatch("vstack with differing column counts")
        data = [list(row) for b in blocks for row in b.data]
        return cls(blocks[0].field, data, ncols)

    # -- basic ops ---------------------------------------------------------

    def copy(self) -> "Mat":
        return Mat(self.field, [list(r) for r in self.data], self.ncols)

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field == other.field
                and self.nrows == other.nrows and self.ncols == other.ncols
                and self.data == other.data)

    def __add__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat(self.field,
                   [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
                   self.ncols)

    def __sub__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat(self.field,
                   [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
                   self.ncols)

    def __neg__(self) -> "Mat":
        return Mat(self.field, [[-a for a in row] for row in self.data], self.ncols)

    def __mul__(self, other: "Mat") -> "Mat":
        if not isinstance(other, Mat):
            return NotImplemented
        if self.ncols != other.nrows:
            raise DimensionMismatch(
                f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        zero = self.field.zero
        ot = other.data
        out = []
        for row in self.data:
            acc = [zero] * other.ncols
            for j, a in enumerate(row):
                if a.is_zero:
                    continue
                orow = ot[j]
                acc = [s + a * b for s, b in zip(acc, orow)]
            out.append(acc)
        return Mat(self.field, out, other.ncols)

    def scale(self, c: Element) -> "Mat":
        return Mat(self.field, [[c * a for a in row] for row in self.data], self.ncols)

    def transpose(self) -> "Mat":
        if self.nrows == 0:
            # keep the column count as the new row count
            return Mat(self.field, [[] for _ in range(self.ncols)], 0)
        return Mat(self.field, [list(col) for col in zip(*self.data)], self.nrows)

    def take_rows(self, idx) -> "Mat":
        return Mat(self.field, [list(self.data[i]) for i in idx], self.ncols)

    def take_cols(self, idx) -> "Mat":
        return Mat(self.field, [[row[j] for j in idx] for row in self.data], len(list(idx)))

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for row in self.data for e in row)

    def to_packed(self):
        return [[e.val for e in row] for row in self.data]

    def __repr__(self):
        return f"Mat({self.field!r}, {self.nrows}x{self.ncols})"

    def _same_shape(self, other: "Mat"):
        if not isinstance(other, Mat):
            raise TypeError("expected Mat")
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise DimensionMismatch("shape mismatch")


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------

def _rref(data: list[list[Element]], ncols: int) -> list[tuple[int, int]]:
    """In-place reduced row echelon form; returns (row, col) pivot pairs."""
    pivots = []
    r = 0
    nrows = len(data)
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if not data[i][c].is_zero:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            data[pr], data[r] = data[r], data[pr]
        inv = data[r][c].inverse()
        data[r] = [inv * e for e in data[r]]
        for i in range(nrows):
            if i != r and not data[i][c].is_zero:
                f = data[i][c]
                data[i] = [a - f * b for a, b in zip(data[i], data[r])]
        pivots.append((r, c))
        r += 1
        if r == nrows:
            break
    return pivots


def rank(a: Mat) -> int:
    work = [list(row) for row in a.data]
    return len(_rref(work, a.ncols))


def det(a: Mat) -> Element:
    if a.nrows != a.ncols:
        raise DimensionMismatch("determinant of a non-square matrix")
    n = a.nrows
    fld = a.field
    if n == 0:
        return fld.one
    work = [list(row) for row in a.data]
    acc = fld.one
    negate = False
    for c in range(n):
        pr = None
        for i in range(c, n):
            if not work[i][c].is_zero:
                pr = i
                break
        if pr is None:
            return fld.zero
        if pr != c:
            work[pr], work[c] = work[c], work[pr]
            negate = not negate
        piv = work[c][c]
        acc = acc * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            if not work[i][c].is_zero:
                f = work[i][c] * inv
                work[i] = [x - f * y for x, y in zip(work[i], work[c])]
    return -acc if negate else acc


def minor(a: Mat, rows, cols) -> Element:
    """Determinant of the submatrix at the given 0-based row/column indices."""
    rows = list(rows)
    cols = list(cols)
    if len(rows) != len(cols):
        raise DimensionMismatch("minor needs equally many rows and columns")
    for name, idx, n in (("row", rows, a.nrows), ("column", cols, a.ncols)):
        if any(not (0 <= i < n) for i in idx):
            raise IndexOutOfRange(f"{name} index out of range")
        if any(x >= y for x, y in zip(idx, idx[1:])):
            raise IndexOutOfRange(f"{name} indices must be strictly increasing")
    sub = Mat(a.field, [[a.data[i][j] for j in cols] for i in rows], len(cols))
    return det(sub)


# ---------------------------------------------------------------------------
# solving X * A = B
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolveResult:
    """Outcome of solve_right.

    status:   "unique" | "underdetermined" | "inconsistent"
    solution: a particular X with X*A = B (None when inconsistent)
    kernel:   rows spanning {w : w*A = 0}; zero rows exactly when unique
    """

    status: str
    solution: Mat | None
    kernel: Mat | None

    @property
    def is_unique(self) -> bool:
        return self.status == "unique"


def solve_right(a: Mat, b: Mat) -> SolveResult:
    """Solve X * A = B exactly.  A is r x c, B is t x c, X is t x r."""
    if a.field != b.field:
        raise FieldMismatch("A and B over different fields")
    if a.ncols != b.ncols:
        raise DimensionMismatch(
            f"A has {a.ncols} columns but B has {b.ncols}")
    fld = a.field
    r, t = a.nrows, b.nrows
    # work on [A^T | B^T], shape c x (r + t)
    at = a.transpose()
    bt = b.transpose()
    work = [list(ra) + list(rb) for ra, rb in zip(at.data, bt.data)]
    if not work:
        work = []
    pivots = _rref(work, r + t)
    piv_of_col = {c: rr for rr, c in pivots}
    for rr, c in pivots:
        if c >= r:
            return SolveResult("inconsistent", None, None)
    # particular solution: pivot variables take the reduced rhs, free ones 0
    zero = fld.zero
    sol_cols = [[zero] * t for _ in range(r)]  # indexed [var][rhs]
    for rr, c in pivots:
        for ti in range(t):
            sol_cols[c][ti] = work[rr][r + ti]
    solution = Mat(fld, [[sol_cols[v][ti] for v in range(r)] for ti in range(t)], r)
    free = [v for v in range(r) if v not in piv_of_col]
    kern_rows = []
    for fv in free:
        vec = [zero] * r
        vec[fv] = fld.one
        for rr, c in pivots:
            vec[c] = -work[rr][fv]
        kern_rows.append(vec)
    kernel = Mat(fld, kern_rows, r)
    status = "unique" if not free else "underdetermined"
    return SolveResult(status, solution, kernel)


def right_kernel(a: Mat) -> Mat:
    """Rows w with A * w^T = 0 (a basis of the right null space)."""
    work = [list(row) for row in a.data]
    pivots = _rref(work, a.ncols)
    piv_cols = {c for _, c in pivots}
    fld = a.field
    zero = fld.zero
    rows = []
    for fv in range(a.ncols):
        if fv in piv_cols:
            continue
        vec = [zero] * a.ncols
        vec[fv] = fld.one
        for rr, c in pivots:
            vec[c] = -work[rr][fv]
        rows.append(vec)
    return Mat(fld, rows, a.ncols)


def left_kernel(a: Mat) -> Mat:
    return right_kernel(a.transpose())
