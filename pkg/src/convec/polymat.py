"""Polynomial matrices over a finite field and the code object built on them.

A PolyMatrix is a finite list of coefficient matrices [C_0, ..., C_d] with
C_d nonzero (empty list for the zero matrix).  A message or codeword is just
a 1 x s PolyMatrix.  ConvCode bundles a k x n generator with an optional
(n-k) x n parity check and derives its invariants once at construction.

The external degree (the "delta" of an (n, k, delta) code) is the maximal
degree of the full-size minors of G.  It is computed exactly by one of two
routes: evaluation/interpolation at delta_max + 1 points when the field has
enough of them, and fraction-free (Bareiss) elimination over F[z] otherwise.
Both are exact; the former avoids intermediate polynomial blowup on the big
fields the constructions live in.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    DegreeMismatch,
    DimensionMismatch,
    DivisionByZero,
    FieldMismatch,
    RankDeficient,
)
from .gf import Element, Field
from .linalg import Mat, det, rank


# ---------------------------------------------------------------------------
# scalar polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Polynomial over a field; coefficient tuple, constant term first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, field: Field) -> "Poly":
        return cls(field, ())

    @classmethod
    def one(cls, field: Field) -> "Poly":
        return cls(field, (field.one,))

    @classmethod
    def from_packed(cls, field: Field, vals) -> "Poly":
        return cls(field, [field.el(v) for v in vals])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Element:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field,
                    [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __sub__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field,
                    [self.coeff(i) - other.coeff(i) for i in range(n)])

    def __neg__(self) -> "Poly":
        return Poly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return Poly.zero(self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero:
            raise DivisionByZero("polynomial division by zero")
        db = other.degree
        if self.degree < db:
            return Poly.zero(self.field), self
        rem = list(self.coeffs)
        inv = other.coeffs[-1].inverse()
        quot = [self.field.zero] * (self.degree - db + 1)
        while rem and len(rem) - 1 >= db:
            d = len(rem) - 1 - db
            c = rem[-1] * inv
            quot[d] = c
            for i, oc in enumerate(other.coeffs):
                rem[d + i] = rem[d + i] - c * oc
            rem.pop()  # leading term cancels by construction
            while rem and rem[-1].is_zero:
                rem.pop()
        return Poly(self.field, quot), Poly(self.field, rem)

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise DegreeMismatch("division expected to be exact was not")
        return q

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        inv = self.coeffs[-1].inverse()
        return Poly(self.field, [c * inv for c in self.coeffs])

    def eval(self, x: Element) -> Element:
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field.p, self.field.m, tuple(c.val for c in self.coeffs)))

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        return "Poly(" + " + ".join(
            f"{c.to_hex()}z^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero) + ")"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero:
        a, b = b, divmod(a, b)[1]
    return a.monic()


def interpolate(field: Field, points, values) -> Poly:
    """Lagrange interpolation through (points[i], values[i])."""
    n = len(points)
    if len(values) != n:
        raise DimensionMismatch("points and values differ in length")
    acc = Poly.zero(field)
    for i in range(n):
        num = Poly.one(field)
        denom = field.one
        for j in range(n):
            if j == i:
                continue
            num = num * Poly(field, (-points[j], field.one))
            denom = denom * (points[i] - points[j])
        scale = values[i] * denom.inverse()
        acc = acc + Poly(field, [c * scale for c in num.coeffs])
    return acc


# ---------------------------------------------------------------------------
# polynomial matrices
# ---------------------------------------------------------------------------

class PolyMatrix:
    __slots__ = ("field", "nrows", "ncols", "coeffs")

    def __init__(self, field: Field, nrows: int, ncols: int, coeffs):
        cs = list(coeffs)
        for c in cs:
            if not isinstance(c, Mat):
                raise TypeError("coefficients must be Mat instances")
            if c.field != field:
                raise FieldMismatch("coefficient matrix over a different field")
            if c.nrows != nrows or c.ncols != ncols:
                raise DimensionMismatch("coefficient matrix shape mismatch")
        while cs and cs[-1].is_zero:
            cs.pop()
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, field: Field, nrows: int, ncols: int) -> "PolyMatrix":
        return cls(field, nrows, ncols, ())

    @classmethod
    def from_packed(cls, field: Field, grids) -> "PolyMatrix":
        """grids: list of coefficient matrices given as int grids."""
        mats = [Mat.from_packed(field, g) for g in grids]
        if not mats:
            raise DimensionMismatch("at least one coefficient grid required")
        return cls(field, mats[0].nrows, mats[0].ncols, mats)

    @property
    def degree(self) -> int:
        """Largest power of z with a nonzero coefficient; -1 for the zero matrix."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Mat:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Mat.zeros(self.field, self.nrows, self.ncols)

    def entry(self, i: int, j: int) -> Poly:
        return Poly(self.field, [c.data[i][j] for c in self.coeffs])

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._compatible(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyMatrix(self.field, self.nrows, self.ncols,
                          [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._compatible(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyMatrix(self.field, self.nrows, self.ncols,
                          [self.coeff(i) - other.coeff(i) for i in range(n)])

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise DimensionMismatch("polynomial matrix product shape mismatch")
        if self.is_zero or other.is_zero:
            return PolyMatrix.zero(self.field, self.nrows, other.ncols)
        d = self.degree + other.degree
        out = [Mat.zeros(self.field, self.nrows, other.ncols) for _ in range(d + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero:
                    continue
                out[i + j] = out[i + j] + a * b
        return PolyMatrix(self.field, self.nrows, other.ncols, out)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.field, self.ncols, self.nrows,
                          [c.transpose() for c in self.coeffs])

    def eval(self, x: Element) -> Mat:
        acc = Mat.zeros(self.field, self.nrows, self.ncols)
        for c in reversed(self.coeffs):
            acc = acc.scale(x) + c
        return acc

    def eval_at_zero(self) -> Mat:
        return self.coeff(0)

    def row_degrees(self) -> list[int]:
        degs = [-1] * self.nrows
        for d, c in enumerate(self.coeffs):
            for i, row in enumerate(c.data):
                if any(not e.is_zero for e in row):
                    degs[i] = d
        return degs

    def leading_row_matrix(self) -> Mat:
        """Row i holds the z^(rowdeg_i) coefficient of row i."""
        degs = self.row_degrees()
        zero_row = [self.field.zero] * self.ncols
        rows = []
        for i, d in enumerate(degs):
            rows.append(list(self.coeff(d).data[i]) if d >= 0 else list(zero_row))
        return Mat(self.field, rows, self.ncols)

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.field == other.field
                and self.nrows == other.nrows and self.ncols == other.ncols
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"PolyMatrix({self.field!r}, {self.nrows}x{self.ncols}, deg {self.degree})"

    def _compatible(self, other):
        if not isinstance(other, PolyMatrix):
            raise TypeError("expected PolyMatrix")
        if self.field != other.field:
            raise FieldMismatch("polynomial matrices over different fields")
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise DimensionMismatch("polynomial matrix shape mismatch")


def poly_from_blocks(field: Field, blocks) -> PolyMatrix:
    """1 x s PolyMatrix from its coefficient blocks (tuples of Elements)."""
    blocks = [list(b) for b in blocks]
    if not blocks:
        raise DimensionMismatch("need at least one block")
    width = len(blocks[0])
    return PolyMatrix(field, 1, width, [Mat(field, [b], width) for b in blocks])


def poly_to_blocks(v: PolyMatrix, upto: int | None = None) -> list[tuple[Element, ...]]:
    """Coefficient blocks of a 1 x s PolyMatrix, optionally zero-padded."""
    if v.nrows != 1:
        raise DimensionMismatch("expected a row polynomial vector")
    top = v.degree if upto is None else upto
    return [tuple(v.coeff(i).data[0]) for i in range(top + 1)]


# ---------------------------------------------------------------------------
# full-size minors and the external degree
# ---------------------------------------------------------------------------

def _bareiss_poly_det(entries: list[list[Poly]], field: Field) -> Poly:
    """Fraction-free determinant of a square polynomial matrix."""
    n = len(entries)
    if n == 0:
        return Poly.one(field)
    m = [row[:] for row in entries]
    prev = Poly.one(field)
    negate = False
    for l in range(n - 1):
        if m[l][l].is_zero:
            swap = next((i for i in range(l + 1, n) if not m[i][l].is_zero), None)
            if swap is None:
                return Poly.zero(field)
            m[l], m[swap] = m[swap], m[l]
            negate = not negate
        for i in range(l + 1, n):
            for j in range(l + 1, n):
                num = m[l][l] * m[i][j] - m[i][l] * m[l][j]
                m[i][j] = num.exact_div(prev)
            m[i][l] = Poly.zero(field)
        prev = m[l][l]
    d = m[n - 1][n - 1]
    return -d if negate else d


def full_size_minors(g: PolyMatrix) -> dict[tuple[int, ...], Poly]:
    """All k x k minors of a k x n PolyMatrix as exact polynomials.

    Keys are 0-based column tuples.  Uses evaluation/interpolation when the
    field has more than delta_max points, Bareiss elimination otherwise.
    """
    k, n = g.nrows, g.ncols
    if k > n:
        raise DimensionMismatch("wide matrix expected (k <= n)")
    fld = g.field
    dmax = sum(d for d in g.row_degrees() if d > 0)
    out: dict[tuple[int, ...], Poly] = {}
    if k == 1:
        for j in range(n):
            out[(j,)] = g.entry(0, j)
        return out
    if fld.q > dmax:
        pts = [fld.el(v) for v in range(dmax + 1)]
        evals = [g.eval(x) for x in pts]
        for cols in itertools.combinations(range(n), k):
            vals = [det(ev.take_cols(cols)) for ev in evals]
            out[cols] = interpolate(fld, pts, vals)
    else:
        entries = [[g.entry(i, j) for j in range(n)] for i in range(k)]
        for cols in itertools.combinations(range(n), k):
            sub = [[entries[i][j] for j in cols] for i in range(k)]
            out[cols] = _bareiss_poly_det(sub, fld)
    return out


def degree_delta(g: PolyMatrix) -> int:
    """External degree: the maximum degree over all full-size minors of g."""
    minors = full_size_minors(g)
    best = max((p.degree for p in minors.values()), default=-1)
    if best < 0:
        raise RankDeficient("matrix has no nonzero full-size minor")
    return best


# ---------------------------------------------------------------------------
# the code object
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructuralFlags:
    delay_free: bool
    row_reduced: bool
    noncatastrophic_certified: bool


class ConvCode:
    """An (n, k, delta) convolutional code given by a generator matrix.

    The parity-check matrix is optional and always supplied, never derived;
    when present it is validated against G (H * G^T = 0, H(0) full row rank).
    """

    def __init__(self, n: int, k: int, G: PolyMatrix, H: PolyMatrix | None = None,
                 metadata: dict | None = None):
        if not (0 < k < n):
            raise DimensionMismatch(f"need 0 < k < n, got k={k}, n={n}")
        if G.nrows != k or G.ncols != n:
            raise DimensionMismatch("generator matrix must be k x n")
        if G.is_zero:
            raise RankDeficient("zero generator matrix")
        self.n = n
        self.k = k
        self.G = G
        self.H = H
        self.field = G.field
        self.delta = degree_delta(G)
        self.mu = G.degree
        self.nu = None
        if H is not None:
            if H.field != G.field:
                raise FieldMismatch("G and H over different fields")
            if H.nrows != n - k or H.ncols != n:
                raise DimensionMismatch("parity-check matrix must be (n-k) x n")
            prod = H * G.transpose()
            if not prod.is_zero:
                raise DegreeMismatch("H * G^T != 0: not a parity check for G")
            if rank(H.eval_at_zero()) != n - k:
                raise RankDeficient("H(0) must have full row rank")
            self.nu = H.degree
        self.metadata = dict(metadata) if metadata else {}
        self._flags: StructuralFlags | None = None
        self._minors: dict | None = None
        self._dcache: dict[int, int] = {}

    # -- derived structure -------------------------------------------------

    @property
    def flags(self) -> StructuralFlags:
        if self._flags is None:
            delay_free = rank(self.G.eval_at_zero()) == self.k
            row_reduced = rank(self.G.leading_row_matrix()) == self.k
            minors = self._full_size_minors()
            g = Poly.zero(self.field)
            for p in minors.values():
                g = poly_gcd(g, p)
                if g.degree == 0:
                    break
            noncat = g.degree == 0  # gcd is a nonzero constant
            self._flags = StructuralFlags(delay_free, row_reduced, noncat)
        return self._flags

    def _full_size_minors(self):
        if self._minors is None:
            self._minors = full_size_minors(self.G)
        return self._minors

    def encode(self, u: PolyMatrix) -> PolyMatrix:
        """Codeword u(z) * G(z) for a 1 x k message."""
        if u.nrows != 1 or u.ncols != self.k:
            raise DimensionMismatch(f"message must be 1 x {self.k}")
        return u * self.G

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        def mats(pm: PolyMatrix):
            return [[[e.to_hex() for e in row] for row in c.data] for c in pm.coeffs]

        obj = {
            "field": self.field.to_json(),
            "n": self.n,
            "k": self.k,
            "G": mats(self.G),
        }
        if self.H is not None:
            obj["H"] = mats(self.H)
        if self.metadata:
            obj["metadata"] = self.metadata
        return obj

    def __repr__(self):
        return f"ConvCode(n={self.n}, k={self.k}, delta={self.delta}, {self.field!r})"


def code_from_json(obj: dict) -> ConvCode:
    from .gf import field_from_json

    fld = field_from_json(obj["field"])

    def pm(grids, nrows, ncols):
        mats = [Mat(fld, [[fld.from_hex(h) for h in row] for row in g], ncols)
                for g in grids]
        return PolyMatrix(fld, nrows, ncols, mats)

    n, k = int(obj["n"]), int(obj["k"])
    G = pm(obj["G"], k, n)
    H = pm(obj["H"], n - k, n) if "H" in obj else None
    return ConvCode(n, k, G, H, metadata=obj.get("metadata"))
