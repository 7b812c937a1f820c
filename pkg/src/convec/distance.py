"""Column distances, free-distance bracketing, MDP and complete j-MDP checks.

Column distances are computed by exact enumeration of message windows; the
optimality checks go through the minor criteria instead, which keeps them
usable over fields far too large to enumerate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import budget as _budget
from .errors import (
    BudgetExceeded,
    DegreeMismatch,
    DivisibilityViolated,
    NoParityCheck,
    NotDelayFree,
)
from .linalg import Mat, minor, rank
from .polymat import ConvCode
from .sliding import (
    IndexSet,
    count_nontrivial,
    enumerate_bounded,
    enumerate_nontrivial,
    generator_band,
    generator_truncation,
    parity_band,
    parity_truncation,
)

SEARCH_BUDGET_DEFAULT = 1 << 22


def L_of(n: int, k: int, delta: int) -> int:
    """Largest window index at which the column bound can still be attained."""
    if not 0 < k < n:
        raise ValueError("need 0 < k < n")
    return delta // k + delta // (n - k)


def column_bound(n: int, k: int, j: int) -> int:
    return (n - k) * (j + 1) + 1


def singleton_bound(n: int, k: int, delta: int) -> int:
    return (n - k) * (delta // k + 1) + delta + 1


def _require_delay_free(code: ConvCode):
    if rank(code.G.eval_at_zero()) < code.k:
        raise NotDelayFree("rank of G(0) is below k")


def _check_search_size(q: int, dims: int, budget: int | None) -> None:
    cap = _budget.resolve(budget, SEARCH_BUDGET_DEFAULT)
    est = q ** dims
    if est > cap:
        raise BudgetExceeded(f"{est} message windows exceed the budget of {cap}",
                             estimate=est)


def _min_weight(mat: Mat, nonzero_prefix: int) -> int:
    """Minimal weight of x*mat over x with some nonzero entry among the
    first nonzero_prefix coordinates."""
    fld = mat.field
    rows = mat.data
    r, width = mat.nrows, mat.ncols
    scalars = [fld.el(v) for v in range(1, fld.q)]
    best = width + 1

    def rec(i: int, vec, dirty: bool):
        nonlocal best
        if i == nonzero_prefix and not dirty:
            return
        if i == r:
            w = sum(1 for e in vec if e.val)
            if w < best:
                best = w
            return
        rec(i + 1, vec, dirty)
        row = rows[i]
        for s in scalars:
            rec(i + 1, [a + s * b for a, b in zip(vec, row)], True)

    rec(0, [fld.zero] * width, False)
    return best


def column_distance(code: ConvCode, j: int, budget: int | None = None) -> int:
    """Exact d_j^c: least weight of a codeword window v_0..v_j with v_0 != 0."""
    _require_delay_free(code)
    _check_search_size(code.field.q, (j + 1) * code.k, budget)
    return _min_weight(generator_truncation(code.G, j), code.k)


def free_distance_bracket(code: ConvCode, search_degree: int,
                          budget: int | None = None) -> int:
    """Least codeword weight over messages of degree <= search_degree.

    An upper bound for the free distance; exact once the searched degree is
    large enough, which is not certified here.
    """
    _require_delay_free(code)
    _check_search_size(code.field.q, (search_degree + 1) * code.k, budget)
    mu = code.G.degree
    full = generator_truncation(code.G, search_degree + mu)
    mat = full.take_rows(range((search_degree + 1) * code.k))
    return _min_weight(mat, code.k)


@dataclass(frozen=True)
class DistanceProfile:
    n: int
    k: int
    delta: int
    L: int
    distances: tuple[int, ...]  # d_0^c .. d_J^c
    search_degree: int
    dfree_lower: int
    dfree_upper: int
    singleton_free_bound: int

    def __post_init__(self):
        d = self.distances
        if any(d[i] > d[i + 1] for i in range(len(d) - 1)):
            raise ValueError("column distances must be non-decreasing")
        if any(d[j] > self.column_bound(j) for j in range(len(d))):
            raise ValueError("column distance above its bound")
        if not self.dfree_lower <= self.dfree_upper <= self.singleton_free_bound:
            raise ValueError("inconsistent free distance bracket")

    def column_bound(self, j: int) -> int:
        return column_bound(self.n, self.k, j)

    @property
    def is_mdp(self) -> bool | None:
        """d_L^c optimal; None when the profile stops short of L."""
        if len(self.distances) <= self.L:
            return None
        return self.distances[self.L] == self.column_bound(self.L)

    def to_json(self) -> dict:
        out = {
            "n": self.n, "k": self.k, "delta": self.delta, "L": self.L,
            "column_distances": list(self.distances),
            "column_bounds": [self.column_bound(j) for j in range(len(self.distances))],
            "search_degree": self.search_degree,
            "dfree_lower": self.dfree_lower,
            "dfree_upper": self.dfree_upper,
            "singleton_free_bound": self.singleton_free_bound,
        }
        if self.is_mdp is not None:
            out["is_mdp"] = self.is_mdp
        return out


def distance_profile(code: ConvCode, upto: int | None = None,
                     search_degree: int | None = None,
                     budget: int | None = None) -> DistanceProfile:
    n, k, delta = code.n, code.k, code.delta
    ell = L_of(n, k, delta)
    upto = ell if upto is None else upto
    if search_degree is None:
        search_degree = delta + 2 * ell
    dcj = tuple(column_distance(code, j, budget) for j in range(upto + 1))
    sb = singleton_bound(n, k, delta)
    enum_upper = free_distance_bracket(code, search_degree, budget)
    return DistanceProfile(
        n=n, k=k, delta=delta, L=ell, distances=dcj,
        search_degree=search_degree,
        dfree_lower=dcj[-1] if dcj else 1,
        dfree_upper=min(enum_upper, sb),
        singleton_free_bound=sb,
    )


# ---------------------------------------------------------------------------
# column optimality through minors of the truncated matrices
# ---------------------------------------------------------------------------

def _qualifying_generator_sets(n: int, k: int, j: int):
    # column sets of G_j^c avoiding structural zeros: l_{sk+1} > sn
    size, ncols = (j + 1) * k, (j + 1) * n
    lo = {s * k + 1: s * n + 1 for s in range(1, j + 1)}
    return enumerate_bounded(size, ncols, lo, {})


def _qualifying_parity_sets(n: int, k: int, j: int):
    # row-index driven sets of H_j^c: r_{s(n-k)} <= sn
    size, ncols = (j + 1) * (n - k), (j + 1) * n
    hi = {s * (n - k): s * n for s in range(1, j + 1)}
    return enumerate_bounded(size, ncols, {}, hi)


def is_column_optimal_via_g(code: ConvCode, j: int) -> bool:
    """d_j^c attains (n-k)(j+1)+1, decided by minors of G_j^c."""
    _require_delay_free(code)
    m = generator_truncation(code.G, j)
    rows = list(range(m.nrows))
    return all(minor(m, rows, [c - 1 for c in cols]).val
               for cols in _qualifying_generator_sets(code.n, code.k, j))


def is_column_optimal_via_h(code: ConvCode, j: int) -> bool:
    """The same criterion read off the parity check, via minors of H_j^c."""
    if code.H is None:
        raise NoParityCheck("no parity check supplied")
    m = parity_truncation(code.H, j)
    rows = list(range(m.nrows))
    return all(minor(m, rows, [c - 1 for c in cols]).val
               for cols in _qualifying_parity_sets(code.n, code.k, j))


def is_mdp(code: ConvCode) -> bool:
    return is_column_optimal_via_g(code, L_of(code.n, code.k, code.delta))


# ---------------------------------------------------------------------------
# complete j-MDP verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    property: str
    j: int
    sets_checked: int
    passed: bool
    counterexample: IndexSet | None
    wall_time_ms: float

    def to_json(self) -> dict:
        out = {
            "property": self.property,
            "j": self.j,
            "sets_checked": self.sets_checked,
            "passed": self.passed,
            "wall_time_ms": round(self.wall_time_ms, 3),
        }
        if self.counterexample is not None:
            out["counterexample"] = list(self.counterexample.indices)
        return out


def _run_minor_check(prop: str, j: int, mat: Mat, sets) -> VerificationReport:
    t0 = time.perf_counter()
    rows = list(range(mat.nrows))
    checked = 0
    bad = None
    for iset in sets:
        checked += 1
        if not minor(mat, rows, iset.zero_based()).val:
            bad = iset  # lexicographically first, since enumeration is lex
            break
    ms = (time.perf_counter() - t0) * 1000.0
    return VerificationReport(prop, j, checked, bad is None, bad, ms)


def verify_complete_jmdp_via_g(code: ConvCode, j: int,
                               budget: int | None = None) -> VerificationReport:
    """All non-trivial full-size minors of the depth mu+j generator band."""
    n, k = code.n, code.k
    if code.delta % k:
        raise DivisibilityViolated("k must divide delta")
    mu = code.delta // k
    if code.G.degree != mu:
        raise DegreeMismatch(f"generator degree {code.G.degree}, expected {mu}")
    band = generator_band(code.G, j + mu, mu=mu)
    sets = enumerate_nontrivial("generator", n, k, mu, j, budget)
    return _run_minor_check("complete_jmdp_via_g", j, band, sets)


def verify_complete_jmdp_via_h(code: ConvCode, j: int,
                               budget: int | None = None) -> VerificationReport:
    """All non-trivial full-size minors of the depth j parity band."""
    n, k = code.n, code.k
    if code.H is None:
        raise NoParityCheck("no parity check supplied")
    if code.delta % (n - k):
        raise DivisibilityViolated("n-k must divide delta")
    nu = code.delta // (n - k)
    if code.H.degree != nu:
        raise DegreeMismatch(f"parity degree {code.H.degree}, expected {nu}")
    band = parity_band(code.H, j, nu=nu)
    sets = enumerate_nontrivial("parity", n, k, nu, j, budget)
    return _run_minor_check("complete_jmdp_via_h", j, band, sets)


def verify_complete_jmdp(code: ConvCode, j: int, side: str = "auto",
                         budget: int | None = None) -> VerificationReport:
    """Dispatch between the two criteria.

    side "auto" picks whichever enumerates fewer index sets (requires the
    matching divisibility; the generator side is used when only k | delta
    holds, and vice versa).  side "both" runs the two checks and merges.
    """
    n, k, delta = code.n, code.k, code.delta
    g_ok = delta % k == 0
    h_ok = delta % (n - k) == 0 and code.H is not None
    if side == "g":
        return verify_complete_jmdp_via_g(code, j, budget)
    if side == "h":
        return verify_complete_jmdp_via_h(code, j, budget)
    if side == "both":
        a = verify_complete_jmdp_via_g(code, j, budget)
        b = verify_complete_jmdp_via_h(code, j, budget)
        return VerificationReport(
            "complete_jmdp_via_both", j, a.sets_checked + b.sets_checked,
            a.passed and b.passed,
            a.counterexample if not a.passed else b.counterexample,
            a.wall_time_ms + b.wall_time_ms)
    if side != "auto":
        raise ValueError(f"unknown side {side!r}")
    if g_ok and h_ok:
        cg = count_nontrivial("generator", n, k, delta // k, j)
        ch = count_nontrivial("parity", n, k, delta // (n - k), j)
        side = "g" if cg <= ch else "h"
    elif g_ok:
        side = "g"
    elif h_ok:
        side = "h"
    else:
        raise DivisibilityViolated("neither criterion applies")
    return verify_complete_jmdp(code, j, side, budget)
