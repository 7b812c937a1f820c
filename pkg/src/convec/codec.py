"""Erasure decoders over a shared stream model.

Two decoders are provided.  The generator-matrix decoder recovers message
coefficients directly: it slides a window, solves the received symbols
against a punctured band of generator coefficients with the known message
history moved to the right-hand side, and extracts the longest uniquely
determined message prefix.  The parity-check decoder recovers erased
codeword symbols from syndrome equations and leaves message extraction to a
separate step.

Both decoders share the window-growth policy: starting from j = 0, the
window grows while it contains at least d_j^c erasures, up to a latency cap
J.  When no window is solvable the decoder declares the current position
lost and scans forward for a position where a guard space can be rebuilt
without any known history.

Blocks outside the listed stream are structural zeros on both sides, so
windows may run past the last block; the virtual zero blocks contribute
equations but no unknowns, which is what makes stream tails decodable even
when the origin degree is not announced.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from .errors import (
    InconsistentStream,
    LengthMismatch,
    NonUnique,
    NoParityCheck,
    NotDelayFree,
)
from .gf import Element
from .linalg import Mat, rank, solve_right
from .polymat import ConvCode, PolyMatrix
from .sliding import generator_band, parity_band
from .distance import L_of, column_bound
from .stream import ErasureStream


# ---------------------------------------------------------------------------
# recovering rates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Rate:
    """Unreduced rational; num/den keep the raw counts behind a rate."""

    num: int
    den: int

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("rate denominator must be positive")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def recovering_rates(n: int, k: int, delta: int, j: int) -> dict[str, Rate]:
    """Window fraction of erasures each recovery mode tolerates.

    forward assumes an optimal column distance at j; the guard entries are
    present only when the corresponding memory mu = delta/k or
    nu = delta/(n-k) is integral.
    """
    if not 0 < k < n or j < 0:
        raise ValueError("need 0 < k < n and j >= 0")
    out = {"forward": Rate((n - k) * (j + 1), (j + 1) * n)}
    if delta % k == 0:
        mu = delta // k
        out["guard_G"] = Rate((n - k) * (j + 1) + (n - 2 * k) * mu,
                              (j + 1 + mu) * n)
    if delta % (n - k) == 0:
        nu = delta // (n - k)
        out["guard_H"] = Rate((n - k) * (j + 1), (j + 1 + nu) * n)
    return out


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowRecord:
    t: int
    j: int
    unknowns: int
    equations: int
    outcome: str
    solver: str

    def to_json(self) -> dict:
        return {"t": self.t, "j": self.j, "unknowns": self.unknowns,
                "equations": self.equations, "outcome": self.outcome,
                "solver": self.solver}


@dataclass
class DecodeReport:
    decoder: str
    code_shape: tuple[int, int, int]
    recovered_message: dict[int, tuple[Element, ...]]
    corrected: ErasureStream
    windows: list[WindowRecord]
    lost_intervals: list[tuple[int, int]]
    totals: dict = dataclass_field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return not self.lost_intervals and self.corrected.is_complete

    def message(self) -> PolyMatrix | None:
        """The recovered message as a polynomial row, if contiguous from 0."""
        if not self.recovered_message:
            return None
        top = max(self.recovered_message)
        if any(t not in self.recovered_message for t in range(top + 1)):
            return None
        grids = [[[e.val for e in self.recovered_message[t]]]
                 for t in range(top + 1)]
        return PolyMatrix.from_packed(self.corrected.field, grids)

    def to_json(self) -> dict:
        n, k, delta = self.code_shape
        return {
            "decoder": self.decoder,
            "n": n, "k": k, "delta": delta,
            "complete": self.complete,
            "windows": [w.to_json() for w in self.windows],
            "lost_intervals": [list(iv) for iv in self.lost_intervals],
            "totals": dict(self.totals),
            "message": [[t, [e.to_hex() for e in self.recovered_message[t]]]
                        for t in sorted(self.recovered_message)],
        }


def message_degree_bound(code: ConvCode, stream: ErasureStream) -> int | None:
    """deg u implied by deg v, when the top generator coefficient is injective."""
    if stream.origin_degree is None:
        return None
    mu = code.G.degree
    if rank(code.G.coeff(mu)) < code.k:
        return None
    return stream.origin_degree - mu


# ---------------------------------------------------------------------------
# shared solving machinery
# ---------------------------------------------------------------------------

class _Ops:
    """Rough elimination-cost meter for the report totals."""

    __slots__ = ("total",)

    def __init__(self):
        self.total = 0

    def count(self, r: int, c: int):
        self.total += r * c * min(r, c)


def _u_value(code: ConvCode, known_u: dict, ubound, t: int):
    if t < 0 or (ubound is not None and t > ubound):
        return (code.field.zero,) * code.k
    return known_u.get(t)


def _window_columns(stream: ErasureStream, t0: int, width: int):
    """Split the window's flattened columns into known (col, value) pairs
    and unknown column indices.  Blocks outside the stream are known zeros."""
    zero = stream.field.zero
    n = stream.n
    known, unknown = [], []
    for b in range(width):
        tb = t0 + b
        if 0 <= tb < len(stream.blocks):
            for pos, val in enumerate(stream.blocks[tb]):
                col = b * n + pos
                if val is None:
                    unknown.append(col)
                else:
                    known.append((col, val))
        else:
            known.extend((b * n + pos, zero) for pos in range(n))
    return known, unknown


def _gm_system(code: ConvCode, stream: ErasureStream, known_u: dict,
               ubound, v_start: int, width: int):
    """Punctured message-recovery system over blocks v_start .. v_start+width-1.

    The unknown band reaches back mu blocks before the window.  Known
    message coefficients, structural zeros included, move to the right-hand
    side.  Returns (A, B, unknown_times): A is the unknown-row band
    restricted to received columns, B the received values minus the known
    contribution.
    """
    fld, k = code.field, code.k
    mu = code.G.degree
    band = generator_band(code.G, width - 1, mu=mu)
    u_times = list(range(v_start - mu, v_start + width))
    unknown_times: list[int] = []
    row_idx: list[int] = []
    hist = [fld.zero] * (len(u_times) * k)
    have_hist = False
    for r, ut in enumerate(u_times):
        val = _u_value(code, known_u, ubound, ut)
        if val is None:
            unknown_times.append(ut)
            row_idx.extend(range(r * k, (r + 1) * k))
        else:
            hist[r * k:(r + 1) * k] = list(val)
            have_hist = have_hist or any(e.val for e in val)
    known_cols, _ = _window_columns(stream, v_start, width)
    kept = [col for col, _ in known_cols]
    received = Mat.row_vector(fld, [v for _, v in known_cols])
    if have_hist:
        contrib = Mat.row_vector(fld, hist) * band
        received = received - contrib.take_cols(kept)
    a = band.take_rows(row_idx).take_cols(kept)
    return a, received, unknown_times


def _solve_prefix(a: Mat, b: Mat, k: int, ops: _Ops):
    """Solve X A = B; return (prefix_count, values) where prefix_count is the
    number of leading k-wide unknown groups pinned by every solution."""
    ops.count(a.nrows, a.ncols)
    res = solve_right(a, b)
    if res.status == "inconsistent":
        raise InconsistentStream("received symbols are not consistent with the code")
    groups = a.nrows // k
    if res.status == "unique":
        return groups, res.solution
    ker = res.kernel
    prefix = 0
    for g in range(groups):
        cols = range(g * k, (g + 1) * k)
        if any(ker.data[r][c].val for r in range(ker.nrows) for c in cols):
            break
        prefix += 1
    return prefix, res.solution


def _fill_codeword_blocks(code: ConvCode, work: ErasureStream, known_u: dict,
                          ubound, t0: int, t1: int) -> int:
    """Re-encode blocks t0..t1 from known message coefficients, filling
    erasures and cross-checking received symbols."""
    mu = code.G.degree
    filled = 0
    for tb in range(t0, t1 + 1):
        if not 0 <= tb < len(work.blocks):
            continue
        acc = [code.field.zero] * code.n
        for s in range(mu + 1):
            uval = _u_value(code, known_u, ubound, tb - s)
            if uval is None:
                raise NonUnique(f"message coefficient {tb - s} still unknown")
            g = code.G.coeff(s)
            for r in range(code.k):
                ur = uval[r]
                if ur.val:
                    row = g.data[r]
                    for c in range(code.n):
                        acc[c] = acc[c] + ur * row[c]
        blk = work.blocks[tb]
        for c in range(code.n):
            if blk[c] is None:
                blk[c] = acc[c]
                filled += 1
            elif blk[c] != acc[c]:
                raise InconsistentStream(
                    f"block {tb} disagrees with the recovered message")
    return filled


def _distance_gate(distances, n: int, k: int, j: int) -> int:
    if distances is not None and j < len(distances):
        return distances[j]
    return column_bound(n, k, j)


# ---------------------------------------------------------------------------
# generator-matrix decoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GuardOutcome:
    ok: bool
    t: int
    j: int
    variant: str | None  # "window" or "extended"
    values: dict | None
    record: WindowRecord


def gm_guard_recover(code: ConvCode, stream: ErasureStream, t_candidate: int,
                     j: int, ops: _Ops | None = None) -> GuardOutcome:
    """Try to rebuild a guard space at t_candidate with no known history.

    First the plain window system over v_t..v_{t+j}, unknowns back to
    u_{t-mu}; then the widened one over v_{t-mu}..v_{t+j}, unknowns back to
    u_{t-2mu}, which pulls the surviving symbols of the preceding blocks
    into play.  Only a fully unique solve counts.
    """
    ops = ops or _Ops()
    ubound = message_degree_bound(code, stream)
    mu = code.G.degree
    k = code.k
    attempts = (("window", t_candidate),)
    if mu:
        attempts += (("extended", t_candidate - mu),)
    last = None
    for variant, v_start in attempts:
        width = t_candidate + j + 1 - v_start
        a, b, unknown_times = _gm_system(code, stream, {}, ubound,
                                         v_start, width)
        rec = WindowRecord(t_candidate, j, a.nrows, a.ncols,
                           "not_recoverable", f"gm_guard_{variant}")
        last = GuardOutcome(False, t_candidate, j, None, None, rec)
        if a.nrows > a.ncols:
            continue  # cannot be unique, skip the solve
        ops.count(a.nrows, a.ncols)
        res = solve_right(a, b)
        if res.status == "inconsistent":
            raise InconsistentStream("guard window contradicts the code")
        if res.status == "unique":
            values = {ut: tuple(res.solution.data[0][i * k:(i + 1) * k])
                      for i, ut in enumerate(unknown_times) if ut >= 0}
            rec = WindowRecord(t_candidate, j, a.nrows, a.ncols,
                               "guard_recovered", f"gm_guard_{variant}")
            return GuardOutcome(True, t_candidate, j, variant, values, rec)
    return last


def gm_decode_forward(code: ConvCode, stream: ErasureStream,
                      max_delay: int | None = None,
                      distances=None, guard: bool = True) -> DecodeReport:
    """Sliding-window message recovery through the generator matrix.

    distances optionally supplies the code's true column distances for the
    window-growth gate; without it the gate assumes the optimal profile,
    which only affects latency, never correctness, since every solve
    extracts exactly the uniquely determined prefix.  guard=False stops at
    the first stall instead of rebuilding a guard space, declaring the
    rest of the stream lost.
    """
    if rank(code.G.eval_at_zero()) < code.k:
        raise NotDelayFree("rank of G(0) is below k")
    if stream.n != code.n or stream.field != code.field:
        raise LengthMismatch("stream does not match the code")
    n, k, mu = code.n, code.k, code.G.degree
    J = L_of(n, k, code.delta) if max_delay is None else max_delay
    ops = _Ops()
    work = stream.copy()
    ubound = message_degree_bound(code, stream)
    known_u: dict[int, tuple[Element, ...]] = {}
    windows: list[WindowRecord] = []
    lost: list[tuple[int, int]] = []
    T = len(work.blocks)
    t = 0
    while t < T:
        j = 0
        advanced = False
        while True:
            e = work.window_erasures(t, j)
            can_grow = j < J and t + j < T - 1 + mu
            if e >= _distance_gate(distances, n, k, j) and can_grow:
                j += 1
                continue
            a, b, unknown_times = _gm_system(code, work, known_u, ubound,
                                             t, j + 1)
            prefix, sol = _solve_prefix(a, b, k, ops)
            if prefix == len(unknown_times):
                covered = t + j  # trailing structural zeros ride along
            elif prefix:
                covered = unknown_times[prefix - 1]
            else:
                covered = t - 1
            outcome = ("recovered" if covered >= t + j
                       else "partial" if covered >= t else "stalled")
            windows.append(WindowRecord(t, j, a.nrows, a.ncols, outcome, "gm"))
            if covered >= t:
                for i, ut in enumerate(unknown_times[:prefix]):
                    known_u[ut] = tuple(sol.data[0][i * k:(i + 1) * k])
                _fill_codeword_blocks(code, work, known_u, ubound, t, covered)
                t = covered + 1
                advanced = True
                break
            if can_grow:
                j += 1
                continue
            break
        if advanced:
            continue
        # forward decoding is stuck: scan for a position where a guard space
        # can be rebuilt, reporting the skipped blocks as lost
        lost_start = t
        resume = None
        if guard:
            for cand in range(t + 1, T):
                for jg in range(min(J, T - 1 - cand) + 1):
                    out = gm_guard_recover(code, work, cand, jg, ops)
                    windows.append(out.record)
                    if out.ok:
                        resume = out
                        break
                if resume:
                    break
        if resume is None:
            lost.append((lost_start, T - 1))
            break
        known_u.update(resume.values)
        # the widened variant pins the mu history blocks as well
        fill_start = resume.t - (mu if resume.variant == "extended" else 0)
        _fill_codeword_blocks(code, work, known_u, ubound,
                              fill_start, resume.t + resume.j)
        if fill_start > lost_start:
            lost.append((lost_start, fill_start - 1))
        t = resume.t + resume.j + 1
    seen = stream.total_erasures
    return DecodeReport(
        decoder="gm",
        code_shape=(n, k, code.delta),
        recovered_message=known_u,
        corrected=work,
        windows=windows,
        lost_intervals=lost,
        totals={"erasures_seen": seen,
                "erasures_recovered": seen - work.total_erasures,
                "solve_ops_estimate": ops.total},
    )


# ---------------------------------------------------------------------------
# parity-check decoding
# ---------------------------------------------------------------------------

def _pc_window_solve(code: ConvCode, work: ErasureStream, t: int, j: int,
                     ops: _Ops):
    """Syndrome solve for erased symbols in blocks t..t+j assuming the
    history v_{t-nu}..v_{t-1} is clean; returns (determined, record) where
    determined maps (block, position) to the pinned value."""
    nu = code.H.degree
    band = parity_band(code.H, j, nu=nu)
    v_start = t - nu
    known_cols, unknown_cols = _window_columns(work, v_start, j + 1 + nu)
    he = band.take_cols(unknown_cols)
    rhs = band.take_cols([c for c, _ in known_cols]) * Mat.row_vector(
        code.field, [v for _, v in known_cols]).transpose()
    a = he.transpose()
    b = rhs.scale(-code.field.one).transpose()
    ops.count(a.nrows, a.ncols)
    res = solve_right(a, b)
    if res.status == "inconsistent":
        raise InconsistentStream("syndrome equations are contradictory")
    ker = res.kernel
    determined = {}
    n = work.n
    for i, col in enumerate(unknown_cols):
        if all(ker.data[r][i].val == 0 for r in range(ker.nrows)):
            determined[(v_start + col // n, col % n)] = res.solution.data[0][i]
    outcome = ("recovered" if len(determined) == len(unknown_cols)
               else "partial" if determined else "stalled")
    return determined, WindowRecord(t, j, len(unknown_cols), band.nrows,
                                    outcome, "pc")


def pc_guard_recover(code: ConvCode, stream: ErasureStream, position: int,
                     j: int, ops: _Ops | None = None) -> GuardOutcome:
    """Attempt full recovery of the window v_{position-nu}..v_{position+j}
    with no clean history: every erased symbol in the window is unknown."""
    if code.H is None:
        raise NoParityCheck("no parity check supplied")
    ops = ops or _Ops()
    nu = code.H.degree
    band = parity_band(code.H, j, nu=nu)
    v_start = position - nu
    known_cols, unknown_cols = _window_columns(stream, v_start, j + 1 + nu)
    rec = WindowRecord(position, j, len(unknown_cols), band.nrows,
                       "not_recoverable", "pc_guard")
    if len(unknown_cols) > band.nrows:
        return GuardOutcome(False, position, j, None, None, rec)
    he = band.take_cols(unknown_cols)
    rhs = band.take_cols([c for c, _ in known_cols]) * Mat.row_vector(
        code.field, [v for _, v in known_cols]).transpose()
    a = he.transpose()
    ops.count(a.nrows, a.ncols)
    res = solve_right(a, rhs.scale(-code.field.one).transpose())
    if res.status == "inconsistent":
        raise InconsistentStream("syndrome equations are contradictory")
    if res.status != "unique":
        return GuardOutcome(False, position, j, None, None, rec)
    n = stream.n
    values = {}
    for i, col in enumerate(unknown_cols):
        tb = v_start + col // n
        if tb >= 0:
            values[(tb, col % n)] = res.solution.data[0][i]
    rec = WindowRecord(position, j, len(unknown_cols), band.nrows,
                       "guard_recovered", "pc_guard")
    return GuardOutcome(True, position, j, "window", values, rec)


def pc_decode_forward(code: ConvCode, stream: ErasureStream,
                      max_delay: int | None = None,
                      distances=None, guard: bool = True) -> DecodeReport:
    """Sliding-window symbol recovery through the parity check.

    Recovers codeword symbols rather than message coefficients; the
    report's message is extracted afterwards when the stream comes out
    complete.  The zero state supplies the clean history at the start.
    guard=False stops at the first stall as in gm_decode_forward.
    """
    if code.H is None:
        raise NoParityCheck("no parity check supplied")
    if stream.n != code.n or stream.field != code.field:
        raise LengthMismatch("stream does not match the code")
    n, k, nu = code.n, code.k, code.H.degree
    J = L_of(n, k, code.delta) if max_delay is None else max_delay
    ops = _Ops()
    work = stream.copy()
    windows: list[WindowRecord] = []
    lost: list[tuple[int, int]] = []
    T = len(work.blocks)
    t = 0
    while t < T:
        if not work.erased_positions(t):
            t += 1
            continue
        j = 0
        advanced = False
        while True:
            e = work.window_erasures(t, j)
            can_grow = j < J and t + j < T - 1 + nu
            if e >= _distance_gate(distances, n, k, j) and can_grow:
                j += 1
                continue
            determined, rec = _pc_window_solve(code, work, t, j, ops)
            windows.append(rec)
            for (tb, pos), val in determined.items():
                if 0 <= tb < T:
                    work.blocks[tb][pos] = val
            if not work.erased_positions(t):
                advanced = True
                break
            if can_grow:
                j += 1
                continue
            break
        if advanced:
            continue
        lost_start = t
        resume = None
        if guard:
            for cand in range(t + 1, T):
                for jg in range(min(J, T - 1 - cand) + 1):
                    out = pc_guard_recover(code, work, cand, jg, ops)
                    windows.append(out.record)
                    if out.ok:
                        resume = out
                        break
                if resume:
                    break
        if resume is None:
            lost.append((lost_start, T - 1))
            break
        for (tb, pos), val in resume.values.items():
            if 0 <= tb < T:
                work.blocks[tb][pos] = val
        lost_end = resume.t - nu - 1
        if lost_end >= lost_start:
            lost.append((lost_start, lost_end))
        t = resume.t + resume.j + 1
    message: dict[int, tuple[Element, ...]] = {}
    if not lost and work.is_complete:
        message = extract_message(code, work)
    seen = stream.total_erasures
    return DecodeReport(
        decoder="pc",
        code_shape=(n, k, code.delta),
        recovered_message=message,
        corrected=work,
        windows=windows,
        lost_intervals=lost,
        totals={"erasures_seen": seen,
                "erasures_recovered": seen - work.total_erasures,
                "solve_ops_estimate": ops.total,
                # the syndrome windows at the stream head borrow this many
                # virtual zero blocks as their clean history
                "zero_state_blocks": nu},
    )


# ---------------------------------------------------------------------------
# message extraction from a corrected stream
# ---------------------------------------------------------------------------

def extract_message(code: ConvCode, stream: ErasureStream, start: int = 0,
                    end: int | None = None) -> dict[int, tuple[Element, ...]]:
    """Solve the window system for message coefficients over known blocks.

    Blocks start..end must be erasure-free.  Returns every u_t with t >= 0
    touching the window, structural zeros included; raises NonUnique when
    the window does not pin the solution down.
    """
    k = code.k
    end = len(stream.blocks) - 1 if end is None else end
    for tb in range(start, end + 1):
        if stream.erased_positions(tb):
            raise ValueError(f"block {tb} still has erasures")
    ubound = message_degree_bound(code, stream)
    a, b, unknown_times = _gm_system(code, stream, {}, ubound,
                                     start, end - start + 1)
    res = solve_right(a, b)
    if res.status == "inconsistent":
        raise InconsistentStream("blocks are not a codeword window")
    if res.status != "unique":
        raise NonUnique("window too short to pin the message down")
    out = {}
    for i, ut in enumerate(unknown_times):
        if ut >= 0:
            out[ut] = tuple(res.solution.data[0][i * k:(i + 1) * k])
    if ubound is not None:
        for ut in range(max(start - code.G.degree, 0), end + 1):
            if ut > ubound and ut not in out:
                out[ut] = (code.field.zero,) * k
    return out
