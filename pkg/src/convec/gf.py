"""Exact arithmetic in finite fields GF(p^m).

Elements live in the polynomial basis over GF(p): an element is a coefficient
vector (c_0, ..., c_{m-1}) stored packed as the integer sum(c_i * p**i), so
for p = 2 the packed value is simply the bitmask of the polynomial.  The
packed value is also what the hex serialization encodes, which keeps "0" and
"1" as the shorthand for the additive and multiplicative identities in any
field.

Three arithmetic kernels are selected at construction time:

  * m = 1           : integers mod p
  * p = 2, m >= 2   : bit-packed polynomials, carry-less multiply, xor add
  * general p^m     : coefficient-tuple arithmetic (correct but unhurried)

Modulus selection with ``modulus=None`` ("auto") picks the monic irreducible
of degree m with the smallest packed value among those with a nonzero
constant term; the constant-term rule only bites at m = 1, where it selects
x + 1.  Irreducibility is decided by Rabin's deterministic test.

The designated generator alpha is the first element, in packed order starting
at x (or at 1 for m = 1), whose multiplicative order is p^m - 1.  Orders are
certified by factoring p^m - 1; when the factorization does not complete
within the internal budget the field is flagged ``unverified_primitive`` and
alpha is the first candidate passing all tests against the known prime
factors.
"""

from __future__ import annotations

import functools
from typing import Iterator

import sympy
from sympy.ntheory.factor_ import pollard_rho

from .errors import (
    DivisionByZero,
    FieldMismatch,
    NoPrimitiveFound,
    NotPrime,
    Reducible,
)

# Budget knobs for factoring p^m - 1 during primitivity certification.
FACTOR_TRIAL_LIMIT = 10_000
FACTOR_RHO_STEPS = 20_000
FACTOR_DIRECT_BITS = 48  # below this, factor completely without a budget
PRIMITIVE_CANDIDATE_CAP = 4096


# ---------------------------------------------------------------------------
# GF(2)[x] on bit-packed ints
# ---------------------------------------------------------------------------

def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _sq2(a: int) -> int:
    # squaring over GF(2) just spreads the bits apart
    if a == 0:
        return 0
    return int("0".join(bin(a)[2:]), 2)


def _rem2(x: int, f: int, deg_f: int) -> int:
    while True:
        d = x.bit_length() - 1
        if d < deg_f:
            return x
        x ^= f << (d - deg_f)


def _divmod2(a: int, b: int) -> tuple[int, int]:
    db = b.bit_length() - 1
    q = 0
    while True:
        d = a.bit_length() - 1 - db
        if d < 0 or a == 0:
            return q, a
        q ^= 1 << d
        a ^= b << d


def _gcd2(a: int, b: int) -> int:
    while b:
        a, b = b, _divmod2(a, b)[1]
    return a


def _inv2(a: int, f: int, deg_f: int) -> int:
    if a == 0:
        raise DivisionByZero("inverse of zero")
    r0, r1 = f, a
    t0, t1 = 0, 1
    while r1:
        q, r = _divmod2(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, t0 ^ _clmul(q, t1)
    # r0 = gcd(a, f) = 1 because f is irreducible and deg a < deg f
    return _rem2(t0, f, deg_f)


def _irreducible2(f: int, m: int) -> bool:
    """Rabin's test for a degree-m binary polynomial (deterministic)."""
    if m == 1:
        return True
    checkpoints = {m // q for q in sympy.primefactors(m)}
    x = 2
    t = x
    for i in range(1, m + 1):
        t = _rem2(_sq2(t), f, m)
        if i in checkpoints and _gcd2(t ^ x, f).bit_length() - 1 != 0:
            return False
    return t == x


# ---------------------------------------------------------------------------
# GF(p)[x] on coefficient tuples (constant term first, no trailing zeros)
# ---------------------------------------------------------------------------

def _ptrim(a: list[int]) -> tuple[int, ...]:
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _padd(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _ptrim(out)


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _ptrim(out)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if c:
            for j, d in enumerate(b):
                out[i + j] = (out[i + j] + c * d) % p
    return _ptrim(out)


def _pdivmod(a, b, p):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    lead_inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and any(a):
        d = len(a) - 1 - db
        c = (a[-1] * lead_inv) % p
        q[d] = c
        for i, bc in enumerate(b):
            a[d + i] = (a[d + i] - c * bc) % p
        while a and a[-1] == 0:
            a.pop()
    return _ptrim(q), _ptrim(a)


def _pgcd(a, b, p):
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    return a


def _pmulmod(a, b, f, p):
    return _pdivmod(_pmul(a, b, p), f, p)[1]


def _ppowmod(a, e, f, p):
    r = (1,)
    while e:
        if e & 1:
            r = _pmulmod(r, a, f, p)
        a = _pmulmod(a, a, f, p)
        e >>= 1
    return r


def _irreducible_general(f: tuple[int, ...], p: int) -> bool:
    m = len(f) - 1
    if m == 1:
        return True
    checkpoints = {m // q for q in sympy.primefactors(m)}
    x = (0, 1)
    t = x
    for i in range(1, m + 1):
        t = _ppowmod(t, p, f, p)
        if i in checkpoints:
            g = _pgcd(_psub(t, x, p), f, p)
            if len(g) - 1 != 0:
                return False
    return t == x


# ---------------------------------------------------------------------------
# packing helpers
# ---------------------------------------------------------------------------

def _pack(coeffs, p: int) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * p + c
    return v


def _unpack(v: int, p: int, m: int) -> tuple[int, ...]:
    out = []
    for _ in range(m):
        v, c = divmod(v, p)
        out.append(c)
    return tuple(out)


# ---------------------------------------------------------------------------
# budgeted factorization (for primitivity certificates)
# ---------------------------------------------------------------------------

def _budgeted_factor(n: int) -> tuple[dict[int, int], bool]:
    """Factor n as far as the budget allows; returns (factors, complete)."""
    if n <= 1:
        return {}, True
    if n.bit_length() <= FACTOR_DIRECT_BITS:
        return dict(sympy.factorint(n)), True
    found = sympy.factorint(n, limit=FACTOR_TRIAL_LIMIT)
    out: dict[int, int] = {}
    pending: list[tuple[int, int]] = []
    for f, e in found.items():
        if sympy.isprime(f):
            out[f] = out.get(f, 0) + e
        else:
            pending.append((f, e))
    complete = True
    while pending:
        c, e = pending.pop()
        d = pollard_rho(c, max_steps=FACTOR_RHO_STEPS, retries=1, seed=0xC0FFEE)
        if d is None:
            complete = False
            continue
        for part in (d, c // d):
            if sympy.isprime(part):
                out[part] = out.get(part, 0) + e
            else:
                pending.append((part, e))
    return out, complete


# ---------------------------------------------------------------------------
# the field itself
# ---------------------------------------------------------------------------

class Element:
    """An element of a Field; immutable, hashable, operator-complete."""

    __slots__ = ("field", "val")

    def __init__(self, field: "Field", val: int):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "val", val)

    def __setattr__(self, *a):
        raise AttributeError("Element is immutable")

    def _peer(self, other) -> int:
        if not isinstance(other, Element):
            raise TypeError(f"cannot combine Element with {type(other).__name__}")
        if other.field is not self.field and other.field != self.field:
            raise FieldMismatch(
                f"elements of {self.field} and {other.field} cannot be combined")
        return other.val

    def __add__(self, other):
        return Element(self.field, self.field._vadd(self.val, self._peer(other)))

    def __sub__(self, other):
        return Element(self.field, self.field._vsub(self.val, self._peer(other)))

    def __neg__(self):
        return Element(self.field, self.field._vneg(self.val))

    def __mul__(self, other):
        return Element(self.field, self.field._vmul(self.val, self._peer(other)))

    def __truediv__(self, other):
        return Element(self.field, self.field._vmul(self.val, self.field._vinv(self._peer(other))))

    def __pow__(self, e: int):
        return Element(self.field, self.field._vpow(self.val, e))

    def inverse(self) -> "Element":
        return Element(self.field, self.field._vinv(self.val))

    def __eq__(self, other):
        return (isinstance(other, Element) and self.val == other.val
                and (other.field is self.field or other.field == self.field))

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.val))

    def __bool__(self):
        return self.val != 0

    @property
    def is_zero(self) -> bool:
        return self.val == 0

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Coefficient vector over GF(p), constant term first, length m."""
        return _unpack(self.val, self.field.p, self.field.m)

    def to_hex(self) -> str:
        return format(self.val, "x")

    def __repr__(self):
        return f"{self.field.ref()}[{self.to_hex()}]"


class Field:
    """GF(p^m) with a fixed monic irreducible modulus and designated alpha.

    Use the module-level :func:`field` factory, which caches instances so
    elements of equal fields interoperate cheaply.
    """

    def __init__(self, p: int, m: int, modulus: tuple[int, ...] | None = None,
                 _primitive_val: int | None = None):
        if not isinstance(p, int) or p < 2 or not sympy.isprime(p):
            raise NotPrime(f"p = {p} is not prime")
        if not isinstance(m, int) or m < 1:
            raise ValueError(f"extension degree m = {m} must be a positive integer")
        self.p = p
        self.m = m
        self.q = p ** m
        if modulus is None:
            modulus = self._auto_modulus(p, m)
        else:
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != m + 1:
                raise ValueError(f"modulus must have length m+1 = {m + 1}")
            if any(not (0 <= c < p) for c in modulus):
                raise ValueError("modulus coefficients must lie in [0, p)")
            if modulus[-1] != 1:
                raise ValueError("modulus must be monic")
            if not self._is_irreducible(modulus, p):
                raise Reducible(f"modulus {list(modulus)} is reducible over GF({p})")
        self.modulus = modulus
        self.modulus_packed = _pack(modulus, p)
        if p == 2 and m >= 2:
            self.kind = "binary"
        elif m == 1:
            self.kind = "prime"
        else:
            self.kind = "general"
        self._bind_kernels()
        if _primitive_val is None:
            alpha_val, unverified = self._find_primitive()
        else:
            alpha_val = _primitive_val
            unverified = self._check_primitive_val(alpha_val)
        self.alpha = Element(self, alpha_val)
        self.unverified_primitive = unverified
        self.zero = Element(self, 0)
        self.one = Element(self, 1)

    # -- construction helpers -------------------------------------------

    @staticmethod
    def _auto_modulus(p: int, m: int) -> tuple[int, ...]:
        if m == 1:
            return (1, 1)  # x + 1; the modulus is inert for prime fields
        if p == 2:
            c = 1
            while True:
                f = (1 << m) | c
                # skip multiples of x and of x+1 cheaply; they are reducible
                if c & 1 and bin(f).count("1") % 2 == 1 and _irreducible2(f, m):
                    return _unpack(f, 2, m) + (1,)
                c += 2
        c = 1
        while c < p ** m:
            if c % p != 0:
                f = _unpack(c, p, m) + (1,)
                if _irreducible_general(f, p):
                    return f
            c += 1
        raise Reducible(f"no irreducible of degree {m} over GF({p})")  # unreachable

    @staticmethod
    def _is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
        m = len(modulus) - 1
        if p == 2:
            return _irreducible2(_pack(modulus, 2), m)
        return _irreducible_general(modulus, p)

    def _bind_kernels(self):
        p, m = self.p, self.m
        if self.kind == "prime":
            self._vadd = lambda a, b: (a + b) % p
            self._vsub = lambda a, b: (a - b) % p
            self._vneg = lambda a: (-a) % p
            self._vmul = lambda a, b: (a * b) % p

            def vinv(a):
                if a == 0:
                    raise DivisionByZero("inverse of zero")
                return pow(a, -1, p)

            self._vinv = vinv
            self._vsq = lambda a: (a * a) % p
        elif self.kind == "binary":
            f = self.modulus_packed
            self._vadd = lambda a, b: a ^ b
            self._vsub = lambda a, b: a ^ b
            self._vneg = lambda a: a
            self._vmul = lambda a, b: _rem2(_clmul(a, b), f, m)
            self._vinv = lambda a: _inv2(a, f, m)
            self._vsq = lambda a: _rem2(_sq2(a), f, m)
        else:
            fpoly = self.modulus

            def up(a):
                return _ptrim(list(_unpack(a, p, m)))

            def vmul(a, b):
                return _pack(_pmulmod(up(a), up(b), fpoly, p), p)

            def vinv(a):
                if a == 0:
                    raise DivisionByZero("inverse of zero")
                ap = up(a)
                r0, r1 = fpoly, ap
                t0, t1 = (), (1,)
                while r1:
                    qt, r = _pdivmod(r0, r1, p)
                    r0, r1 = r1, r
                    t0, t1 = t1, _psub(t0, _pmul(qt, t1, p), p)
                # normalize: r0 is a nonzero constant gcd
                c = pow(r0[0], -1, p)
                return _pack(_pdivmod(_pmul(t0, (c,), p), fpoly, p)[1], p)

            self._vadd = lambda a, b: _pack(_padd(up(a), up(b), p), p)
            self._vsub = lambda a, b: _pack(_psub(up(a), up(b), p), p)
            self._vneg = lambda a: _pack(_psub((), up(a), p), p)
            self._vmul = vmul
            self._vinv = vinv
            self._vsq = lambda a: vmul(a, a)

    def _vpow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("0 cannot be raised to a negative power")
            return 0
        e %= self.q - 1 if self.q > 2 else 1
        if self.q == 2:
            return 1  # the only nonzero element
        r = 1
        while e:
            if e & 1:
                r = self._vmul(r, a)
            a = self._vsq(a)
            e >>= 1
        return r

    def _find_primitive(self) -> tuple[int, bool]:
        fac, complete = _budgeted_factor(self.q - 1)
        checks = [(self.q - 1) // r for r in fac]
        if self.m == 1:
            candidates: Iterator[int] = iter(range(1, min(self.p, PRIMITIVE_CANDIDATE_CAP + 1)))
        else:
            top = min(self.q, self.p + PRIMITIVE_CANDIDATE_CAP)
            candidates = iter(range(self.p, top))
        for cand in candidates:
            if all(self._vpow(cand, c) != 1 for c in checks):
                return cand, not complete
        raise NoPrimitiveFound(
            f"no generator of GF({self.p}^{self.m})* found within the candidate cap")

    def _check_primitive_val(self, val: int) -> bool:
        """Validate a supplied generator; returns the unverified flag."""
        if val == 0 or not (0 < val < self.q):
            raise NoPrimitiveFound("supplied primitive element is out of range or zero")
        fac, complete = _budgeted_factor(self.q - 1)
        for r in fac:
            if self._vpow(val, (self.q - 1) // r) == 1:
                raise NoPrimitiveFound(
                    "supplied element is certainly not primitive "
                    f"(order divides (q-1)/{r})")
        return not complete

    # -- element constructors -------------------------------------------

    def el(self, val: int) -> Element:
        """Element from its packed base-p value."""
        if not (0 <= val < self.q):
            raise ValueError(f"packed value {val} out of range for {self}")
        return Element(self, val)

    def from_coeffs(self, coeffs) -> Element:
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            raise ValueError("too many coefficients")
        coeffs += [0] * (self.m - len(coeffs))
        if any(not (0 <= c < self.p) for c in coeffs):
            coeffs = [c % self.p for c in coeffs]
        return Element(self, _pack(coeffs, self.p))

    def from_hex(self, s: str) -> Element:
        return self.el(int(s, 16))

    def scalar(self, i: int) -> Element:
        """The image of the integer i in the prime subfield."""
        return Element(self, i % self.p)

    def elements(self) -> Iterator[Element]:
        """All q elements in packed order; intended for small fields."""
        for v in range(self.q):
            yield Element(self, v)

    def random_element(self, rng) -> Element:
        return Element(self, rng.randrange(self.q))

    def random_nonzero(self, rng) -> Element:
        return Element(self, rng.randrange(1, self.q))

    # -- identity and serialization --------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Field) and self.p == other.p and self.m == other.m
                and self.modulus == other.modulus and self.alpha.val == other.alpha.val)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def ref(self) -> str:
        """Compact textual handle: p^m:<modulus packed, hex>."""
        return f"{self.p}^{self.m}:{format(self.modulus_packed, 'x')}"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "modulus": list(self.modulus),
            "primitive": self.alpha.to_hex(),
        }

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"


@functools.lru_cache(maxsize=None)
def _cached_field(p: int, m: int, modulus: tuple[int, ...] | None) -> Field:
    return Field(p, m, modulus)


def field(p: int, m: int = 1, modulus=None) -> Field:
    """Construct (or fetch from cache) GF(p^m).

    ``modulus=None`` selects the auto modulus described in the module
    docstring.  A supplied modulus is a length-(m+1) coefficient list,
    constant term first, monic, irreducible.
    """
    key = tuple(int(c) for c in modulus) if modulus is not None else None
    return _cached_field(int(p), int(m), key)


def field_from_json(obj: dict) -> Field:
    f = field(obj["p"], obj["m"], obj.get("modulus"))
    prim = obj.get("primitive")
    if prim is not None:
        want = int(prim, 16)
        if want != f.alpha.val:
            # honor a nonstandard designated generator, re-validated
            return Field(obj["p"], obj["m"], tuple(obj["modulus"]), _primitive_val=want)
    return f


def field_from_ref(ref: str) -> Field:
    """Inverse of Field.ref()."""
    try:
        pm, mod_hex = ref.split(":")
        p_s, m_s = pm.split("^")
        p, m = int(p_s), int(m_s)
        packed = int(mod_hex, 16)
    except ValueError as exc:
        raise ValueError(f"malformed field reference {ref!r}") from exc
    modulus = _unpack(packed, p, m + 1)
    return field(p, m, modulus)
