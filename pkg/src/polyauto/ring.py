"""Exact arithmetic in the coefficient ring Z[t] and its fraction field.

Elements of Z[t] are :class:`RingElem` values holding a tuple of Python ints
(index i is the coefficient of t^i, no trailing zeros).  Elements of the
fraction field are :class:`Frac` values kept in lowest terms with a
denominator whose leading integer coefficient is positive.
"""

from __future__ import annotations

from math import gcd as igcd
from typing import Iterable, Union


class RingError(ArithmeticError):
    """Domain error in Z[t] (zero divisor, gcd(0, 0), ...)."""


class ExactDivisionError(RingError):
    """Raised when an exact division does not go through."""


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class RingElem:
    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs = _trim(coeffs)
        self._hash = None

    @classmethod
    def const(cls, n: int) -> "RingElem":
        return cls((n,))

    @classmethod
    def t(cls) -> "RingElem":
        return cls((0, 1))

    # -- basic predicates -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def degree(self) -> int:
        """Degree in t; -1 for the zero element."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return RingElem(out)

    __radd__ = __add__

    def __neg__(self):
        return RingElem(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return RingElem(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise RingError("negative power in Z[t]")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, n: int) -> "RingElem":
        return RingElem(n * c for c in self.coeffs)

    def __call__(self, value):
        """Evaluate at ``t = value`` (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = RingElem.const(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("RingElem", self.coeffs))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"RingElem({list(self.coeffs)})"

    def __str__(self):
        return format_ring(self)


RingLike = Union[RingElem, int]


def _coerce(x):
    if isinstance(x, RingElem):
        return x
    if isinstance(x, int):
        return RingElem.const(x)
    return NotImplemented


def as_ring(x: RingLike) -> RingElem:
    r = _coerce(x)
    if r is NotImplemented:
        raise TypeError(f"cannot coerce {x!r} to RingElem")
    return r


ZERO = RingElem()
ONE = RingElem((1,))
T = RingElem((0, 1))


def ring_add(x: RingLike, y: RingLike) -> RingElem:
    return as_ring(x) + as_ring(y)


def ring_mul(x: RingLike, y: RingLike) -> RingElem:
    return as_ring(x) * as_ring(y)


def _divmod_exact(x: RingElem, d: RingElem) -> RingElem | None:
    """Quotient q with x == d*q, or None when d does not divide x."""
    if d.is_zero():
        raise RingError("division by zero in Z[t]")
    if x.is_zero():
        return ZERO
    if x.degree < d.degree:
        return None
    rem = list(x.coeffs)
    dc = d.coeffs
    dl = dc[-1]
    dd = len(dc) - 1
    q = [0] * (len(rem) - dd)
    for k in range(len(rem) - 1, dd - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        qc, r = divmod(c, dl)
        if r:
            return None
        q[k - dd] = qc
        for i, v in enumerate(dc):
            rem[k - dd + i] -= qc * v
    if any(rem):
        return None
    return RingElem(q)


def ring_divides(d: RingLike, x: RingLike) -> bool:
    d, x = as_ring(d), as_ring(x)
    if d.is_zero():
        raise RingError("divisibility by zero is undefined")
    return _divmod_exact(x, d) is not None


def ring_exact_div(d: RingLike, x: RingLike) -> RingElem:
    """Return q with x == d*q; raise ExactDivisionError otherwise."""
    d, x = as_ring(d), as_ring(x)
    q = _divmod_exact(x, d)
    if q is None:
        raise ExactDivisionError(f"{format_ring(d)} does not divide {format_ring(x)}")
    return q


def integer_content(x: RingElem) -> int:
    g = 0
    for c in x.coeffs:
        g = igcd(g, c)
        if g == 1:
            break
    return g


def normalize(x: RingElem) -> RingElem:
    """Associate of x with positive leading coefficient."""
    return -x if x.lc < 0 else x


def primitive_part(x: RingElem) -> RingElem:
    c = integer_content(x)
    if c == 0:
        return ZERO
    return normalize(RingElem(v // c for v in x.coeffs))


def _prem(a: RingElem, b: RingElem) -> RingElem:
    """Pseudo-remainder of a by b: lc(b)^k * a mod b."""
    r = list(a.coeffs)
    bc = b.coeffs
    db = len(bc) - 1
    lb = bc[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * v for v in r]
        for i, v in enumerate(bc):
            r[shift + i] -= lr * v
        while r and r[-1] == 0:
            r.pop()
    return RingElem(r)


def ring_gcd(x: RingLike, y: RingLike) -> RingElem:
    """Normalized gcd in Z[t]: integer content gcd times primitive PRS gcd."""
    x, y = as_ring(x), as_ring(y)
    if x.is_zero() and y.is_zero():
        raise RingError("gcd(0, 0) is undefined")
    if x.is_zero():
        return normalize(y)
    if y.is_zero():
        return normalize(x)
    c = igcd(integer_content(x), integer_content(y))
    if x.is_constant() or y.is_constant():
        return RingElem.const(c)
    a, b = primitive_part(x), primitive_part(y)
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero():
        r = _prem(a, b)
        a, b = b, primitive_part(r) if not r.is_zero() else ZERO
    return normalize(a.scale(c) if a.degree > 0 else RingElem.const(c))


def is_unit(x: RingLike) -> bool:
    return as_ring(x).coeffs in ((1,), (-1,))


def _int_ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """g, x, y with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _shift(x: RingElem, k: int) -> RingElem:
    return RingElem((0,) * k + x.coeffs) if x.coeffs else x


def ring_bezout(a: RingLike, b: RingLike, max_rounds: int = 400) -> tuple[RingElem, RingElem] | None:
    """(u, v) with u*a + v*b = 1 when the ideal (a, b) is all of Z[t], else None.

    Builds a strong Groebner basis of (a, b) over Z with cofactors: the ideal
    is the unit ideal iff the basis contains +-1.  Raises RingError if the
    round cap is hit before the basis closes.
    """
    a, b = as_ring(a), as_ring(b)
    basis: list[tuple[RingElem, RingElem, RingElem]] = []

    def reduce(h, u, v):
        changed = True
        while changed and not h.is_zero():
            changed = False
            for g, gu, gv in basis:
                if g.degree <= h.degree and h.lc % g.lc == 0:
                    q = _shift(RingElem.const(h.lc // g.lc), h.degree - g.degree)
                    h, u, v = h - q * g, u - q * gu, v - q * gv
                    changed = True
                    break
        return h, u, v

    pending = [(a, ONE, ZERO), (b, ZERO, ONE)]
    rounds = 0
    pairs: list[tuple[int, int]] = []
    while pending or pairs:
        rounds += 1
        if rounds > max_rounds:
            raise RingError("ideal membership search did not close")
        if pending:
            h, u, v = reduce(*pending.pop())
            if h.is_zero():
                continue
            if h.is_constant() and abs(h.lc) == 1:
                return (u, v) if h.lc == 1 else (-u, -v)
            pairs.extend((i, len(basis)) for i in range(len(basis)))
            basis.append((h, u, v))
            continue
        i, j = pairs.pop()
        (f, fu, fv), (g, gu, gv) = basis[i], basis[j]
        if f.degree < g.degree:
            (f, fu, fv), (g, gu, gv) = (g, gu, gv), (f, fu, fv)
        k = f.degree - g.degree
        lf, lg = f.lc, g.lc
        l = lf * lg // igcd(lf, lg)
        cf, cg = RingElem.const(l // lf), _shift(RingElem.const(l // lg), k)
        pending.append((cf * f - cg * g, cf * fu - cg * gu, cf * fv - cg * gv))
        if lf % lg and lg % lf:
            _, x, y = _int_ext_gcd(lf, lg)
            cx, cy = RingElem.const(x), _shift(RingElem.const(y), k)
            pending.append((cx * f + cy * g, cx * fu + cy * gu, cx * fv + cy * gv))
    return None


# ---------------------------------------------------------------------------
# fraction field K = Frac(Z[t])
# ---------------------------------------------------------------------------


class Frac:
    """Element of Frac(Z[t]) in lowest terms, denominator normalized."""

    __slots__ = ("num", "den")

    def __init__(self, num: RingLike, den: RingLike = 1, *, reduced: bool = False):
        num, den = as_ring(num), as_ring(den)
        if den.is_zero():
            raise RingError("zero denominator")
        if not reduced:
            if num.is_zero():
                den = ONE
            elif den.is_one():
                pass
            else:
                g = ring_gcd(num, den)
                if not g.is_one():
                    num, den = ring_exact_div(g, num), ring_exact_div(g, den)
            if den.lc < 0:
                num, den = -num, -den
        self.num = num
        self.den = den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_integral(self) -> bool:
        return self.den.is_one()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def __add__(self, other):
        other = as_frac(other)
        if self.den.is_one() and other.den.is_one():
            return Frac(self.num + other.num, ONE, reduced=True)
        if self.den == other.den:
            return Frac(self.num + other.num, self.den)
        return Frac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Frac(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        return self + (-as_frac(other))

    def __rsub__(self, other):
        return as_frac(other) - self

    def __mul__(self, other):
        other = as_frac(other)
        if self.den.is_one() and other.den.is_one():
            return Frac(self.num * other.num, ONE, reduced=True)
        return Frac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "Frac":
        if self.is_zero():
            raise RingError("inverse of zero")
        return Frac(self.den, self.num)

    def __truediv__(self, other):
        return self * as_frac(other).inverse()

    def __rtruediv__(self, other):
        return as_frac(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Frac(self.num ** k, self.den ** k, reduced=True)

    def __eq__(self, other):
        if isinstance(other, (int, RingElem)):
            other = Frac(other)
        if not isinstance(other, Frac):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"Frac({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.den.is_one():
            return format_ring(self.num)
        return f"({format_ring(self.num)})/({format_ring(self.den)})"


def as_frac(x) -> Frac:
    if isinstance(x, Frac):
        return x
    return Frac(as_ring(x), ONE, reduced=True)


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def format_ring(x: RingElem) -> str:
    """Human/parser friendly text, highest power first: ``t^2 - 3*t + 1``."""
    if x.is_zero():
        return "0"
    parts = []
    for i in range(len(x.coeffs) - 1, -1, -1):
        c = x.coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = str(a)
        else:
            mono = "t" if i == 1 else f"t^{i}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
