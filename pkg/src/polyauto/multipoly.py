"""Sparse multivariate polynomials over Z[t] and their fraction-field scalings.

A :class:`MultiPoly` maps exponent tuples (one entry per ambient variable) to
nonzero :class:`~polyauto.ring.RingElem` coefficients.  A :class:`ScaledPoly`
is ``numerator / denominator`` with the denominator in Z[t]; it is reduced
eagerly so that integrality is a structural test.

Degrees only count the affine variables; ``t`` lives in the coefficients.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping, Sequence

from .ring import (
    ONE,
    ZERO,
    Frac,
    RingElem,
    RingError,
    as_frac,
    as_ring,
    is_unit,
    normalize,
    ring_exact_div,
    ring_gcd,
)

Monomial = tuple[int, ...]


class ShapeError(ValueError):
    """Variable-count mismatch between operands."""


class DegreeError(ValueError):
    """Degree (or leading form, content) of the zero polynomial."""


def _grlex_key(m: Monomial):
    return (sum(m), m)


class MultiPoly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, RingElem] | None = None):
        if nvars < 0:
            raise ShapeError("negative variable count")
        self.nvars = nvars
        clean: dict[Monomial, RingElem] = {}
        if terms:
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != nvars:
                    raise ShapeError(f"monomial {m} does not have {nvars} exponents")
                c = as_ring(c)
                if not c.is_zero():
                    clean[m] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: as_ring(c)})

    @classmethod
    def var(cls, nvars: int, i: int, coeff=1) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise ShapeError(f"variable index {i} out of range for {nvars} variables")
        m = [0] * nvars
        m[i] = 1
        return cls(nvars, {tuple(m): as_ring(coeff)})

    @classmethod
    def univariate(cls, coeffs: Sequence, nvars: int = 1, index: int = 0) -> "MultiPoly":
        """Polynomial sum_k coeffs[k] * x_index^k."""
        terms = {}
        for k, c in enumerate(coeffs):
            m = [0] * nvars
            m[index] = k
            terms[tuple(m)] = as_ring(c)
        return cls(nvars, terms)

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "MultiPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_coeff(self) -> RingElem:
        return self.terms.get((0,) * self.nvars, ZERO)

    def variables_used(self) -> set[int]:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return used

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise ShapeError(f"variable counts differ: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if isinstance(other, (int, RingElem)):
            other = MultiPoly.constant(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[m]
                else:
                    out[m] = s
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, RingElem)):
            other = MultiPoly.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, RingElem)):
            return self.scale(as_ring(other))
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return MultiPoly._raw(self.nvars, {})
        # Pack (monomial, t-power) into one mixed-radix int so every product of
        # integer coefficients is a single dict update.
        n = self.nvars
        radix = []
        for i in range(n):
            radix.append(max(m[i] for m in self.terms) + max(m[i] for m in other.terms) + 1)
        weights = []
        w = 1
        for r in radix:
            weights.append(w)
            w *= r
        tw = w

        def flat(p):
            out = []
            for m, c in p.terms.items():
                base = sum(e * wt for e, wt in zip(m, weights))
                for k, x in enumerate(c.coeffs):
                    if x:
                        out.append((base + k * tw, x))
            return out

        fa, fb = flat(self), flat(other)
        acc: dict = defaultdict(int)
        for ka, x in fa:
            for kb, y in fb:
                acc[ka + kb] += x * y
        grouped: dict = defaultdict(dict)
        for key, v in acc.items():
            if v:
                k, rest = divmod(key, tw)
                m = []
                for r in radix:
                    rest, e = divmod(rest, r)
                    m.append(e)
                grouped[tuple(m)][k] = v
        out = {}
        for m, cs in grouped.items():
            top = max(cs)
            out[m] = RingElem([cs.get(k, 0) for k in range(top + 1)])
        return MultiPoly._raw(self.nvars, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c: RingElem) -> "MultiPoly":
        if c.is_zero():
            return MultiPoly._raw(self.nvars, {})
        if c.is_one():
            return self
        return MultiPoly._raw(self.nvars, {m: v * c for m, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self, i: int) -> "MultiPoly":
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c.scale(e)
        return MultiPoly._raw(self.nvars, out)

    def exact_div_ring(self, d: RingElem) -> "MultiPoly":
        """Divide every coefficient exactly by d."""
        return MultiPoly._raw(self.nvars, {m: ring_exact_div(d, c) for m, c in self.terms.items()})

    def homogeneous_part(self, deg: int) -> "MultiPoly":
        return MultiPoly._raw(self.nvars, {m: c for m, c in self.terms.items() if sum(m) == deg})

    def embed(self, nvars: int, positions: Sequence[int]) -> "MultiPoly":
        """Re-index variables: variable i goes to position positions[i]."""
        out = {}
        for m, c in self.terms.items():
            mm = [0] * nvars
            for i, e in enumerate(m):
                if e:
                    mm[positions[i]] += e
            mm = tuple(mm)
            out[mm] = out[mm] + c if mm in out else c
        return MultiPoly(nvars, out)

    def eval_constant_vars(self, values: Mapping[int, int]) -> "MultiPoly":
        """Substitute integers for some variables, keeping the ambient count."""
        out: dict = {}
        for m, c in self.terms.items():
            mm = list(m)
            factor = 1
            for i, v in values.items():
                factor *= v ** mm[i]
                mm[i] = 0
            if factor:
                key = tuple(mm)
                out[key] = out.get(key, ZERO) + c.scale(factor)
        return MultiPoly(self.nvars, out)

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, RingElem)):
            other = MultiPoly.constant(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Monomial, RingElem]]:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def __repr__(self):
        from .parse import format_poly

        return f"MultiPoly({self.nvars}, {format_poly(self)!r})"


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def poly_add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p + q


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p * q


def total_degree(p: MultiPoly) -> int:
    if p.is_zero():
        raise DegreeError("total degree of the zero polynomial is undefined")
    return max(sum(m) for m in p.terms)


def leading_form(p: MultiPoly) -> MultiPoly:
    return p.homogeneous_part(total_degree(p))


def content(p: MultiPoly) -> RingElem:
    if p.is_zero():
        raise DegreeError("content of the zero polynomial is undefined")
    g = ZERO
    for c in p.terms.values():
        g = ring_gcd(g, c)
        if g.is_one():
            break
    return g


# ---------------------------------------------------------------------------
# fraction-field polynomials
# ---------------------------------------------------------------------------


class ScaledPoly:
    """``numerator / denominator`` over K = Frac(Z[t]), in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den=ONE, *, reduced: bool = False):
        den = as_ring(den)
        if den.is_zero():
            raise RingError("zero denominator")
        if not reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def of(cls, p: MultiPoly) -> "ScaledPoly":
        return cls(p, ONE, reduced=True)

    @classmethod
    def constant(cls, nvars: int, c) -> "ScaledPoly":
        c = as_frac(c)
        return cls(MultiPoly.constant(nvars, c.num), c.den, reduced=True)

    @classmethod
    def var(cls, nvars: int, i: int) -> "ScaledPoly":
        return cls(MultiPoly.var(nvars, i), ONE, reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_integral(self) -> bool:
        return is_unit(self.den)

    def is_constant(self) -> bool:
        return self.num.is_constant()

    def constant_value(self) -> Frac:
        return Frac(self.num.constant_coeff(), self.den)

    def __add__(self, other):
        other = as_scaled(other, self.nvars)
        if self.den == other.den:
            return ScaledPoly(self.num + other.num, self.den)
        g = ring_gcd(self.den, other.den)
        da = ring_exact_div(g, self.den)
        db = ring_exact_div(g, other.den)
        return ScaledPoly(self.num.scale(db) + other.num.scale(da), da * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ScaledPoly(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        return self + (-as_scaled(other, self.nvars))

    def __rsub__(self, other):
        return as_scaled(other, self.nvars) - self

    def __mul__(self, other):
        other = as_scaled(other, self.nvars)
        return ScaledPoly(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return ScaledPoly(self.num ** k, self.den ** k)

    def div_ring(self, d) -> "ScaledPoly":
        """Divide by a nonzero element of K."""
        d = as_frac(d)
        return ScaledPoly(self.num.scale(d.den), self.den * d.num)

    def derivative(self, i: int) -> "ScaledPoly":
        return ScaledPoly(self.num.derivative(i), self.den)

    def homogeneous_part(self, deg: int) -> "ScaledPoly":
        return ScaledPoly(self.num.homogeneous_part(deg), self.den)

    def coefficient(self, m: Monomial) -> Frac:
        return Frac(self.num.terms.get(tuple(m), ZERO), self.den)

    def embed(self, nvars: int, positions: Sequence[int]) -> "ScaledPoly":
        return ScaledPoly(self.num.embed(nvars, positions), self.den, reduced=True)

    def __eq__(self, other):
        if isinstance(other, (int, RingElem, MultiPoly, Frac)):
            other = as_scaled(other, self.nvars)
        if not isinstance(other, ScaledPoly):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        from .parse import format_scaled

        return f"ScaledPoly({self.nvars}, {format_scaled(self)!r})"


def _reduce(num: MultiPoly, den: RingElem) -> tuple[MultiPoly, RingElem]:
    if num.is_zero():
        return num, ONE
    if den.is_one():
        return num, den
    g = normalize(den)
    for c in num.terms.values():
        g = ring_gcd(g, c)
        if g.is_one():
            break
    if not g.is_one():
        num = num.exact_div_ring(g)
        den = ring_exact_div(g, den)
    if den.lc < 0:
        num, den = -num, -den
    return num, den


def as_scaled(x, nvars: int) -> ScaledPoly:
    if isinstance(x, ScaledPoly):
        if x.nvars != nvars:
            raise ShapeError(f"variable counts differ: {x.nvars} vs {nvars}")
        return x
    if isinstance(x, MultiPoly):
        if x.nvars != nvars:
            raise ShapeError(f"variable counts differ: {x.nvars} vs {nvars}")
        return ScaledPoly.of(x)
    if isinstance(x, (int, RingElem, Frac)):
        return ScaledPoly.constant(nvars, x)
    raise TypeError(f"cannot coerce {x!r} to ScaledPoly")


def is_integral(s: ScaledPoly) -> bool:
    return s.is_integral()


def scaled_total_degree(s: ScaledPoly) -> int:
    return total_degree(s.num)


def scaled_leading_form(s: ScaledPoly) -> ScaledPoly:
    return ScaledPoly(leading_form(s.num), s.den)


def substitute(p: MultiPoly | ScaledPoly, args: Sequence) -> ScaledPoly:
    """Evaluate p at fraction-field arguments (all in one ambient space).

    Arguments may be ScaledPoly or MultiPoly; the result lives in their
    common variable count.
    """
    if isinstance(p, ScaledPoly):
        inner = substitute(p.num, args)
        return ScaledPoly(inner.num, inner.den * p.den)
    if len(args) != p.nvars:
        raise ShapeError(f"{p.nvars} variables but {len(args)} arguments")
    if not args:
        raise ShapeError("substitution needs at least one argument")
    first = args[0]
    n = first.nvars
    sargs = [as_scaled(a, n) for a in args]
    if p.is_zero():
        return ScaledPoly(MultiPoly.zero(n))
    # common denominator: p(x_i = N_i / d_i) = sum c_m prod N_i^e_i * prod d_i^(E_i - e_i) / prod d_i^E_i
    maxdeg = [p.degree_in(i) for i in range(p.nvars)]
    # images of monomials are built one factor at a time, peeling the smallest
    # argument first, so each step multiplies by a short polynomial
    order = sorted(range(p.nvars), key=lambda i: len(sargs[i].num.terms))
    images: dict[Monomial, MultiPoly] = {(0,) * p.nvars: MultiPoly.constant(n, 1)}

    def image(m: Monomial) -> MultiPoly:
        got = images.get(m)
        if got is None:
            i = next(k for k in order if m[k])
            prev = m[:i] + (m[i] - 1,) + m[i + 1:]
            got = image(prev) * sargs[i].num
            images[m] = got
        return got

    acc: dict = {}
    for m, c in sorted(p.terms.items(), key=lambda kv: sum(kv[0])):
        scale = c
        for i, e in enumerate(m):
            rest = maxdeg[i] - e
            if rest and not sargs[i].den.is_one():
                scale = scale * sargs[i].den ** rest
        for mm, v in image(m).terms.items():
            w = v * scale
            if mm in acc:
                w = acc[mm] + w
            acc[mm] = w
    total = MultiPoly(n, {mm: v for mm, v in acc.items() if not v.is_zero()})
    den = ONE
    for i, s in enumerate(sargs):
        if maxdeg[i] > 0 and not s.den.is_one():
            den = den * s.den ** maxdeg[i]
    return ScaledPoly(total, den)
