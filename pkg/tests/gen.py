"""Seeded random generators and a sympy bridge shared by the test modules."""

from __future__ import annotations

import random

import sympy
from hypothesis import strategies as st

from polyauto.automorphism import PolyMap, affine, compose_factors, elementary, swap, translation
from polyauto.multipoly import MultiPoly, ScaledPoly
from polyauto.ring import Frac, RingElem, ring_gcd, is_unit
from polyauto.structure import LengthFourSpec

seeds = st.integers(0, 2**32 - 1).map(random.Random)

T = sympy.Symbol("t")
SYMS = sympy.symbols("X Y Z W")

COPRIME_PAIRS = [
    (RingElem((0, 1)), RingElem((1, 1))),
    (RingElem((1, 1)), RingElem((0, 1))),
    (RingElem((0, 1)), RingElem((2,))),
    (RingElem((2,)), RingElem((0, 1))),
    (RingElem((1, 1)), RingElem((2,))),
    (RingElem((2,)), RingElem((1, 1))),
]


# -- sympy bridge -------------------------------------------------------------


def ring_sym(x: RingElem):
    return sum((c * T**i for i, c in enumerate(x.coeffs)), sympy.Integer(0))


def frac_sym(x: Frac):
    return ring_sym(x.num) / ring_sym(x.den)


def poly_sym(p: MultiPoly, syms=SYMS):
    out = sympy.Integer(0)
    for m, c in p.terms.items():
        term = ring_sym(c)
        for s, e in zip(syms, m):
            term *= s**e
        out += term
    return out


def scaled_sym(p: ScaledPoly, syms=SYMS):
    return poly_sym(p.num, syms) / ring_sym(p.den)


def map_sym(F: PolyMap):
    return [scaled_sym(c) for c in F.coords]


def sym_equal(a, b) -> bool:
    return sympy.cancel(sympy.together(a - b)) == 0


# -- ring and polynomials -----------------------------------------------------


def ring_elem(rng: random.Random, deg: int = 2, bound: int = 3, nonzero: bool = False) -> RingElem:
    while True:
        x = RingElem([rng.randint(-bound, bound) for _ in range(rng.randint(0, deg) + 1)])
        if not (nonzero and x.is_zero()):
            return x


def frac(rng: random.Random, nonzero: bool = False) -> Frac:
    return Frac(ring_elem(rng, nonzero=nonzero), ring_elem(rng, 1, 2, nonzero=True))


def poly(rng: random.Random, nvars: int, maxdeg: int = 3, nterms: int = 4) -> MultiPoly:
    terms = {}
    for _ in range(rng.randint(0, nterms)):
        m = [0] * nvars
        for _ in range(rng.randint(0, maxdeg)):
            m[rng.randrange(nvars)] += 1
        terms[tuple(m)] = ring_elem(rng, 1, 3)
    return MultiPoly(nvars, terms)


def scaled(rng: random.Random, nvars: int, maxdeg: int = 3) -> ScaledPoly:
    return ScaledPoly(poly(rng, nvars, maxdeg), ring_elem(rng, 1, 2, nonzero=True))


def univariate(rng: random.Random, lo: int = 1, hi: int = 3, scale: RingElem | None = None,
               nonzero: bool = False) -> MultiPoly:
    """Zero constant term; degrees in [lo, hi]; coefficient of X^k divisible by scale^k if given."""
    while True:
        terms = {}
        for k in range(lo, hi + 1):
            c = ring_elem(rng, 1, 2)
            if scale is not None:
                c = c * scale**k
            terms[(k,)] = c
        p = MultiPoly(1, terms)
        if not (nonzero and p.is_zero()):
            return p


def random_map(rng: random.Random, n: int, maxdeg: int = 2) -> PolyMap:
    return PolyMap(tuple(scaled(rng, n, maxdeg) for _ in range(n)))


# -- automorphisms ------------------------------------------------------------


def one_var_rule(rng: random.Random, n: int, target: int, hi: int, lo: int = 1, field: bool = False) -> ScaledPoly:
    """A rule for an elementary factor on ``target``, in the other variables."""
    others = [i for i in range(n) if i != target]
    terms = {}
    for _ in range(rng.randint(1, 3)):
        m = [0] * n
        for _ in range(rng.randint(lo, hi)):
            m[rng.choice(others)] += 1
        terms[tuple(m)] = ring_elem(rng, 1, 2)
    den = RingElem((0, 1)) if field and rng.random() < 0.5 else RingElem((1,))
    return ScaledPoly(MultiPoly(n, terms), den)


def unimodular(rng: random.Random):
    """A random element of GL_2(Z[t]) as an affine factor."""
    kind = rng.randrange(4)
    if kind == 0:
        return affine([[1, ring_elem(rng, 1, 2)], [0, 1]])
    if kind == 1:
        return affine([[1, 0], [ring_elem(rng, 1, 2), 1]])
    if kind == 2:
        return swap()
    return affine([[rng.choice([1, -1]), 0], [0, rng.choice([1, -1])]])


def tame_word(rng: random.Random, max_factors: int = 6, max_deg: int = 4, degree_budget: int = 32):
    """Random factor list over Z[t] (so the composition is tame).

    The product of rule degrees stays within ``degree_budget`` to keep the
    composed map small.
    """
    fs = []
    budget = degree_budget
    for _ in range(rng.randint(1, max_factors)):
        r = rng.random()
        if r < 0.6 and budget >= 1:
            target = rng.randrange(2)
            hi = max(1, min(max_deg, budget))
            rule = one_var_rule(rng, 2, target, hi)
            budget //= max(1, max(sum(m) for m in rule.num.terms) if rule.num.terms else 1)
            fs.append(elementary(2, target, rule))
        elif r < 0.9:
            fs.append(unimodular(rng))
        else:
            fs.append(translation([ring_elem(rng, 1, 2), ring_elem(rng, 1, 2)]))
    return fs


def alternating_word(rng: random.Random, k: int, field: bool = True, degree_budget: int = 16):
    """k nonlinear one-variable elementary factors with alternating targets."""
    start = rng.randrange(2)
    fs = []
    budget = degree_budget
    for i in range(k):
        target = (start + i) % 2
        left = k - i - 1
        hi = 3 if budget // 3 >= 2**left else 2
        rule = univariate(rng, 2, rng.randint(2, hi), nonzero=True)
        while all(m[0] < 2 for m in rule.terms):
            rule = univariate(rng, 2, hi, nonzero=True)
        budget //= max(m[0] for m in rule.terms)
        den = RingElem((0, 1)) if field and rng.random() < 0.3 else RingElem((1,))
        fs.append(elementary(2, target, ScaledPoly(rule.embed(2, [1 - target]), den)))
    return fs


def random_spec(rng: random.Random) -> LengthFourSpec:
    """Valid non-degenerate spec: b divides C's coefficients, a divides D's, degree <= 2."""
    a, b = rng.choice(COPRIME_PAIRS)
    assert is_unit(ring_gcd(a, b))
    C = univariate(rng, 1, rng.randint(1, 2), nonzero=True)
    C = MultiPoly(1, {m: c * b for m, c in C.terms.items()})
    D = univariate(rng, 1, rng.randint(1, 2), nonzero=True)
    D = MultiPoly(1, {m: c * a for m, c in D.terms.items()})
    return LengthFourSpec(C, D, a, b)


def compose_word(fs) -> PolyMap:
    return compose_factors(fs, 2)
