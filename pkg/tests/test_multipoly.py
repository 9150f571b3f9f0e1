import pytest
import sympy
from hypothesis import given, settings

from gen import SYMS, poly, poly_sym, ring_elem, scaled, scaled_sym, seeds, sym_equal
from polyauto.ring import RingElem
from polyauto.multipoly import (
    DegreeError,
    MultiPoly,
    ScaledPoly,
    ShapeError,
    content,
    leading_form,
    substitute,
    total_degree,
)

SETTINGS = settings(max_examples=150, deadline=None)


@SETTINGS
@given(seeds)
def test_arithmetic_matches_sympy(rng):
    n = rng.randint(1, 3)
    p, q = poly(rng, n), poly(rng, n)
    assert sympy.expand(poly_sym(p + q) - poly_sym(p) - poly_sym(q)) == 0
    assert sympy.expand(poly_sym(p * q) - poly_sym(p) * poly_sym(q)) == 0
    assert sympy.expand(poly_sym(p**2) - poly_sym(p) ** 2) == 0


@SETTINGS
@given(seeds)
def test_derivative_matches_sympy(rng):
    n = rng.randint(1, 3)
    p = poly(rng, n, 4)
    i = rng.randrange(n)
    assert sympy.expand(poly_sym(p.derivative(i)) - sympy.diff(poly_sym(p), SYMS[i])) == 0


@SETTINGS
@given(seeds)
def test_substitute_matches_sympy(rng):
    n = rng.randint(1, 3)
    p = scaled(rng, n, 3)
    args = [scaled(rng, n, 2) for _ in range(n)]
    got = substitute(p, args)
    expected = scaled_sym(p).subs({SYMS[i]: scaled_sym(a) for i, a in enumerate(args)}, simultaneous=True)
    assert sym_equal(scaled_sym(got), expected)


@SETTINGS
@given(seeds)
def test_scaled_canonical_form(rng):
    p = scaled(rng, 2)
    c = ring_elem(rng, 1, nonzero=True)
    same = ScaledPoly(p.num.scale(c), p.den * c)
    assert same == p and hash(same) == hash(p)
    if not p.is_zero():
        assert p.den.lc > 0


@SETTINGS
@given(seeds)
def test_leading_form_and_degree(rng):
    p = poly(rng, 2, 4)
    if p.is_zero():
        with pytest.raises(DegreeError):
            total_degree(p)
        return
    d = total_degree(p)
    h = leading_form(p)
    assert all(sum(m) == d for m in h.terms)
    assert sympy.Poly(poly_sym(p), *SYMS[:2]).total_degree() == d


def test_content():
    t = RingElem((0, 1))
    p = MultiPoly(2, {(1, 0): t * t, (0, 2): t})
    assert content(p) == t


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        MultiPoly.var(2, 0) + MultiPoly.var(3, 0)


def test_embed_and_eval():
    x = MultiPoly.var(1, 0)
    p = (x * x).embed(3, [2])
    assert p == MultiPoly.var(3, 2) ** 2
    q = (MultiPoly.var(2, 0) * MultiPoly.var(2, 1)).eval_constant_vars({0: 3})
    assert q == MultiPoly.var(2, 1).scale(RingElem((3,)))
