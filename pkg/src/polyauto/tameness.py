"""Degree-reduction test for membership in Tame_2(R), R = Z[t].

Each loop iteration either swaps the two coordinates or kills the leading
form of one coordinate with an elementary/affine map applied on the left,
so tdeg strictly drops until the map is affine.  The trace of applied maps is
kept as a certificate; a stuck state is kept as a witness.

``field=True`` runs the same loop with constants allowed in K = Frac(Z[t]).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .automorphism import (
    ELEMENTARY,
    Factor,
    PolyMap,
    affine,
    compose,
    compose_factors,
    elementary,
    factor_to_map,
    invert_factor,
    jacobian_det,
    swap,
)
from .multipoly import DegreeError, ScaledPoly, scaled_leading_form, scaled_total_degree
from .ring import Frac, RingError, is_unit, ring_bezout

AFFINE_REDUCE, SWAP, ELEMENTARY_REDUCE = "affine-reduce", "swap", "elementary-reduce"


class NotAnAutomorphismError(ValueError):
    """Field-mode reduction got stuck, so the input is not invertible over K."""


class CertificateError(ValueError):
    """A certificate failed to replay."""


@dataclass
class ReductionStep:
    kind: str
    factor: Factor
    tdeg_before: int
    tdeg_after: int


@dataclass
class TameCertificate:
    original: PolyMap
    steps: list[ReductionStep]
    terminal: PolyMap
    field: bool = False

    @property
    def tame(self) -> bool:
        return True


@dataclass
class NotTameWitness:
    original: PolyMap
    stuck_map: PolyMap
    failed_step: int
    reason: str
    required_constant: Optional[Frac] = None
    manual_review: bool = False
    steps: list[ReductionStep] = field(default_factory=list)

    @property
    def tame(self) -> bool:
        return False

    def recheck(self) -> bool:
        """Re-run the failed condition on the stuck map; True if it fails again."""
        return _diagnose(self.stuck_map, field=False) is not None


def tdeg(F: PolyMap) -> int:
    if F.dimension != 2:
        raise ValueError("tdeg is defined for two-variable maps")
    try:
        return sum(scaled_total_degree(c) for c in F.coords)
    except DegreeError:
        raise DegreeError("tdeg of a map with a zero coordinate is undefined") from None


def _ratio(h2: ScaledPoly, h1: ScaledPoly) -> Optional[Frac]:
    """c in K with h2 == c*h1, or None."""
    m, c1 = next(iter(h1.num.terms.items()))
    c2 = h2.num.terms.get(m)
    if c2 is None:
        return None
    c = Frac(c2 * h1.den, c1 * h2.den)
    if h1 * ScaledPoly.constant(h1.nvars, c) != h2:
        return None
    return c


def _unit_ok(x: Frac, field: bool) -> bool:
    if field:
        return not x.is_zero()
    return x.is_integral() and is_unit(x.num)


def _in_ring(c: Frac, field: bool) -> bool:
    return field or c.is_integral()


@dataclass
class _Move:
    kind: str
    factor: Factor
    new: PolyMap


def _next_move(F: PolyMap, field: bool):
    """Either a _Move or a (failed_step, reason, constant, manual_review) tuple.

    Returns None when F is affine with an invertible linear part (step 7 pass).
    """
    P, Q = F.coords
    if P.is_zero() or Q.is_zero():
        return (7, "zero coordinate: Jacobian determinant vanishes", None, False)
    d1, d2 = scaled_total_degree(P), scaled_total_degree(Q)
    if d1 == 0 or d2 == 0:
        return (7, "constant coordinate: Jacobian determinant vanishes", None, False)
    if d1 == d2 == 1:
        det = jacobian_det(F)
        if det.is_constant() and _unit_ok(det.constant_value(), field):
            return None
        return (7, f"det JF = {det} is not a unit", None, False)
    if d1 == d2:
        h1, h2 = scaled_leading_form(P), scaled_leading_form(Q)
        r = _ratio(h2, h1)
        if r is None:
            return (4, "leading forms are not proportional; no affine map lowers tdeg", None, False)
        if _in_ring(r, field):
            f = elementary(2, 1, -ScaledPoly.var(2, 0) * ScaledPoly.constant(2, r))
            return _Move(AFFINE_REDUCE, f, PolyMap((P, Q - P * ScaledPoly.constant(2, r)), F.names))
        inv = r.inverse()
        if inv.is_integral():
            f = elementary(2, 0, -ScaledPoly.var(2, 1) * ScaledPoly.constant(2, inv))
            return _Move(AFFINE_REDUCE, f, PolyMap((P - Q * ScaledPoly.constant(2, inv), Q), F.names))
        # every tdeg-lowering affine map has a row lambda*(p, -q); it must be unimodular
        p, q = r.num, r.den
        try:
            coeffs = ring_bezout(p, -q)
        except RingError:
            return (4, f"leading forms proportional by {r}; unit-ideal search for ({p}, {q}) did not close",
                    r, True)
        if coeffs is None:
            return (4, f"leading forms proportional by {r}, and ({p}, {q}) is a proper ideal of Z[t], "
                       "so no affine map over R lowers tdeg", r, False)
        u, v = coeffs
        alpha, beta, gamma, delta = p, -q, v, -u
        f = affine([[gamma, delta], [alpha, beta]])
        two = ScaledPoly.constant
        newP = P * two(2, gamma) + Q * two(2, delta)
        newQ = P * two(2, alpha) + Q * two(2, beta)
        return _Move(AFFINE_REDUCE, f, PolyMap((newP, newQ), F.names))
    if d2 < d1:
        return _Move(SWAP, swap(2), PolyMap((Q, P), F.names))
    if d2 % d1:
        return (6, f"deg P = {d1} does not divide deg Q = {d2}", None, False)
    k = d2 // d1
    h1, h2 = scaled_leading_form(P), scaled_leading_form(Q)
    c = _ratio(h2, h1 ** k)
    if c is None:
        return (6, f"leading form of Q is not a constant multiple of (leading form of P)^{k}", None, False)
    if not _in_ring(c, field):
        return (6, f"h2 = c*h1^{k} needs c = {c}, which is not in Z[t]", c, False)
    cc = ScaledPoly.constant(2, c)
    f = elementary(2, 1, -(ScaledPoly.var(2, 0) ** k) * cc)
    return _Move(ELEMENTARY_REDUCE, f, PolyMap((P, Q - (P ** k) * cc), F.names))


def _diagnose(F: PolyMap, field: bool):
    """The failure tuple for a stuck map, or None if a move is possible."""
    mv = _next_move(F, field)
    if mv is None or isinstance(mv, _Move):
        return None
    return mv


def tame_check(F: PolyMap, field: bool = False):
    """Run the reduction; return a TameCertificate or a NotTameWitness.

    In field mode a stuck state raises NotAnAutomorphismError instead.
    """
    if F.dimension != 2:
        raise ValueError("tame_check works on two-variable maps")
    if not field and not F.is_integral():
        raise ValueError("ring-mode tame_check needs a map over Z[t]")
    start = tdeg(F)
    cap = start
    reductions = 0
    steps: list[ReductionStep] = []
    cur = F
    while True:
        mv = _next_move(cur, field)
        if mv is None:
            return TameCertificate(F, steps, cur, field)
        if not isinstance(mv, _Move):
            failed, reason, const, review = mv
            if field:
                raise NotAnAutomorphismError(f"step {failed}: {reason}")
            return NotTameWitness(F, cur, failed, reason, const, review, steps)
        before = tdeg(cur)
        after = tdeg(mv.new)
        if mv.kind != SWAP:
            assert after < before, "reduction step did not lower tdeg"
            reductions += 1
            assert reductions <= cap, "iteration cap reached"
        steps.append(ReductionStep(mv.kind, mv.factor, before, after))
        cur = mv.new


def recompose(cert: TameCertificate) -> PolyMap:
    """Rebuild the input from the terminal map and the inverted steps."""
    out = cert.terminal
    for step in reversed(cert.steps):
        out = compose(factor_to_map(invert_factor(step.factor)), out)
    return out


def verify_certificate(cert: TameCertificate) -> bool:
    """Replay forwards and backwards; raise CertificateError on mismatch."""
    cur = cert.original
    for i, step in enumerate(cert.steps):
        if tdeg(cur) != step.tdeg_before:
            raise CertificateError(f"step {i}: tdeg mismatch before")
        cur = compose(factor_to_map(step.factor), cur)
        if tdeg(cur) != step.tdeg_after:
            raise CertificateError(f"step {i}: tdeg mismatch after")
        if step.kind != SWAP and not step.tdeg_after < step.tdeg_before:
            raise CertificateError(f"step {i}: tdeg did not drop")
        if not cert.field and step.factor.over_field:
            raise CertificateError(f"step {i}: factor leaves Z[t]")
    if cur != cert.terminal:
        raise CertificateError("forward replay does not reach the terminal map")
    if tdeg(cur) != 2:
        raise CertificateError("terminal map is not affine")
    det = jacobian_det(cur)
    if not (det.is_constant() and _unit_ok(det.constant_value(), cert.field)):
        raise CertificateError("terminal map is not invertible")
    if recompose(cert) != cert.original:
        raise CertificateError("backward replay does not rebuild the input")
    return True


def certificate_factors(cert: TameCertificate) -> list[Factor]:
    """Factor list whose composition is the certified map."""
    from .automorphism import classify_map

    return [invert_factor(s.factor) for s in cert.steps] + [classify_map(cert.terminal)]
