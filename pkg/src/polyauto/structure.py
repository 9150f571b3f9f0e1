"""Length-four commutators and their stable-tameness certificates.

Univariate data (C, D, A, B) are one-variable MultiPoly over Z[t].  Maps in
the stabilized setting use variables (X, Y, W) for the commutator pipeline and
(X, Y, Z) for the worked example with a != b.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .automorphism import (
    Factor,
    PolyMap,
    affine,
    compose,
    compose_all,
    compose_factors,
    diagonal,
    elementary,
    factor_to_map,
    identity,
    invert_factor,
    invert_factors,
    jacobian_det,
    stabilize,
    stabilize_factor,
)
from .length import length, length_decompose
from .multipoly import MultiPoly, ScaledPoly, content, substitute
from .ring import ONE, Frac, RingElem, as_ring, is_unit, ring_divides, ring_exact_div, ring_gcd
from .tameness import NotTameWitness, tame_check


class StructureError(ValueError):
    """A precondition failed or a symbolic identity did not hold."""


class IdentityFailure(StructureError):
    def __init__(self, step: str, lhs: PolyMap, rhs: PolyMap):
        super().__init__(f"{step}: identity failed\n  lhs = {lhs}\n  rhs = {rhs}")
        self.step = step
        self.lhs = lhs
        self.rhs = rhs


def _check(step: str, lhs: PolyMap, rhs: PolyMap) -> None:
    if lhs != rhs:
        raise IdentityFailure(step, lhs, rhs)


def _at(f: MultiPoly, arg: ScaledPoly) -> ScaledPoly:
    """f(arg) for univariate f."""
    return substitute(f, [arg])


def _scaled_x(f: MultiPoly, c: RingElem) -> MultiPoly:
    """f(cX) for univariate f."""
    return MultiPoly(1, {m: coef * c ** m[0] for m, coef in f.terms.items()})


def _const(n: int, c) -> ScaledPoly:
    return ScaledPoly.constant(n, c)


# ---------------------------------------------------------------------------
# specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LengthFourSpec:
    """F1 = (X, Y + C(bX)/a), G1 = (X + D(aY)/b, Y)."""

    C: MultiPoly
    D: MultiPoly
    a: RingElem
    b: RingElem

    def __post_init__(self):
        object.__setattr__(self, "a", as_ring(self.a))
        object.__setattr__(self, "b", as_ring(self.b))
        for name in ("C", "D"):
            p = getattr(self, name)
            if p.nvars != 1:
                raise StructureError(f"{name} must be univariate")
            if not p.constant_coeff().is_zero():
                raise StructureError(f"{name}(0) must be 0")
        if self.a.is_zero() or self.b.is_zero():
            raise StructureError("a and b must be nonzero")
        if not is_unit(ring_gcd(self.a, self.b)):
            raise StructureError("gcd(a, b) must be 1")

    @property
    def degenerate(self) -> bool:
        return self.C.is_zero() or self.D.is_zero()

    def reduced(self) -> bool:
        """gcd(C(bX), a) = gcd(D(aY), b) = 1, so neither F1 nor G1 is already over R."""
        return all(
            p.is_zero() or is_unit(ring_gcd(content(_scaled_x(p, s)), d))
            for p, s, d in ((self.C, self.b, self.a), (self.D, self.a, self.b))
        )

    def a_divides_D(self) -> bool:
        return self.D.is_zero() or ring_divides(self.a, content(self.D))

    def factors(self) -> tuple[Factor, Factor]:
        """(F1, G1) as plane factors."""
        X = ScaledPoly.var(2, 0)
        Y = ScaledPoly.var(2, 1)
        f = _at(self.C, X * _const(2, self.b)).div_ring(self.a)
        g = _at(self.D, Y * _const(2, self.a)).div_ring(self.b)
        return elementary(2, 1, f), elementary(2, 0, g)


# ---------------------------------------------------------------------------
# Lemma-1 style extraction
# ---------------------------------------------------------------------------


def extract_scaled(A: MultiPoly, b) -> Optional[MultiPoly]:
    """C with C(bX) = A(X), or None when some X^k coefficient is not divisible by b^k."""
    b = as_ring(b)
    if A.nvars != 1:
        raise StructureError("A must be univariate")
    if b.is_zero():
        raise StructureError("b must be nonzero")
    if not A.constant_coeff().is_zero():
        raise StructureError("A(0) must be 0")
    out = {}
    for m, c in A.terms.items():
        bk = b ** m[0]
        if not ring_divides(bk, c):
            return None
        out[m] = ring_exact_div(bk, c)
    return MultiPoly(1, out)


def _coprime_poly(B: MultiPoly, b: RingElem) -> bool:
    return B.is_zero() and is_unit(b) or (not B.is_zero() and is_unit(ring_gcd(content(B), b)))


def check_lemma1_hypothesis(A: MultiPoly, B: MultiPoly, b) -> bool:
    """True iff A(B/b) has coefficients in Z[t].

    When it does and gcd(B, b) = 1, extraction of A at scale b is cross-checked
    and a failure raises StructureError (a counterexample).
    """
    b = as_ring(b)
    if b.is_zero():
        raise StructureError("b must be nonzero")
    if not A.constant_coeff().is_zero() or not B.constant_coeff().is_zero():
        raise StructureError("A(0) and B(0) must be 0")
    if A.is_zero():
        return True
    val = _at(A, ScaledPoly(B, b))
    ok = val.is_integral()
    if ok and _coprime_poly(B, b) and extract_scaled(A, b) is None:
        raise StructureError(f"integral A(B/b) but A is not C(bX): A={A}, B={B}, b={b}")
    return ok


@dataclass
class Length4Report:
    C: Optional[MultiPoly]
    D: Optional[MultiPoly]
    gcd_a2_b1: RingElem
    composition: PolyMap

    @property
    def ok(self) -> bool:
        return self.C is not None and self.D is not None and is_unit(self.gcd_a2_b1)


def length4_composition(data: Sequence[tuple[MultiPoly, RingElem]]) -> PolyMap:
    """G2 o F2 o G1 o F1 from [(A1, a1), (B1, b1), (A2, a2), (B2, b2)]."""
    (A1, a1), (B1, b1), (A2, a2), (B2, b2) = [(p, as_ring(c)) for p, c in data]
    X = ScaledPoly.var(2, 0)
    Y = ScaledPoly.var(2, 1)
    F1 = elementary(2, 1, _at(A1, X).div_ring(a1))
    G1 = elementary(2, 0, _at(B1, Y).div_ring(b1))
    F2 = elementary(2, 1, _at(A2, X).div_ring(a2))
    G2 = elementary(2, 0, _at(B2, Y).div_ring(b2))
    return compose_factors([G2, F2, G1, F1])


def check_length4_structure(data: Sequence[tuple[MultiPoly, RingElem]]) -> Length4Report:
    """Extract C with A2 = C(b1 X) and D with B1 = D(a2 Y); check gcd(a2, b1) = 1."""
    (A1, a1), (B1, b1), (A2, a2), (B2, b2) = [(p, as_ring(c)) for p, c in data]
    for p, c in ((A1, a1), (B1, b1), (A2, a2), (B2, b2)):
        if not p.constant_coeff().is_zero():
            raise StructureError("factor data must vanish at 0")
        if not _coprime_poly(p, c):
            raise StructureError(f"gcd({p}, {c}) is not 1")
    F = length4_composition(data)
    if not F.is_integral():
        raise StructureError("composition is not over Z[t]")
    report = Length4Report(extract_scaled(A2, b1), extract_scaled(B1, a2), ring_gcd(a2, b1), F)
    if not report.ok:
        raise StructureError(f"structure lemma counterexample: {report}")
    return report


# ---------------------------------------------------------------------------
# commutators
# ---------------------------------------------------------------------------


def build_commutator(spec: LengthFourSpec) -> PolyMap:
    """G1^-1 o F1^-1 o G1 o F1, composed from factors."""
    f1, g1 = spec.factors()
    return compose_factors([invert_factor(g1), invert_factor(f1), g1, f1])


def commutator_formula(spec: LengthFourSpec) -> PolyMap:
    """The same map from the closed-form coordinates (independent of composition)."""
    X = ScaledPoly.var(2, 0)
    Y = ScaledPoly.var(2, 1)
    a, b = _const(2, spec.a), _const(2, spec.b)
    u = _at(spec.C, X * b)
    z = Y * a + u
    v = _at(spec.C, X * b + _at(spec.D, z))
    first = X + (_at(spec.D, z) - _at(spec.D, z - v)).div_ring(spec.b)
    second = Y + (u - v).div_ring(spec.a)
    return PolyMap((first, second))


def verify_divisibility_claim(C: MultiPoly, D: MultiPoly, a, b) -> bool:
    """Whether the commutator is over Z[t].

    Raises if it is integral, the data is reduced, and a does not divide D.
    For an unreduced spec the implication is vacuous and is not checked.
    """
    spec = LengthFourSpec(C, D, a, b)
    F = build_commutator(spec)
    integral = F.is_integral()
    if integral and spec.reduced() and not spec.a_divides_D():
        raise StructureError(f"integral commutator with a={spec.a} not dividing D={D}")
    return integral


# ---------------------------------------------------------------------------
# stable-tameness certificates
# ---------------------------------------------------------------------------


@dataclass
class ChainStep:
    """result = compose(left) o previous o compose(right).

    A step with ``factors`` records a factorization: result == compose(factors).
    """

    name: str
    result: PolyMap
    left: list[Factor] = field(default_factory=list)
    right: list[Factor] = field(default_factory=list)
    factors: list[Factor] = field(default_factory=list)


@dataclass
class StableTamenessCertificate:
    original: PolyMap
    added_variables: int
    chain: list[ChainStep]
    residual: Optional[PolyMap] = None
    residual_length: Optional[int] = None
    factorization: Optional[list[Factor]] = None
    notes: list[str] = field(default_factory=list)

    @property
    def start(self) -> PolyMap:
        return stabilize(self.original, self.added_variables, self.chain[0].result.names if self.chain else None)


def replay_chain(cert: StableTamenessCertificate) -> bool:
    """Re-run every chain step with this package's composition; raise on mismatch."""
    n = cert.original.dimension + cert.added_variables
    cur = stabilize(cert.original, cert.added_variables)
    for step in cert.chain:
        nxt = cur
        if step.left:
            nxt = compose(compose_factors(step.left, n), nxt)
        if step.right:
            nxt = compose(nxt, compose_factors(step.right, n))
        _check(step.name, nxt, step.result)
        if step.factors:
            _check(step.name + " (factors)", compose_factors(step.factors, n), step.result)
        cur = nxt
    if cert.residual is not None:
        _check("residual", cur, cert.residual)
    if cert.factorization is not None:
        _check("factorization", compose_factors(cert.factorization, n), stabilize(cert.original, cert.added_variables))
    return True


def _chain_over_ring(chain: list[ChainStep]) -> bool:
    return all(not f.over_field for s in chain for f in s.left + s.right)


def with_left_diagonal(cert: StableTamenessCertificate, a) -> StableTamenessCertificate:
    """Certificate for D_{a,1} o F built from one for F; a must be a unit of Z[t]."""
    a = as_ring(a)
    if not is_unit(a):
        raise StructureError("D_{a,1} needs a unit a")
    m = cert.added_variables
    D = diagonal(2, a, 0)
    original = compose(factor_to_map(D), cert.original)
    names = cert.chain[0].result.names
    Ds = stabilize_factor(D, m)
    chain = [ChainStep("stabilization", stabilize(original, m, names)),
             ChainStep("diagonal removal", cert.chain[0].result, left=[invert_factor(Ds)])]
    chain += cert.chain[1:]
    factorization = None if cert.factorization is None else [Ds] + list(cert.factorization)
    return StableTamenessCertificate(original, m, chain, cert.residual, cert.residual_length, factorization,
                                     list(cert.notes))


# -- the commutator pipeline, in variables (X, Y, W) -------------------------

_XYW = ("X", "Y", "W")


def _pq(spec: LengthFourSpec, x: ScaledPoly, y: ScaledPoly) -> tuple[ScaledPoly, ScaledPoly]:
    """P(x, y), Q(x, y) from the closed-form commutator coordinates."""
    n = x.nvars
    a, b = _const(n, spec.a), _const(n, spec.b)
    u = _at(spec.C, x * b)
    z = y * a + u
    v = _at(spec.C, x * b + _at(spec.D, z))
    P = (_at(spec.D, z) - _at(spec.D, z - v)).div_ring(spec.a * spec.b)
    Q = (u - v).div_ring(spec.a)
    return P, Q


def pipeline_factors(spec: LengthFourSpec) -> list[Factor]:
    """[G2^1, F2^1, G1^1, F1^1] re-derived in variables (X, Y, W)."""
    X, Y, W = (ScaledPoly.var(3, i) for i in range(3))
    a, b = _const(3, spec.a), _const(3, spec.b)
    ab = spec.a * spec.b
    u = _at(spec.C, X * b)
    du = _at(spec.D, u)
    shift = X * b + W * a * b
    f1 = (_at(spec.C, shift) - u).div_ring(spec.a)
    g1 = (_at(spec.D, Y * a + u) - du).div_ring(ab)
    f2 = -(_at(spec.C, shift + du) - _at(spec.C, X * b + du)).div_ring(spec.a)
    w = u - _at(spec.C, X * b + du)
    g2 = (_at(spec.D, w) - _at(spec.D, Y * a + w)).div_ring(ab)
    return [elementary(3, 2, g2), elementary(3, 1, f2), elementary(3, 2, g1), elementary(3, 1, f1)]


def _f1_closed_form(spec: LengthFourSpec) -> PolyMap:
    """F^1 written out with the shifted argument bX + abW."""
    X, Y, W = (ScaledPoly.var(3, i) for i in range(3))
    zero = _const(3, 0)
    P1, Q1 = _pq(spec, X + W * _const(3, spec.a), Y)
    P0, Q0 = _pq(spec, X, zero)
    return PolyMap((X, Y + Q1 - Q0, W + P1 - P0), _XYW)


def _specialize_x(F: PolyMap, value: int) -> PolyMap:
    """Drop X from a map fixing X by substituting an integer; result in (Y, W)."""
    coords = []
    for c in F.coords[1:]:
        num = c.num.eval_constant_vars({0: value}).embed(2, [0, 0, 1])
        coords.append(ScaledPoly(num, c.den))
    return PolyMap(tuple(coords), F.names[1:])


RESIDUAL_SAMPLES = (1, -1, 2, 0, 3)


def residual_length(F: PolyMap, samples: Sequence[int] = RESIDUAL_SAMPLES, cap: int = 3) -> int:
    """Largest length among integer specializations of the coefficient variable X.

    Specialization cannot raise length, so this is a lower bound for the length
    over Frac(Z[t][X]).  Stops early once ``cap`` is reached.
    """
    best = 0
    for v in samples:
        best = max(best, length(_specialize_x(F, v)))
        if best >= cap:
            break
    return best


def stable_tame_pipeline(spec: LengthFourSpec) -> StableTamenessCertificate:
    F = build_commutator(spec)
    if spec.degenerate:
        return StableTamenessCertificate(F, 1, [ChainStep("stabilization", stabilize(F, 1, _XYW))])
    if not spec.a_divides_D():
        raise StructureError("a must divide D")
    if not F.is_integral():
        raise StructureError("commutator is not over Z[t]")
    X, Y, W = (ScaledPoly.var(3, i) for i in range(3))
    X2, Y2 = ScaledPoly.var(2, 0), ScaledPoly.var(2, 1)
    P, Q = _pq(spec, X2, Y2)
    _check("P, Q", PolyMap((X2 + P * _const(2, spec.a), Y2 + Q)), F)
    if not (P.is_integral() and Q.is_integral()):
        raise StructureError("P or Q is not over Z[t]")

    chain = []
    cur = stabilize(F, 1, _XYW)
    chain.append(ChainStep("stabilization", cur))

    shift = elementary(3, 2, P.embed(3, [0, 1]))
    cur = compose(cur, factor_to_map(shift)).renamed(_XYW)
    chain.append(ChainStep("W-shift", cur, right=[shift]))

    E = affine([[1, 0, spec.a], [0, 1, 0], [0, 0, 1]])
    E_inv = invert_factor(E)
    cur = compose(compose(factor_to_map(E_inv), cur), factor_to_map(E)).renamed(_XYW)
    chain.append(ChainStep("E-conjugation", cur, left=[E_inv], right=[E]))

    zero = _const(2, 0)
    P0 = substitute(P, [X2, zero]).embed(3, [0, 1])
    Q0 = substitute(Q, [X2, zero]).embed(3, [0, 1])
    L = [elementary(3, 1, -Q0), elementary(3, 2, -P0)]
    cur = compose(compose_factors(L, 3), cur).renamed(_XYW)
    _check("L-normalization (closed form)", cur, _f1_closed_form(spec))
    chain.append(ChainStep("L-normalization", cur, left=L))

    facs = pipeline_factors(spec)
    chain.append(ChainStep("factorization", cur, factors=facs))

    first = facs[-1]
    if first.over_field:
        raise StructureError("F1^1 is not over Z[t][X]")
    residual = compose(cur, factor_to_map(invert_factor(first))).renamed(_XYW)
    _check("residual", residual, compose_factors(facs[:3]))
    chain.append(ChainStep("residual", residual, right=[invert_factor(first)]))
    if not _chain_over_ring(chain):
        raise StructureError("a chain map leaves Z[t]")
    cert = StableTamenessCertificate(F, 1, chain, residual, residual_length(residual))
    if cert.residual_length > 3:
        raise StructureError(f"residual has length {cert.residual_length} > 3")
    return cert


# ---------------------------------------------------------------------------
# the worked example with a != b, in variables (X, Y, Z)
# ---------------------------------------------------------------------------

_XYZ = ("X", "Y", "Z")

EXAMPLE9_FACTORS = ("(X - Y^2/t, Y)", "(X, Y + (t-1)*X)", "(X + (t+1)*Y, Y)", "(X, Y + X^2/t)")


def example9_map() -> PolyMap:
    """G2 o F2 o G1 o F1."""
    return compose_all([PolyMap.parse(s) for s in EXAMPLE9_FACTORS])


def _p3(src: str) -> ScaledPoly:
    return PolyMap.parse(f"({src}, Y, Z)", _XYZ).coords[0]


def example9_pieces() -> dict:
    F = example9_map()
    X, Y, Z = (ScaledPoly.var(3, i) for i in range(3))
    P = F.coords[0].embed(3, [0, 1]) - X
    Qt = _p3("X + t*Y + X^2")
    t = _const(3, RingElem.t())
    tau = elementary(3, 2, Qt)
    eta = elementary(3, 1, -Z * t)
    phi = elementary(3, 0, -Z * t)
    pi = affine([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
    sh = X - Z * t
    P1 = substitute(P, [sh, Y, Z]) - Y + X - Z * t
    Q1 = substitute(Qt, [sh, Y, Z])
    zero = _const(3, 0)
    theta = [
        elementary(3, 1, -substitute(P1, [X, zero, zero])),
        elementary(3, 2, -substitute(Q1, [X, zero, zero])),
    ]
    F1t = elementary(3, 1, _p3("((X + t*Z) + (X + t*Z)^2 - X - X^2)/t"))
    G1t = elementary(3, 2, Y * t)
    return dict(F=F, P=P, Qt=Qt, tau=tau, eta=eta, phi=phi, pi=pi, P1=P1, Q1=Q1,
                theta=theta, F1t=F1t, G1t=G1t)


def verify_example9() -> StableTamenessCertificate:
    d = example9_pieces()
    F = d["F"]
    if not isinstance(tame_check(F), NotTameWitness):
        raise StructureError("expected a not-tame witness")
    n_len = length(F)
    if n_len != 4:
        raise StructureError(f"expected length 4, got {n_len}")
    X, Y, Z = (ScaledPoly.var(3, i) for i in range(3))
    t = _const(3, RingElem.t())
    Ft = stabilize(F, 1, _XYZ)
    chain = [ChainStep("stabilization", Ft)]

    right = [d["tau"], d["phi"]]
    left = [d["pi"], d["eta"]]
    mid = compose(compose_factors(left, 3), compose(Ft, factor_to_map(d["tau"])))
    _check("pi o eta o F o tau", mid, PolyMap((X + Z * t, X + d["P"], Z + d["Qt"]), _XYZ))
    F1 = compose(compose_factors(left, 3), compose(Ft, compose_factors(right, 3)))
    _check("F^1 expansion", F1, PolyMap((X, Y + d["P1"], Z + d["Q1"]), _XYZ))
    chain.append(ChainStep("pi-eta-tau-phi", F1, left=left, right=right))

    lhs = compose(compose_factors(d["theta"], 3), F1)
    word = [invert_factor(d["F1t"]), d["G1t"], d["F1t"]]
    _check("Theta o F^1 = F1~^-1 o G1~ o F1~", lhs, compose_factors(word, 3))
    chain.append(ChainStep("Theta-normalization", lhs, left=list(d["theta"])))
    chain.append(ChainStep("factorization", lhs, factors=word))

    full = invert_factors(left + d["theta"]) + word + invert_factors(right)
    _check("tame factorization", compose_factors(full, 3), Ft)
    if any(f.over_field for f in full):
        raise StructureError("factorization leaves Z[t]")
    return StableTamenessCertificate(F, 1, chain, factorization=full)
