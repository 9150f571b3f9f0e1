"""Length of a plane automorphism and its normal-form factorization over K.

The field-mode reduction trace writes G = F - F(0) as a word in linear maps
and "vertical" elementary maps (X, Y + f(X)) with deg f >= 2.  That word is
rewritten into

    F = L o D_{a,1} o E_m o ... o E_1

with L a translation, D_{a,1} = (aX, Y) and E_i alternating between
(X, Y + f(X)) and (X + g(Y), Y), f(0) = g(0) = 0.  Lower-triangular linear
maps commute past vertical maps (conjugating them), which is how every
linear chunk is squeezed down to at most one horizontal shear between two
nonlinear vertical factors.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automorphism import (
    AFFINE,
    ELEMENTARY,
    Factor,
    PolyMap,
    compose_factors,
    diagonal,
    elementary,
    factor_to_map,
    invert_factor,
    translation,
)
from .multipoly import MultiPoly, ScaledPoly, substitute
from .ring import Frac
from .tameness import tame_check

Matrix = tuple[tuple[Frac, Frac], tuple[Frac, Frac]]

_0, _1 = Frac(0), Frac(1)
IDENT: Matrix = ((_1, _0), (_0, _1))


def _mat(a, b, c, d) -> Matrix:
    return ((Frac(0) + a, Frac(0) + b), (Frac(0) + c, Frac(0) + d))


def _mul(A: Matrix, B: Matrix) -> Matrix:
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


def _det(A: Matrix) -> Frac:
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def _lower(w) -> Matrix:
    return _mat(1, 0, w, 1)


def _upper(x) -> Matrix:
    return _mat(1, x, 0, 1)


# An atom is ("lin", Matrix) or ("F", f) / ("G", g) with f, g ScaledPoly in one
# variable (index 0) having zero constant term.


def _uni(coeffs: dict[int, Frac]) -> ScaledPoly:
    out = ScaledPoly.constant(1, 0)
    x = ScaledPoly.var(1, 0)
    for k, c in coeffs.items():
        if not c.is_zero():
            out = out + (x ** k) * ScaledPoly.constant(1, c)
    return out


def _split_linear(f: ScaledPoly) -> tuple[Frac, ScaledPoly]:
    """f = c*X + rest with rest having only degree >= 2 terms."""
    c = f.coefficient((1,))
    rest = f - ScaledPoly.var(1, 0) * ScaledPoly.constant(1, c)
    return c, rest


def _rescale(f: ScaledPoly, p: Frac, s: Frac) -> ScaledPoly:
    """f(p X) / s."""
    arg = ScaledPoly.var(1, 0) * ScaledPoly.constant(1, p)
    return substitute(f, [arg]).div_ring(s)


def _rule_in_one_var(rule: ScaledPoly, var: int) -> ScaledPoly:
    """Restrict a two-variable rule that only involves ``var`` to one variable."""
    return ScaledPoly(rule.num.embed(1, [0, 0]) if var == 0 else _drop_first(rule.num), rule.den)


def _drop_first(p: MultiPoly) -> MultiPoly:
    return MultiPoly(1, {(m[1],): c for m, c in p.terms.items()})


def _atoms_from_factor(f: Factor) -> list:
    SW = _mat(0, 1, 1, 0)
    if f.kind == ELEMENTARY:
        used = f.rule.num.variables_used()
        if f.target == 1:
            g = _rule_in_one_var(f.rule, 0) if used else ScaledPoly.constant(1, 0)
            c, rest = _split_linear(g)
            return [("lin", _lower(c)), ("F", rest)]
        g = _rule_in_one_var(f.rule, 1) if used else ScaledPoly.constant(1, 0)
        c, rest = _split_linear(g)
        return [("lin", _upper(c)), ("lin", SW), ("F", rest), ("lin", SW)]
    if f.kind == AFFINE:
        if any(not v.is_zero() for v in f.vector):
            raise ValueError("origin-fixing word expected")
        (a, b), (c, d) = f.matrix
        return [("lin", _mat(a, b, c, d))]
    raise ValueError(f"unexpected factor kind {f.kind}")


def _merge(word: list) -> list:
    out: list = []
    for kind, val in word:
        if kind == "F" and val.is_zero():
            continue
        if kind == "lin" and val == IDENT:
            continue
        if out and out[-1][0] == kind and kind in ("lin", "F"):
            prev = out.pop()[1]
            merged = _mul(prev, val) if kind == "lin" else prev + val
            if (kind == "lin" and merged == IDENT) or (kind == "F" and merged.is_zero()):
                continue
            out.append((kind, merged))
        else:
            out.append((kind, val))
    return out


def _push_lower_left(word: list) -> tuple[list, bool]:
    """Move one lower-triangular linear atom left across a vertical factor."""
    for i in range(len(word) - 1, 0, -1):
        kind, M = word[i]
        if kind == "lin" and M[0][1].is_zero() and word[i - 1][0] == "F":
            f = word[i - 1][1]
            p, s = M[0][0], M[1][1]
            word = word[: i - 1] + [("lin", M), ("F", _rescale(f, p, s))] + word[i + 1:]
            return word, True
    return word, False


def _normalize(word: list) -> list:
    while True:
        word = _merge(word)
        word, moved = _push_lower_left(word)
        if not moved:
            return _merge(word)


def _sl2_word(N: Matrix) -> list:
    """Shortest alternating shear word for N in SL_2(K)."""
    (p, q), (r, s) = N
    if N == IDENT:
        return []
    if q.is_zero() and p.is_one():
        return [("F1", r)]
    if r.is_zero() and p.is_one():
        return [("G1", q)]
    if p.is_one():
        return [("F1", r), ("G1", q)]
    if s.is_one():
        return [("G1", q), ("F1", r)]
    if not q.is_zero():
        return [("F1", (s - 1) / q), ("G1", q), ("F1", (p - 1) / q)]
    if not r.is_zero():
        return [("G1", (p - 1) / r), ("F1", r), ("G1", (s - 1) / r)]
    # diagonal: N = (N * lower(-1)) * lower(1)
    M = _mul(N, _lower(Frac(-1)))
    return _sl2_word(M) + [("F1", Frac(1))]


@dataclass
class LengthDecomposition:
    translation: Factor
    diagonal: Factor
    factors: list[Factor]
    length: int

    def all_factors(self) -> list[Factor]:
        return [self.translation, self.diagonal] + list(self.factors)

    def compose(self) -> PolyMap:
        return compose_factors(self.all_factors(), 2)


def _lin_factor_vertical(w: Frac) -> Factor:
    return elementary(2, 1, ScaledPoly.var(2, 0) * ScaledPoly.constant(2, w))


def _lin_factor_horizontal(x: Frac) -> Factor:
    return elementary(2, 0, ScaledPoly.var(2, 1) * ScaledPoly.constant(2, x))


def _vertical(f: ScaledPoly) -> Factor:
    return elementary(2, 1, f.embed(2, [0]))


def _horizontal(g: ScaledPoly) -> Factor:
    return elementary(2, 0, g.embed(2, [1]))


SW: Matrix = _mat(0, 1, 1, 0)


def _conj(M: Matrix) -> Matrix:
    return _mul(_mul(SW, M), SW)


def _flip(word: list) -> list:
    return [("G1" if k == "F1" else "F1", v) for k, v in word]


def _diag(p, s) -> Matrix:
    return _mat(p, 0, 0, s)


# Chunk factorizations.  A chunk M in SL_2(K) sits between two nonlinear atoms
# (or an end).  Each option is (P, W, m) with M = P * W * m: P is triangular
# for the left atom's orientation and passes through it (its diagonal part
# travels further left), W is the emitted shear word, and m is unipotent of
# the right atom's type and merges into it.


def _chunk_options_V(M: Matrix, right: str | None) -> list:
    (p, q), (r, s) = M
    opts = []
    if right == "V":
        if q.is_zero():
            opts.append((M, [], IDENT))
            if not p.is_one():
                b = p * (r - 1)
                x = p - 1
                opts.append((IDENT, [("G1", x), ("F1", Frac(1)), ("G1", -x / p)], _lower(b)))
        else:
            opts.append((_lower((s - 1) / q), [("G1", q)], _lower((p - 1) / q)))
        return opts
    if right == "H":
        if p.is_zero():
            return [(_lower((s - 1) / q), [("G1", q), ("F1", (p - 1) / q)], IDENT)]
        d = _diag(p, p.inverse())
        opts.append((_mul(d, _lower(r * p)), [], _upper(q / p)))
        if not p.is_one():
            P = IDENT
            if r.is_zero():
                P = _lower(-p.inverse())
                M = _mul(_lower(p.inverse()), M)
                (p, q), (r, s) = M
            b = (s - 1) / r
            opts.append((P, [("G1", q - p * b), ("F1", r)], _upper(b)))
        return opts
    # right end
    if q.is_zero():
        opts.append((M, [], IDENT))
        if not p.is_one():
            a = (r - 1) / p
            opts.append((_lower(a), [("G1", p - 1), ("F1", Frac(1)), ("G1", (1 - p) / p)], IDENT))
        return opts
    if not p.is_zero():
        d = _diag(p, p.inverse())
        opts.append((_mul(d, _lower(r * p)), [("G1", q / p)], IDENT))
    if not p.is_one():
        opts.append((_lower((s - 1) / q), [("G1", q), ("F1", (p - 1) / q)], IDENT))
    return opts


def _chunk_options(M: Matrix, left: str, right: str | None) -> list:
    if left == "H":
        return [(_conj(P), _flip(W), _conj(m)) for P, W, m in _chunk_options_V(_conj(M), _other(right))]
    return _chunk_options_V(M, right)


def _chunk_front_V(N: Matrix):
    """N in SL_2: N = W * m with m lower unipotent."""
    (p, q), (r, s) = N
    if q.is_zero() and p.is_one():
        return [], N
    if not q.is_zero():
        aa, bb = (s - 1) / q, (p - 1) / q
        W = ([("F1", aa)] if not aa.is_zero() else []) + [("G1", q)]
        return W, _lower(bb)
    w = (r - 1) / s
    return [("G1", p - 1), ("F1", Frac(1)), ("G1", s - 1)], _lower(w)


def _other(o: str | None) -> str | None:
    return {"V": "H", "H": "V", None: None}[o]


def _front(N: Matrix, right: str | None):
    if right is None:
        return _sl2_word(N), IDENT
    if right == "H":
        W, m = _chunk_front_V(_conj(N))
        return _flip(W), _conj(m)
    return _chunk_front_V(N)


def _pass_through(orient: str, poly, P: Matrix, build: bool):
    """atom o P = diag o atom'.  Returns (diag, new poly)."""
    (p, q), (r, s) = P
    if orient == "V":
        # V(f) o P = diag(p, s) o V(f(pX)/s + (r/s) X)
        if build:
            poly = _rescale(poly, p, s) + ScaledPoly.var(1, 0) * ScaledPoly.constant(1, r / s)
        return _diag(p, s), poly
    # H(g) o P = diag(p, s) o H(g(sY)/p + (q/p) Y)
    if build:
        poly = _rescale(poly, s, p) + ScaledPoly.var(1, 0) * ScaledPoly.constant(1, q / p)
    return _diag(p, s), poly


def _merge_unipotent(orient: str, poly, m: Matrix, build: bool):
    """m o atom with m unipotent of the atom's own type."""
    if not build or m == IDENT:
        return poly
    coeff = m[1][0] if orient == "V" else m[0][1]
    return poly + ScaledPoly.var(1, 0) * ScaledPoly.constant(1, coeff)


def _oriented_chunks(chunks: list[Matrix], polys: list, orient: tuple, build: bool = False):
    """Insert SW pairs around H atoms, then push every non-front determinant left."""
    chunks, polys = list(chunks), list(polys)
    for i, o in enumerate(orient):
        if o == "H":
            chunks[i] = _mul(chunks[i], SW)
            chunks[i + 1] = _mul(SW, chunks[i + 1])
    for i in range(len(chunks) - 1, 0, -1):
        det = _det(chunks[i])
        if det.is_one():
            continue
        chunks[i] = _mul(_diag(1, det.inverse()), chunks[i])
        d, polys[i - 1] = _pass_through(orient[i - 1], polys[i - 1], _diag(1, det), build)
        chunks[i - 1] = _mul(chunks[i - 1], d)
    return chunks, polys


def _front_cost(M0: Matrix, orient: tuple):
    a = _det(M0)
    N = _mul(_diag(a.inverse(), 1), M0)
    W, m = _front(N, orient[0] if orient else None)
    return a, W, m


def _scaled_options(M: Matrix, left: str, right: str | None, L: Matrix) -> list:
    """Chunk options with a free torus: M = diag(d, 1/d) * (P W m) for candidate d.

    Candidates make an entry of the left neighbour ``L`` (times what P sends
    left) equal to 1, which is where a shorter word can appear.
    """
    ds = [_1, Frac(-1)]
    for P, _, _ in _chunk_options(M, left, right):
        D, _ = _pass_through(left, None, P, False)
        nb = _mul(L, D)
        for d in (nb[0][0].inverse() if not nb[0][0].is_zero() else None,
                  nb[1][1] if not nb[1][1].is_zero() else None):
            if d is not None and d not in ds:
                ds.append(d)
    out = []
    for d in ds:
        Md = _mul(_diag(d.inverse(), d), M)
        for k, (P, W, m) in enumerate(_chunk_options(Md, left, right)):
            out.append(((d, k), _mul(_diag(d, d.inverse()), P), W, m))
    return out


def _left_of(chunks: list[Matrix], i: int) -> Matrix:
    """What chunk i's option feeds into: chunk i-1, or the SL_2 front part."""
    if i > 1:
        return chunks[i - 1]
    return _mul(_diag(_det(chunks[0]).inverse(), 1), chunks[0])


def _search(chunks: list[Matrix], orient: tuple):
    """Cheapest per-chunk option choice for a fixed orientation."""
    chunks, _ = _oriented_chunks(chunks, [None] * len(orient), orient)
    r = len(orient)
    best: list = [None]

    def rec(i, pending, cost, choices):
        if best[0] is not None and cost + r >= best[0][0]:
            return
        if i == 0:
            _, W, _ = _front_cost(_mul(chunks[0], pending), orient)
            total = cost + r + len(W)
            if best[0] is None or total < best[0][0]:
                best[0] = (total, list(reversed(choices)))
            return
        M = _mul(chunks[i], pending)
        right = orient[i] if i < r else None
        for key, P, W, m in _scaled_options(M, orient[i - 1], right, _left_of(chunks, i)):
            D, _ = _pass_through(orient[i - 1], None, P, False)
            rec(i - 1, D, cost + len(W), choices + [key])

    rec(r, IDENT, 0, [])
    return best[0]


def _assemble(chunks: list[Matrix], polys: list, orient: tuple, choices: list):
    """chunks[0] o A_1 o chunks[1] o ... o A_r o chunks[r] -> (a, sequence)."""
    r = len(polys)
    chunks, polys = _oriented_chunks(chunks, polys, orient, True)
    seq: list = []
    pending = IDENT
    for i in range(r, 0, -1):
        M = _mul(chunks[i], pending)
        right = orient[i] if i < r else None
        d, k = choices[i - 1]
        Md = _mul(_diag(d.inverse(), d), M)
        P, W, m = _chunk_options(Md, orient[i - 1], right)[k]
        P = _mul(_diag(d, d.inverse()), P)
        if i < r:
            seq[0] = (seq[0][0], _merge_unipotent(orient[i], seq[0][1], m, True))
        seq = W + seq
        pending, poly = _pass_through(orient[i - 1], polys[i - 1], P, True)
        seq.insert(0, (orient[i - 1], poly))
    a, W, m = _front_cost(_mul(chunks[0], pending), orient)
    if r:
        seq[0] = (seq[0][0], _merge_unipotent(orient[0], seq[0][1], m, True))
    return a, W + seq


def length_decompose(F: PolyMap) -> LengthDecomposition:
    """Normal-form factorization over K; raises if F is not an automorphism."""
    if F.dimension != 2:
        raise ValueError("length is defined for plane maps")
    c0 = [c.coefficient((0, 0)) for c in F.coords]
    L = translation(c0)
    G = PolyMap(tuple(c - ScaledPoly.constant(2, v) for c, v in zip(F.coords, c0)))
    cert = tame_check(G, field=True)
    word: list = []
    for step in cert.steps:
        word += _atoms_from_factor(invert_factor(step.factor))
    (a, b), (c, d) = [[co.coefficient((1, 0)), co.coefficient((0, 1))] for co in cert.terminal.coords]
    word.append(("lin", _mat(a, b, c, d)))
    word = _normalize(word)

    chunks: list[Matrix] = []
    polys: list = []
    cur = IDENT
    for kind, val in word:
        if kind == "lin":
            cur = _mul(cur, val)
        else:
            chunks.append(cur)
            polys.append(val)
            cur = IDENT
    chunks.append(cur)

    best = None
    for orient in _orientations(len(polys)):
        found = _search(chunks, orient)
        if found is not None and (best is None or found[0] < best[0]):
            best = (found[0], orient, found[1])
    _, orient, choices = best
    a_det, seq = _assemble(chunks, polys, orient, choices)

    factors: list[Factor] = []
    for kind, val in seq:
        if kind == "V":
            factors.append(_vertical(val))
        elif kind == "H":
            factors.append(_horizontal(val))
        elif kind == "F1":
            factors.append(_lin_factor_vertical(val))
        else:
            factors.append(_lin_factor_horizontal(val))
    factors = _merge_factors(factors)
    D = diagonal(2, a_det, 0)
    dec = LengthDecomposition(L, D, factors, len(factors))
    if dec.compose() != F:
        raise AssertionError("length normal form does not recompose to the input")
    return dec


def _orientations(r: int):
    if r == 0:
        yield ()
        return
    if r > 10:
        # keep the search bounded on long words
        yield ("V",) * r
        yield ("H",) * r
        return
    for mask in range(2 ** r):
        yield tuple("H" if mask >> i & 1 else "V" for i in range(r))


def _merge_factors(fs: list[Factor]) -> list[Factor]:
    out: list[Factor] = []
    for f in fs:
        if f.rule.is_zero():
            continue
        if out and out[-1].target == f.target:
            prev = out.pop()
            rule = prev.rule + f.rule
            if not rule.is_zero():
                out.append(elementary(2, f.target, rule))
        else:
            out.append(f)
    return out


def length(F: PolyMap) -> int:
    return length_decompose(F).length
