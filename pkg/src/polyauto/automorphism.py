"""Polynomial maps of affine n-space and the factors that generate Tame_n.

Composition is right-to-left: ``compose(F, G)`` is the map x -> F(G(x)), so
coordinate i of the result is F_i evaluated at G's coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .multipoly import MultiPoly, ScaledPoly, ShapeError, as_scaled, substitute
from .parse import default_names, format_coords, format_scaled, parse_map_coords
from .ring import ONE, Frac, RingElem, as_frac, is_unit


class InvalidFactorError(ValueError):
    """Factor payload that does not describe an automorphism."""


@dataclass(frozen=True, eq=False)
class PolyMap:
    coords: tuple[ScaledPoly, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        coords = tuple(as_scaled(c, len(self.coords)) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if not self.names:
            object.__setattr__(self, "names", default_names(len(coords)))
        elif len(self.names) != len(coords):
            raise ShapeError("one name per coordinate required")

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> ScaledPoly:
        return self.coords[i]

    def is_integral(self) -> bool:
        return all(c.is_integral() for c in self.coords)

    def renamed(self, names: Sequence[str]) -> "PolyMap":
        return PolyMap(self.coords, tuple(names))

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __str__(self):
        return format_coords(self.coords, self.names)

    def __repr__(self):
        return f"PolyMap{self}"

    def __matmul__(self, other: "PolyMap") -> "PolyMap":
        return compose(self, other)

    @classmethod
    def parse(cls, src: str, names: Sequence[str] | None = None) -> "PolyMap":
        coords, names = parse_map_coords(src, names)
        return cls(tuple(coords), names)


def identity(n: int, names: Sequence[str] = ()) -> PolyMap:
    if n < 1:
        raise ShapeError("dimension must be positive")
    return PolyMap(tuple(ScaledPoly.var(n, i) for i in range(n)), tuple(names))


def compose(F: PolyMap, G: PolyMap) -> PolyMap:
    """The map x -> F(G(x))."""
    if F.dimension != G.dimension:
        raise ShapeError(f"dimensions differ: {F.dimension} vs {G.dimension}")
    return PolyMap(tuple(substitute(c, G.coords) for c in F.coords), G.names)


def compose_all(maps: Sequence[PolyMap]) -> PolyMap:
    """maps[0] o maps[1] o ... o maps[-1]."""
    if not maps:
        raise ValueError("nothing to compose")
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out)
    return out


# ---------------------------------------------------------------------------
# factors
# ---------------------------------------------------------------------------

AFFINE, ELEMENTARY, DIAGONAL, TRANSLATION = "affine", "elementary", "diagonal", "translation"


@dataclass(frozen=True, eq=False)
class Factor:
    """One generator of the tame group.

    affine:      x -> M x + v                (matrix, vector)
    elementary:  x_target += rule(other vars) (target, rule)
    diagonal:    x_target -> scale * x_target (target, scale)
    translation: x -> x + v                   (vector)
    """

    kind: str
    n: int
    matrix: tuple[tuple[Frac, ...], ...] | None = None
    vector: tuple[Frac, ...] | None = None
    target: int | None = None
    rule: ScaledPoly | None = None
    scale: Frac | None = None

    def __post_init__(self):
        if self.kind == ELEMENTARY:
            if self.rule is None or self.target is None:
                raise InvalidFactorError("elementary factor needs a target and a rule")
            if self.rule.nvars != self.n:
                raise ShapeError("rule lives in the wrong number of variables")
            if self.target in self.rule.num.variables_used():
                raise InvalidFactorError("elementary rule must not involve its target variable")
        elif self.kind == AFFINE:
            if self.matrix is None or self.vector is None:
                raise InvalidFactorError("affine factor needs a matrix and a vector")
            if determinant(self.matrix).is_zero():
                raise InvalidFactorError("affine matrix is singular")
        elif self.kind == DIAGONAL:
            if self.scale is None or self.scale.is_zero():
                raise InvalidFactorError("diagonal factor needs a nonzero scale")
        elif self.kind == TRANSLATION:
            if self.vector is None or len(self.vector) != self.n:
                raise InvalidFactorError("translation needs an n-vector")
        else:
            raise InvalidFactorError(f"unknown factor kind {self.kind!r}")

    @property
    def over_field(self) -> bool:
        """True when the factor needs fractions (it lies outside Aut_n(R))."""
        if self.kind == ELEMENTARY:
            return not self.rule.is_integral()
        if self.kind == DIAGONAL:
            return not (self.scale.is_integral() and is_unit(self.scale.num))
        if self.kind == TRANSLATION:
            return not all(v.is_integral() for v in self.vector)
        entries = [e for row in self.matrix for e in row] + list(self.vector)
        if not all(e.is_integral() for e in entries):
            return True
        return not is_unit(determinant(self.matrix).num)

    def is_linear(self) -> bool:
        if self.kind == ELEMENTARY:
            return all(sum(m) == 1 for m in self.rule.num.terms)
        if self.kind == TRANSLATION:
            return all(v.is_zero() for v in self.vector)
        if self.kind == AFFINE:
            return all(v.is_zero() for v in self.vector)
        return True

    def __eq__(self, other):
        if not isinstance(other, Factor):
            return NotImplemented
        return factor_to_map(self) == factor_to_map(other)

    def __hash__(self):
        return hash(factor_to_map(self))

    def __str__(self):
        return describe_factor(self)


def elementary(n: int, target: int, rule) -> Factor:
    return Factor(ELEMENTARY, n, target=target, rule=as_scaled(rule, n))


def affine(matrix: Sequence[Sequence], vector: Sequence | None = None) -> Factor:
    n = len(matrix)
    m = tuple(tuple(as_frac(e) for e in row) for row in matrix)
    v = tuple(as_frac(e) for e in (vector if vector is not None else [0] * n))
    return Factor(AFFINE, n, matrix=m, vector=v)


def diagonal(n: int, scale, target: int = 0) -> Factor:
    return Factor(DIAGONAL, n, target=target, scale=as_frac(scale))


def translation(vector: Sequence) -> Factor:
    v = tuple(as_frac(e) for e in vector)
    return Factor(TRANSLATION, len(v), vector=v)


def swap(n: int = 2, i: int = 0, j: int = 1) -> Factor:
    rows = [[0] * n for _ in range(n)]
    for k in range(n):
        rows[k][k] = 1
    rows[i][i] = rows[j][j] = 0
    rows[i][j] = rows[j][i] = 1
    return affine(rows)


def determinant(matrix: Sequence[Sequence[Frac]]) -> Frac:
    n = len(matrix)
    if n == 1:
        return as_frac(matrix[0][0])
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = Frac(0)
    for j in range(n):
        if matrix[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def matrix_inverse(matrix: Sequence[Sequence[Frac]]) -> tuple[tuple[Frac, ...], ...]:
    n = len(matrix)
    aug = [[as_frac(e) for e in row] + [Frac(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if piv is None:
            raise InvalidFactorError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [e * inv for e in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def factor_to_map(f: Factor, n: int | None = None) -> PolyMap:
    n = f.n if n is None else n
    if n != f.n:
        raise ShapeError(f"factor acts on {f.n} variables, not {n}")
    xs = [ScaledPoly.var(n, i) for i in range(n)]
    if f.kind == ELEMENTARY:
        xs[f.target] = xs[f.target] + f.rule
    elif f.kind == DIAGONAL:
        xs[f.target] = xs[f.target] * ScaledPoly.constant(n, f.scale)
    elif f.kind == TRANSLATION:
        xs = [x + ScaledPoly.constant(n, v) for x, v in zip(xs, f.vector)]
    else:
        base = [ScaledPoly.var(n, i) for i in range(n)]
        xs = []
        for row, v in zip(f.matrix, f.vector):
            acc = ScaledPoly.constant(n, v)
            for e, x in zip(row, base):
                if not e.is_zero():
                    acc = acc + x * ScaledPoly.constant(n, e)
            xs.append(acc)
    return PolyMap(tuple(xs))


def invert_factor(f: Factor) -> Factor:
    if f.kind == ELEMENTARY:
        return Factor(ELEMENTARY, f.n, target=f.target, rule=-f.rule)
    if f.kind == DIAGONAL:
        return Factor(DIAGONAL, f.n, target=f.target, scale=f.scale.inverse())
    if f.kind == TRANSLATION:
        return Factor(TRANSLATION, f.n, vector=tuple(-v for v in f.vector))
    inv = matrix_inverse(f.matrix)
    v = tuple(-sum((inv[i][j] * f.vector[j] for j in range(f.n)), Frac(0)) for i in range(f.n))
    return Factor(AFFINE, f.n, matrix=inv, vector=v)


def invert_factors(fs: Sequence[Factor]) -> list[Factor]:
    """Inverse of fs[0] o ... o fs[-1], as a factor list."""
    return [invert_factor(f) for f in reversed(fs)]


def compose_factors(fs: Sequence[Factor], n: int | None = None) -> PolyMap:
    """fs[0] o fs[1] o ... o fs[-1]; the identity for an empty list."""
    if not fs:
        if n is None:
            raise ValueError("dimension needed for an empty factor list")
        return identity(n)
    return compose_all([factor_to_map(f) for f in fs])


def classify_map(F: PolyMap) -> Factor:
    """Recognise a map literal as a single factor (elementary or affine)."""
    n = F.dimension
    changed = [i for i in range(n) if F.coords[i] != ScaledPoly.var(n, i)]
    if not changed:
        return affine([[int(i == j) for j in range(n)] for i in range(n)])
    if len(changed) == 1:
        i = changed[0]
        rule = F.coords[i] - ScaledPoly.var(n, i)
        if i not in rule.num.variables_used():
            return elementary(n, i, rule)
    if all(all(sum(m) <= 1 for m in c.num.terms) for c in F.coords):
        matrix = [[c.coefficient(tuple(int(k == j) for k in range(n))) for j in range(n)] for c in F.coords]
        vector = [c.coefficient((0,) * n) for c in F.coords]
        return affine(matrix, vector)
    raise InvalidFactorError(f"{F} is neither elementary nor affine")


def describe_factor(f: Factor, names: Sequence[str] | None = None) -> str:
    """Factor as a map literal in the shared grammar."""
    m = factor_to_map(f)
    return format_coords(m.coords, names or default_names(f.n))


# ---------------------------------------------------------------------------
# Jacobian and stabilization
# ---------------------------------------------------------------------------


def jacobian_matrix(F: PolyMap) -> list[list[ScaledPoly]]:
    n = F.dimension
    return [[F.coords[i].derivative(j) for j in range(n)] for i in range(n)]


def _det_poly(m: list[list[ScaledPoly]]) -> ScaledPoly:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = ScaledPoly.constant(m[0][0].nvars, 0)
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det_poly(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def jacobian_det(F: PolyMap) -> ScaledPoly:
    return _det_poly(jacobian_matrix(F))


def stabilize(F: PolyMap, m: int, names: Sequence[str] | None = None) -> PolyMap:
    """(F, X_{n+1}, ..., X_{n+m}) in n+m variables."""
    if m < 0:
        raise ValueError("m must be non-negative")
    n = F.dimension
    N = n + m
    coords = [c.embed(N, list(range(n))) for c in F.coords]
    coords += [ScaledPoly.var(N, i) for i in range(n, N)]
    return PolyMap(tuple(coords), tuple(names) if names else ())


def stabilize_factor(f: Factor, m: int) -> Factor:
    N = f.n + m
    if f.kind == ELEMENTARY:
        return Factor(ELEMENTARY, N, target=f.target, rule=f.rule.embed(N, list(range(f.n))))
    if f.kind == DIAGONAL:
        return Factor(DIAGONAL, N, target=f.target, scale=f.scale)
    if f.kind == TRANSLATION:
        return Factor(TRANSLATION, N, vector=f.vector + (Frac(0),) * m)
    rows = [tuple(row) + (Frac(0),) * m for row in f.matrix]
    for k in range(m):
        rows.append(tuple(Frac(int(j == f.n + k)) for j in range(N)))
    return Factor(AFFINE, N, matrix=tuple(rows), vector=f.vector + (Frac(0),) * m)


# ---------------------------------------------------------------------------
# named maps
# ---------------------------------------------------------------------------


def nagata_factors() -> list[Factor]:
    """[F1^-1, F2, F1] with F1 = (X, Y + X^2/t), F2 = (X + t^2 Y, Y)."""
    F1 = PolyMap.parse("(X, Y + X^2/t)")
    F2 = PolyMap.parse("(X + t^2*Y, Y)")
    f1 = classify_map(F1)
    return [invert_factor(f1), classify_map(F2), f1]


def nagata() -> PolyMap:
    return compose_factors(nagata_factors())
