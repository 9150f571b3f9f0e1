"""Independent certificate replay.

Nothing here imports the map or factor machinery: factors are read as plain
data and turned into coordinate tuples locally, and every composition goes
through ``multipoly.substitute``.  A certificate that replays here is checked
by a second code path.
"""

from __future__ import annotations

from typing import Sequence

from .multipoly import ScaledPoly, scaled_total_degree, substitute

Coords = tuple[ScaledPoly, ...]


class ReplayError(ValueError):
    pass


def _variables(n: int) -> list[ScaledPoly]:
    return [ScaledPoly.var(n, i) for i in range(n)]


def factor_coords(f) -> Coords:
    """Coordinates of a factor, read from its fields."""
    n = f.n
    xs = _variables(n)
    if f.kind == "elementary":
        if f.target in f.rule.num.variables_used():
            raise ReplayError("elementary rule uses its own target")
        xs[f.target] = xs[f.target] + f.rule
    elif f.kind == "diagonal":
        xs[f.target] = xs[f.target] * ScaledPoly.constant(n, f.scale)
    elif f.kind == "translation":
        xs = [x + ScaledPoly.constant(n, v) for x, v in zip(xs, f.vector)]
    elif f.kind == "affine":
        base = _variables(n)
        xs = []
        for row, v in zip(f.matrix, f.vector):
            acc = ScaledPoly.constant(n, v)
            for e, x in zip(row, base):
                acc = acc + x * ScaledPoly.constant(n, e)
            xs.append(acc)
    else:
        raise ReplayError(f"unknown factor kind {f.kind!r}")
    return tuple(xs)


def then(outer: Coords, inner: Coords) -> Coords:
    """outer o inner."""
    return tuple(substitute(c, inner) for c in outer)


def compose_list(fs: Sequence, n: int) -> Coords:
    out: Coords = tuple(_variables(n))
    for f in reversed(fs):
        out = then(factor_coords(f), out)
    return out


def _same(a: Coords, b: Coords) -> bool:
    return len(a) == len(b) and all(x == y for x, y in zip(a, b))


def _stabilized(coords: Coords, m: int) -> Coords:
    n = len(coords)
    N = n + m
    return tuple(c.embed(N, list(range(n))) for c in coords) + tuple(ScaledPoly.var(N, i) for i in range(n, N))


def _tdeg(coords: Coords) -> int:
    return sum(scaled_total_degree(c) for c in coords)


def replay_tame(cert) -> bool:
    """Forward: steps applied on the left take the input to the terminal map.
    Backward: the inverted steps rebuild the input."""
    cur = tuple(cert.original.coords)
    for i, step in enumerate(cert.steps):
        if _tdeg(cur) != step.tdeg_before:
            raise ReplayError(f"step {i}: tdeg before")
        cur = then(factor_coords(step.factor), cur)
        if _tdeg(cur) != step.tdeg_after:
            raise ReplayError(f"step {i}: tdeg after")
    if not _same(cur, tuple(cert.terminal.coords)):
        raise ReplayError("terminal map not reached")
    if any(scaled_total_degree(c) != 1 for c in cur):
        raise ReplayError("terminal map is not affine")
    return True


def replay_witness(w) -> bool:
    """The partial steps must take the input to the stuck map."""
    cur = tuple(w.original.coords)
    for step in w.steps:
        cur = then(factor_coords(step.factor), cur)
    if not _same(cur, tuple(w.stuck_map.coords)):
        raise ReplayError("stuck map not reached")
    return True


def replay_length(dec, original) -> bool:
    if not _same(compose_list(dec.all_factors(), 2), tuple(original.coords)):
        raise ReplayError("length factorization does not recompose")
    targets = [f.target for f in dec.factors]
    if any(a == b for a, b in zip(targets, targets[1:])):
        raise ReplayError("adjacent factors act on the same coordinate")
    if len(dec.factors) != dec.length:
        raise ReplayError("length does not match factor count")
    return True


def replay_stable(cert) -> bool:
    n = cert.original.dimension + cert.added_variables
    cur = _stabilized(tuple(cert.original.coords), cert.added_variables)
    for step in cert.chain:
        if step.left:
            cur = then(compose_list(step.left, n), cur)
        if step.right:
            cur = then(cur, compose_list(step.right, n))
        if not _same(cur, tuple(step.result.coords)):
            raise ReplayError(f"chain step {step.name!r} does not replay")
        if step.factors and not _same(compose_list(step.factors, n), cur):
            raise ReplayError(f"chain step {step.name!r}: factors do not recompose")
    if cert.residual is not None and not _same(cur, tuple(cert.residual.coords)):
        raise ReplayError("residual does not match the chain end")
    if cert.factorization is not None:
        start = _stabilized(tuple(cert.original.coords), cert.added_variables)
        if not _same(compose_list(cert.factorization, n), start):
            raise ReplayError("factorization does not recompose to the stabilized input")
        if any(not f_integral(f) for f in cert.factorization):
            raise ReplayError("factorization leaves Z[t]")
    return True


def f_integral(f) -> bool:
    return all(c.is_integral() for c in factor_coords(f))
