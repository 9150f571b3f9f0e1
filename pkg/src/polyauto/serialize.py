"""JSON form shared by every certificate kind.

Top level::

    {"format": "polyauto-certificate", "version": 1, "kind": <kind>,
     "variables": [...], "original": <map>, ...}

``kind`` is one of ``tame``, ``not-tame``, ``length``, ``stable-tame``.
Maps are literals in the text grammar, e.g. ``"(X, (t*Y + X^2)/(t))"``; a
factor is ``{"kind": ..., "map": <map>}`` plus ``target`` for elementary and
diagonal factors.  Field constants are written as ``"(num)/(den)"``.
"""

from __future__ import annotations

import json
from typing import Any

from .automorphism import (
    AFFINE,
    DIAGONAL,
    ELEMENTARY,
    TRANSLATION,
    Factor,
    PolyMap,
    factor_to_map,
)
from .length import LengthDecomposition
from .multipoly import ScaledPoly
from .parse import default_names, format_coords, parse_map_coords, parse_poly
from .ring import Frac, format_ring
from .structure import ChainStep, StableTamenessCertificate
from .tameness import NotTameWitness, ReductionStep, TameCertificate

FORMAT = "polyauto-certificate"
VERSION = 1


class FormatError(ValueError):
    pass


def frac_text(c: Frac) -> str:
    if c.den.is_one():
        return format_ring(c.num)
    return f"({format_ring(c.num)})/({format_ring(c.den)})"


def parse_frac(src: str) -> Frac:
    return parse_poly(src, ()).constant_value()


def map_text(F: PolyMap, names=None) -> str:
    return format_coords(F.coords, names or F.names)


def parse_map(src: str, names=None) -> PolyMap:
    coords, names = parse_map_coords(src, names)
    return PolyMap(tuple(coords), names)


def factor_to_dict(f: Factor, names=None) -> dict:
    names = names or default_names(f.n)
    out: dict[str, Any] = {"kind": f.kind, "map": format_coords(factor_to_map(f).coords, names)}
    if f.target is not None:
        out["target"] = f.target
    return out


def factor_from_dict(d: dict, names=None) -> Factor:
    F = parse_map(d["map"], names)
    n = F.dimension
    kind = d["kind"]
    if kind == ELEMENTARY:
        t = d["target"]
        return Factor(ELEMENTARY, n, target=t, rule=F.coords[t] - ScaledPoly.var(n, t))
    if kind == DIAGONAL:
        t = d["target"]
        return Factor(DIAGONAL, n, target=t, scale=F.coords[t].coefficient(tuple(int(i == t) for i in range(n))))
    origin = (0,) * n
    vector = tuple(c.coefficient(origin) for c in F.coords)
    if kind == TRANSLATION:
        return Factor(TRANSLATION, n, vector=vector)
    if kind == AFFINE:
        unit = [tuple(int(i == j) for i in range(n)) for j in range(n)]
        matrix = tuple(tuple(c.coefficient(unit[j]) for j in range(n)) for c in F.coords)
        return Factor(AFFINE, n, matrix=matrix, vector=vector)
    raise FormatError(f"unknown factor kind {kind!r}")


def _steps(steps: list[ReductionStep], names) -> list[dict]:
    return [
        {"kind": s.kind, "factor": factor_to_dict(s.factor, names), "tdeg_before": s.tdeg_before,
         "tdeg_after": s.tdeg_after}
        for s in steps
    ]


def _steps_back(data: list[dict], names) -> list[ReductionStep]:
    return [ReductionStep(d["kind"], factor_from_dict(d["factor"], names), d["tdeg_before"], d["tdeg_after"])
            for d in data]


def to_dict(obj, original: PolyMap | None = None) -> dict:
    """Serialize a certificate; ``original`` is required for a LengthDecomposition."""
    if isinstance(obj, TameCertificate):
        names = obj.original.names
        return {"format": FORMAT, "version": VERSION, "kind": "tame", "variables": list(names),
                "original": map_text(obj.original), "field": obj.field,
                "steps": _steps(obj.steps, names), "terminal": map_text(obj.terminal, names)}
    if isinstance(obj, NotTameWitness):
        names = obj.original.names
        return {"format": FORMAT, "version": VERSION, "kind": "not-tame", "variables": list(names),
                "original": map_text(obj.original), "failed_step": obj.failed_step, "reason": obj.reason,
                "required_constant": None if obj.required_constant is None else frac_text(obj.required_constant),
                "manual_review": obj.manual_review, "steps": _steps(obj.steps, names),
                "stuck_map": map_text(obj.stuck_map, names)}
    if isinstance(obj, LengthDecomposition):
        if original is None:
            raise FormatError("a length certificate needs the original map")
        names = original.names
        return {"format": FORMAT, "version": VERSION, "kind": "length", "variables": list(names),
                "original": map_text(original), "translation": factor_to_dict(obj.translation, names),
                "diagonal": factor_to_dict(obj.diagonal, names),
                "factors": [factor_to_dict(f, names) for f in obj.factors], "length": obj.length}
    if isinstance(obj, StableTamenessCertificate):
        n = obj.original.dimension + obj.added_variables
        names = obj.chain[0].result.names if obj.chain else default_names(n)
        return {
            "format": FORMAT, "version": VERSION, "kind": "stable-tame", "variables": list(names),
            "original": map_text(obj.original), "added_variables": obj.added_variables,
            "chain": [
                {"name": s.name, "left": [factor_to_dict(f, names) for f in s.left],
                 "right": [factor_to_dict(f, names) for f in s.right],
                 "factors": [factor_to_dict(f, names) for f in s.factors],
                 "result": map_text(s.result, names)}
                for s in obj.chain
            ],
            "residual": None if obj.residual is None else map_text(obj.residual, names),
            "residual_length": obj.residual_length,
            "factorization": None if obj.factorization is None
            else [factor_to_dict(f, names) for f in obj.factorization],
            "notes": list(obj.notes),
        }
    raise FormatError(f"cannot serialize {type(obj).__name__}")


def from_dict(d: dict):
    """Inverse of to_dict; a length certificate comes back as (decomposition, original)."""
    if d.get("format") != FORMAT or d.get("version") != VERSION:
        raise FormatError("not a polyauto certificate")
    kind = d["kind"]
    original = parse_map(d["original"])
    names = tuple(d["variables"])
    if kind == "tame":
        return TameCertificate(original, _steps_back(d["steps"], names), parse_map(d["terminal"], names), d["field"])
    if kind == "not-tame":
        const = d["required_constant"]
        return NotTameWitness(original, parse_map(d["stuck_map"], names), d["failed_step"], d["reason"],
                              None if const is None else parse_frac(const), d["manual_review"],
                              _steps_back(d["steps"], names))
    if kind == "length":
        dec = LengthDecomposition(factor_from_dict(d["translation"], names), factor_from_dict(d["diagonal"], names),
                                  [factor_from_dict(f, names) for f in d["factors"]], d["length"])
        return dec, original
    if kind == "stable-tame":
        chain = [
            ChainStep(s["name"], parse_map(s["result"], names),
                      [factor_from_dict(f, names) for f in s["left"]],
                      [factor_from_dict(f, names) for f in s["right"]],
                      [factor_from_dict(f, names) for f in s["factors"]])
            for s in d["chain"]
        ]
        fz = d["factorization"]
        return StableTamenessCertificate(
            original, d["added_variables"], chain,
            None if d["residual"] is None else parse_map(d["residual"], names),
            d["residual_length"],
            None if fz is None else [factor_from_dict(f, names) for f in fz],
            list(d.get("notes", [])),
        )
    raise FormatError(f"unknown certificate kind {kind!r}")


def dumps(obj, original: PolyMap | None = None) -> str:
    return json.dumps(to_dict(obj, original), indent=2)


def loads(text: str):
    return from_dict(json.loads(text))
