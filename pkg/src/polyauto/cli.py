"""``polyauto`` command-line front end.

Exit status: 0 when a map is tame or a verification passes, 2 when a map is
verified not tame, 1 on any error or failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .automorphism import (
    PolyMap,
    ShapeError,
    classify_map,
    compose_all,
    compose_factors,
    describe_factor,
    invert_factors,
    jacobian_det,
)
from .length import length_decompose
from .parse import ParseError, format_poly, format_scaled, parse_map_list, parse_ring, parse_univariate
from .reproduce import render, run_all
from .ring import format_ring
from .serialize import dumps, map_text
from .structure import LengthFourSpec, StructureError, build_commutator, stable_tame_pipeline
from .tameness import NotAnAutomorphismError, NotTameWitness, certificate_factors, tame_check

EXIT_OK, EXIT_ERROR, EXIT_NOT_TAME = 0, 1, 2


class UsageError(ValueError):
    pass


def _maps(src: str) -> list[PolyMap]:
    return [PolyMap(tuple(c), names) for c, names in parse_map_list(src)]


def _one_map(src: str, dim: int | None = None) -> PolyMap:
    maps = _maps(src)
    if len(maps) != 1:
        raise UsageError(f"expected one map, got {len(maps)}")
    F = maps[0]
    if dim is not None and F.dimension != dim:
        raise UsageError(f"expected a map in {dim} variables, got {F.dimension}")
    return F


def _same_dimension(maps: Sequence[PolyMap]) -> int:
    dims = {F.dimension for F in maps}
    if len(dims) != 1:
        raise UsageError(f"maps have different dimensions: {sorted(dims)}")
    return dims.pop()


def _emit(out, fmt: str, text: str, payload) -> None:
    if fmt == "json":
        out.write((payload if isinstance(payload, str) else json.dumps(payload, indent=2)) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _factor_lines(fs, names) -> str:
    return "\n".join(f"  {i + 1}. {describe_factor(f, names)}" for i, f in enumerate(fs))


# -- verbs ------------------------------------------------------------------


def cmd_compose(args, out) -> int:
    maps = [m for src in args.maps for m in _maps(src)]
    _same_dimension(maps)
    F = compose_all(maps)
    _emit(out, args.format, str(F), {"map": map_text(F), "variables": list(F.names)})
    return EXIT_OK


def cmd_invert(args, out) -> int:
    maps = [m for src in args.maps for m in _maps(src)]
    n = _same_dimension(maps)
    if len(maps) == 1 and n == 2:
        cert = tame_check(maps[0], field=True)
        factors = certificate_factors(cert)
    else:
        factors = [classify_map(F) for F in maps]
    inv = compose_factors(invert_factors(factors), n).renamed(maps[0].names)
    _emit(out, args.format, str(inv), {"map": map_text(inv), "variables": list(inv.names)})
    return EXIT_OK


def cmd_tame_check(args, out) -> int:
    F = _one_map(args.map, 2)
    result = tame_check(F, field=args.field)
    if isinstance(result, NotTameWitness):
        text = [f"NOT TAME over Z[t]: stuck at step {result.failed_step}", f"  reason: {result.reason}"]
        if result.required_constant is not None:
            c = result.required_constant
            text.append(f"  required constant: {format_ring(c.num)}" + ("" if c.den.is_one() else f" / ({format_ring(c.den)})"))
        if result.manual_review:
            text.append("  flagged for manual review")
        text.append(f"  stuck map: {result.stuck_map}")
        _emit(out, args.format, "\n".join(text), dumps(result))
        return EXIT_NOT_TAME
    ring = "K" if args.field else "Z[t]"
    text = f"TAME over {ring}: {len(result.steps)} reduction step(s)\n" + _factor_lines(
        certificate_factors(result), F.names)
    _emit(out, args.format, text, dumps(result))
    return EXIT_OK


def cmd_length(args, out) -> int:
    maps = [m for src in args.factors for m in _maps(src)]
    n = _same_dimension(maps)
    if n != 2:
        raise UsageError("length works on two-variable maps")
    F = compose_all(maps)
    dec = length_decompose(F)
    text = (f"length {dec.length}\n  map: {F}\n  translation: {describe_factor(dec.translation, F.names)}\n"
            f"  diagonal: {describe_factor(dec.diagonal, F.names)}\n" + _factor_lines(dec.factors, F.names))
    _emit(out, args.format, text, dumps(dec, F))
    return EXIT_OK


def _spec_from(C: str, D: str, a: str, b: str) -> LengthFourSpec:
    return LengthFourSpec(parse_univariate(C), parse_univariate(D), parse_ring(a), parse_ring(b))


def parse_spec(src: str) -> LengthFourSpec:
    """``C=...; D=...; a=...; b=...`` in any order."""
    fields = {}
    for part in src.split(";"):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {part.strip()!r}")
        fields[key.strip()] = value.strip()
    missing = {"C", "D", "a", "b"} - fields.keys()
    if missing:
        raise UsageError(f"spec is missing {', '.join(sorted(missing))}")
    return _spec_from(fields["C"], fields["D"], fields["a"], fields["b"])


def cmd_commutator(args, out) -> int:
    spec = _spec_from(args.C, args.D, args.a, args.b)
    F = build_commutator(spec)
    det = jacobian_det(F)
    text = f"{F}\n  Jacobian determinant: {format_scaled(det, F.names)}"
    payload = {"map": map_text(F), "variables": list(F.names), "jacobian": format_scaled(det, F.names),
               "C": format_poly(spec.C), "D": format_poly(spec.D), "a": format_ring(spec.a),
               "b": format_ring(spec.b)}
    _emit(out, args.format, text, payload)
    return EXIT_OK


def cmd_stable_tame(args, out) -> int:
    if args.spec is not None:
        spec = parse_spec(args.spec)
    elif None not in (args.C, args.D, args.a, args.b):
        spec = _spec_from(args.C, args.D, args.a, args.b)
    else:
        raise UsageError("give a spec string or all of --C --D --a --b")
    cert = stable_tame_pipeline(spec)
    lines = [f"stabilization of {cert.original} with {cert.added_variables} extra variable(s)"]
    for step in cert.chain:
        lines.append(f"  [{step.name}] {step.result}")
    if cert.residual is not None:
        lines.append(f"  residual length over R[X]: {cert.residual_length}")
    if cert.factorization is not None:
        lines.append(f"  tame factorization: {len(cert.factorization)} factor(s)")
    lines.extend(f"  note: {n}" for n in cert.notes)
    _emit(out, args.format, "\n".join(lines), dumps(cert))
    return EXIT_OK


def cmd_verify_paper(args, out) -> int:
    items = run_all()
    text = render(items)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    payload = [
        {"name": i.name, "passed": i.passed, "detail": i.detail, "discrepancies": i.discrepancies,
         "seconds": round(i.seconds, 4)}
        for i in items
    ]
    _emit(out, args.format, text, payload)
    return EXIT_OK if all(i.passed for i in items) else EXIT_ERROR


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polyauto", description="Exact plane polynomial automorphisms over Z[t].")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("compose", help="compose maps, leftmost applied last")
    s.add_argument("maps", nargs="+")
    s.set_defaults(run=cmd_compose)

    s = sub.add_parser("invert", help="invert a plane map or a factor list")
    s.add_argument("maps", nargs="+")
    s.set_defaults(run=cmd_invert)

    s = sub.add_parser("tame-check", help="decide tameness of a plane map")
    s.add_argument("--field", action="store_true", help="work over K = Frac(Z[t])")
    s.add_argument("map")
    s.set_defaults(run=cmd_tame_check)

    s = sub.add_parser("length", help="minimal amalgamated length of a composed factor list")
    s.add_argument("factors", nargs="+", help="maps, or one ';'-separated list")
    s.set_defaults(run=cmd_length)

    s = sub.add_parser("commutator", help="build the length-four map from (C, D, a, b)")
    for flag in ("--C", "--D", "--a", "--b"):
        s.add_argument(flag, required=True)
    s.set_defaults(run=cmd_commutator)

    s = sub.add_parser("stable-tame", help="stable tameness certificate for a (C, D, a, b) spec")
    s.add_argument("spec", nargs="?", help="'C=...; D=...; a=...; b=...'")
    for flag in ("--C", "--D", "--a", "--b"):
        s.add_argument(flag)
    s.set_defaults(run=cmd_stable_tame)

    s = sub.add_parser("verify-paper", help="run the reproduction suite")
    s.add_argument("--report", help="also write the text report here")
    s.set_defaults(run=cmd_verify_paper)

    for action in p._subparsers._group_actions:  # --format after the verb too
        for sp in action.choices.values():
            sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, out)
    except (ParseError, UsageError, ShapeError, StructureError, NotAnAutomorphismError, ValueError) as exc:
        print(f"polyauto: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
