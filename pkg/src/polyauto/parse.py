"""Text grammar shared by the CLI and the certificate format.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' INT)?
    atom   := INT | 't' | VAR | '(' expr ')'
    map    := '(' expr (',' expr)* ')'
    factors:= map (';' map)*

Division is only allowed by constants (elements of Frac(Z[t])), so
``(X^2)/(t)`` and ``X^2/t`` both parse to the same ScaledPoly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .multipoly import MultiPoly, ScaledPoly
from .ring import RingElem, format_ring

DEFAULT_NAMES = {1: ("X",), 2: ("X", "Y"), 3: ("X", "Y", "Z"), 4: ("X", "Y", "Z", "W")}


def default_names(n: int) -> tuple[str, ...]:
    if n in DEFAULT_NAMES:
        return DEFAULT_NAMES[n]
    return tuple(f"X{i + 1}" for i in range(n))


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, token: str):
        super().__init__(f"{message} at line {line}, column {column} (token {token!r})")
        self.line = line
        self.column = column
        self.token = token


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))", re.S)


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            break
        # track newlines skipped by \s*
        skipped = src[pos:m.start(m.lastindex)] if m.lastindex else src[pos:m.end()]
        for k, ch in enumerate(skipped):
            if ch == "\n":
                line += 1
                line_start = pos + k + 1
        if m.lastindex is None:
            break
        start = m.start(m.lastindex)
        col = start - line_start + 1
        if m.group(1):
            toks.append(_Tok("int", m.group(1), line, col))
        elif m.group(2):
            toks.append(_Tok("name", m.group(2), line, col))
        else:
            ch = m.group(3)
            if ch not in "+-*/^(),;":
                raise ParseError("unexpected character", line, col, ch)
            toks.append(_Tok(ch, ch, line, col))
        pos = m.end()
    # end-of-input position
    tail = src[: len(src)]
    last_nl = tail.rfind("\n")
    toks.append(_Tok("eof", "<end of input>", tail.count("\n") + 1, len(tail) - last_nl))
    return toks


class _Parser:
    def __init__(self, src: str, names: Sequence[str]):
        self.toks = _tokenize(src)
        self.i = 0
        self.names = list(names)
        self.n = len(names)

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col, tok.text)

    def expect(self, kind: str) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"expected {kind!r}")
        return self.next()

    def expr(self) -> ScaledPoly:
        val = self.term()
        while self.peek().kind in "+-" and self.peek().kind != "eof":
            op = self.next().kind
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> ScaledPoly:
        val = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.next()
            rhs = self.unary()
            if op.kind == "*":
                val = val * rhs
            else:
                if not rhs.is_constant():
                    self.fail("division by a non-constant polynomial", op)
                if rhs.is_zero():
                    self.fail("division by zero", op)
                val = val.div_ring(rhs.constant_value())
        return val

    def unary(self) -> ScaledPoly:
        tok = self.peek()
        if tok.kind == "-":
            self.next()
            return -self.unary()
        if tok.kind == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self) -> ScaledPoly:
        base = self.atom()
        if self.peek().kind == "^":
            self.next()
            tok = self.expect("int")
            base = base ** int(tok.text)
        return base

    def atom(self) -> ScaledPoly:
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return ScaledPoly.constant(self.n, int(tok.text))
        if tok.kind == "name":
            self.next()
            if tok.text == "t":
                return ScaledPoly.constant(self.n, RingElem.t())
            if tok.text in self.names:
                return ScaledPoly.var(self.n, self.names.index(tok.text))
            self.fail(f"unknown variable (expected one of t, {', '.join(self.names)})", tok)
        if tok.kind == "(":
            self.next()
            val = self.expr()
            self.expect(")")
            return val
        self.fail("expected a number, variable or '('")

    def map_literal(self) -> list[ScaledPoly]:
        self.expect("(")
        coords = [self.expr()]
        while self.peek().kind == ",":
            self.next()
            coords.append(self.expr())
        self.expect(")")
        return coords


def _count_coordinates(src: str) -> int:
    """Number of top-level commas + 1 inside the first parenthesized group."""
    depth = 0
    count = 1
    for ch in src:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                break
        elif ch == "," and depth == 1:
            count += 1
        elif ch == ";" and depth == 0:
            break
    return count


def _names_for(src: str, n: int) -> tuple[str, ...]:
    names = default_names(n)
    if n == 3 and re.search(r"\bW\b", src) and not re.search(r"\bZ\b", src):
        names = ("X", "Y", "W")
    return names


def parse_poly(src: str, names: Sequence[str]) -> ScaledPoly:
    p = _Parser(src, names)
    val = p.expr()
    if p.peek().kind != "eof":
        p.fail("unexpected trailing input")
    return val


def parse_univariate(src: str) -> MultiPoly:
    """One-variable polynomial over Z[t]; any of X, Y, Z, W names the variable."""
    found = set(re.findall(r"\b([XYZW])\b", src))
    if len(found) > 1:
        raise ParseError(f"expected one variable, found {sorted(found)}", 1, 1, src)
    name = found.pop() if found else "X"
    s = parse_poly(src, (name,))
    if not s.is_integral():
        raise ParseError("polynomial must have coefficients in Z[t]", 1, 1, src)
    return s.num if s.den.is_one() else -s.num


def parse_ring(src: str) -> RingElem:
    s = parse_poly(src, ())
    if not s.is_integral():
        raise ParseError("expected an element of Z[t]", 1, 1, src)
    c = s.num.constant_coeff()
    return c if s.den.is_one() else -c


def parse_map_coords(src: str, names: Sequence[str] | None = None) -> tuple[list[ScaledPoly], tuple[str, ...]]:
    n = _count_coordinates(src)
    names = tuple(names) if names else _names_for(src, n)
    p = _Parser(src, names)
    coords = p.map_literal()
    if p.peek().kind != "eof":
        p.fail("unexpected trailing input")
    return coords, names


def parse_map_list(src: str) -> list[tuple[list[ScaledPoly], tuple[str, ...]]]:
    """``;``-separated map literals (a factor list)."""
    out = []
    pieces = [piece for piece in _split_top(src) if piece.strip()]
    for piece in pieces:
        out.append(parse_map_coords(piece))
    return out


def _split_top(src: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in src:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == ";" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def _monomial_text(m, names) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(names[i])
        elif e > 1:
            parts.append(f"{names[i]}^{e}")
    return "*".join(parts)


def format_poly(p: MultiPoly, names: Sequence[str] | None = None) -> str:
    names = names or default_names(p.nvars)
    if p.is_zero():
        return "0"
    pieces: list[tuple[str, str]] = []
    for m, c in p.sorted_terms():
        mono = _monomial_text(m, names)
        nonzero = [k for k, v in enumerate(c.coeffs) if v]
        if len(nonzero) == 1:
            sign = "-" if c.lc < 0 else "+"
            cabs = format_ring(-c if c.lc < 0 else c)
            if not mono:
                body = cabs
            elif cabs == "1":
                body = mono
            else:
                body = f"{cabs}*{mono}"
        else:
            sign = "+"
            ctext = f"({format_ring(c)})"
            body = f"{ctext}*{mono}" if mono else ctext
        pieces.append((sign, body))
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def format_scaled(s: ScaledPoly, names: Sequence[str] | None = None) -> str:
    text = format_poly(s.num, names)
    if s.den.is_one():
        return text
    return f"({text})/({format_ring(s.den)})"


def format_coords(coords: Sequence[ScaledPoly], names: Sequence[str] | None = None) -> str:
    names = names or default_names(len(coords))
    return "(" + ", ".join(format_scaled(c, names) for c in coords) + ")"
