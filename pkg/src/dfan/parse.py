"""Textual syntax for operators and the ``.dfan`` input format.

Operators: variables x1..xn, t1..tp, dx1..dxn, dt1..dtp, z; coefficients
``a`` or ``a/b``; ``+ - * ^`` and parentheses.  Juxtaposition multiplies, and
every product is evaluated left to right in D<z> (noncommutatively).

Input files::

    n=2 p=2
    f1 = x1          # Malgrange mode, one line per f_j
    gen = dt1*t1     # or raw-ideal mode: generators of I in D_{n+p}
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .weyl import DiffOp, RingSignature, dehomogenize

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z]*\d*)|(.))")
_VAR = re.compile(r"^(x|t|dx|dt)(\d+)$")


def _tokenize(text: str, line: int | None):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, ident, sym = m.groups()
        col = m.start(m.lastindex) + 1
        if num is not None:
            toks.append(("num", int(num), col))
        elif ident is not None:
            toks.append(("id", ident, col))
        elif sym is not None:
            if sym in "+-*^/()":
                toks.append((sym, sym, col))
            elif sym.isspace():
                pass
            else:
                raise ParseError(f"unexpected character {sym!r}", line, col)
        pos = m.end()
    toks.append(("end", None, len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text: str, sig: RingSignature, line: int | None, allowed=None):
        self.toks = _tokenize(text, line)
        self.i = 0
        self.sig = sig
        self.line = line
        self.allowed = allowed

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", self.line, tok[2])
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.line, tok[2])

    def parse(self) -> DiffOp:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        op = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return op

    def expr(self) -> DiffOp:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            s = self.take()[0]
            t = self.term()
            acc = acc + t if s == "+" else acc - t
        return acc

    def _starts_factor(self):
        return self.peek()[0] in ("num", "id", "(")

    def term(self) -> DiffOp:
        acc = self.factor()
        while True:
            if self.peek()[0] == "*":
                self.take()
                acc = acc * self.factor()
            elif self._starts_factor():
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> DiffOp:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("num")
            base = base ** tok[1]
        return base

    def atom(self) -> DiffOp:
        tok = self.peek()
        kind = tok[0]
        if kind == "num":
            self.take()
            val = Fraction(tok[1])
            if self.peek()[0] == "/":
                self.take()
                den = self.take("num")
                if den[1] == 0:
                    raise ParseError("zero denominator", self.line, den[2])
                val = val / den[1]
            return DiffOp.one(self.sig).scale(val)
        if kind == "id":
            self.take()
            return DiffOp.var(self.sig, self._variable(tok))
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "-":
            self.take()
            return -self.factor()
        raise self.error(f"unexpected token {tok[1]!r}")

    def _variable(self, tok) -> str:
        name = tok[1]
        if self.allowed is not None and not any(name.startswith(a) for a in self.allowed):
            raise ParseError(f"variable {name!r} not allowed here", self.line, tok[2])
        if name == "z":
            return name
        m = _VAR.match(name)
        if not m:
            raise ParseError(f"unknown variable {name!r}", self.line, tok[2])
        kind, idx = m.group(1), int(m.group(2))
        bound = self.sig.n if kind in ("x", "dx") else self.sig.p
        if not 1 <= idx <= bound:
            raise ParseError(f"variable index out of range in {name!r}", self.line, tok[2])
        return name


def parse_operator(text: str, sig: RingSignature, *, in_d: bool = False, line: int | None = None) -> DiffOp:
    """Parse an operator of D<z>; with ``in_d`` the result is read in D (z = 1)."""
    op = _Parser(text, sig, line).parse()
    return dehomogenize(op) if in_d else op


def parse_polynomial(text: str, sig: RingSignature, line: int | None = None) -> DiffOp:
    """A polynomial in x1..xn, returned as a z-free operator."""
    return _Parser(text, sig, line, allowed=("x",)).parse()


@dataclass
class InputSpec:
    sig: RingSignature
    polynomials: list  # f_1..f_p as DiffOps (Malgrange mode), else empty
    generators: list  # raw-ideal generators in D, else empty

    @property
    def mode(self) -> str:
        return "malgrange" if self.polynomials else "ideal"


_HEADER = re.compile(r"^\s*n\s*=\s*(-?\d+)\s+p\s*=\s*(-?\d+)\s*$")
_FLINE = re.compile(r"^\s*f(\d+)\s*=(.*)$")
_GLINE = re.compile(r"^\s*gen\s*=(.*)$")


def parse_input(text: str) -> InputSpec:
    lines = text.splitlines()
    body = []
    for no, raw in enumerate(lines, start=1):
        content = raw.split("#", 1)[0]
        if content.strip():
            body.append((no, content))
    if not body:
        raise ParseError("missing header 'n=<int> p=<int>'", 1, 1)
    no, header = body[0]
    m = _HEADER.match(header)
    if not m:
        raise ParseError("malformed header, expected 'n=<int> p=<int>'", no, 1)
    n, p = int(m.group(1)), int(m.group(2))
    try:
        sig = RingSignature(n, p)
    except ValueError as exc:
        raise ParseError(str(exc), no, 1) from None
    polys: dict = {}
    gens = []
    for no, content in body[1:]:
        fm = _FLINE.match(content)
        gm = _GLINE.match(content)
        if fm:
            j = int(fm.group(1))
            if not 1 <= j <= p:
                raise ParseError(f"f{j} out of range for p={p}", no, 1)
            if j in polys:
                raise ParseError(f"f{j} defined twice", no, 1)
            col = content.index("=") + 2
            try:
                f = parse_polynomial(fm.group(2), sig, line=no)
            except ParseError as exc:
                raise ParseError(exc.msg, no, (exc.col or 1) + col - 1) from None
            if f.is_zero():
                raise ParseError(f"f{j} is zero", no, col)
            polys[j] = f
        elif gm:
            col = content.index("=") + 2
            try:
                g = parse_operator(gm.group(1), sig, in_d=True, line=no)
            except ParseError as exc:
                raise ParseError(exc.msg, no, (exc.col or 1) + col - 1) from None
            gens.append(g)
        else:
            raise ParseError("expected 'f<j> = ...' or 'gen = ...'", no, 1)
    if polys and gens:
        raise ParseError("cannot mix 'f<j>' and 'gen' lines", body[1][0], 1)
    if polys:
        missing = [j for j in range(1, p + 1) if j not in polys]
        if missing:
            raise ParseError(f"missing f{missing[0]}", body[-1][0], 1)
        return InputSpec(sig, [polys[j] for j in range(1, p + 1)], [])
    if not gens:
        raise ParseError("no polynomials or generators given", body[0][0], 1)
    return InputSpec(sig, [], gens)
