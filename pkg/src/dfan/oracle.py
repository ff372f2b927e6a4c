"""Degree-bounded brute force: ideal and filtration membership by exact linear algebra.

The window of bound D is the span of all products m*g with m a monomial and
deg(m) + deg(g) <= D (deg = total degree of the exponent).  Answers are
"yes" with a certificate that is re-multiplied before being returned, or
"unknown" at the bound; non-membership is never claimed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

import sympy

from .errors import InvariantViolation
from .linalg import SemiEchelon
from .orders import Order, VForm
from .weyl import DiffOp, dehomogenize, l_order, monomial_times, ops_signature, total_degree

DEFAULT_BOUND = 6


@dataclass
class OracleAnswer:
    status: str  # "yes" or "unknown"
    bound: int
    witness: DiffOp | None = None
    certificate: list = field(default_factory=list)  # (coeff, multiplier exponent, generator index)
    best_order: object = None
    witnesses: dict = field(default_factory=dict)

    @property
    def yes(self) -> bool:
        return self.status == "yes"

    def __bool__(self) -> bool:
        return self.yes


def detect_gradings(generators: Sequence[DiffOp], homogenized: bool) -> list:
    """Integer weight vectors on exponent slots for which the ring and all generators are graded.

    The commutation rule forces w(y_i) + w(d_i) = w(z) (0 in D).
    """
    sig = ops_signature(generators)
    m = sig.m
    size = 2 * m + 1 if homogenized else 2 * m
    rows = []
    for i in range(m):
        r = [0] * size
        r[i] = 1
        r[m + i] = 1
        if homogenized:
            r[2 * m] = -1
        rows.append(r)
    for g in generators:
        exps = sorted(g._terms)
        for e in exps[1:]:
            rows.append([e[s] - exps[0][s] for s in range(size)])
    basis = sympy.Matrix(rows).nullspace()
    out = []
    for v in basis:
        den = lcm(*[sympy.fraction(x)[1] for x in v]) if len(v) else 1
        vec = [int(x * den) for x in v]
        if not homogenized:
            vec.append(0)
        out.append(tuple(vec))
    return out


def _monomials_upto(nvars: int, D: int):
    """All exponent tuples of length nvars with total degree <= D, in a fixed order."""
    if nvars == 0:
        yield ()
        return
    for a in range(D + 1):
        for rest in _monomials_upto(nvars - 1, D - a):
            yield (a,) + rest


class DegreeWindow:
    """Products m*g within a degree bound, split into graded pieces."""

    def __init__(self, generators: Sequence[DiffOp], D: int, homogenized: bool):
        gens = [g for g in generators if g]
        if not homogenized:
            gens = [dehomogenize(g) for g in gens]
        self.generators = tuple(gens)
        self.D = D
        self.homogenized = homogenized
        self.sig = ops_signature(gens) if gens else None
        self.gradings = detect_gradings(gens, homogenized) if gens else []
        self._pieces: dict = {}
        self._multipliers = None

    def grade(self, e) -> tuple:
        return tuple(sum(a * b for a, b in zip(u, e)) for u in self.gradings)

    def _gen_degree(self, g: DiffOp) -> int:
        return max(total_degree(e) for e in g._terms)

    def _multiplier_table(self) -> dict:
        if self._multipliers is None:
            L = self.sig.length
            nv = L if self.homogenized else L - 1
            table: dict = {}
            for e in _monomials_upto(nv, self.D):
                full = e if self.homogenized else e + (0,)
                table.setdefault(self.grade(full), []).append(full)
            self._multipliers = table
        return self._multipliers

    def product(self, e, j: int) -> DiffOp:
        P = monomial_times(e, Fraction(1), self.generators[j])
        return P if self.homogenized else dehomogenize(P)

    def _rows(self, grade: tuple):
        table = self._multiplier_table()
        for j, g in enumerate(self.generators):
            dg = self._gen_degree(g)
            gg = self.grade(next(iter(g._terms)))
            target = tuple(a - b for a, b in zip(grade, gg))
            for e in table.get(target, ()):
                if total_degree(e) + dg <= self.D:
                    yield (e, j), self.product(e, j)._terms

    def piece(self, key_id, key, grade: tuple) -> SemiEchelon:
        ck = (key_id, grade)
        ech = self._pieces.get(ck)
        if ech is None:
            ech = SemiEchelon(key)
            ech.extend(self._rows(grade))
            self._pieces[ck] = ech
        return ech

    def grades(self) -> list:
        out = set()
        table = self._multiplier_table()
        for g in self.generators:
            gg = self.grade(next(iter(g._terms)))
            for t in table:
                out.add(tuple(a + b for a, b in zip(t, gg)))
        return sorted(out)

    def reduce(self, P: DiffOp, key_id, key) -> tuple:
        """Head-reduce every graded component; returns (reduced operator, certificate)."""
        parts: dict = {}
        for e, c in P._terms.items():
            parts.setdefault(self.grade(e), {})[e] = c
        out: dict = {}
        cert: dict = {}
        for grade in sorted(parts):
            if not self.generators:
                out.update(parts[grade])
                continue
            row, combo = self.piece(key_id, key, grade).head_reduce(parts[grade])
            out.update(row)
            for lab, v in combo.items():
                cert[lab] = cert.get(lab, 0) - v
        R = DiffOp._raw(P.sig, out)
        certificate = sorted(((v, e, j) for (e, j), v in cert.items() if v), key=lambda t: (t[2], t[1]))
        self.verify(P, R, certificate)
        return R, certificate

    def verify(self, P: DiffOp, R: DiffOp, certificate: list) -> None:
        total = DiffOp.zero(P.sig)
        for c, e, j in certificate:
            total = total + self.product(e, j).scale(c)
        if total != P - R:
            raise InvariantViolation("oracle certificate failed re-multiplication")


_WINDOWS: dict = {}


def window(generators: Sequence[DiffOp], D: int = DEFAULT_BOUND, homogenized: bool = False) -> DegreeWindow:
    ck = (tuple(generators), D, homogenized)
    w = _WINDOWS.get(ck)
    if w is None:
        if len(_WINDOWS) > 64:
            _WINDOWS.clear()
        w = DegreeWindow(generators, D, homogenized)
        _WINDOWS[ck] = w
    return w


def _plain_key(e) -> tuple:
    return (sum(e),) + tuple(e)


def _form_key(L: VForm):
    ev = L.evaluate
    return lambda e: (ev(e), sum(e)) + tuple(e)


def ideal_membership_bf(
    P: DiffOp, generators: Sequence[DiffOp], D: int = DEFAULT_BOUND, homogenized: bool | None = None
) -> OracleAnswer:
    """P in the span of the window, in D<z> (``homogenized``) or in D."""
    if homogenized is None:
        homogenized = P.has_z() or any(g.has_z() for g in generators)
    if not homogenized:
        P = dehomogenize(P)
    if P.is_zero():
        return OracleAnswer("yes", D, witness=P)
    win = window(generators, D, homogenized)
    R, cert = win.reduce(P, "plain", _plain_key)
    if R.is_zero():
        return OracleAnswer("yes", D, witness=R, certificate=cert)
    return OracleAnswer("unknown", D)


def min_order_bf(P: DiffOp, L: VForm, generators: Sequence[DiffOp], D: int = DEFAULT_BOUND) -> tuple:
    """The least ord^L over P + (window), with an attaining representative and certificate."""
    if P.has_z():
        raise ValueError("filtration queries take operators of D")
    win = window(generators, D, False)
    R, cert = win.reduce(P, ("L", L.l), _form_key(L))
    return l_order(R, L), R, cert


def vfilt_membership_bf(
    P: DiffOp, L: VForm, k, generators: Sequence[DiffOp], D: int = DEFAULT_BOUND
) -> OracleAnswer:
    """A representative of P + I with ord^L <= k, searched within the window."""
    best, R, cert = min_order_bf(P, L, generators, D)
    if best <= k:
        return OracleAnswer("yes", D, witness=R, certificate=cert, best_order=best)
    return OracleAnswer("unknown", D, best_order=best)


def vbar_membership_bf(
    P: DiffOp, skeleton: Sequence[VForm], w, generators: Sequence[DiffOp], D: int = DEFAULT_BOUND
) -> OracleAnswer:
    """Conjunction of the single-form searches over the skeleton; witnesses per form."""
    w = tuple(w)
    witnesses = {}
    for L in skeleton:
        k = sum(a * b for a, b in zip(L.l, w))
        ans = vfilt_membership_bf(P, L, k, generators, D)
        if not ans.yes:
            return OracleAnswer("unknown", D)
        witnesses[L] = ans.witness
    return OracleAnswer("yes", D, witnesses=witnesses)


def leading_exponents_bf(order: Order, generators: Sequence[DiffOp], D: int = DEFAULT_BOUND) -> set:
    """Leading exponents of all elements of the window of a homogeneous ideal in D<z>."""
    win = window(generators, D, True)
    out = set()
    for grade in win.grades():
        out |= win.piece(("order", order.describe()), order.key, grade).pivots()
    return out
