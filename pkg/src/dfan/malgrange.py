"""Annihilator ideals of f^s in D_{n+p}, via the graph embedding t_j = f_j."""

from __future__ import annotations

from typing import Sequence

import sympy

from .stdbasis import DEFAULT_PAIR_BUDGET
from .weyl import DiffOp, RingSignature


def _check_polynomial(f: DiffOp, sig: RingSignature) -> None:
    n = sig.n
    for e in f._terms:
        if any(e[n:]):
            raise ValueError(f"{f} is not a polynomial in x1..x{n}")


def partial_x(f: DiffOp, i: int) -> DiffOp:
    """d f / d x_{i+1} for a polynomial in the x-variables."""
    out = {}
    for e, c in f._terms.items():
        a = e[i]
        if a:
            g = list(e)
            g[i] -= 1
            out[tuple(g)] = c * a
    return DiffOp(f.sig, out)


def annihilator_generators(polynomials: Sequence[DiffOp]) -> list:
    """t_j - f_j (j = 1..p) followed by dx_i + sum_j (d f_j / d x_i) dt_j (i = 1..n)."""
    polys = list(polynomials)
    if not polys:
        raise ValueError("at least one polynomial is required")
    sig = polys[0].sig
    if len(polys) != sig.p:
        raise ValueError(f"expected {sig.p} polynomials, got {len(polys)}")
    for f in polys:
        if f.sig != sig:
            raise ValueError("signature mismatch among polynomials")
        if f.is_zero():
            raise ValueError("f_j = 0 is not allowed")
        _check_polynomial(f, sig)
    names = sig.variable_names()
    n, p = sig.n, sig.p
    gens = [DiffOp.var(sig, names[n + j]) - polys[j] for j in range(p)]
    for i in range(n):
        g = DiffOp.var(sig, f"dx{i + 1}")
        for j in range(p):
            g = g + partial_x(polys[j], i) * DiffOp.var(sig, f"dt{j + 1}")
        gens.append(g)
    return gens


# -- symbolic check of the annihilation -------------------------------------


def _to_sympy(f: DiffOp, xs) -> sympy.Expr:
    expr = sympy.Integer(0)
    for e, c in f._terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for i, x in enumerate(xs):
            term *= x ** e[i]
        expr += term
    return expr


class _FormalAction:
    """Action of D_{n+p} on a(x, s) f^s, with a a rational function of x and s."""

    def __init__(self, sig: RingSignature, polys: Sequence[DiffOp]):
        self.sig = sig
        self.x = sympy.symbols(f"x1:{sig.n + 1}") if sig.n else ()
        self.s = sympy.symbols(f"s1:{sig.p + 1}")
        self.f = [_to_sympy(g, self.x) for g in polys]

    def _shift(self, a, j, k):
        return a.subs(self.s[j], self.s[j] + k)

    def x_mul(self, a, i):
        return self.x[i] * a

    def t_mul(self, a, j):
        return self.f[j] * self._shift(a, j, 1)

    def dt(self, a, j):
        return -self.s[j] * self._shift(a, j, -1) / self.f[j]

    def dx(self, a, i):
        log_part = sum(self.s[j] * sympy.diff(self.f[j], self.x[i]) / self.f[j] for j in range(self.sig.p))
        return sympy.diff(a, self.x[i]) + a * log_part

    def apply_monomial(self, e, a):
        n, p, m = self.sig.n, self.sig.p, self.sig.m
        if e[2 * m]:
            raise ValueError("the formal action is defined on D, not on D<z>")
        # normally ordered: rightmost factors act first
        for j in range(p):
            for _ in range(e[m + n + j]):
                a = self.dt(a, j)
        for i in range(n):
            for _ in range(e[m + i]):
                a = self.dx(a, i)
        for j in range(p):
            for _ in range(e[n + j]):
                a = self.t_mul(a, j)
        for i in range(n):
            for _ in range(e[i]):
                a = self.x_mul(a, i)
        return a

    def apply(self, P: DiffOp, a=sympy.Integer(1)):
        total = sympy.Integer(0)
        for e, c in P._terms.items():
            total += sympy.Rational(c.numerator, c.denominator) * self.apply_monomial(e, a)
        return total


def verify_annihilation(polynomials: Sequence[DiffOp], generators: Sequence[DiffOp] | None = None) -> list:
    """For each generator, True iff it kills f^s (numerator of the result is 0 in Q[x, s])."""
    polys = list(polynomials)
    gens = annihilator_generators(polys) if generators is None else list(generators)
    act = _FormalAction(polys[0].sig, polys)
    out = []
    for g in gens:
        num, _ = sympy.fraction(sympy.together(act.apply(g)))
        out.append(sympy.expand(num) == 0)
    return out


def build_presentation(polynomials: Sequence[DiffOp], budget: int = DEFAULT_PAIR_BUDGET, with_fan: bool = True):
    """IdealPresentation of the annihilator ideal of f^s."""
    from .vfilt import IdealPresentation

    return IdealPresentation.from_generators(annihilator_generators(polynomials), budget, with_fan=with_fan)
