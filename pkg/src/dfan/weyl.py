"""Operators of the homogenized Weyl algebra D_{n+p}<z> with rational coefficients.

An operator is a finite sum of normally ordered monomials

    x^alpha t^mu dx^beta dt^nu z^k

(coordinates to the left of derivations, z central).  Exponent vectors are
plain tuples laid out as ``(alpha, mu, beta, nu, k)``, length ``2(n+p)+1``.
Elements of D_{n+p} are the operators with ``k == 0`` everywhere; products
there are obtained by computing in D<z> and setting ``z = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import comb, perm
from typing import Iterable, Iterator, Mapping, Union

Exponent = tuple  # tuple[int, ...] of length 2m+1

Scalar = Union[int, Fraction]

NEG_INF = float("-inf")


@dataclass(frozen=True)
class RingSignature:
    """Number of x-variables ``n`` and t-variables ``p``."""

    n: int
    p: int

    def __post_init__(self):
        if self.n < 0 or self.p < 0 or self.n + self.p == 0:
            raise ValueError(f"invalid ring signature n={self.n} p={self.p}")

    @property
    def m(self) -> int:
        return self.n + self.p

    @property
    def length(self) -> int:
        return 2 * self.m + 1

    def variable_names(self) -> list[str]:
        xs = [f"x{i + 1}" for i in range(self.n)]
        ts = [f"t{j + 1}" for j in range(self.p)]
        dxs = [f"dx{i + 1}" for i in range(self.n)]
        dts = [f"dt{j + 1}" for j in range(self.p)]
        return xs + ts + dxs + dts + ["z"]

    def zero_exponent(self) -> Exponent:
        return (0,) * self.length

    def unit_exponent(self, name: str) -> Exponent:
        idx = self.variable_names().index(name)
        e = [0] * self.length
        e[idx] = 1
        return tuple(e)


# ---------------------------------------------------------------------------
# exponent helpers


def deriv_degree(e: Exponent, m: int) -> int:
    """|beta| + |nu|."""
    return sum(e[m:2 * m])


def h_degree(e: Exponent, m: int) -> int:
    """k + |beta| + |nu|, the grading of D<z>."""
    return sum(e[m:])


def total_degree(e: Exponent) -> int:
    return sum(e)


def exp_add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def exp_divides(a: Exponent, b: Exponent) -> bool:
    """True iff ``b`` lies in ``a + N^{2m+1}``."""
    return all(x <= y for x, y in zip(a, b))


def exp_join(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


@lru_cache(maxsize=1 << 18)
def monomial_product(a: Exponent, b: Exponent, m: int) -> tuple:
    """Normal-ordered expansion of the product of two monomials.

    Moving ``d_i^{b_i}`` past ``y_i^{c_i}`` produces, for every ``j <= min``,
    the term ``C(b_i, j) * c_i!/(c_i-j)! * y_i^{c_i-j} d_i^{b_i-j} z^j``.
    Variables are independent, so the full expansion is the product over i.
    Returns a tuple of ``(exponent, integer coefficient)`` pairs.
    """
    ranges = []
    for i in range(m):
        top = min(a[m + i], b[i])
        ranges.append(range(top + 1))
    out = []
    base_k = a[2 * m] + b[2 * m]
    for js in iproduct(*ranges):
        coeff = 1
        e = [0] * (2 * m + 1)
        for i, j in enumerate(js):
            bi, ci = a[m + i], b[i]
            coeff *= comb(bi, j) * perm(ci, j)
            e[i] = a[i] + ci - j
            e[m + i] = bi + b[m + i] - j
        e[2 * m] = base_k + sum(js)
        out.append((tuple(e), coeff))
    return tuple(out)


# ---------------------------------------------------------------------------


class DiffOp:
    """An element of D_{n+p}<z>: a finite map exponent -> nonzero Fraction."""

    __slots__ = ("sig", "_terms", "_hash")

    def __init__(self, sig: RingSignature, terms: Mapping[Exponent, Scalar] | None = None):
        self.sig = sig
        clean = {}
        if terms:
            L = sig.length
            for e, c in terms.items():
                if len(e) != L:
                    raise ValueError(f"exponent {e} has wrong length for {sig}")
                if c:
                    clean[tuple(e)] = Fraction(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, sig: RingSignature, terms: dict) -> "DiffOp":
        # trusted constructor: terms already cleaned
        op = cls.__new__(cls)
        op.sig = sig
        op._terms = terms
        op._hash = None
        return op

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, sig: RingSignature) -> "DiffOp":
        return cls._raw(sig, {})

    @classmethod
    def one(cls, sig: RingSignature) -> "DiffOp":
        return cls._raw(sig, {sig.zero_exponent(): Fraction(1)})

    @classmethod
    def monomial(cls, sig: RingSignature, e: Exponent, c: Scalar = 1) -> "DiffOp":
        return cls(sig, {tuple(e): c})

    @classmethod
    def var(cls, sig: RingSignature, name: str) -> "DiffOp":
        return cls._raw(sig, {sig.unit_exponent(name): Fraction(1)})

    # -- basic protocol ----------------------------------------------------
    @property
    def terms(self) -> dict:
        """Copy of the term map."""
        return dict(self._terms)

    def items(self) -> list:
        """Terms in canonical order (descending graded-lex of the exponent)."""
        return sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0][::-1]), reverse=True)

    def newton_diagram(self) -> frozenset:
        return frozenset(self._terms)

    def coeff(self, e: Exponent) -> Fraction:
        return self._terms.get(tuple(e), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator:
        return iter(self.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, DiffOp):
            return self.sig == other.sig and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == DiffOp.one(self.sig) * other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.sig, frozenset(self._terms.items())))
        return self._hash

    def _check(self, other: "DiffOp") -> None:
        if other.sig != self.sig:
            raise ValueError(f"signature mismatch: {self.sig} vs {other.sig}")

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> "DiffOp":
        if isinstance(other, DiffOp):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return DiffOp.one(self.sig).scale(other)
        raise TypeError(f"cannot combine DiffOp with {type(other).__name__}")

    def __add__(self, other) -> "DiffOp":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return DiffOp._raw(self.sig, out)

    __radd__ = __add__

    def __neg__(self) -> "DiffOp":
        return DiffOp._raw(self.sig, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "DiffOp":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "DiffOp":
        return self._coerce(other) - self

    def scale(self, c: Scalar) -> "DiffOp":
        c = Fraction(c)
        if not c:
            return DiffOp.zero(self.sig)
        return DiffOp._raw(self.sig, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other) -> "DiffOp":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, DiffOp):
            return NotImplemented
        self._check(other)
        return multiply(self, other)

    def __rmul__(self, other) -> "DiffOp":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "DiffOp":
        if k < 0:
            raise ValueError("negative powers are not defined")
        out = DiffOp.one(self.sig)
        for _ in range(k):
            out = out * self
        return out

    # -- structure -----------------------------------------------------------
    def has_z(self) -> bool:
        k = self.sig.length - 1
        return any(e[k] for e in self._terms)

    def is_homogeneous(self) -> bool:
        """All terms share one value of k + |beta| + |nu|."""
        m = self.sig.m
        return len({h_degree(e, m) for e in self._terms}) <= 1

    def degree(self) -> int:
        """Total derivation degree |beta|+|nu|; -1 for 0."""
        m = self.sig.m
        return max((deriv_degree(e, m) for e in self._terms), default=-1)

    def h_degree(self) -> int:
        m = self.sig.m
        return max((h_degree(e, m) for e in self._terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def __repr__(self) -> str:
        return f"DiffOp({format_op(self)})"

    def __str__(self) -> str:
        return format_op(self)


def multiply(P: DiffOp, Q: DiffOp) -> DiffOp:
    """Product in D_{n+p}<z>.  z is central; [d_i, y_i] = z."""
    if P.sig != Q.sig:
        raise ValueError(f"signature mismatch: {P.sig} vs {Q.sig}")
    m = P.sig.m
    out: dict = {}
    get = out.get
    for a, ca in P._terms.items():
        for b, cb in Q._terms.items():
            c = ca * cb
            for e, k in monomial_product(a, b, m):
                v = get(e, 0) + c * k
                if v:
                    out[e] = v
                else:
                    del out[e]
    return DiffOp._raw(P.sig, out)


def monomial_times(e: Exponent, c: Fraction, Q: DiffOp) -> DiffOp:
    """c * x^.. dx^.. z^k (exponent e) times Q, without building the monomial."""
    m = Q.sig.m
    out: dict = {}
    get = out.get
    for b, cb in Q._terms.items():
        cc = c * cb
        for f, k in monomial_product(e, b, m):
            v = get(f, 0) + cc * k
            if v:
                out[f] = v
            else:
                del out[f]
    return DiffOp._raw(Q.sig, out)


def homogenize(P: DiffOp) -> DiffOp:
    """h(P): pad each term with z^{d - |beta| - |nu|}, d = deg P."""
    if P.has_z():
        raise ValueError("homogenize expects an operator without z")
    if P.is_zero():
        return P
    m = P.sig.m
    d = P.degree()
    out = {}
    for e, c in P._terms.items():
        f = list(e)
        f[2 * m] = d - deriv_degree(e, m)
        out[tuple(f)] = c
    return DiffOp._raw(P.sig, out)


def dehomogenize(P: DiffOp) -> DiffOp:
    """The ring morphism z -> 1."""
    m2 = 2 * P.sig.m
    out: dict = {}
    for e, c in P._terms.items():
        f = e[:m2] + (0,)
        v = out.get(f, 0) + c
        if v:
            out[f] = v
        else:
            out.pop(f, None)
    return DiffOp._raw(P.sig, out)


def z_power(P: DiffOp, k: int) -> DiffOp:
    """z^k * P (z is central, so this only shifts the last exponent)."""
    if k < 0:
        raise ValueError("negative z power")
    last = P.sig.length - 1
    return DiffOp._raw(P.sig, {e[:last] + (e[last] + k,): c for e, c in P._terms.items()})


def lift_to_degree(P: DiffOp, d: int) -> DiffOp:
    """z^l h(P) with l chosen so the result is homogeneous of degree ``d``."""
    H = homogenize(dehomogenize(P)) if P.has_z() else homogenize(P)
    if H.is_zero():
        return H
    l = d - H.h_degree()
    if l < 0:
        raise ValueError(f"cannot lift operator of degree {H.h_degree()} to degree {d}")
    return z_power(H, l)


def d_product(P: DiffOp, Q: DiffOp) -> DiffOp:
    """Product in D_{n+p} (z set to 1)."""
    return dehomogenize(multiply(P, Q))


# ---------------------------------------------------------------------------
# L-orders and L-symbols


def l_order(P: DiffOp, L) -> Fraction | float:
    """max of L over the Newton diagram; -inf for the zero operator."""
    if P.is_zero():
        return NEG_INF
    ev = L.evaluate
    return max(ev(e) for e in P._terms)


def l_symbol(P: DiffOp, L) -> DiffOp:
    """Sub-sum of the terms of maximal L-value."""
    if P.is_zero():
        raise ValueError("the principal symbol of 0 is undefined")
    ev = L.evaluate
    top = l_order(P, L)
    return DiffOp._raw(P.sig, {e: c for e, c in P._terms.items() if ev(e) == top})


def is_l_homogeneous(P: DiffOp, L) -> bool:
    return P.is_zero() or l_symbol(P, L) == P


# ---------------------------------------------------------------------------
# printing


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(sig: RingSignature, e: Exponent) -> str:
    parts = []
    for name, k in zip(sig.variable_names(), e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_op(P: DiffOp) -> str:
    """Render in the shared textual syntax (re-parseable)."""
    if P.is_zero():
        return "0"
    pieces = []
    for e, c in P.items():
        mono = format_monomial(P.sig, e)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = _fmt_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(a)}*{mono}"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def ops_signature(ops: Iterable[DiffOp]) -> RingSignature:
    sigs = {op.sig for op in ops}
    if len(sigs) != 1:
        raise ValueError("operators must share one signature")
    return sigs.pop()
