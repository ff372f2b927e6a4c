"""Admissible linear forms and the monomial orders built from them.

Every order is represented by a sort key: ``a < b`` iff ``key(a) < key(b)``.
Keys are flat tuples of exact numbers, so they can also be negated for heaps.

The base well order ``<_0`` is graded lexicographic on the full exponent
vector with variable precedence ``x1 < ... < xn < t1 < ... < dt_p < z``
(so ``z`` is the most significant variable in the lexicographic tier).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .weyl import DiffOp, Exponent


def _num(x) -> int | Fraction:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


class _Form:
    """Shared evaluation machinery: a weight per exponent slot (z has weight 0)."""

    def weights(self, length: int) -> tuple:
        raise NotImplementedError

    def evaluate(self, e: Exponent):
        w = self._wcache.get(len(e))
        if w is None:
            w = tuple((i, c) for i, c in enumerate(self.weights(len(e))) if c)
            self._wcache[len(e)] = w
        return sum(c * e[i] for i, c in w)

    def __call__(self, e: Exponent):
        return self.evaluate(e)


@dataclass(frozen=True)
class LinearForm(_Form):
    """L(alpha, beta) = sum e_i alpha_i + sum f_i beta_i over the m = n+p variables."""

    e: tuple
    f: tuple
    _wcache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(self.e) != len(self.f):
            raise ValueError("e and f must have the same length")
        object.__setattr__(self, "e", tuple(_num(v) for v in self.e))
        object.__setattr__(self, "f", tuple(_num(v) for v in self.f))

    @classmethod
    def zero(cls, m: int) -> "LinearForm":
        return cls((0,) * m, (0,) * m)

    def weights(self, length: int) -> tuple:
        m = len(self.e)
        if length != 2 * m + 1:
            raise ValueError(f"form on {m} variables applied to exponent of length {length}")
        return self.e + self.f + (0,)

    def to_linear(self, n: int | None = None) -> "LinearForm":
        return self


@dataclass(frozen=True)
class VForm(_Form):
    """L = l_1 V_1 + ... + l_p V_p, evaluating to sum l_j (nu_j - mu_j)."""

    l: tuple
    _wcache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        vals = tuple(_num(v) for v in self.l)
        if any(v < 0 for v in vals):
            raise ValueError(f"V-form coefficients must be nonnegative, got {self.l}")
        object.__setattr__(self, "l", vals)

    @property
    def p(self) -> int:
        return len(self.l)

    def weights(self, length: int) -> tuple:
        m = (length - 1) // 2
        n = m - self.p
        if n < 0:
            raise ValueError("V-form has more components than t-variables")
        e = (0,) * n + tuple(-v for v in self.l)
        f = (0,) * n + self.l
        return e + f + (0,)

    def to_linear(self, n: int) -> LinearForm:
        return LinearForm((0,) * n + tuple(-v for v in self.l), (0,) * n + self.l)

    def __add__(self, other: "VForm") -> "VForm":
        return VForm(tuple(a + b for a, b in zip(self.l, other.l)))

    def scaled(self, c) -> "VForm":
        return VForm(tuple(c * a for a in self.l))

    def is_zero(self) -> bool:
        return not any(self.l)

    def primitive(self) -> "VForm":
        """Integral, gcd-1 multiple of this form (the zero form is returned as is)."""
        if self.is_zero():
            return self
        den = 1
        for v in self.l:
            den = den * Fraction(v).denominator // gcd(den, Fraction(v).denominator)
        ints = [int(Fraction(v) * den) for v in self.l]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return VForm(tuple(v // g for v in ints))

    def slope(self):
        """l_2 / l_1 for p = 2 (math.inf on the V_2 ray)."""
        if self.p != 2:
            raise ValueError("slope is only defined for p = 2")
        a, b = self.l
        if a == 0:
            if b == 0:
                raise ValueError("the zero form has no slope")
            return float("inf")
        return Fraction(b) / Fraction(a)

    def same_ray(self, other: "VForm") -> bool:
        return self.primitive() == other.primitive()

    def __str__(self) -> str:
        return "V:" + ",".join(str(v) for v in self.l)


def unit_vform(p: int, j: int) -> VForm:
    """V_{j+1}."""
    return VForm(tuple(1 if i == j else 0 for i in range(p)))


def form_from_slope(lam) -> VForm:
    """Primitive integral V-form (a, b) of slope b/a; ``inf`` gives V_2."""
    if lam == float("inf"):
        return VForm((0, 1))
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("slopes are nonnegative")
    return VForm((lam.denominator, lam.numerator)).primitive()


def in_U(form) -> bool:
    """Membership in the cone of admissible forms: e_i <= 0 and e_i + f_i >= 0."""
    if isinstance(form, VForm):
        return all(v >= 0 for v in form.l)
    return all(ei <= 0 and ei + fi >= 0 for ei, fi in zip(form.e, form.f))


# ---------------------------------------------------------------------------
# orders


def _base_key(e: Exponent) -> tuple:
    """Sort key for <_0 (graded lex, z most significant)."""
    return (sum(e),) + e[::-1]


def _reversed_base(e: Exponent) -> tuple:
    return tuple(-v for v in _base_key(e))


class Order:
    """Strict total order on exponent vectors of a fixed signature."""

    def _key(self, e: Exponent) -> tuple:
        raise NotImplementedError

    def key(self, e: Exponent) -> tuple:
        k = self._cache.get(e)
        if k is None:
            k = self._key(e)
            self._cache[e] = k
        return k

    def less(self, a: Exponent, b: Exponent) -> bool:
        return self.key(a) < self.key(b)


def _deriv(e: Exponent) -> int:
    m = (len(e) - 1) // 2
    return sum(e[m:2 * m])


@dataclass(frozen=True)
class FormOrder(Order):
    """<_L: L first, then |beta|+|nu|, then the reversal of <_0."""

    form: object
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def _key(self, e):
        return (self.form.evaluate(e), _deriv(e)) + _reversed_base(e)

    def describe(self) -> str:
        return f"<_L[{self.form}]"


@dataclass(frozen=True)
class HomFormOrder(Order):
    """<_L^h: k+|beta|+|nu| first, then <_L."""

    form: object
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def _key(self, e):
        d = _deriv(e)
        return (d + e[-1], self.form.evaluate(e), d) + _reversed_base(e)

    def describe(self) -> str:
        return f"<^h[{self.form}]"


@dataclass(frozen=True)
class ConeLimitOrder(Order):
    """Degree, then L, then <_D for a direction form D off the ray of L.

    This is the limit of the orders <^h_{(1-eps)L + eps D} as eps -> 0+.
    """

    form: VForm
    direction: VForm
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if not self.direction.is_zero() and not self.form.is_zero() and self.form.same_ray(self.direction):
            raise ValueError("direction must not lie on the ray of the base form; use HomFormOrder")

    def _key(self, e):
        d = _deriv(e)
        return (d + e[-1], self.form.evaluate(e), self.direction.evaluate(e), d) + _reversed_base(e)

    def describe(self) -> str:
        return f"<|[{self.form} -> {self.direction}]"


@dataclass(frozen=True)
class V1LimitOrder(Order):
    """The order used for the V_1-controlled reduction: L ties broken by <_{V_1}."""

    form: VForm
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def _key(self, e):
        d = _deriv(e)
        v1 = unit_vform(self.form.p, 0)
        return (d + e[-1], self.form.evaluate(e), v1.evaluate(e), d) + _reversed_base(e)

    def describe(self) -> str:
        return f"<|V1[{self.form}]"


@dataclass(frozen=True)
class SaturationOrder(Order):
    """Degree, then derivation degree, then <_0.

    A genuine well order on D<z>, compatible with products.  On homogeneous
    operators, a leading term divisible by z^k forces every term to be.
    Used only to saturate by z.
    """

    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def _key(self, e):
        d = _deriv(e)
        return (d + e[-1], d) + _base_key(e)

    def describe(self) -> str:
        return "<sat"


def limit_order(form: VForm, direction: VForm) -> Order:
    """ConeLimitOrder, degenerating to <^h_L when the direction is on L's ray."""
    if direction.is_zero() or form.is_zero() or form.same_ray(direction):
        return HomFormOrder(form if not form.is_zero() else direction)
    return ConeLimitOrder(form, direction)


def compare(a: Exponent, b: Exponent, order: Order) -> int:
    """-1 if a < b, 1 if a > b, 0 only for a == b."""
    if a == b:
        return 0
    return -1 if order.key(a) < order.key(b) else 1


def leading_exponent(P: DiffOp, order: Order) -> Exponent:
    if P.is_zero():
        raise ValueError("the zero operator has no leading exponent")
    key = order.key
    return max(P._terms, key=key)


def leading_coefficient(P: DiffOp, order: Order) -> Fraction:
    return P._terms[leading_exponent(P, order)]


def leading_monomial(P: DiffOp, order: Order) -> DiffOp:
    return DiffOp.monomial(P.sig, leading_exponent(P, order))


def parse_form(text: str) -> VForm:
    """'V:1,2' -> VForm((1, 2))."""
    text = text.strip()
    if not text.startswith("V:"):
        raise ValueError(f"form literal must look like 'V:l1,l2', got {text!r}")
    body = text[2:]
    parts = [s for s in body.split(",") if s.strip()]
    if not parts:
        raise ValueError(f"empty form literal {text!r}")
    return VForm(tuple(Fraction(s.strip()) for s in parts))


def parse_order(text: str) -> Order:
    """'V:a,b' for <^h, 'V:a,b|c,d' for the cone-limit order toward V:c,d."""
    if "|" in text:
        base, direction = text.split("|", 1)
        return limit_order(parse_form(base), parse_form("V:" + direction.strip().removeprefix("V:")))
    return HomFormOrder(parse_form(text))


def order_to_text(order: Order) -> str:
    if isinstance(order, HomFormOrder):
        return str(order.form)
    if isinstance(order, ConeLimitOrder):
        return f"{order.form}|{','.join(str(v) for v in order.direction.l)}"
    if isinstance(order, V1LimitOrder):
        return f"{order.form}|1" + ",0" * (order.form.p - 1)
    return order.describe()


def vforms_sorted(forms: Sequence[VForm]) -> list:
    return sorted(forms, key=lambda L: L.slope())
