"""The V-Groebner fan of h(I) for two weight directions (p = 2).

Rays of U_V = R_{>=0}^2 are parametrised by the slope lam = l2/l1 in
[0, inf]; V_1 is slope 0 and V_2 is slope inf.  A cell is a maximal slope
interval on which the marked minimal reduced standard basis is constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceeded, InvariantViolation
from .orders import (
    ConeLimitOrder,
    HomFormOrder,
    VForm,
    form_from_slope,
    leading_exponent,
    limit_order,
    unit_vform,
)
from .stdbasis import DEFAULT_PAIR_BUDGET, MarkedBasis, standard_basis
from .weyl import DiffOp, h_degree, l_order

INF = math.inf


@dataclass(frozen=True)
class SlopeInterval:
    lo: object
    lo_closed: bool
    hi: object
    hi_closed: bool

    @classmethod
    def full(cls) -> "SlopeInterval":
        return cls(Fraction(0), True, INF, True)

    def is_empty(self) -> bool:
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def is_point(self) -> bool:
        return self.lo == self.hi and not self.is_empty()

    def contains(self, lam) -> bool:
        if lam < self.lo or lam > self.hi:
            return False
        if lam == self.lo and not self.lo_closed:
            return False
        if lam == self.hi and not self.hi_closed:
            return False
        return True

    def intersect(self, other: "SlopeInterval") -> "SlopeInterval":
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return SlopeInterval(lo, lc, hi, hc)

    def interior_samples(self, k: int = 3) -> list:
        """k distinct rational slopes strictly inside (or the point itself)."""
        if self.is_point():
            return [self.lo]
        if self.hi == INF:
            return [self.lo + Fraction(i + 1, 2) for i in range(k)]
        width = self.hi - self.lo
        return [self.lo + width * Fraction(i + 1, k + 1) for i in range(k)]

    def witness(self):
        if self.is_point():
            return self.lo
        if self.hi == INF:
            return self.lo + 1
        return (self.lo + self.hi) / 2

    def to_json(self) -> dict:
        def enc(v):
            return "inf" if v == INF else str(Fraction(v))

        return {"lo": enc(self.lo), "lo_closed": self.lo_closed, "hi": enc(self.hi), "hi_closed": self.hi_closed}

    def __str__(self) -> str:
        a = "[" if self.lo_closed else "("
        b = "]" if self.hi_closed else ")"
        hi = "inf" if self.hi == INF else str(self.hi)
        return f"{a}{self.lo}, {hi}{b}"


def _half_line(d1, d2, tie: bool) -> SlopeInterval:
    """Slopes lam where (1, lam) . (d1, d2) > 0, or = 0 with ``tie``.

    At lam = inf the form is V_2 and the value is d2.
    """
    d1, d2 = Fraction(d1), Fraction(d2)
    empty = SlopeInterval(Fraction(1), False, Fraction(0), False)
    if d2 == 0:
        at_inf = tie
        if d1 > 0 or (d1 == 0 and tie):
            return SlopeInterval(Fraction(0), True, INF, at_inf)
        if at_inf:
            return SlopeInterval(INF, True, INF, True)
        return empty
    root = -d1 / d2
    if d2 > 0:
        if root < 0:
            return SlopeInterval(Fraction(0), True, INF, True)
        return SlopeInterval(root, tie, INF, True)
    if root < 0 or (root == 0 and not tie):
        return empty
    return SlopeInterval(Fraction(0), True, root, tie)


def cone_of_basis(basis: MarkedBasis) -> SlopeInterval:
    """Maximal slope interval on which every marked exponent stays leading for <^h."""
    if not basis.elements:
        raise ValueError("empty basis")
    sig = basis.elements[0][0].sig
    if sig.p != 2:
        raise ValueError("cone_of_basis needs p = 2")
    V1, V2 = unit_vform(2, 0), unit_vform(2, 1)
    tiebreak = HomFormOrder(VForm((0, 0)))
    m = sig.m
    iv = SlopeInterval.full()
    for Q, e in basis.elements:
        he = h_degree(e, m)
        for f in Q._terms:
            if f == e:
                continue
            hf = h_degree(f, m)
            if hf != he:
                if hf > he:
                    raise InvariantViolation(f"marked exponent {e} is below a term of higher degree")
                continue
            tie = tiebreak.key(e) > tiebreak.key(f)
            iv = iv.intersect(_half_line(V1(e) - V1(f), V2(e) - V2(f), tie))
            if iv.is_empty():
                raise InvariantViolation("basis defines an empty cone")
    return iv


@dataclass
class FanCell:
    interval: SlopeInterval
    basis: MarkedBasis
    witness: VForm

    @property
    def dim(self) -> int:
        if self.witness.p == 1:
            return 1
        return 1 if self.interval.is_point() else 2

    def generators(self) -> list:
        """Primitive integral forms spanning the closure of the cell."""
        if self.witness.p == 1:
            return [VForm((1,))]
        lo = form_from_slope(self.interval.lo)
        if self.interval.is_point():
            return [lo]
        return [lo, form_from_slope(self.interval.hi)]

    def contains_form(self, L: VForm) -> bool:
        if L.p == 1:
            return not L.is_zero()
        return self.interval.contains(L.slope())

    def in_closure(self, L: VForm) -> bool:
        if L.p == 1:
            return not L.is_zero()
        lam = L.slope()
        return self.interval.lo <= lam <= self.interval.hi


@dataclass
class VGroebnerFan:
    cells: list
    skeleton: list = field(default_factory=list)
    p: int = 2

    def maximal_cells(self) -> list:
        return [c for c in self.cells if c.dim == 2]

    def cell_of(self, L: VForm) -> FanCell:
        for c in self.cells:
            if c.contains_form(L):
                return c
        raise InvariantViolation(f"no cell contains {L}")

    def cell_between(self, La: VForm, Lb: VForm) -> FanCell:
        """The maximal cell whose closure is spanned by consecutive skeleton forms."""
        mid = (La.slope(), Lb.slope())
        for c in self.maximal_cells():
            if (c.interval.lo, c.interval.hi) == mid:
                return c
        raise InvariantViolation(f"no maximal cell between {La} and {Lb}")


def _basis_at(generators, order, budget, where) -> MarkedBasis:
    try:
        return standard_basis(generators, order, budget)
    except BudgetExceeded as exc:
        raise BudgetExceeded(f"completion failed at slope {where}: {exc}", partial=exc.partial) from None


def basis_at_slope(generators: Sequence[DiffOp], lam, budget: int = DEFAULT_PAIR_BUDGET) -> MarkedBasis:
    return _basis_at(generators, HomFormOrder(form_from_slope(lam)), budget, lam)


def traverse_fan(generators: Sequence[DiffOp], budget: int = DEFAULT_PAIR_BUDGET) -> VGroebnerFan:
    """Sweep the slopes from 0 to inf, one cell per distinct marked basis.

    ``generators`` must generate h(I) (homogeneous, z-saturated).  After a
    cell closed at its upper end lam*, the next cell's basis is completed for
    the limit order at lam* toward V_2, which is the basis just beyond the
    wall; after a cell open at lam*, the basis is completed for <^h at lam*.
    """
    generators = list(generators)
    sig = generators[0].sig
    if sig.p == 1:
        V1 = VForm((1,))
        B = _basis_at(generators, HomFormOrder(V1), budget, 0)
        cell = FanCell(SlopeInterval(Fraction(0), True, Fraction(0), True), B, V1)
        return VGroebnerFan([cell], [V1], p=1)
    if sig.p != 2:
        raise ValueError("fan traversal is implemented for p = 1 and p = 2 only")
    V2 = unit_vform(2, 1)
    cells = []
    B = _basis_at(generators, HomFormOrder(unit_vform(2, 0)), budget, 0)
    iv = cone_of_basis(B)
    if not iv.contains(Fraction(0)):
        raise InvariantViolation("basis at V_1 does not contain slope 0 in its cone")
    while True:
        cells.append(FanCell(iv, B, form_from_slope(iv.witness())))
        if iv.hi == INF and iv.hi_closed:
            break
        lam = iv.hi
        if iv.hi_closed:
            B = _basis_at(generators, ConeLimitOrder(form_from_slope(lam), V2), budget, lam)
        else:
            B = _basis_at(generators, HomFormOrder(form_from_slope(lam)), budget, lam)
        nxt = cone_of_basis(B)
        if nxt.lo != lam or nxt.lo_closed == iv.hi_closed:
            raise InvariantViolation(f"cells do not abut at slope {lam}: {iv} then {nxt}")
        iv = nxt
    fan = VGroebnerFan(cells, p=2)
    fan.skeleton = skeleton(fan)
    return fan


def skeleton(fan: VGroebnerFan) -> list:
    """Primitive generators of all cell closures, sorted by slope."""
    if fan.p == 1:
        return [VForm((1,))]
    forms = {VForm((1, 0)), VForm((0, 1))}
    for c in fan.cells:
        forms.update(c.generators())
    return sorted(forms, key=lambda L: L.slope())


def within_cell_stable(cell: FanCell, generators: Sequence[DiffOp], budget: int = DEFAULT_PAIR_BUDGET) -> bool:
    """Recompute the basis at interior witnesses; all must equal the stored one."""
    if cell.witness.p == 1:
        return all(
            _basis_at(generators, HomFormOrder(VForm((k,))), budget, k).same_basis(cell.basis) for k in (1, 2, 3)
        )
    for lam in cell.interval.interior_samples(3):
        if not basis_at_slope(generators, lam, budget).same_basis(cell.basis):
            return False
    return True


def limit_order_agrees(cell: FanCell, L: VForm, samples: int = 3) -> bool:
    """Leading exponents under the cone-limit order at L agree with <^h inside the cell.

    Also checks ord^L(Q) = L(exp_{<^h_{witness}}(Q)) for every basis element.
    """
    if not cell.in_closure(L):
        raise ValueError(f"{L} is not in the closure of the cell {cell.interval}")
    W = cell.witness
    lim = limit_order(L, W)
    inner = HomFormOrder(W)
    Lp, Wp = L.primitive(), W.primitive()
    ok = True
    for Q, _ in cell.basis.elements:
        e_lim = leading_exponent(Q, lim)
        for i in range(1, samples + 1):
            eps = Fraction(1, i)
            Lprime = VForm(tuple((1 - eps) * a + eps * b for a, b in zip(Lp.l, Wp.l)))
            if leading_exponent(Q, HomFormOrder(Lprime)) != e_lim:
                ok = False
        if l_order(Q, L) != L(leading_exponent(Q, inner)):
            ok = False
    return ok
