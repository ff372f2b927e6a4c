"""Standard bases of left ideals of D<z>: completion, minimal reduction, saturation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .division import DEFAULT_BUDGET, divide, normal_form
from .errors import BudgetExceeded
from .orders import Order, SaturationOrder, leading_exponent
from .weyl import (
    DiffOp,
    Exponent,
    exp_divides,
    exp_join,
    exp_sub,
    monomial_times,
    ops_signature,
)

DEFAULT_PAIR_BUDGET = 5_000


@dataclass(frozen=True)
class Staircase:
    """The monoid ideal generated by a finite set of corner exponents."""

    corners: tuple

    def __contains__(self, e) -> bool:
        return any(exp_divides(c, e) for c in self.corners)

    def minimal_corners(self) -> tuple:
        cs = sorted(set(self.corners))
        keep = [c for c in cs if not any(d != c and exp_divides(d, c) for d in cs)]
        return tuple(keep)


@dataclass(frozen=True)
class MarkedBasis:
    elements: tuple  # of (DiffOp, marked exponent)
    order: Order
    homogeneous: bool = True
    log: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def operators(self) -> list:
        return [Q for Q, _ in self.elements]

    def marks(self) -> list:
        return [e for _, e in self.elements]

    def staircase(self) -> Staircase:
        return Staircase(tuple(self.marks()))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def relabel(self, order: Order) -> "MarkedBasis":
        return MarkedBasis(self.elements, order, self.homogeneous)

    def same_basis(self, other: "MarkedBasis") -> bool:
        """Element-by-element equality, ignoring which order produced them."""
        return sorted(self.elements, key=_elem_key) == sorted(other.elements, key=_elem_key)


def _elem_key(item):
    Q, e = item
    return (e, sorted(Q._terms.items()))


def _monic(Q: DiffOp, e: Exponent) -> DiffOp:
    c = Q._terms[e]
    return Q if c == 1 else Q.scale(1 / c)


def s_pair(A: DiffOp, B: DiffOp, order: Order) -> DiffOp:
    """m_A A - c m_B B, lifting both leading exponents to their join."""
    if A.is_zero() or B.is_zero():
        raise ValueError("s_pair of a zero operator")
    ea = leading_exponent(A, order)
    eb = leading_exponent(B, order)
    return _s_pair_marked(A, ea, B, eb)


def _s_pair_marked(A, ea, B, eb) -> DiffOp:
    j = exp_join(ea, eb)
    c = A._terms[ea] / B._terms[eb]
    return monomial_times(exp_sub(j, ea), Fraction(1), A) - monomial_times(exp_sub(j, eb), c, B)


def buchberger(
    generators: Sequence[DiffOp],
    order: Order,
    budget: int = DEFAULT_PAIR_BUDGET,
    division_budget: int = DEFAULT_BUDGET,
) -> MarkedBasis:
    """Complete ``generators`` to a standard basis for ``order``.

    Normal selection strategy on the join exponent; every pair is processed
    (no product criterion).  Raises BudgetExceeded with the partial basis.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        raise ValueError("buchberger needs at least one nonzero generator")
    ops_signature(gens)
    key = order.key
    G: list = []
    marks: list = []
    pairs: set = set()
    log = {"pairs": 0, "zero_reductions": 0, "added": 0, "division_steps": 0}

    def partial():
        return MarkedBasis(tuple(zip(G, marks)), order, all(g.is_homogeneous() for g in G), dict(log))

    def reduce(P: DiffOp) -> DiffOp:
        if not G:
            return P
        res = divide(P, G, order, division_budget, marks=marks)
        log["division_steps"] += res.steps
        if res.truncated:
            raise BudgetExceeded(
                f"division truncated after {res.steps} steps during completion", partial=partial()
            )
        return res.remainder

    def add(r: DiffOp) -> None:
        e = leading_exponent(r, order)
        G.append(_monic(r, e))
        marks.append(e)
        k = len(G) - 1
        for i in range(k):
            pairs.add((i, k))
        log["added"] += 1

    for g in gens:
        r = reduce(g)
        if r:
            add(r)

    while pairs:
        i, k = min(pairs, key=lambda ij: (key(exp_join(marks[ij[0]], marks[ij[1]])), ij))
        pairs.discard((i, k))
        if log["pairs"] >= budget:
            raise BudgetExceeded(f"pair budget {budget} exhausted", partial=partial())
        log["pairs"] += 1
        S = _s_pair_marked(G[i], marks[i], G[k], marks[k])
        r = reduce(S) if S else S
        if r:
            add(r)
        else:
            log["zero_reductions"] += 1
    return partial()


def minimal_reduce(basis: MarkedBasis, division_budget: int = DEFAULT_BUDGET) -> MarkedBasis:
    """The unique minimal reduced standard basis with the same staircase."""
    order = basis.order
    items = list(basis.elements)
    kept = []
    seen = set()
    for Q, e in items:
        if e in seen:
            continue
        if any(f != e and exp_divides(f, e) for _, f in items):
            continue
        seen.add(e)
        kept.append((Q, e))
    ops = [Q for Q, _ in kept]
    marks = [e for _, e in kept]
    out = []
    for Q, e in kept:
        lc = Q._terms[e]
        lead = DiffOp.monomial(Q.sig, e, lc)
        tail = Q - lead
        if tail:
            res = divide(tail, ops, order, division_budget, marks=marks)
            if res.truncated:
                raise BudgetExceeded("division truncated while reducing tails", partial=basis)
            tail = res.remainder
        out.append((_monic(lead + tail, e), e))
    out.sort(key=lambda it: order.key(it[1]))
    return MarkedBasis(tuple(out), order, all(Q.is_homogeneous() for Q, _ in out), dict(basis.log))


def standard_basis(
    generators: Sequence[DiffOp],
    order: Order,
    budget: int = DEFAULT_PAIR_BUDGET,
    division_budget: int = DEFAULT_BUDGET,
) -> MarkedBasis:
    return minimal_reduce(buchberger(generators, order, budget, division_budget), division_budget)


def is_standard(basis: MarkedBasis, division_budget: int = DEFAULT_BUDGET) -> bool:
    """Every S-pair of the basis has normal form zero."""
    ops, marks = basis.operators(), basis.marks()
    for i in range(len(ops)):
        for k in range(i + 1, len(ops)):
            S = _s_pair_marked(ops[i], marks[i], ops[k], marks[k])
            if S and normal_form(S, basis, budget=division_budget):
                return False
    return True


def keeps_marks(basis: MarkedBasis, other: Order) -> bool:
    """True iff every element keeps its marked exponent under ``other``."""
    return all(leading_exponent(Q, other) == e for Q, e in basis.elements)


def strip_z(Q: DiffOp) -> DiffOp:
    """Remove the largest power of z dividing Q."""
    if Q.is_zero():
        return Q
    last = Q.sig.length - 1
    k = min(e[last] for e in Q._terms)
    if k == 0:
        return Q
    return DiffOp._raw(Q.sig, {e[:last] + (e[last] - k,): c for e, c in Q._terms.items()})


def z_saturate(
    basis: MarkedBasis | Sequence[DiffOp],
    budget: int = DEFAULT_PAIR_BUDGET,
    order: Order | None = None,
) -> MarkedBasis:
    """Standard basis of (J : z^infinity) for a homogeneous ideal J.

    Completion happens under a well order in which z-divisibility of the
    leading term of a homogeneous element forces z-divisibility of the whole
    element, so stripping z-powers from that basis saturates in one pass;
    rounds repeat until stripping changes nothing (bounded by 2m+1).  The
    result is re-completed for ``order`` (default: the input basis's order).
    """
    if isinstance(basis, MarkedBasis):
        ops = basis.operators()
        order = order or basis.order
    else:
        ops = list(basis)
    if not all(Q.is_homogeneous() for Q in ops):
        raise ValueError("z_saturate expects homogeneous operators")
    sig = ops_signature(ops)
    sat = SaturationOrder()
    rounds = 2 * sig.m + 1
    current = ops
    for _ in range(rounds):
        G = minimal_reduce(buchberger(current, sat, budget))
        stripped = [strip_z(Q) for Q in G.operators()]
        if all(s == Q for s, Q in zip(stripped, G.operators())):
            break
        current = stripped
    else:
        raise BudgetExceeded(f"z-saturation did not stabilise within {rounds} rounds", partial=G)
    if order is None or isinstance(order, SaturationOrder):
        return G
    return standard_basis(G.operators(), order, budget)
