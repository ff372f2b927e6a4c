"""Division in D<z> with respect to the leading exponents of the divisors.

Regions: Delta_1 = e_1 + N^{2m+1}, Delta_j = (e_j + N^{2m+1}) minus the
earlier regions, and the complement Delta_bar.  Divisor order matters.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExceeded, InvariantViolation
from .orders import Order, leading_exponent
from .weyl import DiffOp, Exponent, exp_divides, exp_sub, monomial_times

DEFAULT_BUDGET = 200_000


def region_of(e: Exponent, marks: Sequence[Exponent]):
    """Index j of the region Delta_j containing ``e``, or None for Delta_bar."""
    for j, mk in enumerate(marks):
        if exp_divides(mk, e):
            return j
    return None


@dataclass
class DivisionResult:
    quotients: list
    remainder: DiffOp
    marks: list
    truncated: bool = False
    steps: int = 0
    tail: DiffOp | None = None

    def reconstruct(self, divisors: Sequence[DiffOp]) -> DiffOp:
        total = self.remainder
        for q, Q in zip(self.quotients, divisors):
            if q:
                total = total + q * Q
        if self.tail is not None:
            total = total + self.tail
        return total

    def region_violations(self) -> list:
        """Terms that break the support discipline (empty when all is well)."""
        bad = []
        for j, q in enumerate(self.quotients):
            for e in q.newton_diagram():
                shifted = tuple(a + b for a, b in zip(e, self.marks[j]))
                if region_of(shifted, self.marks) != j:
                    bad.append(("q", j, e))
        for e in self.remainder.newton_diagram():
            if region_of(e, self.marks) is not None:
                bad.append(("R", None, e))
        return bad


def divide(
    P: DiffOp,
    divisors: Sequence[DiffOp],
    order: Order,
    budget: int = DEFAULT_BUDGET,
    marks: Sequence[Exponent] | None = None,
) -> DivisionResult:
    """Divide ``P`` by ``divisors``: P = sum q_j Q_j + R (+ tail if truncated).

    The running expression is processed greatest term first.  Each term is
    routed to the unique region containing it.  When ``budget`` steps are
    used up the result is flagged ``truncated`` and the unprocessed part is
    returned as ``tail``.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    sig = P.sig
    for Q in divisors:
        if Q.sig != sig:
            raise ValueError("signature mismatch between dividend and divisor")
        if Q.is_zero():
            raise ValueError("cannot divide by the zero operator")
    if marks is None:
        marks = [leading_exponent(Q, order) for Q in divisors]
    else:
        marks = [tuple(mk) for mk in marks]
    lcs = [Q._terms[mk] for Q, mk in zip(divisors, marks)]

    key = order.key
    work: dict = dict(P._terms)
    heap = [(tuple(-v for v in key(e)), e) for e in work]
    heapq.heapify(heap)
    quot = [dict() for _ in divisors]
    rem: dict = {}
    steps = 0
    truncated = False

    while heap:
        _, e = heapq.heappop(heap)
        c = work.get(e)
        if c is None:
            continue
        if steps >= budget:
            truncated = True
            break
        steps += 1
        del work[e]
        j = region_of(e, marks)
        if j is None:
            rem[e] = c
            continue
        s = exp_sub(e, marks[j])
        coeff = c / lcs[j]
        quot[j][s] = quot[j].get(s, 0) + coeff
        prod = monomial_times(s, coeff, divisors[j])
        for f, v in prod._terms.items():
            if f == e:
                if v != c:
                    raise InvariantViolation("leading term did not cancel in division")
                continue
            nv = work.get(f, 0) - v
            if nv:
                if f not in work:
                    heapq.heappush(heap, (tuple(-x for x in key(f)), f))
                work[f] = nv
            else:
                work.pop(f, None)

    quotients = [DiffOp._raw(sig, {e: c for e, c in q.items() if c}) for q in quot]
    tail = DiffOp._raw(sig, dict(work)) if truncated else None
    return DivisionResult(
        quotients=quotients,
        remainder=DiffOp._raw(sig, rem),
        marks=list(marks),
        truncated=truncated,
        steps=steps,
        tail=tail,
    )


def normal_form(P: DiffOp, basis, order: Order | None = None, budget: int = DEFAULT_BUDGET) -> DiffOp:
    """Remainder of P against a MarkedBasis (or a plain list with an order)."""
    if hasattr(basis, "elements"):
        ops = basis.operators()
        marks = basis.marks()
        order = order or basis.order
    else:
        ops = list(basis)
        marks = None
        if order is None:
            raise ValueError("an order is required when dividing by a plain list")
    if not ops:
        return P
    res = divide(P, ops, order, budget, marks=marks)
    if res.truncated:
        raise BudgetExceeded(f"division truncated after {res.steps} steps", partial=res)
    return res.remainder
