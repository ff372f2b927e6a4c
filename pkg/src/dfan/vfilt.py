"""V-filtrations of M = D_{n+p}/I and the reductions that move representatives into them.

Module elements are handled through representatives P (with m = P.delta, delta
the class of 1); every identity in M is discharged by an ideal-membership
check against the z-saturated standard basis of h(I).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .division import DEFAULT_BUDGET, divide, normal_form
from .errors import BudgetExceeded, InvariantViolation
from .orders import (
    Order,
    V1LimitOrder,
    VForm,
    leading_exponent,
    limit_order,
    unit_vform,
)
from .stdbasis import DEFAULT_PAIR_BUDGET, MarkedBasis, z_saturate
from .vfan import FanCell, VGroebnerFan, traverse_fan
from .weyl import (
    NEG_INF,
    DiffOp,
    dehomogenize,
    homogenize,
    l_order,
    l_symbol,
    lift_to_degree,
    ops_signature,
)


# ---------------------------------------------------------------------------
# weights and presentations


@dataclass(frozen=True)
class WeightVector:
    """An integer weight w in Z^p; a form L takes the value L(w) = sum l_j w_j on it."""

    w: tuple

    def __post_init__(self):
        vals = tuple(self.w)
        if any(int(v) != v for v in vals):
            raise ValueError(f"weights must be integers, got {vals}")
        object.__setattr__(self, "w", tuple(int(v) for v in vals))

    def __len__(self) -> int:
        return len(self.w)

    def __getitem__(self, j: int) -> int:
        return self.w[j]

    def value(self, L: VForm):
        if L.p != len(self.w):
            raise ValueError(f"form {L} and weight {self.w} have different lengths")
        return sum(l * v for l, v in zip(L.l, self.w))

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.w)


def _as_weight(w) -> WeightVector:
    return w if isinstance(w, WeightVector) else WeightVector(tuple(w))


@dataclass
class IdealPresentation:
    """A left ideal I of D_{n+p} with the data needed to reduce modulo it.

    ``saturated`` is a standard basis of h(I) for a well order, used as the
    membership oracle of the engine; ``fan`` carries the per-cell bases.
    """

    generators: tuple
    saturated: MarkedBasis
    fan: VGroebnerFan | None = None

    @property
    def sig(self):
        return self.generators[0].sig

    @classmethod
    def from_generators(
        cls, generators: Sequence[DiffOp], budget: int = DEFAULT_PAIR_BUDGET, with_fan: bool = True
    ) -> "IdealPresentation":
        gens = tuple(dehomogenize(g) for g in generators if g)
        if not gens:
            raise ValueError("the zero ideal has no presentation here")
        sig = ops_signature(gens)
        sat = z_saturate([homogenize(g) for g in gens], budget)
        fan = None
        if with_fan and sig.p in (1, 2):
            fan = traverse_fan(sat.operators(), budget)
        return cls(gens, sat, fan)

    def contains(self, P: DiffOp, budget: int = DEFAULT_BUDGET) -> bool:
        """P in I (z is set to 1 first); decided by a normal form in h(I)."""
        if P.is_zero():
            return True
        return normal_form(homogenize(dehomogenize(P)), self.saturated, budget=budget).is_zero()

    def certify(self, P: DiffOp, what: str = "element") -> None:
        if not self.contains(P):
            raise InvariantViolation(f"{what} is not in the ideal: {P}")

    def same_class(self, P: DiffOp, Q: DiffOp) -> bool:
        return self.contains(P - Q)


# ---------------------------------------------------------------------------
# representative-level predicates


def _require_d(P: DiffOp) -> None:
    if P.has_z():
        raise ValueError("expected an operator of D_{n+p} (no z)")


def vw_membership(P: DiffOp, w) -> bool:
    """ord^{V_j}(P) <= w_j for every j."""
    _require_d(P)
    w = _as_weight(w)
    p = len(w)
    return all(l_order(P, unit_vform(p, j)) <= w[j] for j in range(p))


def sigma_vw_membership(P: DiffOp, cell: FanCell, w) -> bool:
    """ord^L(P) <= L(w) for the primitive generators L of the cell's closure."""
    _require_d(P)
    w = _as_weight(w)
    return all(l_order(P, L) <= w.value(L) for L in cell.generators())


def order_profile(P: DiffOp, forms: Sequence[VForm]) -> tuple:
    return tuple(l_order(P, L) for L in forms)


# ---------------------------------------------------------------------------
# traces


@dataclass
class TraceStep:
    form: VForm
    subtracted: DiffOp
    before: tuple
    after: tuple
    claims: dict = field(default_factory=dict)


@dataclass
class ReductionTrace:
    forms: list
    initial: DiffOp
    final: DiffOp | None = None
    steps: list = field(default_factory=list)

    def to_json(self) -> dict:
        def num(v):
            if v == NEG_INF:
                return None
            v = Fraction(v)
            return v.numerator if v.denominator == 1 else str(v)

        return {
            "forms": [str(L) for L in self.forms],
            "initial": str(self.initial),
            "final": None if self.final is None else str(self.final),
            "steps": [
                {
                    "form": str(s.form),
                    "subtracted": str(s.subtracted),
                    "before": [num(v) for v in s.before],
                    "after": [num(v) for v in s.after],
                    **({"claims": s.claims} if s.claims else {}),
                }
                for s in self.steps
            ],
        }


# ---------------------------------------------------------------------------
# one division step shared by both reductions


@dataclass
class _Split:
    H: DiffOp
    quotients: list
    J: list
    W: DiffOp


def _symbol_split(P: DiffOp, cert: DiffOp, basis: MarkedBasis, L: VForm, order: Order, budget: int) -> _Split:
    """Divide z^l h(P) - z^l' h(cert) by the basis and keep the L-leading quotients."""
    ops = basis.operators()
    marks = [leading_exponent(Q, order) for Q in ops]
    if marks != basis.marks():
        raise InvariantViolation(f"cell basis is not marked consistently for {order.describe()}")
    d = max(homogenize(P).h_degree(), homogenize(cert).h_degree())
    H = lift_to_degree(P, d)
    H0 = H - lift_to_degree(cert, d)
    res = divide(H0, ops, order, budget, marks=marks)
    if res.truncated:
        raise BudgetExceeded(f"division truncated after {res.steps} steps", partial=res)
    if res.remainder:
        raise InvariantViolation("difference with the certificate does not reduce to 0 on the cell basis")
    top = l_order(H0, L)
    if top != l_order(H, L):
        raise InvariantViolation("certificate does not sit strictly below the operator")
    J = [j for j, q in enumerate(res.quotients) if q and l_order(q * ops[j], L) == top]
    W = DiffOp.zero(P.sig)
    for j in J:
        W = W + l_symbol(res.quotients[j], L) * ops[j]
    return _Split(H, res.quotients, J, W)


def _check_cert(P: DiffOp, cert: DiffOp, pres: IdealPresentation) -> None:
    if not pres.same_class(P, cert):
        raise ValueError("certificate does not represent the same module element")


# ---------------------------------------------------------------------------
# single-form reduction and the cone filtration


def reduce_step(
    P: DiffOp,
    forms: Sequence[VForm],
    i0: int,
    pres: IdealPresentation,
    cell: FanCell,
    cert: DiffOp,
    budget: int = DEFAULT_BUDGET,
    check_cert: bool = True,
) -> tuple:
    """Lower ord^{L_{i0}}(P) without raising ord^{L_i}(P) for the other forms.

    ``cert`` represents the same element with a strictly smaller
    L_{i0}-order.  Returns (P', TraceStep) with P - P' in I.
    """
    _require_d(P)
    forms = list(forms)
    L = forms[i0]
    for Li in forms:
        if not cell.in_closure(Li):
            raise ValueError(f"{Li} is not in the closure of the cell {cell.interval}")
    if not l_order(cert, L) < l_order(P, L):
        raise ValueError(f"certificate does not improve the {L}-order")
    if check_cert:
        _check_cert(P, cert, pres)
    split = _symbol_split(P, cert, cell.basis, L, limit_order(L, cell.witness), budget)
    Pn = dehomogenize(split.H - split.W)
    Wd = dehomogenize(split.W)
    before, after = order_profile(P, forms), order_profile(Pn, forms)
    if not after[i0] < before[i0]:
        raise InvariantViolation(f"{L}-order did not drop: {before[i0]} -> {after[i0]}")
    for i, (a, b) in enumerate(zip(before, after)):
        if b > a:
            raise InvariantViolation(f"{forms[i]}-order increased: {a} -> {b}")
    pres.certify(Wd, "subtracted element")
    return Pn, TraceStep(L, Wd, before, after)


def cone_filtration_witness(
    certs: Sequence[tuple],
    cell: FanCell,
    w,
    pres: IdealPresentation,
    budget: int = DEFAULT_BUDGET,
    start: DiffOp | None = None,
):
    """One representative below L(w) for every L, from one certificate per form.

    ``certs`` is a list of (P_i, L_i) with ord^{L_i}(P_i) <= L_i(w), all
    representing the same element.  The reduction starts from P_1, or from
    ``start`` when given (then every form is reduced in turn).  Returns
    (P, ReductionTrace).
    """
    w = _as_weight(w)
    if not certs:
        raise ValueError("at least one certificate is required")
    forms = [L for _, L in certs]
    if {L.primitive() for L in forms} != set(cell.generators()):
        raise ValueError("certificates must be given for exactly the generators of the cell")
    for P_i, L_i in certs:
        _require_d(P_i)
        if l_order(P_i, L_i) > w.value(L_i):
            raise ValueError(f"certificate for {L_i} is not below {w.value(L_i)}")
    base = certs[0][0] if start is None else start
    _require_d(base)
    for P_i, _ in certs:
        if P_i is not base:
            _check_cert(base, P_i, pres)
    trace = ReductionTrace(forms, base)
    P = base
    for i in range(0 if start is not None else 1, len(certs)):
        target = w.value(forms[i])
        while l_order(P, forms[i]) > target:
            try:
                P, step = reduce_step(P, forms, i, pres, cell, certs[i][0], budget, check_cert=False)
            except BudgetExceeded as exc:
                trace.final = P
                raise BudgetExceeded(str(exc), partial=trace) from None
            trace.steps.append(step)
    trace.final = P
    if not sigma_vw_membership(P, cell, w):
        raise InvariantViolation("witness is not in the cone filtration")
    return P, trace


# ---------------------------------------------------------------------------
# comparison constants


def kappa_of_basis(ops: Sequence[DiffOp], upper: VForm, lower: VForm | None = None) -> int:
    """max_j ord^{lower}(Q_j) - ord^{lower}(sigma^{upper}(Q_j)); lower defaults to V_1."""
    if not ops:
        return 0
    lower = lower or unit_vform(upper.p, 0)
    return max(int(l_order(Q, lower) - l_order(l_symbol(Q, upper), lower)) for Q in ops)


def _maximal_generators(cell: FanCell) -> tuple:
    if cell.dim != 2:
        raise ValueError("kappa is defined on cells of maximal dimension")
    L1, L2 = cell.generators()
    return L1, L2


def kappa_sigma(cell: FanCell) -> int:
    """kappa^1 of a maximal cell: the V_1-excess of the basis over its L_2-symbols."""
    L1, L2 = _maximal_generators(cell)
    return kappa_of_basis(cell.basis.operators(), L2, unit_vform(2, 0))


def kappa2_sigma(cell: FanCell) -> int:
    """The mirror constant: V_2-excess over the L_1-symbols."""
    L1, L2 = _maximal_generators(cell)
    return kappa_of_basis(cell.basis.operators(), L1, unit_vform(2, 1))


def kappa_global(fan: VGroebnerFan) -> int:
    if fan.p == 1:
        return 0
    return max((kappa_sigma(c) for c in fan.maximal_cells()), default=0)


def kappa2_global(fan: VGroebnerFan) -> int:
    if fan.p == 1:
        return 0
    return max((kappa2_sigma(c) for c in fan.maximal_cells()), default=0)


# ---------------------------------------------------------------------------
# V_1-controlled reduction and the normalisation over the whole fan


def _exp_sum(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _v1_control_checks(split: _Split, basis: MarkedBasis, L2: VForm, order: Order, kappa: int, w1: int) -> dict:
    V1 = unit_vform(2, 0)
    ops, marks = basis.operators(), basis.marks()
    W = split.W
    ordW = l_order(W, V1)
    symW = l_order(l_symbol(W, L2), V1)
    claims = {"ord_V1_W": int(ordW), "ord_V1_symbol_W": int(symW)}
    if ordW > w1 + kappa:
        raise InvariantViolation(f"subtracted element exceeds w_1 + kappa in V_1-order: {ordW} > {w1 + kappa}")
    if ordW - symW > kappa:
        raise InvariantViolation(f"V_1-excess of the subtracted element over its symbol: {ordW} - {symW} > {kappa}")
    sym_q = {j: l_symbol(split.quotients[j], L2) for j in split.J}
    lead_q = {j: leading_exponent(sym_q[j], order) for j in split.J}
    key = order.key
    j1 = max(split.J, key=lambda j: key(_exp_sum(lead_q[j], marks[j])))
    if _exp_sum(lead_q[j1], marks[j1]) != leading_exponent(W, order):
        raise InvariantViolation("leading exponent of W is not attained by a single quotient term")
    j2 = max(split.J, key=lambda j: (l_order(sym_q[j] * ops[j], V1), -j))
    sig = W.sig
    m1 = DiffOp.monomial(sig, lead_q[j1])
    m2 = DiffOp.monomial(sig, lead_q[j2])
    c_left = l_order(m2 * l_symbol(ops[j2], L2), V1)
    c_right = l_order(m1 * l_symbol(ops[j1], L2), V1)
    if c_left > c_right:
        raise InvariantViolation(f"quotient comparison fails: {c_left} > {c_right}")
    claims.update({"j1": j1, "j2": j2, "c_left": int(c_left), "c_right": int(c_right)})
    return claims


def controlled_reduce(
    P: DiffOp,
    cert2: DiffOp,
    cell: FanCell,
    w,
    pres: IdealPresentation,
    budget: int = DEFAULT_BUDGET,
) -> tuple:
    """Bring P below L_2(w) keeping ord^{L_1} <= L_1(w) and bounding the V_1-order.

    (L_1, L_2) are the generators of the maximal cell, by increasing slope.
    ``cert2`` represents the same element with ord^{L_2} <= L_2(w).  Returns
    (P_sigma, ReductionTrace); every step checks the V_1 bound on the subtracted
    element W, its excess over sigma^{L_2}(W), and the quotient comparison behind it.
    """
    _require_d(P)
    w = _as_weight(w)
    L1, L2 = _maximal_generators(cell)
    V1 = unit_vform(2, 0)
    if l_order(P, L1) > w.value(L1):
        raise ValueError(f"operator is not below {L1}(w) = {w.value(L1)}")
    if l_order(cert2, L2) > w.value(L2):
        raise ValueError(f"certificate is not below {L2}(w) = {w.value(L2)}")
    _check_cert(P, cert2, pres)
    kappa = kappa_sigma(cell)
    forms = [L1, L2]
    trace = ReductionTrace(forms, P)
    start_v1 = l_order(P, V1)
    order = V1LimitOrder(L2)
    cur = P
    while l_order(cur, L2) > w.value(L2):
        if l_order(l_symbol(cur, L2), V1) > w[0]:
            raise InvariantViolation("symbol of the operator exceeds w_1 in V_1-order")
        try:
            split = _symbol_split(cur, cert2, cell.basis, L2, order, budget)
        except BudgetExceeded as exc:
            trace.final = cur
            raise BudgetExceeded(str(exc), partial=trace) from None
        claims = _v1_control_checks(split, cell.basis, L2, order, kappa, w[0])
        nxt = dehomogenize(split.H - split.W)
        Wd = dehomogenize(split.W)
        before, after = order_profile(cur, forms), order_profile(nxt, forms)
        if not after[1] < before[1] or after[0] > before[0]:
            raise InvariantViolation(f"order profile did not improve: {before} -> {after}")
        if l_order(nxt, V1) > max(l_order(cur, V1), w[0] + kappa):
            raise InvariantViolation("V_1-order escaped its bound")
        pres.certify(Wd, "subtracted element")
        trace.steps.append(TraceStep(L2, Wd, before, after, claims))
        cur = nxt
    trace.final = cur
    if not sigma_vw_membership(cur, cell, w):
        raise InvariantViolation("result is not in the cone filtration")
    if l_order(cur, V1) > max(start_v1, w[0] + kappa):
        raise InvariantViolation("V_1 bound fails for the result")
    return cur, trace


def normalize_over_fan(certs: dict, w, pres: IdealPresentation, budget: int = DEFAULT_BUDGET) -> tuple:
    """A representative with ord^{V_1} <= w_1 + kappa^1 and ord^{V_2} <= w_2.

    ``certs`` maps every skeleton form L to a representative of the same
    element with ord^L <= L(w).  Cells are visited by increasing slope.
    Returns (T, list of ReductionTrace).
    """
    fan = pres.fan
    if fan is None or fan.p != 2:
        raise ValueError("normalisation needs a p = 2 fan")
    w = _as_weight(w)
    certs = {L.primitive(): P for L, P in certs.items()}
    missing = [L for L in fan.skeleton if L not in certs]
    if missing:
        raise ValueError(f"missing certificate for {missing[0]}")
    for L in fan.skeleton:
        if l_order(certs[L], L) > w.value(L):
            raise ValueError(f"certificate for {L} is not below {w.value(L)}")
    kappa = kappa_global(fan)
    sk = fan.skeleton
    T = certs[sk[0]]
    traces = []
    for i in range(1, len(sk)):
        cell = fan.cell_between(sk[i - 1], sk[i])
        try:
            T, tr = controlled_reduce(T, certs[sk[i]], cell, w, pres, budget)
        except BudgetExceeded as exc:
            raise BudgetExceeded(f"cell {i}: {exc}", partial=exc.partial) from None
        except InvariantViolation as exc:
            raise InvariantViolation(f"cell {i}: {exc}") from None
        except ValueError as exc:
            raise ValueError(f"cell {i}: {exc}") from None
        traces.append(tr)
        if l_order(T, unit_vform(2, 0)) > w[0] + kappa:
            raise InvariantViolation(f"cell {i}: V_1-order above w_1 + kappa")
    if l_order(T, unit_vform(2, 1)) > w[1]:
        raise InvariantViolation("final representative is not below w_2")
    return T, traces


def in_ideal(P: DiffOp, pres: IdealPresentation) -> bool:
    return pres.contains(P)
