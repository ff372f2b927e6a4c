"""Command-line interface: ``dfan <command> <input file> ...``.

Exit codes: 0 success, 1 rejected precondition, 2 parse error,
3 budget exhausted, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import oracle as orc
from .division import DEFAULT_BUDGET, divide
from .errors import BudgetExceeded, InvariantViolation, ParseError
from .malgrange import annihilator_generators
from .orders import SaturationOrder, VForm, form_from_slope, parse_form, parse_order
from .parse import parse_input, parse_operator
from .stdbasis import DEFAULT_PAIR_BUDGET, standard_basis
from .vfan import INF, basis_at_slope
from .vfilt import (
    IdealPresentation,
    WeightVector,
    kappa2_global,
    kappa2_sigma,
    kappa_global,
    kappa_sigma,
    cone_filtration_witness,
    normalize_over_fan,
)
from .weyl import NEG_INF, DiffOp, homogenize, l_order

SCHEMA = 1


# ---------------------------------------------------------------------------
# encoding helpers


def _num(v):
    if v == NEG_INF:
        return None
    if v == INF:
        return "inf"
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else str(v)


def _form(L: VForm) -> list:
    return [_num(v) for v in L.l]


def _basis_json(basis) -> list:
    return [{"op": str(Q), "mark": list(e)} for Q, e in basis.elements]


def _cell_json(cell) -> dict:
    return {
        "interval": cell.interval.to_json(),
        "dim": cell.dim,
        "witness": _form(cell.witness),
        "basis": _basis_json(cell.basis),
    }


def _parse_weight(text: str) -> WeightVector:
    try:
        return WeightVector(tuple(int(s) for s in text.split(",")))
    except ValueError:
        raise ParseError(f"malformed weight vector {text!r}", None, 1) from None


# ---------------------------------------------------------------------------
# session


class Session:
    def __init__(self, args):
        self.args = args
        try:
            with open(args.input) as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {args.input}: {exc.strerror}", None, None) from None
        self.spec = parse_input(text)
        self.sig = self.spec.sig
        if self.spec.mode == "malgrange":
            self.generators = annihilator_generators(self.spec.polynomials)
        else:
            self.generators = list(self.spec.generators)
        self._pres = None

    def presentation(self, with_fan: bool = True) -> IdealPresentation:
        if with_fan and self.sig.p > 2:
            raise ParseError(f"fan commands need p <= 2, got p={self.sig.p}", 1, 1)
        if self._pres is None or (with_fan and self._pres.fan is None):
            self._pres = IdealPresentation.from_generators(self.generators, self.args.pair_budget, with_fan=with_fan)
        return self._pres

    def operator(self, text: str) -> DiffOp:
        return parse_operator(text, self.sig, in_d=True)

    def certs(self, path: str) -> dict:
        out = {}
        with open(path) as fh:
            for no, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ParseError("expected 'V:a,b = <operator>'", no, 1)
                lhs, rhs = line.split("=", 1)
                try:
                    L = parse_form(lhs)
                except ValueError as exc:
                    raise ParseError(str(exc), no, 1) from None
                try:
                    out[L.primitive()] = parse_operator(rhs, self.sig, in_d=True, line=no)
                except ParseError as exc:
                    raise ParseError(exc.msg, no, (exc.col or 1) + len(lhs) + 1) from None
        return out

    def oracle_certs(self, P: DiffOp, forms, w: WeightVector) -> dict:
        ans = orc.vbar_membership_bf(P, forms, w.w, self.generators, self.args.bound)
        if not ans.yes:
            raise ValueError(f"oracle found no certificates at bound {self.args.bound}")
        return dict(ans.witnesses)


# ---------------------------------------------------------------------------
# commands


def cmd_gb(s: Session) -> tuple:
    pres = s.presentation(with_fan=False)
    text = s.args.order
    order = SaturationOrder() if text == "sat" else parse_order(text)
    basis = pres.saturated if text == "sat" else standard_basis(pres.saturated.operators(), order, s.args.pair_budget)
    data = {"order": text, "basis": _basis_json(basis)}
    lines = [f"minimal reduced standard basis of h(I) for {order.describe()}:"]
    lines += [f"  {Q}" for Q in basis.operators()]
    return data, lines


def _check_fan(s: Session, fan) -> dict:
    rng = random.Random(s.args.seed)
    sat = s.presentation().saturated.operators()
    samples = sorted({Fraction(rng.randint(0, 40), rng.randint(1, 12)) for _ in range(12)})
    bad = []
    for lam in samples:
        hits = [c for c in fan.cells if c.interval.contains(lam)]
        if len(hits) != 1 or not basis_at_slope(sat, lam, s.args.pair_budget).same_basis(hits[0].basis):
            bad.append(str(lam))
    if bad:
        raise InvariantViolation(f"fan check failed at slopes {', '.join(bad)}")
    return {"sampled_slopes": [str(v) for v in samples], "ok": True}


def cmd_fan(s: Session) -> tuple:
    fan = s.presentation().fan
    data = {"cells": [_cell_json(c) for c in fan.cells], "skeleton": [_form(L) for L in fan.skeleton]}
    if s.args.check and fan.p == 2:
        data["check"] = _check_fan(s, fan)
    lines = []
    for c in fan.cells:
        lines.append(f"cell {c.interval}  dim {c.dim}  witness {c.witness}")
        lines += [f"    {Q}" for Q in c.basis.operators()]
    lines.append("skeleton: " + " ".join(str(L) for L in fan.skeleton))
    if "check" in data:
        lines.append(f"check ok at {len(data['check']['sampled_slopes'])} sampled slopes")
    return data, lines


def cmd_kappa(s: Session) -> tuple:
    fan = s.presentation().fan
    k1, k2 = kappa_global(fan), kappa2_global(fan)
    per = []
    if fan.p == 2:
        per = [
            {"interval": c.interval.to_json(), "kappa": kappa_sigma(c), "kappa2": kappa2_sigma(c)}
            for c in fan.maximal_cells()
        ]
    data = {"kappa1": k1, "kappa2": k2, "per_cell": per}
    lines = [f"kappa1 = {k1}", f"kappa2 = {k2}"]
    lines += [f"  cell {c['interval']['lo']}..{c['interval']['hi']}: {c['kappa']}" for c in per]
    return data, lines


def cmd_divide(s: Session) -> tuple:
    pres = s.presentation(with_fan=False)
    order = parse_order(s.args.order)
    basis = standard_basis(pres.saturated.operators(), order, s.args.pair_budget)
    P = parse_operator(s.args.operator, s.sig)
    H = P if P.has_z() else homogenize(P)
    res = divide(H, basis.operators(), order, s.args.division_budget, marks=basis.marks())
    if res.truncated:
        raise BudgetExceeded(f"division truncated after {res.steps} steps", partial=res)
    data = {
        "order": s.args.order,
        "dividend": str(H),
        "divisors": [str(Q) for Q in basis.operators()],
        "quotients": [str(q) for q in res.quotients],
        "remainder": str(res.remainder),
        "steps": res.steps,
    }
    lines = [f"dividend  {H}"] + [f"q{j + 1}  {q}" for j, q in enumerate(res.quotients)]
    lines.append(f"remainder {res.remainder}")
    return data, lines


def _find_cell(fan, forms):
    want = {L.primitive() for L in forms}
    for c in fan.cells:
        if set(c.generators()) == want:
            return c
    raise ValueError("no cell is generated by " + ", ".join(str(L) for L in sorted(want, key=str)))


def cmd_reduce(s: Session) -> tuple:
    pres = s.presentation()
    w = _parse_weight(s.args.w)
    P = s.operator(s.args.operator)
    if s.args.certs:
        certs = s.certs(s.args.certs)
        cell = _find_cell(pres.fan, certs)
    else:
        cell = pres.fan.cell_of(form_from_slope(Fraction(s.args.slope)) if s.args.slope != "inf" else VForm((0, 1)))
        certs = s.oracle_certs(P, cell.generators(), w)
    ordered = [(certs[L], L) for L in cell.generators()]
    T, trace = cone_filtration_witness(ordered, cell, w, pres, s.args.division_budget, start=P)
    data = {"w": list(w.w), "cell": cell.interval.to_json(), "result": str(T), "trace": trace.to_json()}
    lines = [f"cell {cell.interval}", f"start   {P}"]
    lines += [f"  - {st.subtracted}   [{st.form}]" for st in trace.steps]
    lines.append(f"result  {T}")
    return data, lines


def cmd_normalize(s: Session) -> tuple:
    pres = s.presentation()
    w = _parse_weight(s.args.w)
    P = s.operator(s.args.operator)
    certs = s.certs(s.args.certs) if s.args.certs else s.oracle_certs(P, pres.fan.skeleton, w)
    T, traces = normalize_over_fan(certs, w, pres, s.args.division_budget)
    k1 = kappa_global(pres.fan)
    V1, V2 = VForm((1, 0)), VForm((0, 1))
    data = {
        "w": list(w.w),
        "kappa1": k1,
        "result": str(T),
        "orders": [_num(l_order(T, V1)), _num(l_order(T, V2))],
        "traces": [t.to_json() for t in traces],
    }
    lines = [f"kappa1 = {k1}", f"result {T}", f"ord V1 = {_num(l_order(T, V1))}, ord V2 = {_num(l_order(T, V2))}"]
    return data, lines


def _answer_json(ans) -> dict:
    out = {"status": ans.status, "bound": ans.bound}
    if ans.witness is not None:
        out["witness"] = str(ans.witness)
    if ans.certificate:
        out["certificate"] = [{"coeff": _num(c), "multiplier": list(e), "generator": j} for c, e, j in ans.certificate]
    if ans.best_order is not None:
        out["best_order"] = _num(ans.best_order)
    if ans.witnesses:
        out["witnesses"] = {str(L): str(P) for L, P in ans.witnesses.items()}
    return out


def cmd_oracle(s: Session) -> tuple:
    a = s.args
    if a.query == "member":
        P = parse_operator(a.operator, s.sig)
        gens = s.generators
        if P.has_z():
            gens = s.presentation(with_fan=False).saturated.operators()
        ans = orc.ideal_membership_bf(P, gens, a.bound)
    elif a.query == "vfilt":
        if a.form is None or a.k is None:
            raise ValueError("oracle vfilt needs --form and --k")
        ans = orc.vfilt_membership_bf(s.operator(a.operator), parse_form(a.form), Fraction(a.k), s.generators, a.bound)
    else:
        if a.w is None:
            raise ValueError("oracle vbar needs --w")
        fan = s.presentation().fan
        ans = orc.vbar_membership_bf(s.operator(a.operator), fan.skeleton, _parse_weight(a.w).w, s.generators, a.bound)
    data = _answer_json(ans)
    lines = [f"{ans.status} (bound {ans.bound})"]
    if ans.witness is not None:
        lines.append(f"witness {ans.witness}")
    for L, P in ans.witnesses.items():
        lines.append(f"{L}: {P}")
    return data, lines


COMMANDS = {
    "gb": cmd_gb,
    "fan": cmd_fan,
    "kappa": cmd_kappa,
    "divide": cmd_divide,
    "reduce": cmd_reduce,
    "normalize": cmd_normalize,
    "oracle": cmd_oracle,
}


# ---------------------------------------------------------------------------
# argument parsing


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--pair-budget", type=_positive, default=DEFAULT_PAIR_BUDGET)
    common.add_argument("--division-budget", type=_positive, default=DEFAULT_BUDGET)
    common.add_argument("--bound", type=_positive, default=orc.DEFAULT_BOUND, help="oracle degree bound")

    ap = argparse.ArgumentParser(prog="dfan", description="Standard bases, V-Groebner fans and V-filtrations.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gb", parents=[common], help="minimal reduced standard basis of h(I)")
    p.add_argument("input")
    p.add_argument("--order", default="V:1,0", help="'V:a,b', 'V:a,b|c,d' or 'sat'")

    p = sub.add_parser("fan", parents=[common], help="V-Groebner fan (p <= 2)")
    p.add_argument("input")
    p.add_argument("--check", action="store_true", help="verify coverage on seeded random slopes")

    p = sub.add_parser("kappa", parents=[common], help="comparison constants")
    p.add_argument("input")

    p = sub.add_parser("divide", parents=[common], help="divide an operator by the basis for an order")
    p.add_argument("input")
    p.add_argument("operator")
    p.add_argument("--order", default="V:1,0")

    for name, helptext in (("reduce", "one representative for all forms of a cell"),
                           ("normalize", "V_1-controlled normalisation over the fan")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("input")
        p.add_argument("operator")
        p.add_argument("--w", required=True, help="weight 'w1,w2'")
        p.add_argument("--certs", help="file of 'V:a,b = <operator>' lines (default: ask the oracle)")
        if name == "reduce":
            p.add_argument("--slope", default="1", help="cell containing this slope when --certs is absent")

    p = sub.add_parser("oracle", parents=[common], help="brute-force membership")
    p.add_argument("query", choices=["member", "vfilt", "vbar"])
    p.add_argument("input")
    p.add_argument("operator")
    p.add_argument("--form")
    p.add_argument("--k")
    p.add_argument("--w")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        session = Session(args)
        data, lines = COMMANDS[args.command](session)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.json:
        payload = {"schema": SCHEMA, "command": args.command, "seed": args.seed, **data}
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print("\n".join(lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
