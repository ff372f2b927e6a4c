"""The V-fan of f = (x, x) and a normalisation across its wall.

Both t-variables see the same function, so t1 - t2 lies in the ideal.
Which of t1, t2 leads depends on the slope l2/l1 of the form, and that
flips at slope 1: the fan has two sectors and a ray between them.
"""

from dfan.malgrange import build_presentation
from dfan.oracle import min_order_bf
from dfan.orders import VForm
from dfan.parse import parse_operator, parse_polynomial
from dfan.vfilt import kappa2_global, kappa_global, kappa_sigma, normalize_over_fan
from dfan.weyl import RingSignature, l_order

sig = RingSignature(1, 2)
pres = build_presentation([parse_polynomial("x1", sig)] * 2)
fan = pres.fan

print("cells:")
for cell in fan.cells:
    extra = f", kappa {kappa_sigma(cell)}" if cell.dim == 2 else ""
    print(f"  {str(cell.interval):10} dim {cell.dim}{extra}")
    for Q, _ in cell.basis.elements:
        print(f"      {Q}")
print("skeleton:", ", ".join(map(str, fan.skeleton)))
print(f"kappa1 = {kappa_global(fan)}, kappa2 = {kappa2_global(fan)}")

# x1*dt1 sits in V-order (1, 0) as written; each skeleton form has a better representative
P = parse_operator("x1*dt1", sig)
w = (0, 0)
certs = {}
for L in fan.skeleton:
    best, rep, _ = min_order_bf(P, L, pres.generators)
    certs[L] = rep
    print(f"  {L}: best order {best} via {rep}")

T, traces = normalize_over_fan(certs, w, pres)
print(f"\nnormalised: {T}")
print(f"  ord^V1 = {l_order(T, VForm((1, 0)))} (bound {w[0] + kappa_global(fan)}), ord^V2 = {l_order(T, VForm((0, 1)))}")
for tr in traces:
    for step in tr.steps:
        print(f"  step on {step.form}: {step.before} -> {step.after}, claims {step.claims}")
print("same class as P:", pres.same_class(T, P))
