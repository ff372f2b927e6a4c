"""One reduction step for f = x (n = p = 1).

The operator x1*dt1 has V-order 1, but modulo the annihilator ideal it
equals t1*dt1 + 1, which has V-order 0.  We ask the brute-force oracle for
a lower representative, then let a single reduction step reach it.
"""

from dfan.malgrange import build_presentation
from dfan.oracle import vfilt_membership_bf
from dfan.orders import VForm
from dfan.parse import parse_operator, parse_polynomial
from dfan.vfilt import reduce_step
from dfan.weyl import RingSignature, l_order

sig = RingSignature(1, 1)
pres = build_presentation([parse_polynomial("x1", sig)])
V = VForm((1,))
print("generators:", ", ".join(map(str, pres.generators)))
print("basis of h(I):", ", ".join(map(str, pres.saturated.operators())))

P = parse_operator("x1*dt1", sig)
print(f"\nP = {P}, ord^V = {l_order(P, V)}")

# x1*dt1 = dt1*x1 and dt1*(x1 - t1) lies in I, so P = dt1*t1 = t1*dt1 + 1 mod I
hand = parse_operator("t1*dt1 + 1", sig, in_d=True)
print(f"hand certificate {hand}: same class = {pres.same_class(P, hand)}")

ans = vfilt_membership_bf(P, V, 0, pres.generators)
print(f"oracle at bound {ans.bound}: {ans.status}, witness {ans.witness} (ord^V = {ans.best_order})")

cell = pres.fan.cells[0]
Pn, step = reduce_step(P, [V], 0, pres, cell, hand)
print(f"\none step: {P}  ->  {Pn}")
print(f"orders {step.before} -> {step.after}; subtracted {step.subtracted} (in I: {pres.contains(step.subtracted)})")
