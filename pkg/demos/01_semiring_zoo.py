#!/usr/bin/env python3
"""Tour of the bundled finite semirings and the law checker.

Every model in the zoo is a table-backed Kleene algebra on a handful of
elements.  The checker enumerates the laws exhaustively, so a PASS here
is a proof over the whole carrier, not a sample.
"""

from kadlib.algebra import all_hold, check_isemiring, check_kleene, failures, format_witness
from kadlib.models import conway_model, conway_names

for name in conway_names():
    S = conway_model(name)
    ok = all_hold(check_isemiring(S)) and all_hold(check_kleene(S))
    carrier = ", ".join(S.carrier)
    print(f"{name:5s}  [{carrier:15s}]  laws: {'all hold' if ok else 'FAIL'}")

# the addition table of the smallest model is Boolean disjunction
S = conway_model("A2")
print()
print(f"{S.name}: zero={S.element_name(S.zero)} one={S.element_name(S.one)}")
for x in range(S.n):
    row = " ".join(S.element_name(int(S.add[x, y])) for y in range(S.n))
    print(f"  {S.element_name(x)} + _ : {row}")

# star is the least fixpoint of x* = 1 + x x*; on A3_2 the element a
# squares to zero, so a* collapses to 1
S = conway_model("A3_2")
a = S.index("a")
print()
print(f"{S.name}: a·a = {S.element_name(int(S.mul[a, a]))},  a* = {S.element_name(int(S.star[a]))}")

# break a table on purpose and watch the checker name the witness
import numpy as np

bad_mul = np.array(S.mul)
bad_mul[a, a] = S.one
from kadlib.algebra import FiniteSemiring

broken = FiniteSemiring(list(S.carrier), S.add, bad_mul, S.zero, S.one, star=S.star)
print()
print("after corrupting a·a:")
for r in failures(check_isemiring(broken)) + failures(check_kleene(broken)):
    print(f"  {r.name} fails at {format_witness(broken, r.witness)}")
