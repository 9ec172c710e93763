#!/usr/bin/env python3
"""Noethericity over relations is graph acyclicity.

An element a is Noetherian when no nonzero test p satisfies p <= a:p,
i.e. no set of states can sustain an infinite run of a inside itself.
Well-foundedness is the mirror image along converse, and the Loebian
property strengthens Noethericity to a progress bound for transitive
steps.
"""

from kadlib.models import Relation, rel_model
from kadlib.termination import termination_report, transitive_closure

D = rel_model(4)

cases = {
    "chain": Relation.from_pairs(4, [(1, 2), (2, 3), (3, 4)]),
    "cycle": Relation.from_pairs(4, [(1, 2), (2, 3), (3, 1)]),
    "self-loop": Relation.from_pairs(4, [(2, 2)]),
    "empty": Relation.empty(4),
}

for label, rel in cases.items():
    rep = termination_report(D, rel)
    print(f"{label:9s} {rep}")

# a Noetherian relation need not be Loebian: the chain is not
# transitive, so a:p can overshoot the one-step frontier.  Its
# transitive closure is, and closure preserves Noethericity both ways.
chain = cases["chain"]
plus = transitive_closure(D, chain)
print()
print(f"chain+ = {plus}")
print(f"chain+ report: {termination_report(D, plus)}")

# witnesses name the stuck set: for the cycle, the whole loop
rep = termination_report(D, cases["cycle"])
print()
print(f"cycle witness: {rep.noetherian.note}")
