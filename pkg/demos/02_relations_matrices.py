#!/usr/bin/env python3
"""Binary relations as a semiring, and matrices over an arbitrary base.

Relation composition is the semiring product, union the sum, and star is
reflexive-transitive closure.  The same star recursion runs unchanged over
matrices with entries from any of the finite models.
"""

from kadlib.algebra import all_hold, check_isemiring, check_kleene
from kadlib.models import Relation, conway_model, matrix_star, rel_model, rel_semiring

n = 4
edges = Relation.from_pairs(n, [(1, 2), (2, 3), (3, 4)])
loop = Relation.from_pairs(n, [(4, 2)])

print("edges          =", edges)
print("edges ; edges  =", edges.compose(edges))
print("edges + loop   =", edges.union(loop))
print("(e + l)*       =", edges.union(loop).star())
print("transpose      =", edges.transpose())

# the 2-state relation semiring has 16 elements; the checker can walk
# all of them
S = rel_semiring(2)
print()
print(f"{S.name}: {S.n} elements,",
      "laws hold" if all_hold(check_isemiring(S)) and all_hold(check_kleene(S)) else "laws FAIL")

# tests sit below the identity; the model handle names them by state set
D = rel_model(3)
p = D.test_from_states([1, 3])
print(f"test {D.test_name(p)} embeds as {D.embed(p)}")
print(f"dom of {edges} is {rel_model(4).test_name(rel_model(4).dom(edges))}")

# matrix star over the Boolean base: entrywise this is Warshall closure.
# split picks the block cut used by the recursion; any choice agrees.
B = conway_model("A2")
m = [
    [0, 1, 0],
    [0, 0, 1],
    [0, 0, 0],
]
closed = matrix_star(B, m)
print()
print("matrix star over the Boolean base:")
for row in closed:
    print("  ", list(row))
assert matrix_star(B, m, split=1) == matrix_star(B, m, split=2)

# a base with a nontrivial star: on A3_2, a* = 1, and that propagates
# into the diagonal blocks
A = conway_model("A3_2")
a, one = A.index("a"), A.one
m2 = [[a, one], [A.zero, a]]
print("matrix star over A3_2, names:")
for row in matrix_star(A, m2):
    print("  ", [A.element_name(x) for x in row])
