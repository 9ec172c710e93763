#!/usr/bin/env python3
"""Propositional Hoare logic over a relational state space.

Programs are while-programs whose primitive actions denote relations;
tests denote state sets.  {p} c {q} holds when every run of c from p
lands in q, and the proof-tree validator checks the usual rules node by
node, so an accepted tree is a sound argument, not a re-run of the
checker.
"""

from kadlib.hoare import (
    Cond,
    HoareTriple,
    Prim,
    ProofTree,
    Seq,
    TNot,
    TStates,
    TTrue,
    While,
    check_triple,
    denote,
    validate_proof,
    wlp,
)
from kadlib.models import Relation, rel_model

D = rel_model(3)
env = {
    "step": Relation.from_pairs(3, [(1, 2), (2, 3)]),
    "reset": Relation.from_pairs(3, [(1, 1), (2, 1), (3, 1)]),
}

atEnd = TStates((3,))

# run the loop denotationally: it relates every start to the exit state
loop = While(TNot(atEnd), Prim("step"))
print("while not atEnd do step od  =", denote(loop, env, D))

good = HoareTriple(TTrue(), loop, atEnd)
v = check_triple(good, env, D)
print("{true} while not atEnd do step od {atEnd}:", "holds" if v.holds else v.note)

# one step is not enough; the checker exhibits the escaping state
bad = HoareTriple(TTrue(), Prim("step"), atEnd)
v = check_triple(bad, env, D)
print("{true} step {atEnd}:", "holds" if v.holds else "FAILS, " + v.note)

# the same fact as a proof: the loop rule needs an invariant (here:
# true), whose body premise is discharged as an axiom
invariant = TTrue()
body_premise = ProofTree(
    "axiom", HoareTriple(TNot(atEnd), Prim("step"), invariant)
)
proof = ProofTree("while", HoareTriple(invariant, loop, atEnd), (body_premise,))
verdict = validate_proof(proof, env, D)
print("loop proof:", "valid" if verdict.holds else verdict.note)

# a deliberately broken proof: wrong intermediate test in a composition
two = Seq(Prim("step"), Prim("step"))
broken = ProofTree(
    "composition",
    HoareTriple(TStates((1,)), two, atEnd),
    (
        ProofTree("axiom", HoareTriple(TStates((1,)), Prim("step"), TStates((3,)))),
        ProofTree("axiom", HoareTriple(TStates((2,)), Prim("step"), atEnd)),
    ),
)
verdict = validate_proof(broken, env, D)
print("broken proof:", "valid" if verdict.holds else verdict.note)

# wlp(c, q) is the widest safe precondition: its adjunction with image
# makes triple checking a single comparison
c = Cond(atEnd, Prim("reset"), Prim("step"))
w = wlp(D, denote(c, env, D), D.test_from_states([1, 3]))
print("wlp(if atEnd then reset else step fi, {1,3}) =", D.test_name(w))
