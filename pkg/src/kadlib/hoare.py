"""Propositional Hoare logic over models with domain.

Programs are built from named primitive actions with sequencing,
conditionals and while loops; tests come from a small Boolean expression
grammar.  A program denotes a single element: seq is multiplication,
if p then a else b is pa + p'b, while p do a is (pa)* p'.  A triple
{p} prog {q} is valid when the image of p under the denotation stays
inside q.  There is no assignment rule: state change is modeled by
primitive actions bound in the environment.

Proof trees for the encoded rules (composition, conditional, while,
weakening, plus semantically checked axioms) are validated node by node.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Union

from .algebra import LawReport, Verdict

__all__ = [
    "Prim",
    "Seq",
    "Cond",
    "While",
    "TTrue",
    "TFalse",
    "TRef",
    "TAnd",
    "TOr",
    "TNot",
    "TStates",
    "HoareTriple",
    "ProofTree",
    "eval_test",
    "denote",
    "check_triple",
    "validate_proof",
    "wlp",
    "check_hoare_rules",
]


# -- program syntax ---------------------------------------------------------


@dataclass(frozen=True)
class Prim:
    name: str


@dataclass(frozen=True)
class Seq:
    first: "Program"
    second: "Program"


@dataclass(frozen=True)
class Cond:
    test: "TestExpr"
    then: "Program"
    orelse: "Program"


@dataclass(frozen=True)
class While:
    test: "TestExpr"
    body: "Program"


Program = Union[Prim, Seq, Cond, While]


# -- test expressions -------------------------------------------------------


@dataclass(frozen=True)
class TTrue:
    pass


@dataclass(frozen=True)
class TFalse:
    pass


@dataclass(frozen=True)
class TRef:
    name: str


@dataclass(frozen=True)
class TAnd:
    left: "TestExpr"
    right: "TestExpr"


@dataclass(frozen=True)
class TOr:
    left: "TestExpr"
    right: "TestExpr"


@dataclass(frozen=True)
class TNot:
    arg: "TestExpr"


@dataclass(frozen=True)
class TStates:
    states: tuple

    def __init__(self, states):
        object.__setattr__(self, "states", tuple(states))


TestExpr = Union[TTrue, TFalse, TRef, TAnd, TOr, TNot, TStates]

_EXPR_TYPES = (TTrue, TFalse, TRef, TAnd, TOr, TNot, TStates)


def eval_test(expr, D, tenv: Optional[dict] = None):
    """Evaluate a test expression to a test of D; raw test values pass through."""
    if not isinstance(expr, _EXPR_TYPES):
        return expr
    if isinstance(expr, TTrue):
        return D.test_one
    if isinstance(expr, TFalse):
        return D.test_zero
    if isinstance(expr, TRef):
        if not tenv or expr.name not in tenv:
            raise ValueError(f"unresolved test name {expr.name!r}")
        return tenv[expr.name]
    if isinstance(expr, TAnd):
        return D.test_meet(eval_test(expr.left, D, tenv), eval_test(expr.right, D, tenv))
    if isinstance(expr, TOr):
        return D.test_join(eval_test(expr.left, D, tenv), eval_test(expr.right, D, tenv))
    if isinstance(expr, TNot):
        return D.test_compl(eval_test(expr.arg, D, tenv))
    if isinstance(expr, TStates):
        if not hasattr(D, "test_from_states"):
            raise ValueError("state-set literals need a relational model")
        return D.test_from_states(expr.states)
    raise ValueError(f"unknown test expression {expr!r}")


def denote(prog: Program, env: dict, D, tenv: Optional[dict] = None):
    """The element a program stands for."""
    if isinstance(prog, Prim):
        if prog.name in env:
            return env[prog.name]
        if prog.name == "skip":
            return D.el_one
        if prog.name == "abort":
            return D.el_zero
        raise ValueError(f"unresolved primitive action {prog.name!r}")
    if isinstance(prog, Seq):
        return D.el_mul(denote(prog.first, env, D, tenv), denote(prog.second, env, D, tenv))
    if isinstance(prog, Cond):
        p = D.embed(eval_test(prog.test, D, tenv))
        np_ = D.embed(D.test_compl(eval_test(prog.test, D, tenv)))
        a = denote(prog.then, env, D, tenv)
        b = denote(prog.orelse, env, D, tenv)
        return D.el_add(D.el_mul(p, a), D.el_mul(np_, b))
    if isinstance(prog, While):
        p = eval_test(prog.test, D, tenv)
        body = denote(prog.body, env, D, tenv)
        looped = D.el_star(D.el_mul(D.embed(p), body))
        return D.el_mul(looped, D.embed(D.test_compl(p)))
    raise ValueError(f"not a program node: {prog!r}")


# -- triples and proofs -----------------------------------------------------


@dataclass(frozen=True)
class HoareTriple:
    pre: object
    prog: Program
    post: object

    def __str__(self):
        return f"{{{self.pre}}} {self.prog} {{{self.post}}}"


@dataclass(frozen=True)
class ProofTree:
    rule: str
    conclusion: HoareTriple
    premises: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))


def check_triple(t: HoareTriple, env: dict, D, tenv: Optional[dict] = None) -> Verdict:
    """{p} a {q} holds iff the image of p under a lies in q.

    On failure the witness is a reachable state (an atom) outside the
    postcondition.
    """
    pre = eval_test(t.pre, D, tenv)
    post = eval_test(t.post, D, tenv)
    a = denote(t.prog, env, D, tenv)
    forward = D.image(pre, a)
    if D.test_leq(forward, post):
        return Verdict(True)
    bad = D.test_meet(forward, D.test_compl(post))
    atoms = D.atoms_below(bad)
    w = atoms[0] if atoms else bad
    return Verdict(False, witness=w, note=f"reachable state {D.test_name(w)} escapes the postcondition")


_ARITY = {"axiom": 0, "composition": 2, "conditional": 2, "while": 1, "weakening": 1}


def validate_proof(tree: ProofTree, env: dict, D, tenv: Optional[dict] = None) -> Verdict:
    """Check every node's side conditions; axioms are checked semantically.

    The witness of a failing verdict is the path of the offending node
    (root, root.premise[0], ...).
    """
    problem = _validate(tree, env, D, tenv, "root")
    if problem is None:
        return Verdict(True)
    path, msg = problem
    return Verdict(False, witness=path, note=f"{path}: {msg}")


def _validate(node: ProofTree, env, D, tenv, path):
    rule = node.rule
    if rule not in _ARITY:
        return path, f"unknown rule {rule!r}"
    if len(node.premises) != _ARITY[rule]:
        return path, f"{rule} takes {_ARITY[rule]} premises, got {len(node.premises)}"
    t = node.conclusion

    def ev(x):
        return eval_test(x, D, tenv)

    if rule == "axiom":
        v = check_triple(t, env, D, tenv)
        if not v:
            return path, f"axiom triple does not hold: {v.note}"
        return None

    if rule == "composition":
        t1, t2 = node.premises[0].conclusion, node.premises[1].conclusion
        if not isinstance(t.prog, Seq):
            return path, "composition concludes a sequence"
        if t1.prog != t.prog.first or t2.prog != t.prog.second:
            return path, "premise programs do not match the sequence parts"
        if ev(t1.pre) != ev(t.pre):
            return path, "first premise precondition differs from the conclusion's"
        if ev(t2.post) != ev(t.post):
            return path, "second premise postcondition differs from the conclusion's"
        if ev(t1.post) != ev(t2.pre):
            return path, "intermediate tests of the premises do not agree"

    elif rule == "conditional":
        t1, t2 = node.premises[0].conclusion, node.premises[1].conclusion
        if not isinstance(t.prog, Cond):
            return path, "conditional concludes an if-then-else"
        if t1.prog != t.prog.then or t2.prog != t.prog.orelse:
            return path, "premise programs do not match the branches"
        pv, qv, rv = ev(t.prog.test), ev(t.pre), ev(t.post)
        if ev(t1.pre) != D.test_meet(pv, qv):
            return path, "then-premise precondition is not (test and pre)"
        if ev(t2.pre) != D.test_meet(D.test_compl(pv), qv):
            return path, "else-premise precondition is not (not test and pre)"
        if ev(t1.post) != rv or ev(t2.post) != rv:
            return path, "branch postconditions differ from the conclusion's"

    elif rule == "while":
        (t1,) = (node.premises[0].conclusion,)
        if not isinstance(t.prog, While):
            return path, "while rule concludes a loop"
        if t1.prog != t.prog.body:
            return path, "premise program is not the loop body"
        pv, qv = ev(t.prog.test), ev(t.pre)
        if ev(t1.pre) != D.test_meet(pv, qv):
            return path, "premise precondition is not (test and invariant)"
        if ev(t1.post) != qv:
            return path, "premise postcondition is not the invariant"
        if ev(t.post) != D.test_meet(D.test_compl(pv), qv):
            return path, "conclusion postcondition is not (not test and invariant)"

    elif rule == "weakening":
        t1 = node.premises[0].conclusion
        if t1.prog != t.prog:
            return path, "weakening does not change the program"
        if not D.test_leq(ev(t.pre), ev(t1.pre)):
            return path, "conclusion precondition is not below the premise's"
        if not D.test_leq(ev(t1.post), ev(t.post)):
            return path, "premise postcondition is not below the conclusion's"

    for i, child in enumerate(node.premises):
        problem = _validate(child, env, D, tenv, f"{path}.premise[{i}]")
        if problem is not None:
            return problem
    return None


def wlp(D, a, p):
    """Weakest liberal precondition: the largest q with q:a <= p.

    Computed as the complement of the states that can step outside p,
    (a : p')'; relationally, states all of whose a-successors satisfy p.
    """
    return D.test_compl(D.preimage(a, D.test_compl(p)))


# -- the encoded rules as algebraic Horn implications ------------------------


def check_hoare_rules(D, budget: int = 300_000, samples: int = 1000, rng=None) -> list[LawReport]:
    """Each inference rule, read as an implication between triples.

    composition: p:a <= q and q:b <= r imply p:(ab) <= r
    conditional: (pq):a <= r and (p'q):b <= r imply q:(pa + p'b) <= r
    while:       (pq):a <= q implies q:((pa)* p') <= p'q
    weakening:   p1 <= p, p:a <= q, q <= q1 imply p1:a <= q1
    """
    rng = rng or random.Random(0)
    reports = []
    members = D.test_members()
    n_t = len(members)
    n_el = D.size() if callable(getattr(D, "size", None)) else None
    if n_el is None:
        n_el = len(list(D.elements()))
    _els: list = []

    def els():
        if not _els:
            _els.extend(D.elements())
        return _els

    def sample_el():
        if hasattr(D, "sample"):
            return D.sample(rng)
        pool = els()
        return pool[rng.randrange(len(pool))]

    def run(name, kinds, pred, names):
        size = 1
        for k in kinds:
            size *= n_el if k == "e" else n_t
        if size <= budget:
            pools = [els() if k == "e" else members for k in kinds]
            for combo in itertools.product(*pools):
                if not pred(*combo):
                    witness = {
                        nm: (D.el_name(v) if k == "e" else D.test_name(v))
                        for nm, k, v in zip(names, kinds, combo)
                    }
                    reports.append(LawReport(name, False, witness, "exhaustive"))
                    return
            reports.append(LawReport(name, True, None, "exhaustive"))
            return
        for _ in range(samples):
            combo = tuple(sample_el() if k == "e" else members[rng.randrange(n_t)] for k in kinds)
            if not pred(*combo):
                witness = {
                    nm: (D.el_name(v) if k == "e" else D.test_name(v))
                    for nm, k, v in zip(names, kinds, combo)
                }
                reports.append(LawReport(name, False, witness, f"sampled ({samples})"))
                return
        reports.append(LawReport(name, True, None, f"sampled ({samples})"))

    img = D.image
    meet, compl, leq = D.test_meet, D.test_compl, D.test_leq

    run(
        "rule-composition",
        "eettt",
        lambda a, b, p, q, r: not (leq(img(p, a), q) and leq(img(q, b), r))
        or leq(img(p, D.el_mul(a, b)), r),
        ("a", "b", "p", "q", "r"),
    )
    run(
        "rule-conditional",
        "eettt",
        lambda a, b, p, q, r: not (
            leq(img(meet(p, q), a), r) and leq(img(meet(compl(p), q), b), r)
        )
        or leq(
            img(
                q,
                D.el_add(
                    D.el_mul(D.embed(p), a),
                    D.el_mul(D.embed(compl(p)), b),
                ),
            ),
            r,
        ),
        ("a", "b", "p", "q", "r"),
    )
    run(
        "rule-while",
        "ett",
        lambda a, p, q: not leq(img(meet(p, q), a), q)
        or leq(
            img(q, D.el_mul(D.el_star(D.el_mul(D.embed(p), a)), D.embed(compl(p)))),
            meet(compl(p), q),
        ),
        ("a", "p", "q"),
    )
    run(
        "rule-weakening",
        "etttt",
        lambda a, p1, p, q, q1: not (leq(p1, p) and leq(img(p, a), q) and leq(q, q1))
        or leq(img(p1, a), q1),
        ("a", "p1", "p", "q", "q1"),
    )
    return reports
