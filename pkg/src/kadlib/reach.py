"""Reachability as iterated preimage.

Both algorithms compute the least test x with p + a:x <= x, which in a
Kleene model equals a-star applied backwards to p.  The naive version
re-evaluates the preimage of everything collected so far on every sweep;
the efficient version keeps a worklist of unexpanded atoms so every state
is expanded at most once.  Costs are reported as preimage evaluations at
atom granularity, which is what makes the difference observable.

Works over any object exposing the domain surface: table-backed
DomainStructure or a direct relational model.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional

from .algebra import LawReport

__all__ = ["ReachResult", "reach_naive", "reach_efficient", "check_star_preimage_laws"]


@dataclass(frozen=True)
class ReachResult:
    result: object
    iterations: int
    preimage_evals: int
    trace: tuple


def reach_naive(D, a, p) -> ReachResult:
    """Ascending fixpoint iteration of x -> p + a:x, one full sweep at a time.

    Each sweep decomposes the current test into atoms and evaluates one
    preimage per atom, so the cost of a sweep grows with what has been
    collected already.
    """
    x = p
    evals = 0
    iterations = 0
    trace = [x]
    while True:
        iterations += 1
        y = x
        for atom in D.atoms_below(x):
            y = D.test_join(y, D.preimage(a, atom))
            evals += 1
        if y == x:
            break
        x = y
        trace.append(x)
    return ReachResult(x, iterations, evals, tuple(trace))


def reach_efficient(D, a, p, order: str = "asc", rng=None) -> ReachResult:
    """Worklist reachability: expand each newly discovered atom exactly once.

    Implements the decomposition a*:p = p + (a p')*:(a:p): the iteration
    proceeds only from states not yet known to reach p.  The result does not
    depend on the expansion order; `order` (asc/desc/random) exists so tests
    can demonstrate that.  Requires a local (dloc) model, where the
    decomposition is valid.
    """
    if not D.flags.get("dloc", False):
        raise ValueError("reach_efficient requires locality (dloc); use reach_naive")
    if order not in ("asc", "desc", "random"):
        raise ValueError("order must be asc, desc or random")
    if order == "random":
        rng = rng or random.Random(0)

    reached = p
    evals = 0
    expansions = 0
    trace = [p]
    frontier: list = []

    def push_new(pre):
        for b in D.atoms_below(pre):
            if not D.test_leq(b, reached):
                frontier.append(b)

    for atom in D.atoms_below(p):
        evals += 1
        push_new(D.preimage(a, atom))

    while frontier:
        if order == "asc":
            i = min(range(len(frontier)), key=lambda k: frontier[k])
        elif order == "desc":
            i = max(range(len(frontier)), key=lambda k: frontier[k])
        else:
            i = rng.randrange(len(frontier))
        atom = frontier.pop(i)
        if D.test_leq(atom, reached):
            continue
        reached = D.test_join(reached, atom)
        expansions += 1
        evals += 1
        trace.append(reached)
        push_new(D.preimage(a, atom))

    return ReachResult(reached, expansions, evals, tuple(trace))


# ---------------------------------------------------------------------------
# the star-preimage law suite


def _space(*sizes) -> int:
    total = 1
    for s in sizes:
        total *= s
    return total


def check_star_preimage_laws(D, samples: int = 1000, rng=None, budget: int = 200_000) -> list[LawReport]:
    """Star/domain interaction laws, exhaustive if the space fits the budget.

    Covers: star of a domain element is the unit, domain of a starred
    element is the full test, invariants transfer to the star, the
    star-induction form for preimages, the frontier decompositions used by
    reach_efficient, and the preimage analogue of star induction.  The laws
    past the invariant rule are stated for local models and are skipped
    without locality.
    """
    rng = rng or random.Random(0)
    reports = []

    n_el = D.size() if callable(getattr(D, "size", None)) else None
    if n_el is None:
        n_el = len(list(D.elements()))
    members = D.test_members()
    n_t = len(members)
    _els: list = []

    def elements_list():
        if not _els:
            _els.extend(D.elements())
        return _els

    def sample_el():
        if hasattr(D, "sample"):
            return D.sample(rng)
        els = elements_list()
        return els[rng.randrange(len(els))]

    def run(name, kinds, pred, names):
        """kinds: 'e' element, 't' test; pred returns True/False."""
        size = _space(*[n_el if k == "e" else n_t for k in kinds])
        if size <= budget:
            pools = [elements_list() if k == "e" else members for k in kinds]
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
            combo = tuple(
                sample_el() if k == "e" else members[rng.randrange(n_t)] for k in kinds
            )
            if not pred(*combo):
                witness = {
                    nm: (D.el_name(v) if k == "e" else D.test_name(v))
                    for nm, k, v in zip(names, kinds, combo)
                }
                reports.append(LawReport(name, False, witness, f"sampled ({samples})"))
                return
        reports.append(LawReport(name, True, None, f"sampled ({samples})"))

    one_t = D.test_one

    # star of a domain element collapses to the unit
    run(
        "star-of-domain",
        "e",
        lambda a: D.el_star(D.embed(D.dom(a))) == D.el_one,
        ("a",),
    )
    # every starred element is total
    run(
        "domain-of-star",
        "e",
        lambda a: D.dom(D.el_star(a)) == one_t,
        ("a",),
    )
    # an invariant of a is an invariant of a*
    run(
        "invariant-star",
        "et",
        lambda a, p: not D.test_leq(D.preimage(a, p), p)
        or D.test_leq(D.preimage(D.el_star(a), p), p),
        ("a", "p"),
    )

    if not D.flags.get("dloc", False):
        note = "not applicable: no locality"
        for name in ("preimage-star-induction", "frontier-bound", "frontier-decomposition", "preimage-horn-induction"):
            reports.append(LawReport(name, True, None, note))
        return reports

    # b + ac <= c for preimages: a:p + q <= p  =>  a*:q <= p
    run(
        "preimage-star-induction",
        "ett",
        lambda a, p, q: not D.test_leq(D.test_join(D.preimage(a, p), q), p)
        or D.test_leq(D.preimage(D.el_star(a), q), p),
        ("a", "p", "q"),
    )
    # a*:p <= p + a*:(p' (a:p))
    run(
        "frontier-bound",
        "et",
        lambda a, p: D.test_leq(
            D.preimage(D.el_star(a), p),
            D.test_join(
                p,
                D.preimage(D.el_star(a), D.test_meet(D.test_compl(p), D.preimage(a, p))),
            ),
        ),
        ("a", "p"),
    )
    # a*:p = p + (a p')*:(a:p), the worklist decomposition
    run(
        "frontier-decomposition",
        "et",
        lambda a, p: D.preimage(D.el_star(a), p)
        == D.test_join(
            p,
            D.preimage(
                D.el_star(D.el_mul(a, D.embed(D.test_compl(p)))),
                D.preimage(a, p),
            ),
        ),
        ("a", "p"),
    )
    # (ac):p + b:q <= c:p  =>  (a*b):q <= c:p
    run(
        "preimage-horn-induction",
        "eeett",
        lambda a, b, c, p, q: not D.test_leq(
            D.test_join(D.preimage(D.el_mul(a, c), p), D.preimage(b, q)),
            D.preimage(c, p),
        )
        or D.test_leq(
            D.preimage(D.el_mul(D.el_star(a), b), q),
            D.preimage(c, p),
        ),
        ("a", "b", "c", "p", "q"),
    )
    return reports
