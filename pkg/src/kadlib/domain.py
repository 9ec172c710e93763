"""Domain and codomain operators on finite test semirings.

The domain of a is the least test p that preserves a on the left (a <= pa);
codomain is the same computation in the opposite semiring.  Both are stored
as unary tables inside a DomainStructure, which also exposes the image and
preimage operators and the flags (d1, d2, locality, ...) that downstream
reachability and termination analyses key on.

As in algebra, checkers report rather than raise: structures that violate
the axioms (independence proofs, locality counterexamples) are data here.
"""

from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from .algebra import FiniteSemiring, LawReport, TestAlgebra, Verdict, opposite

__all__ = [
    "DomainStructure",
    "compute_predomain",
    "compute_precodomain",
    "check_domain_axioms",
    "check_domain_calculus",
    "check_converse",
    "converse_duality_check",
    "is_integral",
    "image",
    "preimage",
]

_FLAG_LAWS = ("d1", "d2", "dloc", "cd1", "cd2", "cdloc")


class DomainStructure:
    """A semiring with test algebra plus domain and codomain tables.

    delta/rho map each carrier index to a test; they may be any maps (the
    axioms are checked, not assumed).  flags caches which axioms hold; pass
    flags=None to have them computed on construction.
    """

    def __init__(
        self,
        owner: FiniteSemiring,
        tests: TestAlgebra,
        delta,
        rho,
        flags: Optional[dict] = None,
        name: str = "",
    ):
        if tests.owner is not owner and tests.owner != owner:
            raise ValueError("test algebra belongs to a different semiring")
        self.owner = owner
        self.tests = tests
        self.delta = np.asarray(delta, dtype=np.int32)
        self.rho = np.asarray(rho, dtype=np.int32)
        for t, what in ((self.delta, "delta"), (self.rho, "rho")):
            if t.shape != (owner.n,):
                raise ValueError(f"{what} table must have length {owner.n}")
            if any(int(v) not in tests.compl for v in t):
                raise ValueError(f"{what} table must land in the test algebra")
        self.delta.setflags(write=False)
        self.rho.setflags(write=False)
        self.name = name or f"domain({owner.name})"
        self._top = owner.top()
        if flags is None:
            reports = check_domain_axioms(self)
            flags = {r.name: r.holds for r in reports if r.name in _FLAG_LAWS}
            flags["integral"] = is_integral(owner).holds
        self.flags = dict(flags)

    # -- the operators -------------------------------------------------

    def dom(self, a: int) -> int:
        return int(self.delta[a])

    def cod(self, a: int) -> int:
        return int(self.rho[a])

    def preimage(self, a: int, p: int) -> int:
        """a : p, the states from which a can enter p (= dom(a p))."""
        self.tests.require(p)
        return int(self.delta[self.owner.mul[a, p]])

    def image(self, p: int, a: int) -> int:
        """p : a, the states a reaches from p (= cod(p a))."""
        self.tests.require(p)
        return int(self.rho[self.owner.mul[p, a]])

    # -- element surface (shared shape with RelModel) -------------------

    @property
    def has_star(self) -> bool:
        return self.owner.star is not None

    def el_add(self, x: int, y: int) -> int:
        return int(self.owner.add[x, y])

    def el_mul(self, x: int, y: int) -> int:
        return int(self.owner.mul[x, y])

    def el_star(self, x: int) -> int:
        if self.owner.star is None:
            raise ValueError(f"{self.owner.name} has no star operation")
        return int(self.owner.star[x])

    def el_leq(self, x: int, y: int) -> bool:
        return self.owner.leq(x, y)

    @property
    def el_zero(self) -> int:
        return self.owner.zero

    @property
    def el_one(self) -> int:
        return self.owner.one

    @property
    def el_top(self) -> Optional[int]:
        return self._top

    def el_name(self, x: int) -> str:
        return self.owner.element_name(x)

    def elements(self) -> range:
        return range(self.owner.n)

    def size(self) -> int:
        return self.owner.n

    def sample(self, rng) -> int:
        return rng.randrange(self.owner.n)

    def embed(self, p: int) -> int:
        self.tests.require(p)
        return p

    # -- test surface ----------------------------------------------------

    @property
    def test_zero(self) -> int:
        return self.owner.zero

    @property
    def test_one(self) -> int:
        return self.owner.one

    def test_members(self) -> list[int]:
        return list(self.tests.members)

    def test_count(self) -> int:
        return len(self.tests.members)

    def sample_test(self, rng) -> int:
        return self.tests.members[rng.randrange(len(self.tests.members))]

    def test_atoms(self) -> list[int]:
        return self.tests.atoms()

    def atoms_below(self, p: int) -> list[int]:
        return self.tests.atoms_below(p)

    def test_join(self, p: int, q: int) -> int:
        return self.tests.join(p, q)

    def test_meet(self, p: int, q: int) -> int:
        return self.tests.meet(p, q)

    def test_compl(self, p: int) -> int:
        return self.tests.complement(p)

    def test_leq(self, p: int, q: int) -> bool:
        return self.owner.leq(p, q)

    def test_name(self, p: int) -> str:
        return self.owner.element_name(p)

    def __repr__(self):
        return f"DomainStructure({self.name!r})"


def _least_preserver(S: FiniteSemiring, T: TestAlgebra, a: int, ordered) -> int:
    preservers = [p for p in T.members if S.leq(a, int(S.mul[p, a]))]
    if not preservers:
        raise ValueError(
            f"{S.element_name(a)!r} has no left-preserving test; "
            "the test algebra is too small or the laws fail"
        )
    for p in ordered:
        if S.leq(a, int(S.mul[p, a])):
            first = p
            break
    m = preservers[0]
    for p in preservers[1:]:
        m = T.meet(m, p)
    if m != first or m not in T.compl or not S.leq(a, int(S.mul[m, a])):
        raise ValueError(
            f"left preservers of {S.element_name(a)!r} have no least element; "
            "the declared tests do not form a lattice under the semiring order"
        )
    return m


def compute_predomain(S: FiniteSemiring, T: TestAlgebra, name: str = "") -> DomainStructure:
    """Domain and codomain tables for S: least left/right preservers.

    Tests are scanned smallest-first, so the first preserver found is the
    least one; a meet-of-all-preservers cross-check guards the claim.
    Codomain is the same computation with multiplication reversed.
    """
    ordered = sorted(T.members, key=lambda p: (T.lower_size(p), p))
    delta = [_least_preserver(S, T, a, ordered) for a in range(S.n)]
    So = opposite(S)
    To = TestAlgebra(So, T.members, T.compl)
    ordered_o = sorted(To.members, key=lambda p: (To.lower_size(p), p))
    rho = [_least_preserver(So, To, a, ordered_o) for a in range(S.n)]
    return DomainStructure(S, T, delta, rho, flags=None, name=name or S.name)


def compute_precodomain(S: FiniteSemiring, T: TestAlgebra) -> list[int]:
    """Just the codomain table: predomain of the opposite semiring."""
    So = opposite(S)
    To = TestAlgebra(So, T.members, T.compl)
    ordered = sorted(To.members, key=lambda p: (To.lower_size(p), p))
    return [_least_preserver(So, To, a, ordered) for a in range(S.n)]


# ---------------------------------------------------------------------------
# axiom and calculus checkers


def _first_false(mask: np.ndarray, names) -> Optional[dict]:
    flat = np.argmin(mask.reshape(-1)) if mask.size else 0
    if mask.size == 0 or mask.reshape(-1)[flat]:
        return None
    idx = np.unravel_index(int(flat), mask.shape)
    return {nm: int(i) for nm, i in zip(names, idx)}


def check_domain_axioms(D: DomainStructure) -> list[LawReport]:
    """The domain/codomain axioms and their least/greatest characterizations.

    d1: a <= dom(a) a          cd1: a <= a cod(a)
    d2: dom(p a) <= p          cd2: cod(a p) <= p
    dloc: dom(a dom(b)) <= dom(a b)   and cdloc dually
    llp/gla (lrp/gra): dom (cod) is the least preserver / the complement of
    the greatest annihilator, stated as equivalences over all (a, p).
    """
    S = D.owner
    A, M, n, z = S.add, S.mul, S.n, S.zero
    DT, RT = D.delta, D.rho
    ar = np.arange(n)
    mem = D.tests.members
    compl = D.tests.compl
    reports = []

    def law(name, witness):
        reports.append(LawReport(name, witness is None, witness))

    def leq(x, y):
        return A[x, y] == y

    law("d1", _first_false(leq(ar, M[DT, ar]), ("a",)))

    bad = None
    for p in mem:
        w = _first_false(leq(DT[M[p]], np.full(n, p)), ("a",))
        if w is not None:
            bad = {"p": p, **w}
            break
    law("d2", bad)

    bad = None
    for a in range(n):
        w = _first_false(leq(DT[M[a][DT]], DT[M[a]]), ("b",))
        if w is not None:
            bad = {"a": a, **w}
            break
    law("dloc", bad)

    # llp: dom(a) <= p  <=>  a <= p a
    bad = None
    for p in mem:
        lhs = leq(DT, np.full(n, p))
        rhs = leq(ar, M[p])
        w = _first_false(lhs == rhs, ("a",))
        if w is not None:
            bad = {"p": p, **w}
            break
    law("llp", bad)

    # gla: dom(a) <= p  <=>  p' a <= 0
    bad = None
    for p in mem:
        lhs = leq(DT, np.full(n, p))
        rhs = M[compl[p]] == z
        w = _first_false(lhs == rhs, ("a",))
        if w is not None:
            bad = {"p": p, **w}
            break
    law("gla", bad)

    law("cd1", _first_false(leq(ar, M[ar, RT]), ("a",)))

    bad = None
    for p in mem:
        w = _first_false(leq(RT[M[:, p]], np.full(n, p)), ("a",))
        if w is not None:
            bad = {"p": p, **w}
            break
    law("cd2", bad)

    bad = None
    for a in range(n):
        w = _first_false(leq(RT[M[RT[a]]], RT[M[a]]), ("b",))
        if w is not None:
            bad = {"a": a, **w}
            break
    law("cdloc", bad)

    # lrp: cod(a) <= p  <=>  a <= a p
    bad = None
    for p in mem:
        lhs = leq(RT, np.full(n, p))
        rhs = leq(ar, M[:, p])
        w = _first_false(lhs == rhs, ("a",))
        if w is not None:
            bad = {"p": p, **w}
            break
    law("lrp", bad)

    # gra: cod(a) <= p  <=>  a p' <= 0
    bad = None
    for p in mem:
        lhs = leq(RT, np.full(n, p))
        rhs = M[:, compl[p]] == z
        w = _first_false(lhs == rhs, ("a",))
        if w is not None:
            bad = {"p": p, **w}
            break
    law("gra", bad)
    return reports


def check_domain_calculus(D: DomainStructure) -> list[LawReport]:
    """The derived domain laws and the image/preimage calculus.

    Everything a computed predomain should satisfy: strictness through
    complement commutation, the top-element Galois connection, and the
    preimage exchange/decomposition laws.  Laws that need locality are
    checked only when the dloc flag holds and reported as not applicable
    otherwise.
    """
    S = D.owner
    A, M, n, z, one = S.add, S.mul, S.n, S.zero, S.one
    DT, RT = D.delta, D.rho
    ar = np.arange(n)
    mem = D.tests.members
    compl = D.tests.compl
    reports = []

    def law(name, witness, note=""):
        reports.append(LawReport(name, witness is None, witness, note))

    def skip(name):
        reports.append(LawReport(name, True, None, "not applicable: no locality"))

    def leq(x, y):
        return A[x, y] == y

    def scan_tests(fn, extra=("a",)):
        for p in mem:
            w = _first_false(fn(p), extra)
            if w is not None:
                return {"p": p, **w}
        return None

    # strictness: dom(a) <= 0 iff a <= 0
    law("dom-strict", _first_false(leq(DT, np.full(n, z)) == leq(ar, np.full(n, z)), ("a",)))
    # additivity
    law("dom-additive", _first_false(DT[A] == A[DT[:, None], DT[None, :]], ("a", "b")))
    # monotonicity
    law("dom-monotone", _first_false(~leq(ar[:, None], ar[None, :]) | leq(DT[:, None], DT[None, :]), ("a", "b")))
    # stability on tests
    bad = None
    for p in mem:
        if int(DT[p]) != p:
            bad = {"p": p}
            break
    law("dom-stable-on-tests", bad)
    law("dom-idempotent", _first_false(DT[DT] == DT, ("a",)))
    # a = dom(a) a, the equational strengthening of d1
    law("dom-left-invariant", _first_false(M[DT, ar] == ar, ("a",)))
    # import/export: dom(p a) = p dom(a)
    law("dom-export", scan_tests(lambda p: DT[M[p]] == M[p][DT]))
    # decomposition: dom(a b) <= dom(a dom(b))
    bad = None
    for a in range(n):
        w = _first_false(leq(DT[M[a]], DT[M[a][DT]]), ("b",))
        if w is not None:
            bad = {"a": a, **w}
            break
    law("dom-decompose", bad)
    # complement commutation on tests: dom(p)' = dom(p')
    bad = None
    for p in mem:
        if compl[int(DT[p])] != int(DT[compl[p]]):
            bad = {"p": p}
            break
    law("dom-complement", bad)

    # Galois with top: dom(a) <= p iff a <= p top
    top = D.el_top
    if top is None:
        law("dom-top-galois", None, note="not applicable: no greatest element")
    else:
        law("dom-top-galois", scan_tests(lambda p: leq(DT, np.full(n, p)) == leq(ar, np.full(n, int(M[p, top])))))

    # preimage of the full test is the domain; image dually
    law("preimage-of-one", _first_false(DT[M[:, one]] == DT, ("a",)))
    law("image-of-one", _first_false(RT[M[one]] == RT, ("a",)))

    # (51) a:p <= q  <=>  a p <= q a
    bad = None
    for p in mem:
        for q in mem:
            lhs = leq(DT[M[:, p]], np.full(n, q))
            rhs = leq(M[:, p], M[q])
            w = _first_false(lhs == rhs, ("a",))
            if w is not None:
                bad = {"p": p, "q": q, **w}
                break
        if bad:
            break
    law("preimage-vs-commutation", bad)

    # (52) a:p <= q  <=>  q' a p <= 0
    bad = None
    for p in mem:
        for q in mem:
            lhs = leq(DT[M[:, p]], np.full(n, q))
            rhs = M[M[compl[q]], p] == z
            w = _first_false(lhs == rhs, ("a",))
            if w is not None:
                bad = {"p": p, "q": q, **w}
                break
        if bad:
            break
    law("preimage-vs-annihilation", bad)

    # (53) p (a:q) = (p a) : q
    bad = None
    for p in mem:
        for q in mem:
            lhs = M[p][DT[M[:, q]]]
            rhs = DT[M[M[p], q]]
            w = _first_false(lhs == rhs, ("a",))
            if w is not None:
                bad = {"p": p, "q": q, **w}
                break
        if bad:
            break
    law("preimage-import-export", bad)

    # (54) a:p <= q  <=>  q':a <= p'
    bad = None
    for p in mem:
        for q in mem:
            lhs = leq(DT[M[:, p]], np.full(n, q))
            rhs = leq(RT[M[compl[q]]], np.full(n, compl[p]))
            w = _first_false(lhs == rhs, ("a",))
            if w is not None:
                bad = {"p": p, "q": q, **w}
                break
        if bad:
            break
    law("preimage-exchange", bad)

    # (55) (p:a) q <= 0  <=>  p (a:q) <= 0
    bad = None
    for p in mem:
        for q in mem:
            lhs = M[RT[M[p]], q] == z
            rhs = M[p, DT[M[:, q]]] == z
            w = _first_false(lhs == rhs, ("a",))
            if w is not None:
                bad = {"p": p, "q": q, **w}
                break
        if bad:
            break
    law("image-preimage-annihilation", bad)

    # (56) p:(a b) <= (p:a):b, with equality under locality
    local = bool(D.flags.get("cdloc")) and bool(D.flags.get("dloc"))
    bad = None
    bad_eq = None
    for p in mem:
        pa_img = RT[M[p]]
        lhs = RT[M[M[p][:, None], ar[None, :]]]
        rhs = RT[M[pa_img[:, None], ar[None, :]]]
        w = _first_false(leq(lhs, rhs), ("a", "b"))
        if w is not None and bad is None:
            bad = {"p": p, **w}
        if local and bad_eq is None:
            w = _first_false(lhs == rhs, ("a", "b"))
            if w is not None:
                bad_eq = {"p": p, **w}
    law("image-compose-bound", bad)
    if local:
        law("image-compose-exact", bad_eq)
    else:
        skip("image-compose-exact")

    # (57)/(58) under locality: dom(a b) = a : dom(b); cod(a b) = cod(a) : b
    if local:
        bad = None
        for a in range(n):
            w = _first_false(DT[M[a]] == DT[M[a][DT]], ("b",))
            if w is not None:
                bad = {"a": a, **w}
                break
        law("dom-compose-local", bad)
        bad = None
        for a in range(n):
            w = _first_false(RT[M[a]] == RT[M[RT[a]]], ("b",))
            if w is not None:
                bad = {"a": a, **w}
                break
        law("cod-compose-local", bad)
    else:
        skip("dom-compose-local")
        skip("cod-compose-local")

    # zero-divisor exchange (locality in equational clothing):
    # a b <= 0  <=>  cod(a) dom(b) <= 0
    if local:
        bad = None
        for a in range(n):
            lhs = M[a] == z
            rhs = M[RT[a], DT] == z
            w = _first_false(lhs == rhs, ("b",))
            if w is not None:
                bad = {"a": a, **w}
                break
        law("annihilation-via-dom-cod", bad)
    else:
        skip("annihilation-via-dom-cod")
    return reports


def preimage(D: DomainStructure, a: int, p: int) -> int:
    return D.preimage(a, p)


def image(D: DomainStructure, p: int, a: int) -> int:
    return D.image(p, a)


def is_integral(S: FiniteSemiring) -> Verdict:
    """No zero divisors: a b = 0 only if a = 0 or b = 0."""
    M = S.mul
    nz = np.arange(S.n) != S.zero
    bad = (M == S.zero) & nz[:, None] & nz[None, :]
    if not bad.any():
        return Verdict(True)
    i = int(np.argmax(bad.reshape(-1)))
    a, b = divmod(i, S.n)
    return Verdict(
        False,
        witness={"a": a, "b": b},
        note=f"{S.element_name(a)}·{S.element_name(b)} = 0",
    )


# ---------------------------------------------------------------------------
# converse


def check_converse(S: FiniteSemiring) -> list[LawReport]:
    """Involution, additivity, contravariance, subidentity weakening and
    the modular self-embedding a <= a a° a, plus their small consequences."""
    if S.conv is None:
        raise ValueError(f"{S.name} declares no converse table")
    A, M, n = S.add, S.mul, S.n
    CV = S.conv
    ar = np.arange(n)
    reports = []

    def law(name, witness):
        reports.append(LawReport(name, witness is None, witness))

    def leq(x, y):
        return A[x, y] == y

    law("conv-involutive", _first_false(CV[CV] == ar, ("a",)))
    law("conv-additive", _first_false(CV[A] == A[CV[:, None], CV[None, :]], ("a", "b")))
    law("conv-contravariant", _first_false(CV[M] == M[CV[None, :], CV[:, None]], ("a", "b")))

    subs = np.array([x for x in range(n) if S.leq(x, S.one)])

    def sub_witness(mask):
        w = _first_false(mask, ("i",))
        return None if w is None else {"p": int(subs[w["i"]])}

    law("conv-shrinks-subidentities", sub_witness(leq(CV[subs], subs)))
    law("conv-self-embedding", _first_false(leq(ar, M[M[ar, CV], ar]), ("a",)))

    law("conv-fixes-one", None if int(CV[S.one]) == S.one else {"a": S.one})
    law("conv-fixes-zero", None if int(CV[S.zero]) == S.zero else {"a": S.zero})
    law(
        "conv-order-embedding",
        _first_false(leq(ar[:, None], ar[None, :]) == leq(CV[:, None], CV[None, :]), ("a", "b")),
    )
    law("conv-fixes-subidentities", sub_witness(CV[subs] == subs))
    return reports


def converse_duality_check(D: DomainStructure) -> list[LawReport]:
    """dom/cod swap under converse: dom(a°) = cod(a) and friends."""
    S = D.owner
    if S.conv is None:
        return [LawReport("converse-duality", True, None, "not applicable: no converse declared")]
    M, n = S.mul, S.n
    CV, DT, RT = S.conv, D.delta, D.rho
    mem = D.tests.members
    reports = []

    def law(name, witness):
        reports.append(LawReport(name, witness is None, witness))

    law("dom-of-converse", _first_false(DT[CV] == RT, ("a",)))
    law("cod-of-converse", _first_false(RT[CV] == DT, ("a",)))

    bad = None
    for p in mem:
        w = _first_false(DT[M[CV, p]] == RT[M[p]], ("a",))
        if w is not None:
            bad = {"p": p, **w}
            break
    law("preimage-via-converse", bad)

    bad = None
    for p in mem:
        w = _first_false(RT[M[CV, p]] == DT[M[p]], ("a",))
        if w is not None:
            bad = {"p": p, **w}
            break
    law("image-via-converse", bad)
    return reports
