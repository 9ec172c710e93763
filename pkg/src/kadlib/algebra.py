"""Idempotent semirings with tests, presented as finite operation tables.

Elements are indices into an ordered carrier; names are for I/O only.  The
binary operations are dense n-by-n index tables, so every law checker can
enumerate the whole structure.  Checkers return ``LawReport`` lists instead
of raising: deliberately broken structures (counterexample models) are
first-class inputs here.

Ternary laws are evaluated with numpy, one leading element at a time; the
enumeration is still exhaustive, it just avoids a Python triple loop so
that carriers of a few hundred elements stay checkable in seconds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

__all__ = [
    "FiniteSemiring",
    "TestAlgebra",
    "LawReport",
    "Verdict",
    "Term",
    "var",
    "zero_term",
    "one_term",
    "add",
    "mul",
    "star",
    "conv",
    "dom",
    "cod",
    "compl",
    "nat_leq",
    "opposite",
    "check_isemiring",
    "check_kleene",
    "check_test_algebra",
    "eval_term",
    "check_equation",
    "all_hold",
    "failures",
    "format_witness",
]


def _as_table(values, n, what):
    t = np.asarray(values, dtype=np.int32)
    if t.shape != (n, n):
        raise ValueError(f"{what} table must be {n}x{n}, got {t.shape}")
    if t.min() < 0 or t.max() >= n:
        raise ValueError(f"{what} table entries must be element indices < {n}")
    t.setflags(write=False)
    return t


def _as_unary(values, n, what):
    t = np.asarray(values, dtype=np.int32)
    if t.shape != (n,):
        raise ValueError(f"{what} table must have length {n}, got {t.shape}")
    if t.min() < 0 or t.max() >= n:
        raise ValueError(f"{what} table entries must be element indices < {n}")
    t.setflags(write=False)
    return t


class FiniteSemiring:
    """A finite idempotent semiring given by dense operation tables.

    Only structural sanity is enforced at construction (table shapes, index
    ranges, zero != one).  Whether the tables actually satisfy the semiring
    or Kleene laws is the job of check_isemiring / check_kleene.
    """

    def __init__(self, carrier, add, mul, zero, one, star=None, conv=None, name=""):
        self.carrier = tuple(str(c) for c in carrier)
        n = len(self.carrier)
        if n < 2:
            raise ValueError("carrier needs at least the two constants 0 and 1")
        if len(set(self.carrier)) != n:
            raise ValueError("carrier names must be unique")
        self.n = n
        self.add = _as_table(add, n, "add")
        self.mul = _as_table(mul, n, "mul")
        self.zero = int(zero)
        self.one = int(one)
        if not (0 <= self.zero < n and 0 <= self.one < n):
            raise ValueError("zero/one must be carrier indices")
        if self.zero == self.one:
            raise ValueError("trivial semiring (0 = 1) is excluded")
        self.star = None if star is None else _as_unary(star, n, "star")
        self.conv = None if conv is None else _as_unary(conv, n, "conv")
        self.name = name or f"semiring({n})"

    # -- basic views -------------------------------------------------

    def index(self, name: str) -> int:
        try:
            return self.carrier.index(name)
        except ValueError:
            raise KeyError(f"no element named {name!r} in {self.name}") from None

    def element_name(self, i: int) -> str:
        return self.carrier[i]

    def elements(self) -> range:
        return range(self.n)

    def leq(self, a: int, b: int) -> bool:
        """Natural order: a <= b iff a + b = b."""
        return int(self.add[a, b]) == b

    def subidentities(self) -> list[int]:
        return [x for x in range(self.n) if self.leq(x, self.one)]

    def has_star(self) -> bool:
        return self.star is not None

    def top(self) -> Optional[int]:
        """Greatest element in the natural order, if one exists."""
        for t in range(self.n):
            if all(self.leq(x, t) for x in range(self.n)):
                return t
        return None

    # -- plumbing ----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FiniteSemiring):
            return NotImplemented
        return (
            self.carrier == other.carrier
            and self.zero == other.zero
            and self.one == other.one
            and np.array_equal(self.add, other.add)
            and np.array_equal(self.mul, other.mul)
            and _opt_eq(self.star, other.star)
            and _opt_eq(self.conv, other.conv)
        )

    def __repr__(self):
        return f"FiniteSemiring({self.name!r}, n={self.n})"


def _opt_eq(a, b):
    if a is None or b is None:
        return a is None and b is None
    return np.array_equal(a, b)


class TestAlgebra:
    """A declared Boolean subalgebra of subidentities of a FiniteSemiring.

    members: carrier indices; compl: complement map on members.  As with
    FiniteSemiring, the constructor checks only shape; check_test_algebra
    verifies the actual Boolean-algebra laws.
    """

    def __init__(self, owner: FiniteSemiring, members: Iterable[int], compl: Mapping[int, int]):
        self.owner = owner
        self.members = tuple(sorted(set(int(m) for m in members)))
        if not self.members:
            raise ValueError("a test algebra needs at least one member")
        for m in self.members:
            if not 0 <= m < owner.n:
                raise ValueError(f"member {m} is not a carrier index")
        self.compl = {int(k): int(v) for k, v in compl.items()}
        if set(self.compl) != set(self.members):
            raise ValueError("compl must be total exactly on members")
        for v in self.compl.values():
            if v not in self.compl:
                raise ValueError("compl must map members to members")

    @classmethod
    def discrete(cls, owner: FiniteSemiring) -> "TestAlgebra":
        """The {0, 1} test algebra every i-semiring admits."""
        return cls(owner, (owner.zero, owner.one), {owner.zero: owner.one, owner.one: owner.zero})

    def is_member(self, p: int) -> bool:
        return p in self.compl

    def require(self, p: int):
        if p not in self.compl:
            raise ValueError(f"{self.owner.element_name(p)!r} is not a declared test")

    def complement(self, p: int) -> int:
        self.require(p)
        return self.compl[p]

    def join(self, p: int, q: int) -> int:
        return int(self.owner.add[p, q])

    def meet(self, p: int, q: int) -> int:
        return int(self.owner.mul[p, q])

    def leq(self, p: int, q: int) -> bool:
        return self.owner.leq(p, q)

    def atoms(self) -> list[int]:
        """Minimal nonzero members: p such that only 0 and p lie below p."""
        zero = self.owner.zero
        out = []
        for p in self.members:
            if p == zero:
                continue
            below = [q for q in self.members if q not in (zero, p) and self.leq(q, p)]
            if not below:
                out.append(p)
        return out

    def atoms_below(self, p: int) -> list[int]:
        return [q for q in self.atoms() if self.leq(q, p)]

    def lower_size(self, p: int) -> int:
        return sum(1 for q in self.members if self.leq(q, p))

    def __repr__(self):
        names = ",".join(self.owner.element_name(m) for m in self.members)
        return f"TestAlgebra({{{names}}} over {self.owner.name!r})"


@dataclass(frozen=True)
class LawReport:
    """Outcome of one law check; witness maps variable names to element indices."""

    name: str
    holds: bool
    witness: Optional[dict] = None
    note: str = ""

    def __str__(self):
        if self.holds:
            tag = "holds" if not self.note else f"holds ({self.note})"
            return f"{self.name}: {tag}"
        w = "" if not self.witness else " at " + ", ".join(f"{k}={v}" for k, v in self.witness.items())
        return f"{self.name}: FAILS{w}"


@dataclass(frozen=True)
class Verdict:
    """A boolean outcome carrying an optional counterexample."""

    holds: bool
    witness: object = None
    note: str = ""

    def __bool__(self):
        return self.holds


def all_hold(reports: Iterable[LawReport]) -> bool:
    return all(r.holds for r in reports)


def failures(reports: Iterable[LawReport]) -> list[LawReport]:
    return [r for r in reports if not r.holds]


def format_witness(S: FiniteSemiring, witness: Optional[dict]) -> str:
    if not witness:
        return ""
    parts = []
    for k, v in witness.items():
        parts.append(f"{k}={S.element_name(v)}" if isinstance(v, (int, np.integer)) and 0 <= v < S.n else f"{k}={v}")
    return "(" + ", ".join(parts) + ")"


def nat_leq(S: FiniteSemiring, a: int, b: int) -> bool:
    """Natural semilattice order of an i-semiring: a <= b iff a + b = b."""
    return S.leq(a, b)


def opposite(S: FiniteSemiring) -> FiniteSemiring:
    """Same carrier with multiplication arguments swapped; star/conv carry over."""
    name = S.name[:-3] if S.name.endswith("^op") else S.name + "^op"
    return FiniteSemiring(S.carrier, S.add, S.mul.T, S.zero, S.one, star=S.star, conv=S.conv, name=name)


# ---------------------------------------------------------------------------
# term language


@dataclass(frozen=True)
class Term:
    """Small term AST over semiring signature plus tests, domain and converse.

    op is one of: var, zero, one, add, mul, star, conv, dom, cod, not.
    Variables whose name starts with p, q or r range over test members by
    default in check_equation; others range over the whole carrier.
    """

    op: str
    args: tuple = ()
    name: str = ""

    def __add__(self, other):
        return Term("add", (self, _coerce(other)))

    def __mul__(self, other):
        return Term("mul", (self, _coerce(other)))

    def __str__(self):
        if self.op == "var":
            return self.name
        if self.op == "zero":
            return "0"
        if self.op == "one":
            return "1"
        if self.op == "add":
            return f"({self.args[0]} + {self.args[1]})"
        if self.op == "mul":
            return f"({self.args[0]}{self.args[1]})"
        if self.op == "star":
            return f"{self.args[0]}*"
        if self.op == "conv":
            return f"{self.args[0]}^"
        if self.op == "dom":
            return f"dom({self.args[0]})"
        if self.op == "cod":
            return f"cod({self.args[0]})"
        if self.op == "not":
            return f"{self.args[0]}'"
        return f"{self.op}{self.args}"


def _coerce(x):
    if isinstance(x, Term):
        return x
    raise TypeError(f"expected Term, got {type(x).__name__}")


def var(name: str) -> Term:
    return Term("var", (), name)


zero_term = Term("zero")
one_term = Term("one")


def add(l: Term, r: Term) -> Term:
    return Term("add", (l, r))


def mul(l: Term, r: Term) -> Term:
    return Term("mul", (l, r))


def star(t: Term) -> Term:
    return Term("star", (t,))


def conv(t: Term) -> Term:
    return Term("conv", (t,))


def dom(t: Term) -> Term:
    return Term("dom", (t,))


def cod(t: Term) -> Term:
    return Term("cod", (t,))


def compl(t: Term) -> Term:
    return Term("not", (t,))


def eval_term(t: Term, env: Mapping[str, int], S: FiniteSemiring, T: Optional[TestAlgebra] = None, D=None) -> int:
    """Evaluate a term to a carrier index under the given variable assignment."""
    op = t.op
    if op == "var":
        try:
            return int(env[t.name])
        except KeyError:
            raise ValueError(f"unbound variable {t.name!r}") from None
    if op == "zero":
        return S.zero
    if op == "one":
        return S.one
    if op in ("add", "mul"):
        l = eval_term(t.args[0], env, S, T, D)
        r = eval_term(t.args[1], env, S, T, D)
        return int((S.add if op == "add" else S.mul)[l, r])
    x = eval_term(t.args[0], env, S, T, D)
    if op == "star":
        if S.star is None:
            raise ValueError("term uses star but the semiring declares none")
        return int(S.star[x])
    if op == "conv":
        if S.conv is None:
            raise ValueError("term uses converse but the semiring declares none")
        return int(S.conv[x])
    if op == "dom":
        if D is None:
            raise ValueError("term uses dom but no domain structure was given")
        return D.dom(x)
    if op == "cod":
        if D is None:
            raise ValueError("term uses cod but no domain structure was given")
        return D.cod(x)
    if op == "not":
        if T is None:
            raise ValueError("term uses complement but no test algebra was given")
        return T.complement(x)
    raise ValueError(f"unknown term op {op!r}")


def _term_vars(t: Term, acc: list[str]):
    if t.op == "var" and t.name not in acc:
        acc.append(t.name)
    for a in t.args:
        _term_vars(a, acc)


def check_equation(
    lhs: Term,
    rhs: Term,
    rel: str = "eq",
    S: FiniteSemiring = None,
    T: Optional[TestAlgebra] = None,
    D=None,
    test_vars: Optional[Iterable[str]] = None,
    name: str = "",
) -> LawReport:
    """Check lhs = rhs (or lhs <= rhs) over all assignments.

    Element variables range over the carrier, test variables over T.members.
    Unless test_vars is given, variables named p*, q*, r* count as tests.
    """
    if rel not in ("eq", "leq"):
        raise ValueError("rel must be 'eq' or 'leq'")
    if S is None:
        raise ValueError("a semiring is required")
    vs: list[str] = []
    _term_vars(lhs, vs)
    _term_vars(rhs, vs)
    if test_vars is None:
        test_vars = {v for v in vs if v[:1] in ("p", "q", "r")}
    else:
        test_vars = set(test_vars)
    if test_vars & set(vs) and T is None:
        raise ValueError("equation has test variables but no test algebra was given")
    law = name or f"{lhs} {'=' if rel == 'eq' else '<='} {rhs}"

    domains = [tuple(T.members) if v in test_vars else tuple(range(S.n)) for v in vs]
    env: dict[str, int] = {}

    def rec(i: int) -> Optional[dict]:
        if i == len(vs):
            lv = eval_term(lhs, env, S, T, D)
            rv = eval_term(rhs, env, S, T, D)
            ok = lv == rv if rel == "eq" else S.leq(lv, rv)
            return None if ok else dict(env)
        for x in domains[i]:
            env[vs[i]] = x
            bad = rec(i + 1)
            if bad is not None:
                return bad
        del env[vs[i]]
        return None

    bad = rec(0)
    if bad is None:
        return LawReport(law, True)
    return LawReport(law, False, witness=bad)


# ---------------------------------------------------------------------------
# law checkers


def _first_false(mask: np.ndarray, names: Sequence[str]) -> Optional[dict]:
    """First index tuple where the boolean mask is False, as a witness dict."""
    flat = np.argmin(mask.reshape(-1)) if mask.size else 0
    if mask.size == 0 or mask.reshape(-1)[flat]:
        return None
    idx = np.unravel_index(int(flat), mask.shape)
    return {nm: int(i) for nm, i in zip(names, idx)}


def _scan_per_element(n, fn, names):
    """Run fn(a) -> bool mask for each leading element; first failure wins."""
    for a in range(n):
        m = fn(a)
        bad = _first_false(np.asarray(m), names[1:])
        if bad is not None:
            return {names[0]: a, **bad}
    return None


def check_isemiring(S: FiniteSemiring) -> list[LawReport]:
    """All idempotent-semiring laws, each exhaustively over the tables."""
    A, M, n = S.add, S.mul, S.n
    ar = np.arange(n)
    reports = []

    def law(name, witness, note=""):
        reports.append(LawReport(name, witness is None, witness, note))

    law("add-commutative", _first_false(A == A.T, ("a", "b")))
    law("add-associative", _scan_per_element(n, lambda a: A[A[a]] == A[a][A], ("a", "b", "c")))
    law("add-left-identity", _first_false(A[S.zero] == ar, ("a",)))
    law("add-right-identity", _first_false(A[:, S.zero] == ar, ("a",)))
    law("add-idempotent", _first_false(A[ar, ar] == ar, ("a",)))
    law("mul-associative", _scan_per_element(n, lambda a: M[M[a]] == M[a][M], ("a", "b", "c")))
    law("mul-left-identity", _first_false(M[S.one] == ar, ("a",)))
    law("mul-right-identity", _first_false(M[:, S.one] == ar, ("a",)))
    law(
        "left-distributive",
        _scan_per_element(n, lambda a: M[a][A] == A[M[a][:, None], M[a][None, :]], ("a", "b", "c")),
    )
    law(
        "right-distributive",
        _scan_per_element(n, lambda a: M[A[a]] == A[M[a][None, :], M], ("a", "b", "c")),
    )
    law("left-annihilation", _first_false(M[S.zero] == S.zero, ("a",)))
    law("right-annihilation", _first_false(M[:, S.zero] == S.zero, ("a",)))
    law("zero-not-one", None if S.zero != S.one else {})
    return reports


def check_kleene(S: FiniteSemiring) -> list[LawReport]:
    """Kleene star axioms plus the standard derived star laws.

    The two Horn axioms quantify over triples; they are evaluated one leading
    element at a time with vectorized inner pairs.
    """
    if S.star is None:
        raise ValueError(f"{S.name} declares no star table")
    A, M, ST, n = S.add, S.mul, S.star, S.n
    ar = np.arange(n)
    one = S.one
    reports = []

    def law(name, witness, note=""):
        reports.append(LawReport(name, witness is None, witness, note))

    def leq(x, y):
        # elementwise natural order on index arrays
        return A[x, y] == y

    # 1 + a a* <= a*
    law("star-left-unfold", _first_false(leq(A[one][M[ar, ST]], ST), ("a",)))
    # 1 + a* a <= a*
    law("star-right-unfold", _first_false(leq(A[one][M[ST, ar]], ST), ("a",)))

    # b + a c <= c  =>  a* b <= c
    def left_induction(a):
        prem = leq(A[:, M[a]], ar[None, :])            # [b, c]: b + ac <= c
        concl = leq(M[ST[a]][:, None], ar[None, :])    # [b, c]: a*b <= c
        return ~prem | concl

    law("star-left-induction", _scan_per_element(n, left_induction, ("a", "b", "c")))

    # b + c a <= c  =>  b a* <= c
    def right_induction(a):
        prem = leq(A[:, M[:, a]], ar[None, :])         # [b, c]: b + ca <= c
        concl = leq(M[:, ST[a]][:, None], ar[None, :])
        return ~prem | concl

    law("star-right-induction", _scan_per_element(n, right_induction, ("a", "b", "c")))

    # derived laws, kept as regression checks
    law("one-below-star", _first_false(leq(np.full(n, one), ST), ("a",)))
    law("star-mul-star", _first_false(M[ST, ST] == ST, ("a",)))

    pw = ar.copy()
    bad = None
    for i in range(1, n + 1):
        m = leq(pw, ST)
        w = _first_false(m, ("a",))
        if w is not None:
            bad = {**w, "power": i}
            break
        pw = M[pw, ar]
    law("powers-below-star", bad, note=f"powers up to {n}")

    law("star-of-star", _first_false(ST[ST] == ST, ("a",)))
    law(
        "star-slide",
        _scan_per_element(n, lambda a: M[ST[M[a]], a] == M[a, ST[M[:, a]]], ("a", "b")),
    )
    law(
        "star-denesting",
        _scan_per_element(n, lambda a: ST[A[a]] == M[ST[a], ST[M[:, ST[a]]]], ("a", "b")),
    )
    law(
        "star-unfold-right-product",
        _scan_per_element(n, lambda a: M[ST[a]] == A[ar, M[M[ST[a], a]]], ("a", "b")),
    )
    law(
        "star-unfold-left-product",
        _scan_per_element(n, lambda a: M[ST[a]] == A[ar, M[M[a, ST[a]]]], ("a", "b")),
    )

    sub = leq(ar, np.full(n, one))
    law("subidentity-star", _first_false(~sub | (ST == one), ("a",)))
    law("star-monotone", _first_false(~leq(ar[:, None], ar[None, :]) | leq(ST[:, None], ST[None, :]), ("a", "b")))

    # a c <= c b  =>  a* c <= c b*
    def left_simulation(a):
        prem = leq(M[a][:, None], M)                 # [c, b]
        concl = leq(M[ST[a]][:, None], M[:, ST])     # [c, b]
        return ~prem | concl

    law("star-left-simulation", _scan_per_element(n, left_simulation, ("a", "c", "b")))

    # c a <= b c  =>  c a* <= b* c
    def right_simulation(a):
        prem = leq(M[:, a][:, None], M.T)            # [c, b]
        concl = leq(M[:, ST[a]][:, None], M[ST].T)   # [c, b]
        return ~prem | concl

    law("star-right-simulation", _scan_per_element(n, right_simulation, ("a", "c", "b")))
    return reports


def check_test_algebra(T: TestAlgebra) -> list[LawReport]:
    """Boolean-algebra laws for the declared members, plus the four-way
    shunting equivalences that image/preimage reasoning relies on."""
    S = T.owner
    A, M, n = S.add, S.mul, S.n
    mem = T.members
    memset = set(mem)
    reports = []

    def law(name, witness, note=""):
        reports.append(LawReport(name, witness is None, witness, note))

    def first(pred, names, *ranges):
        def rec(prefix, rest):
            if not rest:
                return None if pred(*prefix) else dict(zip(names, prefix))
            for x in rest[0]:
                got = rec(prefix + (x,), rest[1:])
                if got is not None:
                    return got
            return None

        return rec((), ranges)

    law("members-below-one", first(lambda p: S.leq(p, S.one), ("p",), mem))
    law("zero-is-member", None if S.zero in memset else {"p": S.zero})
    law("one-is-member", None if S.one in memset else {"p": S.one})
    law("closed-under-join", first(lambda p, q: int(A[p, q]) in memset, ("p", "q"), mem, mem))
    law("closed-under-meet", first(lambda p, q: int(M[p, q]) in memset, ("p", "q"), mem, mem))
    law("complement-involutive", first(lambda p: T.compl[T.compl[p]] == p, ("p",), mem))
    law("complement-join-full", first(lambda p: int(A[p, T.compl[p]]) == S.one, ("p",), mem))
    law("complement-meet-empty", first(lambda p: int(M[p, T.compl[p]]) == S.zero, ("p",), mem))
    law("meet-commutative", first(lambda p, q: M[p, q] == M[q, p], ("p", "q"), mem, mem))
    law("meet-idempotent", first(lambda p: int(M[p, p]) == p, ("p",), mem))

    def glb(p, q):
        m = int(M[p, q])
        if not (S.leq(m, p) and S.leq(m, q)):
            return False
        return all(S.leq(r, m) for r in mem if S.leq(r, p) and S.leq(r, q))

    law("meet-is-greatest-lower-bound", first(glb, ("p", "q"), mem, mem))

    # four equivalent ways of saying "a maps p-states into q-states"
    def shunt_right(p, q):
        comp_p, comp_q = T.compl[p], T.compl[q]
        pa, aq = M[p], M[:, q]
        c1 = A[pa, aq] == aq                               # pa <= aq
        x = M[:, comp_q]
        y = M[comp_p]
        c2 = A[x, y] == y                                  # aq' <= p'a
        c3 = M[M[p], comp_q] == S.zero                     # paq' <= 0
        c4 = M[M[p], q] == pa                              # pa = paq
        agree = (c1 == c2) & (c1 == c3) & (c1 == c4)
        return _first_false(agree, ("a",))

    bad = None
    for p in mem:
        for q in mem:
            w = shunt_right(p, q)
            if w is not None:
                bad = {"p": p, "q": q, **w}
                break
        if bad:
            break
    law("shunting-right", bad)

    def shunt_left(p, q):
        comp_p, comp_q = T.compl[p], T.compl[q]
        ap, qa = M[:, p], M[q]
        c1 = A[ap, qa] == qa                               # ap <= qa
        x = M[comp_q]
        y = M[:, comp_p]
        c2 = A[x, y] == y                                  # q'a <= ap'
        c3 = M[M[comp_q], p] == S.zero                     # q'ap <= 0
        c4 = M[q, M[:, p]] == ap                           # ap = qap
        agree = (c1 == c2) & (c1 == c3) & (c1 == c4)
        return _first_false(agree, ("a",))

    bad = None
    for p in mem:
        for q in mem:
            w = shunt_left(p, q)
            if w is not None:
                bad = {"p": p, "q": q, **w}
                break
        if bad:
            break
    law("shunting-left", bad)
    return reports
