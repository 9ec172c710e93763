"""Concrete semiring models.

Five small finite semirings given by their printed tables, finite binary
relations (the workhorse model), square matrices over any star semiring,
the tropical and max-plus number models, bounded language and path models,
and an algebra of predicate transformers built from a domain structure.

Finite models can be materialized into dense-table FiniteSemiring values
for exhaustive law checking; infinite ones are checked by sampling.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import FiniteSemiring, TestAlgebra, LawReport

__all__ = [
    "StarUnsupportedError",
    "ModelHandle",
    "Relation",
    "RelModel",
    "conway_model",
    "conway_names",
    "rel_model",
    "rel_semiring",
    "rel_tests",
    "tropical_model",
    "maxplus_model",
    "bounded_language_model",
    "bounded_path_model",
    "matrix_semiring",
    "matrix_star",
    "predicate_transformer_model",
    "materialize",
    "MaterializedModel",
    "check_sampled_laws",
]


class StarUnsupportedError(ValueError):
    """The model provides no star operation (its powers are unbounded)."""


# ---------------------------------------------------------------------------
# uniform handle for models that are not (or not yet) dense tables


class ModelHandle:
    """Uniform interface over computable models.

    Subclasses provide add/mul/leq/zero/one and optionally star, top,
    element enumeration and sampling.  Elements are opaque values; el_name
    renders them for reports.
    """

    name = "model"
    finite = True
    has_star = False

    # -- required ops --------------------------------------------------

    def add(self, x, y):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def star(self, x):
        raise StarUnsupportedError(f"{self.name} has no star operation")

    def leq(self, x, y) -> bool:
        return self.add(x, y) == y

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    @property
    def top(self):
        return None

    # -- enumeration and naming ----------------------------------------

    def elements(self):
        raise NotImplementedError(f"{self.name} cannot enumerate its elements")

    def size(self) -> Optional[int]:
        return None

    def sample(self, rng):
        raise NotImplementedError

    def el_name(self, x) -> str:
        return str(x)

    # aliases so domain-generic code can treat handles and table-backed
    # domain structures uniformly
    def el_add(self, x, y):
        return self.add(x, y)

    def el_mul(self, x, y):
        return self.mul(x, y)

    def el_star(self, x):
        return self.star(x)

    def el_leq(self, x, y):
        return self.leq(x, y)

    @property
    def el_zero(self):
        return self.zero

    @property
    def el_one(self):
        return self.one

    @property
    def el_top(self):
        return self.top

    def declared_tests(self):
        """(members, compl) in model representation, or None if undeclared."""
        return None

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


# ---------------------------------------------------------------------------
# the five printed finite semirings


def _tables(carrier, add_rows, mul_rows, star_row, zero, one):
    return dict(
        carrier=carrier,
        add=add_rows,
        mul=mul_rows,
        star=star_row,
        zero=zero,
        one=one,
    )


_CONWAY = {
    # two-element Boolean semiring
    "A2": _tables(
        ("0", "1"),
        [[0, 1], [1, 1]],
        [[0, 0], [0, 1]],
        [1, 1],
        zero=0,
        one=1,
    ),
    # three elements ordered 0 <= 1 <= a; a absorbs under +
    "A3_1": _tables(
        ("0", "a", "1"),
        [[0, 1, 2], [1, 1, 1], [2, 1, 2]],
        [[0, 0, 0], [0, 1, 1], [0, 1, 2]],
        [2, 1, 2],
        zero=0,
        one=2,
    ),
    # chain 0 <= a <= 1 with a nilpotent: a.a = 0
    "A3_2": _tables(
        ("0", "a", "1"),
        [[0, 1, 2], [1, 1, 2], [2, 2, 2]],
        [[0, 0, 0], [0, 0, 1], [0, 1, 2]],
        [2, 2, 2],
        zero=0,
        one=2,
    ),
    # like A3_2 except a.a = a
    "A3_3": _tables(
        ("0", "a", "1"),
        [[0, 1, 2], [1, 1, 2], [2, 2, 2]],
        [[0, 0, 0], [0, 1, 1], [0, 1, 2]],
        [2, 2, 2],
        zero=0,
        one=2,
    ),
    # chain 0 <= a <= 1 <= b with top b and a.a = 0
    "A4_1": _tables(
        ("0", "a", "1", "b"),
        [[0, 1, 2, 3], [1, 1, 2, 3], [2, 2, 2, 3], [3, 3, 3, 3]],
        [[0, 0, 0, 0], [0, 0, 1, 1], [0, 1, 2, 3], [0, 1, 3, 3]],
        [2, 2, 2, 3],
        zero=0,
        one=2,
    ),
}


def conway_names() -> tuple[str, ...]:
    return tuple(_CONWAY)


def conway_model(name: str) -> FiniteSemiring:
    """One of the five small builtin semirings, by name (A2, A3_1, ... A4_1)."""
    key = name.strip().upper()
    if key not in _CONWAY:
        raise ValueError(f"unknown builtin model {name!r}; choose from {', '.join(_CONWAY)}")
    t = _CONWAY[key]
    return FiniteSemiring(
        t["carrier"], t["add"], t["mul"], t["zero"], t["one"], star=t["star"], name=key
    )


# ---------------------------------------------------------------------------
# finite binary relations


@dataclass(frozen=True)
class Relation:
    """Binary relation on {1..n}, stored as per-row successor bitmasks.

    Rows are 0-based internally; the public pair interface is 1-based.
    """

    n: int
    rows: tuple[int, ...]

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Relation":
        rows = [0] * n
        for i, j in pairs:
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"pair ({i},{j}) outside 1..{n}")
            rows[i - 1] |= 1 << (j - 1)
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Relation":
        return cls(n, (0,) * n)

    @classmethod
    def identity(cls, n: int) -> "Relation":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def full(cls, n: int) -> "Relation":
        m = (1 << n) - 1
        return cls(n, (m,) * n)

    def pairs(self) -> frozenset:
        out = []
        for i, row in enumerate(self.rows):
            j = 0
            while row:
                if row & 1:
                    out.append((i + 1, j + 1))
                row >>= 1
                j += 1
        return frozenset(out)

    def union(self, other: "Relation") -> "Relation":
        self._check(other)
        return Relation(self.n, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def compose(self, other: "Relation") -> "Relation":
        self._check(other)
        rows = []
        for row in self.rows:
            acc = 0
            j = 0
            r = row
            while r:
                if r & 1:
                    acc |= other.rows[j]
                r >>= 1
                j += 1
            rows.append(acc)
        return Relation(self.n, tuple(rows))

    def transpose(self) -> "Relation":
        rows = [0] * self.n
        for i, row in enumerate(self.rows):
            j = 0
            while row:
                if row & 1:
                    rows[j] |= 1 << i
                row >>= 1
                j += 1
        return Relation(self.n, tuple(rows))

    def star(self) -> "Relation":
        """Reflexive-transitive closure by repeated squaring."""
        acc = self.union(Relation.identity(self.n))
        while True:
            nxt = acc.compose(acc)
            if nxt == acc:
                return acc
            acc = nxt

    def leq(self, other: "Relation") -> bool:
        self._check(other)
        return all(a | b == b for a, b in zip(self.rows, other.rows))

    def _check(self, other: "Relation"):
        if self.n != other.n:
            raise ValueError("relations over different base sets")

    def __str__(self):
        ps = sorted(self.pairs())
        return "{" + ",".join(f"({i},{j})" for i, j in ps) + "}"


class RelModel(ModelHandle):
    """Relations on {1..n} with union, composition, closure and transpose.

    Doubles as a domain structure: tests are subsets of the base set
    (state bitmasks), with image/preimage computed directly on edges.
    """

    finite = True
    has_star = True

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("base set must be nonempty")
        self.n = n
        self.name = f"rel({n})"
        self._zero = Relation.empty(n)
        self._one = Relation.identity(n)
        self._top = Relation.full(n)
        self._full_mask = (1 << n) - 1
        # every relation model is a Kleene algebra with a local domain
        self.flags = {
            "d1": True,
            "d2": True,
            "dloc": True,
            "cd1": True,
            "cd2": True,
            "cdloc": True,
            "integral": n == 1,
        }

    # -- semiring ops ---------------------------------------------------

    def add(self, x: Relation, y: Relation) -> Relation:
        return x.union(y)

    def mul(self, x: Relation, y: Relation) -> Relation:
        return x.compose(y)

    def star(self, x: Relation) -> Relation:
        return x.star()

    def conv(self, x: Relation) -> Relation:
        return x.transpose()

    def leq(self, x: Relation, y: Relation) -> bool:
        return x.leq(y)

    @property
    def zero(self) -> Relation:
        return self._zero

    @property
    def one(self) -> Relation:
        return self._one

    @property
    def top(self) -> Relation:
        return self._top

    def elements(self):
        if self.n > 4:
            raise ValueError(f"rel({self.n}) has 2^{self.n * self.n} elements; enumerate only n <= 4")
        bits = self.n * self.n
        for mask in range(1 << bits):
            yield self._from_mask(mask)

    def size(self) -> int:
        return 1 << (self.n * self.n)

    def _from_mask(self, mask: int) -> Relation:
        full = self._full_mask
        return Relation(self.n, tuple((mask >> (i * self.n)) & full for i in range(self.n)))

    def sample(self, rng) -> Relation:
        return self._from_mask(rng.getrandbits(self.n * self.n))

    def el_name(self, x: Relation) -> str:
        return str(x)

    # -- the test algebra: subsets of the base set ----------------------

    @property
    def test_zero(self) -> int:
        return 0

    @property
    def test_one(self) -> int:
        return self._full_mask

    def test_members(self) -> list[int]:
        if self.n > 16:
            raise ValueError(f"2^{self.n} tests is too many to enumerate")
        return list(range(1 << self.n))

    def test_count(self) -> int:
        return 1 << self.n

    def sample_test(self, rng) -> int:
        return rng.getrandbits(self.n)

    def test_atoms(self) -> list[int]:
        return [1 << i for i in range(self.n)]

    def atoms_below(self, p: int) -> list[int]:
        return [1 << i for i in range(self.n) if p >> i & 1]

    def test_join(self, p: int, q: int) -> int:
        return p | q

    def test_meet(self, p: int, q: int) -> int:
        return p & q

    def test_compl(self, p: int) -> int:
        return p ^ self._full_mask

    def test_leq(self, p: int, q: int) -> bool:
        return p | q == q

    def test_name(self, p: int) -> str:
        return "{" + ",".join(str(i + 1) for i in range(self.n) if p >> i & 1) + "}"

    def test_from_states(self, states: Iterable[int]) -> int:
        mask = 0
        for s in states:
            if not 1 <= s <= self.n:
                raise ValueError(f"state {s} outside 1..{self.n}")
            mask |= 1 << (s - 1)
        return mask

    def test_states(self, p: int) -> list[int]:
        return [i + 1 for i in range(self.n) if p >> i & 1]

    def embed(self, p: int) -> Relation:
        """The subidentity relation {(i,i) : i in p}."""
        return Relation(self.n, tuple((1 << i) if p >> i & 1 else 0 for i in range(self.n)))

    # -- domain surface --------------------------------------------------

    def dom(self, a: Relation) -> int:
        mask = 0
        for i, row in enumerate(a.rows):
            if row:
                mask |= 1 << i
        return mask

    def cod(self, a: Relation) -> int:
        mask = 0
        for row in a.rows:
            mask |= row
        return mask

    def preimage(self, a: Relation, p: int) -> int:
        """States with at least one a-edge into p."""
        mask = 0
        for i, row in enumerate(a.rows):
            if row & p:
                mask |= 1 << i
        return mask

    def image(self, p: int, a: Relation) -> int:
        """States reachable from p by one a-edge."""
        mask = 0
        for i, row in enumerate(a.rows):
            if p >> i & 1:
                mask |= row
        return mask

    def declared_tests(self):
        masks = self.test_members()
        members = [self.embed(p) for p in masks]
        return members, {self.embed(p): self.embed(self.test_compl(p)) for p in masks}


def rel_model(n: int) -> RelModel:
    return RelModel(n)


@lru_cache(maxsize=None)
def rel_semiring(n: int) -> FiniteSemiring:
    """All relations on {1..n} as one dense-table semiring (n <= 3).

    Element index equals the n*n-bit adjacency mask, row-major; this keeps
    add a plain bitwise-or table.
    """
    if not 1 <= n <= 3:
        raise ValueError("rel_semiring materializes 2^(n^2) elements; supported for n <= 3")
    model = RelModel(n)
    size = 1 << (n * n)
    full = (1 << n) - 1
    masks = np.arange(size, dtype=np.int64)

    # per-relation successor rows: rows[m, i] = successors of state i
    rows = np.empty((size, n), dtype=np.int64)
    for i in range(n):
        rows[:, i] = (masks >> (i * n)) & full

    # ors[m, s] = union of rows[m, j] over j in subset s
    ors = np.zeros((size, 1 << n), dtype=np.int64)
    for s in range(1, 1 << n):
        low = s & -s
        ors[:, s] = ors[:, s ^ low] | rows[:, low.bit_length() - 1]

    add = np.bitwise_or.outer(masks, masks)
    mul = np.zeros((size, size), dtype=np.int64)
    for i in range(n):
        # row i of x;y is the union of y's rows over x's successors of i
        mul |= ors[:, rows[:, i]].T << (i * n)

    star = np.empty(size, dtype=np.int64)
    conv = np.empty(size, dtype=np.int64)
    for m in range(size):
        r = model._from_mask(int(m))
        star[m] = _rel_mask(r.star())
        conv[m] = _rel_mask(r.transpose())

    names = [str(model._from_mask(int(m))) for m in range(size)]
    return FiniteSemiring(
        names, add, mul, zero=0, one=_rel_mask(model.one), star=star, conv=conv, name=f"rel({n})"
    )


def _rel_mask(r: Relation) -> int:
    mask = 0
    for i, row in enumerate(r.rows):
        mask |= row << (i * r.n)
    return mask


def rel_tests(n: int) -> TestAlgebra:
    """The full powerset test algebra of rel_semiring(n): subidentities."""
    S = rel_semiring(n)
    model = RelModel(n)
    members = [_rel_mask(model.embed(p)) for p in range(1 << n)]
    compl = {
        _rel_mask(model.embed(p)): _rel_mask(model.embed(p ^ ((1 << n) - 1)))
        for p in range(1 << n)
    }
    return TestAlgebra(S, members, compl)


# ---------------------------------------------------------------------------
# matrices over a star semiring


def _mat_add(base: FiniteSemiring, x, y):
    return tuple(tuple(int(base.add[a, b]) for a, b in zip(rx, ry)) for rx, ry in zip(x, y))


def _mat_mul(base: FiniteSemiring, x, y):
    q, r, c = len(x), len(y), len(y[0])
    out = []
    for i in range(q):
        row = []
        for j in range(c):
            acc = base.zero
            for k in range(r):
                acc = int(base.add[acc, base.mul[x[i][k], y[k][j]]])
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def matrix_star(base: FiniteSemiring, mat, split: Optional[int] = None):
    """Star of a square matrix by 2x2 block recursion.

    The matrix is partitioned into blocks [[a, b], [c, d]] with a square of
    side `split` (default 1); then with f = a + b d* c the star is
    [[f*, f* b d*], [d* c f*, d* + d* c f* b d*]], recursing into the blocks.
    Any split gives the same result; the default makes outputs deterministic.
    """
    if base.star is None:
        raise StarUnsupportedError(f"{base.name} has no star operation")
    mat = tuple(tuple(int(v) for v in row) for row in mat)
    q = len(mat)
    if any(len(row) != q for row in mat):
        raise ValueError("matrix star needs a square matrix")
    if q == 0:
        return ()
    if q == 1:
        return ((int(base.star[mat[0][0]]),),)
    s = 1 if split is None else int(split)
    if not 1 <= s < q:
        raise ValueError(f"split must be in 1..{q - 1}")

    a = tuple(row[:s] for row in mat[:s])
    b = tuple(row[s:] for row in mat[:s])
    c = tuple(row[:s] for row in mat[s:])
    d = tuple(row[s:] for row in mat[s:])

    ds = matrix_star(base, d)
    f = _mat_add(base, a, _mat_mul(base, b, _mat_mul(base, ds, c)))
    fs = matrix_star(base, f)
    top_r = _mat_mul(base, fs, _mat_mul(base, b, ds))
    bot_l = _mat_mul(base, ds, _mat_mul(base, c, fs))
    bot_r = _mat_add(base, ds, _mat_mul(base, bot_l, _mat_mul(base, b, ds)))
    return tuple(
        tuple(fs[i] + top_r[i]) for i in range(s)
    ) + tuple(tuple(bot_l[i - s] + bot_r[i - s]) for i in range(s, q))


class MatrixModel(ModelHandle):
    """q x q matrices over a finite base semiring, as a ModelHandle."""

    has_star = True

    def __init__(self, base: FiniteSemiring, q: int):
        if q < 1:
            raise ValueError("need at least 1x1 matrices")
        self.base = base
        self.q = q
        self.name = f"mat({q},{base.name})"
        self.has_star = base.star is not None
        z, o = base.zero, base.one
        self._zero = tuple((z,) * q for _ in range(q))
        self._one = tuple(tuple(o if i == j else z for j in range(q)) for i in range(q))

    def add(self, x, y):
        return _mat_add(self.base, x, y)

    def mul(self, x, y):
        return _mat_mul(self.base, x, y)

    def star(self, x):
        if self.base.star is None:
            raise StarUnsupportedError(f"{self.base.name} has no star operation")
        return matrix_star(self.base, x)

    def leq(self, x, y) -> bool:
        # natural order is componentwise
        return self.add(x, y) == y

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    @property
    def top(self):
        t = self.base.top()
        if t is None:
            return None
        return tuple((t,) * self.q for _ in range(self.q))

    def elements(self):
        cells = self.q * self.q
        if self.base.n ** cells > 1 << 20:
            raise ValueError(f"{self.name} is too large to enumerate")
        for combo in itertools.product(range(self.base.n), repeat=cells):
            yield tuple(combo[i * self.q : (i + 1) * self.q] for i in range(self.q))

    def size(self) -> int:
        return self.base.n ** (self.q * self.q)

    def sample(self, rng):
        return tuple(
            tuple(rng.randrange(self.base.n) for _ in range(self.q)) for _ in range(self.q)
        )

    def el_name(self, x) -> str:
        return "[" + "; ".join(" ".join(self.base.element_name(v) for v in row) for row in x) + "]"


def matrix_semiring(base: FiniteSemiring, q: int) -> MatrixModel:
    return MatrixModel(base, q)


# ---------------------------------------------------------------------------
# numeric models


class TropicalModel(ModelHandle):
    """Naturals with infinity; add = min, mul = +, star constantly 0.

    The natural order is reversed numeric order: smaller costs are larger
    in the semilattice, infinity is the zero.
    """

    name = "tropical"
    finite = False
    has_star = True

    def __init__(self, sample_bound: int = 10**6):
        self.sample_bound = sample_bound
        self.flags = {"d1": True, "d2": True, "dloc": True}

    def add(self, x, y):
        return min(x, y)

    def mul(self, x, y):
        return x + y

    def star(self, x):
        return 0

    @property
    def zero(self):
        return math.inf

    @property
    def one(self):
        return 0

    @property
    def top(self):
        return 0

    def sample(self, rng):
        if rng.random() < 0.1:
            return math.inf
        return rng.randrange(self.sample_bound)

    def el_name(self, x) -> str:
        return "inf" if x == math.inf else str(x)

    # closed-form domain: everything except the zero is total
    def dom(self, a):
        return math.inf if a == math.inf else 0

    def cod(self, a):
        return self.dom(a)

    def declared_tests(self):
        members = [math.inf, 0]
        return members, {math.inf: 0, 0: math.inf}


class MaxPlusModel(ModelHandle):
    """Naturals with minus infinity; add = max, mul = +; no star exists."""

    name = "maxplus"
    finite = False
    has_star = False

    def __init__(self, sample_bound: int = 10**6):
        self.sample_bound = sample_bound

    def add(self, x, y):
        return max(x, y)

    def mul(self, x, y):
        return x + y

    def star(self, x):
        raise StarUnsupportedError(
            "max-plus has no star: the powers of any positive element are unbounded"
        )

    @property
    def zero(self):
        return -math.inf

    @property
    def one(self):
        return 0

    def sample(self, rng):
        if rng.random() < 0.1:
            return -math.inf
        return rng.randrange(self.sample_bound)

    def el_name(self, x) -> str:
        return "-inf" if x == -math.inf else str(x)

    def declared_tests(self):
        members = [-math.inf, 0]
        return members, {-math.inf: 0, 0: -math.inf}


def tropical_model(sample_bound: int = 10**6) -> TropicalModel:
    return TropicalModel(sample_bound)


def maxplus_model(sample_bound: int = 10**6) -> MaxPlusModel:
    return MaxPlusModel(sample_bound)


# ---------------------------------------------------------------------------
# bounded language and path models


class LanguageModel(ModelHandle):
    """Sets of words of length <= maxlen; concatenation discards overlong words.

    Truncation is a quotient of the full language semiring, so the finite
    structure still satisfies all i-semiring laws; the true unbounded star
    is not represented, star here is the stabilized union of truncated powers.
    """

    finite = True
    has_star = True

    def __init__(self, alphabet: Sequence[str], maxlen: int):
        letters = tuple(str(c) for c in alphabet)
        if any(len(c) != 1 for c in letters):
            raise ValueError("alphabet must consist of single characters")
        if len(set(letters)) != len(letters):
            raise ValueError("alphabet letters must be distinct")
        if maxlen < 0:
            raise ValueError("maxlen must be >= 0")
        self.alphabet = letters
        self.maxlen = maxlen
        self.name = f"lang({''.join(letters)},{maxlen})"
        self.words = tuple(
            "".join(w)
            for k in range(maxlen + 1)
            for w in itertools.product(letters, repeat=k)
        )

    def add(self, x: frozenset, y: frozenset) -> frozenset:
        return x | y

    def mul(self, x: frozenset, y: frozenset) -> frozenset:
        return frozenset(u + v for u in x for v in y if len(u) + len(v) <= self.maxlen)

    def star(self, x: frozenset) -> frozenset:
        acc = self.one
        while True:
            nxt = acc | self.mul(acc, x)
            if nxt == acc:
                return acc
            acc = nxt

    def leq(self, x, y) -> bool:
        return x <= y

    @property
    def zero(self) -> frozenset:
        return frozenset()

    @property
    def one(self) -> frozenset:
        return frozenset({""})

    @property
    def top(self) -> frozenset:
        return frozenset(self.words)

    def elements(self):
        if len(self.words) > 16:
            raise ValueError(f"{self.name} has 2^{len(self.words)} elements; too many")
        for combo in itertools.chain.from_iterable(
            itertools.combinations(self.words, k) for k in range(len(self.words) + 1)
        ):
            yield frozenset(combo)

    def size(self) -> int:
        return 1 << len(self.words)

    def sample(self, rng) -> frozenset:
        return frozenset(w for w in self.words if rng.random() < 0.5)

    def el_name(self, x) -> str:
        return "{" + ",".join("eps" if w == "" else w for w in sorted(x)) + "}"

    def declared_tests(self):
        # the only subidentities are the empty language and {epsilon}
        members = [self.zero, self.one]
        return members, {self.zero: self.one, self.one: self.zero}


def bounded_language_model(alphabet, maxlen: int) -> LanguageModel:
    return LanguageModel(alphabet, maxlen)


class PathModel(ModelHandle):
    """Sets of vertex sequences of length <= maxlen under the fusion product.

    Fusing s.x with y.t yields s.x.t when x = y and nothing otherwise; the
    empty sequence fuses only with itself.  The unit is all single vertices
    together with the empty sequence.
    """

    finite = True
    has_star = True

    def __init__(self, vertices: Sequence[str], maxlen: int):
        vs = tuple(str(v) for v in vertices)
        if len(set(vs)) != len(vs):
            raise ValueError("vertices must be distinct")
        if not vs:
            raise ValueError("need at least one vertex")
        if maxlen < 1:
            raise ValueError("maxlen must allow single-vertex paths")
        self.vertices = vs
        self.maxlen = maxlen
        self.name = f"path({''.join(vs)},{maxlen})"
        self.paths = tuple(
            p for k in range(maxlen + 1) for p in itertools.product(vs, repeat=k)
        )

    def _fuse(self, s: tuple, t: tuple) -> Optional[tuple]:
        if not s and not t:
            return ()
        if not s or not t:
            return None
        if s[-1] != t[0]:
            return None
        out = s + t[1:]
        return out if len(out) <= self.maxlen else None

    def add(self, x: frozenset, y: frozenset) -> frozenset:
        return x | y

    def mul(self, x: frozenset, y: frozenset) -> frozenset:
        acc = set()
        for s in x:
            for t in y:
                f = self._fuse(s, t)
                if f is not None:
                    acc.add(f)
        return frozenset(acc)

    def star(self, x: frozenset) -> frozenset:
        acc = self.one
        while True:
            nxt = acc | self.mul(acc, x)
            if nxt == acc:
                return acc
            acc = nxt

    def leq(self, x, y) -> bool:
        return x <= y

    @property
    def zero(self) -> frozenset:
        return frozenset()

    @property
    def one(self) -> frozenset:
        return frozenset({()} | {(v,) for v in self.vertices})

    @property
    def top(self) -> frozenset:
        return frozenset(self.paths)

    def elements(self):
        if len(self.paths) > 16:
            raise ValueError(f"{self.name} has 2^{len(self.paths)} elements; too many")
        for combo in itertools.chain.from_iterable(
            itertools.combinations(self.paths, k) for k in range(len(self.paths) + 1)
        ):
            yield frozenset(combo)

    def size(self) -> int:
        return 1 << len(self.paths)

    def sample(self, rng) -> frozenset:
        return frozenset(p for p in self.paths if rng.random() < 0.5)

    def el_name(self, x) -> str:
        return "{" + ",".join("eps" if not p else ".".join(p) for p in sorted(x)) + "}"

    def declared_tests(self):
        # subidentities: sets of single vertices, optionally with eps
        units = sorted(self.one, key=lambda p: (len(p), p))
        members = [frozenset(c) for k in range(len(units) + 1) for c in itertools.combinations(units, k)]
        compl = {m: self.one - m for m in members}
        return members, compl


def bounded_path_model(vertices, maxlen: int) -> PathModel:
    return PathModel(vertices, maxlen)


# ---------------------------------------------------------------------------
# predicate transformers


class TransformerModel(ModelHandle):
    """The maps p -> (a : p) induced by a domain structure's elements.

    Transformers are stored as tuples over test positions; join is
    pointwise, composition is map composition, star of a transformer is
    the transformer of a star of any source element inducing it.
    """

    finite = True
    has_star = True

    def __init__(self, D):
        if not getattr(D, "has_star", False):
            raise StarUnsupportedError("predicate transformers need a star on the source")
        self.D = D
        self.name = f"transformers({getattr(D, 'name', '')})"
        members = list(D.test_members())
        self.members = members
        pos = {p: i for i, p in enumerate(members)}
        self._pos = pos

        maps: list[tuple[int, ...]] = []
        source: list = []
        seen: dict[tuple[int, ...], int] = {}
        for a in D.elements():
            f = tuple(pos[D.preimage(a, p)] for p in members)
            if f not in seen:
                seen[f] = len(maps)
                maps.append(f)
                source.append(a)
        self.maps = tuple(maps)
        self.source = tuple(source)
        self._index = seen

        t = len(members)
        self._joinpos = tuple(
            tuple(pos[D.test_join(members[i], members[j])] for j in range(t)) for i in range(t)
        )

    def transformer_of(self, a) -> tuple[int, ...]:
        pos = self._pos
        return tuple(pos[self.D.preimage(a, p)] for p in self.members)

    def apply(self, f: tuple[int, ...], p: int) -> int:
        return self.members[f[self._pos[p]]]

    def add(self, f, g):
        jp = self._joinpos
        return tuple(jp[a][b] for a, b in zip(f, g))

    def mul(self, f, g):
        return tuple(f[i] for i in g)

    def star(self, f):
        a = self.source[self._index[f]]
        return self.transformer_of(self.D.el_star(a))

    def leq(self, f, g) -> bool:
        return self.add(f, g) == g

    @property
    def zero(self):
        return self.transformer_of(self.D.el_zero)

    @property
    def one(self):
        return self.transformer_of(self.D.el_one)

    def elements(self):
        return iter(self.maps)

    def size(self) -> int:
        return len(self.maps)

    def sample(self, rng):
        return self.maps[rng.randrange(len(self.maps))]

    def el_name(self, f) -> str:
        if f in self._index:
            return f"f[{self.D.el_name(self.source[self._index[f]])}]"
        return "f" + str(f)

    def declared_tests(self):
        D = self.D
        members = [self.transformer_of(D.embed(p)) for p in self.members]
        compl = {
            self.transformer_of(D.embed(p)): self.transformer_of(D.embed(D.test_compl(p)))
            for p in self.members
        }
        return members, compl

    def as_semiring(self) -> tuple[FiniteSemiring, TestAlgebra, tuple[int, ...]]:
        """Materialize to dense tables; returns (semiring, tests, source map)."""
        mat = materialize(self)
        src = tuple(self.source[i] for i in range(len(self.maps)))
        return mat.semiring, mat.tests, src


def predicate_transformer_model(D) -> TransformerModel:
    return TransformerModel(D)


# ---------------------------------------------------------------------------
# materialization and sampled checking


@dataclass
class MaterializedModel:
    semiring: FiniteSemiring
    tests: Optional[TestAlgebra]
    to_index: dict
    from_index: list


def materialize(handle: ModelHandle, max_size: int = 4096) -> MaterializedModel:
    """Dense-table snapshot of a finite handle, for exhaustive checking."""
    if not handle.finite:
        raise ValueError(f"{handle.name} is infinite; cannot materialize")
    size = handle.size()
    if size is not None and size > max_size:
        raise ValueError(f"{handle.name} has {size} elements, above the budget of {max_size}")
    elems = list(handle.elements())
    if len(elems) > max_size:
        raise ValueError(f"{handle.name} has {len(elems)} elements, above the budget of {max_size}")
    index = {e: i for i, e in enumerate(elems)}
    n = len(elems)

    add = [[index[handle.add(x, y)] for y in elems] for x in elems]
    mul = [[index[handle.mul(x, y)] for y in elems] for x in elems]
    star = None
    if handle.has_star:
        star = [index[handle.star(x)] for x in elems]
    conv = None
    if hasattr(handle, "conv"):
        conv = [index[handle.conv(x)] for x in elems]

    names = []
    used = set()
    for e in elems:
        nm = handle.el_name(e)
        if nm in used:
            nm = f"{nm}#{len(used)}"
        used.add(nm)
        names.append(nm)

    S = FiniteSemiring(
        names,
        add,
        mul,
        zero=index[handle.zero],
        one=index[handle.one],
        star=star,
        conv=conv,
        name=handle.name,
    )
    tests = None
    declared = handle.declared_tests()
    if declared is not None:
        members, compl = declared
        tests = TestAlgebra(S, [index[m] for m in members], {index[k]: index[v] for k, v in compl.items()})
    return MaterializedModel(S, tests, index, elems)


def check_sampled_laws(handle: ModelHandle, samples: int = 1000, rng=None, include_star: bool = False) -> list[LawReport]:
    """i-semiring laws on random triples; the only option for infinite models."""
    rng = rng or random.Random(0)
    reports = []
    fails: dict[str, Optional[dict]] = {}

    def note(law, ok, a, b, c):
        if law not in fails:
            fails[law] = None
        if not ok and fails[law] is None:
            fails[law] = {
                "a": handle.el_name(a),
                "b": handle.el_name(b),
                "c": handle.el_name(c),
            }

    z, o = handle.zero, handle.one
    for _ in range(samples):
        a, b, c = handle.sample(rng), handle.sample(rng), handle.sample(rng)
        note("add-commutative", handle.add(a, b) == handle.add(b, a), a, b, c)
        note("add-associative", handle.add(handle.add(a, b), c) == handle.add(a, handle.add(b, c)), a, b, c)
        note("add-idempotent", handle.add(a, a) == a, a, b, c)
        note("add-identity", handle.add(a, z) == a, a, b, c)
        note("mul-associative", handle.mul(handle.mul(a, b), c) == handle.mul(a, handle.mul(b, c)), a, b, c)
        note("mul-identity", handle.mul(a, o) == a and handle.mul(o, a) == a, a, b, c)
        note(
            "left-distributive",
            handle.mul(a, handle.add(b, c)) == handle.add(handle.mul(a, b), handle.mul(a, c)),
            a, b, c,
        )
        note(
            "right-distributive",
            handle.mul(handle.add(a, b), c) == handle.add(handle.mul(a, c), handle.mul(b, c)),
            a, b, c,
        )
        note("annihilation", handle.mul(a, z) == z and handle.mul(z, a) == z, a, b, c)
        if include_star and handle.has_star:
            st = handle.star(a)
            note("star-left-unfold", handle.leq(handle.add(o, handle.mul(a, st)), st), a, b, c)
            note("star-right-unfold", handle.leq(handle.add(o, handle.mul(st, a)), st), a, b, c)

    for law, witness in fails.items():
        reports.append(LawReport(law, witness is None, witness, note=f"sampled ({samples})"))
    return reports
