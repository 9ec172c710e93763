"""Model zoo: relations, matrices, tropical/max-plus, languages, paths,
predicate transformers, and the materialization bridge."""

import math
import random

import hypothesis
import hypothesis.strategies as strat
import pytest

from kadlib.algebra import (
    TestAlgebra,
    all_hold,
    check_isemiring,
    check_kleene,
    check_test_algebra,
    failures,
)
from kadlib.models import (
    Relation,
    StarUnsupportedError,
    bounded_language_model,
    bounded_path_model,
    check_sampled_laws,
    conway_model,
    conway_names,
    materialize,
    matrix_semiring,
    matrix_star,
    maxplus_model,
    predicate_transformer_model,
    rel_model,
    rel_semiring,
    rel_tests,
    tropical_model,
)


# -- naming and lookup --------------------------------------------------------


def test_builtin_names():
    assert conway_names() == ("A2", "A3_1", "A3_2", "A3_3", "A4_1")
    assert conway_model("a3_2").name == "A3_2"  # case-insensitive
    with pytest.raises(ValueError):
        conway_model("A5")


# -- binary relations ---------------------------------------------------------


def pairs_of(rel):
    return set(rel.pairs())


def compose_oracle(n, x, y):
    return {(i, k) for i, j in x for j2, k in y if j == j2}


def star_oracle(n, x):
    acc = {(i, i) for i in range(1, n + 1)}
    changed = True
    while changed:
        changed = False
        for i, j in list(acc):
            for j2, k in x:
                if j == j2 and (i, k) not in acc:
                    acc.add((i, k))
                    changed = True
    return acc


def random_pairs(rng, n, density=0.3):
    return {
        (i, j) for i in range(1, n + 1) for j in range(1, n + 1) if rng.random() < density
    }


def test_relation_basics():
    r = Relation.from_pairs(3, [(1, 2), (2, 3)])
    assert pairs_of(r) == {(1, 2), (2, 3)}
    assert str(r) == "{(1,2),(2,3)}"
    assert str(Relation.empty(3)) == "{}"
    assert pairs_of(Relation.identity(2)) == {(1, 1), (2, 2)}
    assert len(pairs_of(Relation.full(2))) == 4
    assert r.leq(Relation.full(3)) and not Relation.full(3).leq(r)


def test_relation_bounds_checked():
    with pytest.raises(ValueError):
        Relation.from_pairs(2, [(0, 1)])
    with pytest.raises(ValueError):
        Relation.from_pairs(2, [(1, 3)])


def test_relation_ops_against_set_oracle():
    rng = random.Random(42)
    for _ in range(50):
        n = rng.randrange(1, 7)
        xp, yp = random_pairs(rng, n), random_pairs(rng, n)
        x, y = Relation.from_pairs(n, xp), Relation.from_pairs(n, yp)
        assert pairs_of(x.compose(y)) == compose_oracle(n, xp, yp)
        assert pairs_of(x.union(y)) == xp | yp
        assert pairs_of(x.transpose()) == {(j, i) for i, j in xp}
        assert pairs_of(x.star()) == star_oracle(n, xp)


def test_mismatched_sizes_rejected():
    with pytest.raises(ValueError):
        Relation.identity(2).compose(Relation.identity(3))


# -- the exhaustive relation semirings ---------------------------------------


def test_rel_semiring_tables_match_relation_ops():
    # element index is the row-major adjacency mask, so tables can be
    # cross-checked pointwise against the Relation implementation
    for n in (1, 2):
        S = rel_semiring(n)
        D = rel_model(n)
        rels = list(D.elements())
        from kadlib.models import _rel_mask

        for x in rels:
            i = _rel_mask(x)
            assert S.element_name(i) == str(x)
            assert int(S.star[i]) == _rel_mask(x.star())
            assert int(S.conv[i]) == _rel_mask(x.transpose())
            for y in rels:
                j = _rel_mask(y)
                assert int(S.add[i, j]) == _rel_mask(x.union(y))
                assert int(S.mul[i, j]) == _rel_mask(x.compose(y))


def test_rel_semiring_3_spot_checks():
    S = rel_semiring(3)
    from kadlib.models import _rel_mask

    rng = random.Random(9)
    D = rel_model(3)
    for _ in range(60):
        x, y = D.sample(rng), D.sample(rng)
        assert int(S.mul[_rel_mask(x), _rel_mask(y)]) == _rel_mask(x.compose(y))
        assert int(S.star[_rel_mask(x)]) == _rel_mask(x.star())


def test_rel_semiring_passes_laws():
    for n in (1, 2):
        S = rel_semiring(n)
        assert all_hold(check_isemiring(S))
        assert all_hold(check_kleene(S))
        assert all_hold(check_test_algebra(rel_tests(n)))


def test_rel_semiring_size_guard():
    with pytest.raises(ValueError):
        rel_semiring(4)


def test_rel_model_surfaces():
    D = rel_model(3)
    r = Relation.from_pairs(3, [(1, 2), (2, 3)])
    assert D.test_name(D.dom(r)) == "{1,2}"
    assert D.test_name(D.cod(r)) == "{2,3}"
    assert D.test_name(D.preimage(r, D.test_from_states([3]))) == "{2}"
    assert D.test_name(D.image(D.test_from_states([1]), r)) == "{2}"
    assert pairs_of(D.embed(D.test_from_states([1, 3]))) == {(1, 1), (3, 3)}
    assert D.test_states(D.test_from_states([2, 3])) == [2, 3]
    with pytest.raises(ValueError):
        D.test_from_states([4])


def test_rel_model_dom_cod_oracle():
    rng = random.Random(5)
    D = rel_model(5)
    for _ in range(40):
        ps = random_pairs(rng, 5)
        r = Relation.from_pairs(5, ps)
        assert set(D.test_states(D.dom(r))) == {i for i, _ in ps}
        assert set(D.test_states(D.cod(r))) == {j for _, j in ps}
        tgt = {s for s in range(1, 6) if rng.random() < 0.4}
        pre = D.preimage(r, D.test_from_states(tgt))
        assert set(D.test_states(pre)) == {i for i, j in ps if j in tgt}
        img = D.image(D.test_from_states(tgt), r)
        assert set(D.test_states(img)) == {j for i, j in ps if i in tgt}


def test_rel_model_elements_guard():
    with pytest.raises(ValueError):
        next(rel_model(5).elements())
    assert rel_model(5).size() == 2 ** 25


def test_rel_test_algebra_atoms():
    D = rel_model(3)
    atoms = D.test_atoms()
    assert [D.test_name(a) for a in atoms] == ["{1}", "{2}", "{3}"]
    assert D.atoms_below(D.test_from_states([1, 3])) == [
        D.test_from_states([1]),
        D.test_from_states([3]),
    ]


# -- matrices ------------------------------------------------------------------


def bool_mat_star_oracle(m, q):
    # union of powers m^0 .. m^q, enough for boolean q x q matrices
    acc = [[1 if i == j else 0 for j in range(q)] for i in range(q)]
    cur = [row[:] for row in acc]
    for _ in range(q):
        cur = [
            [max(min(cur[i][k], m[k][j]) for k in range(q)) for j in range(q)]
            for i in range(q)
        ]
        acc = [[max(acc[i][j], cur[i][j]) for j in range(q)] for i in range(q)]
    return acc


def test_matrix_star_against_powers_oracle():
    A2 = conway_model("A2")
    rng = random.Random(11)
    for _ in range(100):
        q = rng.randrange(1, 6)
        m = [[rng.randint(0, 1) for _ in range(q)] for _ in range(q)]
        got = matrix_star(A2, m)
        assert [list(row) for row in got] == bool_mat_star_oracle(m, q)


def test_matrix_star_split_independence():
    A2 = conway_model("A2")
    rng = random.Random(13)
    for _ in range(40):
        m = [[rng.randint(0, 1) for _ in range(3)] for _ in range(3)]
        s1 = matrix_star(A2, m, split=1)
        s2 = matrix_star(A2, m, split=2)
        assert s1 == s2 == matrix_star(A2, m)


@hypothesis.given(strat.lists(strat.lists(strat.integers(0, 1), min_size=4, max_size=4), min_size=4, max_size=4))
def test_matrix_star_unfolds(rows):
    # m* = I + m m* entrywise over the boolean base
    A2 = conway_model("A2")
    s = matrix_star(A2, rows)
    q = 4
    prod = [
        [max(min(rows[i][k], s[k][j]) for k in range(q)) for j in range(q)]
        for i in range(q)
    ]
    unfold = [
        [max(1 if i == j else 0, prod[i][j]) for j in range(q)] for i in range(q)
    ]
    assert [list(r) for r in s] == unfold


def test_matrix_star_shape_and_capability_errors():
    A2 = conway_model("A2")
    with pytest.raises(ValueError):
        matrix_star(A2, [[0, 1], [1, 0], [0, 0]])
    starless = rel_semiring(1)
    no_star = type(starless)(
        [starless.element_name(i) for i in range(starless.n)],
        starless.add,
        starless.mul,
        starless.zero,
        starless.one,
    )
    with pytest.raises(StarUnsupportedError):
        matrix_star(no_star, [[0]])


def test_matrix_semiring_is_a_kleene_algebra():
    M = matrix_semiring(conway_model("A2"), 2)
    mat = materialize(M)
    assert mat.semiring.n == 16
    assert all_hold(check_isemiring(mat.semiring))
    assert all_hold(check_kleene(mat.semiring))


def test_matrix_star_over_nonboolean_base():
    # base A3_1 has 1 <= a, so the star of [[a]] is a*= a
    S = conway_model("A3_1")
    a = S.index("a")
    assert matrix_star(S, [[a]]) == ((int(S.star[a]),),)


# -- tropical and max-plus ------------------------------------------------------


def test_tropical_basics():
    T = tropical_model()
    inf = math.inf
    assert T.add(3.0, 5.0) == 3.0
    assert T.mul(3.0, 5.0) == 8.0
    assert T.zero == inf and T.one == 0
    assert T.mul(inf, 5.0) == inf  # annihilation
    assert T.star(17.0) == 0 and T.star(0.0) == 0 and T.star(inf) == 0
    assert T.dom(inf) == inf and T.dom(3.0) == 0


def test_tropical_sampled_laws():
    rep = check_sampled_laws(tropical_model(), samples=800, rng=random.Random(2), include_star=True)
    assert all_hold(rep), [str(r) for r in failures(rep)]


def test_maxplus_has_no_star():
    MP = maxplus_model()
    with pytest.raises(StarUnsupportedError):
        MP.star(1.0)
    assert MP.add(3, 5) == 5 and MP.mul(3, 5) == 8
    assert MP.zero == -math.inf and MP.one == 0


def test_maxplus_sampled_laws():
    rep = check_sampled_laws(maxplus_model(), samples=800, rng=random.Random(4))
    assert all_hold(rep), [str(r) for r in failures(rep)]


# -- bounded languages and paths -------------------------------------------------


def test_language_model_basics():
    L = bounded_language_model("ab", 2)
    assert L.size() == 128  # seven words of length <= 2, all subsets
    assert L.one == frozenset([""])
    assert L.zero == frozenset()
    assert sorted(L.star(frozenset(["a"]))) == ["", "a", "aa"]
    assert L.el_name(L.one) == "{eps}"
    # truncating concatenation drops overlong words
    assert L.mul(frozenset(["ab"]), frozenset(["a"])) == frozenset()


def test_language_model_materialized_laws():
    M = materialize(bounded_language_model("ab", 2), max_size=200)
    assert all_hold(check_isemiring(M.semiring))
    assert all_hold(check_kleene(M.semiring))
    assert all_hold(check_test_algebra(M.tests))


def test_path_model_fusion():
    P = bounded_path_model("xy", 3)
    xy = frozenset([("x", "y")])
    yx = frozenset([("y", "x")])
    assert P.mul(xy, yx) == frozenset([("x", "y", "x")])
    assert P.mul(xy, xy) == frozenset()  # endpoints do not match
    assert P.mul(P.one, xy) == xy and P.mul(xy, P.one) == xy
    # vertex-length bound: fusing two 3-vertex paths would exceed it
    P2 = bounded_path_model("xy", 2)
    assert P2.mul(xy, yx) == frozenset()


def test_path_model_materialized_laws():
    M = materialize(bounded_path_model("xy", 2), max_size=200)
    assert all_hold(check_isemiring(M.semiring))
    assert all_hold(check_test_algebra(M.tests))


# -- predicate transformers -------------------------------------------------------


@pytest.fixture(scope="module")
def transformers3():
    return predicate_transformer_model(rel_model(3))


def test_transformers_are_distinct(transformers3):
    TM = transformers3
    els = list(TM.elements())
    assert len(els) == 512
    assert len(set(els)) == 512  # the source model embeds injectively


def test_transformer_apply_matches_preimage(transformers3):
    TM = transformers3
    D = rel_model(3)
    rng = random.Random(6)
    for _ in range(50):
        a = D.sample(rng)
        f = TM.transformer_of(a)
        for p in D.test_members():
            assert TM.apply(f, p) == D.preimage(a, p)


def test_transformer_join_is_pointwise(transformers3):
    TM = transformers3
    rng = random.Random(7)
    D = rel_model(3)
    for _ in range(30):
        f, g = TM.sample(rng), TM.sample(rng)
        h = TM.add(f, g)
        for p in D.test_members():
            assert TM.apply(h, p) == D.test_join(TM.apply(f, p), TM.apply(g, p))


def test_transformer_mul_is_composition(transformers3):
    TM = transformers3
    rng = random.Random(8)
    D = rel_model(3)
    for _ in range(30):
        f, g = TM.sample(rng), TM.sample(rng)
        h = TM.mul(f, g)
        for p in D.test_members():
            assert TM.apply(h, p) == TM.apply(f, TM.apply(g, p))


def test_transformer_star_agrees_with_source(transformers3):
    TM = transformers3
    D = rel_model(3)
    for a in D.elements():
        assert TM.star(TM.transformer_of(a)) == TM.transformer_of(D.star(a))


def test_transformer_semiring_laws(transformers3):
    S, T, _src = transformers3.as_semiring()
    assert S.n == 512
    assert all_hold(check_isemiring(S))
    assert all_hold(check_test_algebra(T))


# -- materialization and sampled checking -----------------------------------------


def test_materialize_size_guard():
    with pytest.raises(ValueError):
        materialize(rel_model(4), max_size=100)


def test_materialize_round_trips_operations():
    D = rel_model(2)
    M = materialize(D)
    rng = random.Random(3)
    for _ in range(40):
        x, y = D.sample(rng), D.sample(rng)
        i, j = M.to_index[x], M.to_index[y]
        assert M.from_index[int(M.semiring.add[i, j])] == D.add(x, y)
        assert M.from_index[int(M.semiring.mul[i, j])] == D.mul(x, y)
        assert M.from_index[int(M.semiring.star[i])] == D.star(x)


def test_check_sampled_laws_on_large_relation_model():
    rep = check_sampled_laws(rel_model(6), samples=300, rng=random.Random(1), include_star=True)
    assert all_hold(rep), [str(r) for r in failures(rep)]
