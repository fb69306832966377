import itertools
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from finmag.errors import (
    DiameterExceedsTwo,
    EmptySpace,
    InfiniteDistanceUnsupported,
    NegativeOrZeroOffDiagonal,
    NonpositiveScale,
    NonzeroDiagonal,
    NotHomogeneous,
    NotSymmetric,
    SizeCapExceeded,
    TriangleViolation,
    ValidationError,
)
from finmag.genfun import GenPoly
from finmag.spaces import (
    Graph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    from_graph,
    is_homogeneous,
    is_isometric,
    join,
    l1_power,
    l1_product,
    n_profile,
    negative_type_check,
    one_point,
    path_graph,
    sample_random_metric,
    scale,
    schoenberg_check,
    star_graph,
    three_point_space,
    uniform_space,
    validate_metric,
    willerton_graph,
)

from conftest import metric_spaces
from oracles import planar_embedding_3pt

INF = math.inf


# -- validation ---------------------------------------------------------------

def test_valid_examples():
    assert one_point().n == 1
    assert validate_metric([[0, 1], [1, 0]]).dist == ((0, 1), (1, 0))


def test_triangle_violation_reports_indices():
    with pytest.raises(TriangleViolation) as err:
        validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    assert err.value.args == (0, 2, 1)


@pytest.mark.parametrize("matrix, exc", [
    ([], EmptySpace),
    ([[1]], NonzeroDiagonal),
    ([[0, 0], [0, 0]], NegativeOrZeroOffDiagonal),
    ([[0, -1], [-1, 0]], NegativeOrZeroOffDiagonal),
    ([[0, 1], [2, 0]], NotSymmetric),
    ([[0, 1, 2], [1, 0]], ValidationError),
])
def test_axiom_errors(matrix, exc):
    with pytest.raises(exc):
        validate_metric(matrix)


def test_float_distances_rejected():
    with pytest.raises(TypeError):
        validate_metric([[0, 0.5], [0.5, 0]])


def test_infinity_is_absorbing():
    x = validate_metric([[0, INF, 1], [INF, 0, INF], [1, INF, 0]])
    assert x.has_infinite_distance()
    with pytest.raises(TriangleViolation):
        validate_metric([[0, 1, INF], [1, 0, 1], [INF, 1, 0]])


def test_label_rules():
    with pytest.raises(ValidationError):
        validate_metric([[0, 1], [1, 0]], ["a", "a"])
    with pytest.raises(ValidationError):
        validate_metric([[0, 1], [1, 0]], ["a"])


# -- scale ----------------------------------------------------------------------

def test_scale_examples():
    x = validate_metric([[0, 1], [1, 0]])
    assert scale(x, 1) == x
    assert scale(x, F(4, 3)).dist[0][1] == F(4, 3)
    with pytest.raises(NonpositiveScale):
        scale(x, 0)
    forest = from_graph(Graph(2, frozenset()))
    assert scale(forest, 3).dist[0][1] == INF


@given(metric_spaces(), st.fractions(min_value=F(1, 7), max_value=10, max_denominator=7),
       st.fractions(min_value=F(1, 7), max_value=10, max_denominator=7))
def test_scale_composition_and_validity(x, a, b):
    assert scale(scale(x, a), b) == scale(x, a * b)
    validate_metric(scale(x, a).dist)


# -- graphs ---------------------------------------------------------------------

def test_graph_examples():
    assert from_graph(path_graph(3)).dist == ((0, 1, 2), (1, 0, 1), (2, 1, 0))
    assert from_graph(Graph(2, frozenset())).dist[0][1] == INF
    w = from_graph(willerton_graph())
    g = willerton_graph()
    adjacent = {frozenset(e) for e in g.edges}
    for i, j in itertools.combinations(range(6), 2):
        assert w.dist[i][j] == (1 if frozenset((i, j)) in adjacent else 2)


def test_graph_rejects_loops_and_duplicates():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 1), (1, 0)])


@given(st.integers(1, 7), st.data())
def test_forest_infinity_pattern(n, data):
    # random forest: each vertex optionally attached to an earlier one
    edges = []
    comp = list(range(n))
    for v in range(1, n):
        parent = data.draw(st.one_of(st.none(), st.integers(0, v - 1)))
        if parent is not None:
            edges.append((parent, v))
            old = comp[v]
            comp = [comp[parent] if c == old else c for c in comp]
    g = Graph.from_edges(n, edges)
    x = from_graph(g)
    assert g.is_forest()
    assert g.components() == len(set(comp))
    for i, j in itertools.combinations(range(n), 2):
        assert math.isinf(x.dist[i][j]) == (comp[i] != comp[j])


# -- join / product -------------------------------------------------------------

def test_join_examples(willerton):
    x23, x13 = uniform_space(3, 2), uniform_space(3, 1)
    assert is_isometric(join(x23, x23), from_graph(complete_bipartite_graph(3, 3)))
    assert is_isometric(join(x23, x13), willerton)
    assert join(one_point(), one_point()).dist == ((0, 1), (1, 0))
    with pytest.raises(DiameterExceedsTwo):
        join(uniform_space(2, 3), one_point())


def test_join_prefixes_clashing_labels():
    j = join(uniform_space(2, 1), uniform_space(2, 1))
    assert j.labels == ("a:0", "a:1", "b:0", "b:1")
    j = join(uniform_space(1, 1), validate_metric([[0]], ["z"]))
    assert j.labels == ("0", "z")


@given(metric_spaces(max_n=4), metric_spaces(max_n=4))
def test_join_stays_in_diameter_two(x, y):
    x = scale(x, F(2) / x.diameter()) if x.n > 1 else x
    y = scale(y, F(2) / y.diameter()) if y.n > 1 else y
    j = join(x, y)
    assert j.diameter() <= 2 and j.n == x.n + y.n


def test_product_examples(willerton):
    y = uniform_space(3, F(3, 2))
    assert is_isometric(l1_product(one_point(), y), y)
    sq = l1_product(uniform_space(2, 1), uniform_space(2, 1))
    assert sorted(sq.dist[0]) == [0, 1, 1, 2]
    assert l1_power(willerton, 2).n == 36
    assert sq.labels[3] == "(1,1)"
    with pytest.raises(InfiniteDistanceUnsupported):
        l1_product(from_graph(Graph(2, frozenset())), one_point())


@given(metric_spaces(max_n=3), metric_spaces(max_n=3))
def test_product_count_and_triangle(x, y):
    p = l1_product(x, y)
    assert p.n == x.n * y.n
    d = p.dist
    for i, j, k in itertools.product(range(p.n), repeat=3):
        assert d[i][j] + d[j][k] >= d[i][k]


# -- uniform / homogeneity -------------------------------------------------------

def test_uniform_examples():
    assert uniform_space(1, 5) == one_point()
    assert uniform_space(3, 2).distance_values() == [0, 2]
    assert is_isometric(uniform_space(3, 1), from_graph(complete_graph(3)))


@pytest.mark.parametrize("x, expected", [
    (uniform_space(5, F(7, 3)), True),
    (from_graph(cycle_graph(5)), True),
    (from_graph(path_graph(3)), False),
    (from_graph(complete_bipartite_graph(3, 3)), True),
    (from_graph(complete_bipartite_graph(2, 3)), False),
    (from_graph(willerton_graph()), False),
    (one_point(), True),
])
def test_is_homogeneous(x, expected):
    assert is_homogeneous(x) is expected


def test_homogeneity_cap():
    with pytest.raises(SizeCapExceeded):
        is_homogeneous(uniform_space(11, 1))
    assert is_homogeneous(uniform_space(11, 1), cap=11)


def test_n_profile_examples(five_point):
    assert n_profile(uniform_space(3, 2)) == GenPoly([(0, F(1, 3)), (2, F(2, 3))])
    assert n_profile(uniform_space(2, F(4, 3))) == GenPoly([(0, F(1, 2)), (F(4, 3), F(1, 2))])
    assert n_profile(one_point()) == GenPoly.constant(1)
    with pytest.raises(NotHomogeneous):
        n_profile(five_point)


@pytest.mark.parametrize("g", [cycle_graph(6), complete_bipartite_graph(3, 3), complete_graph(4)])
def test_n_profile_independent_of_label_order(g):
    x = from_graph(g)
    base = n_profile(x)
    assert base.coefficient_sum() == 1
    rng = np.random.default_rng(7)
    for _ in range(5):
        perm = rng.permutation(x.n)
        y = validate_metric([[x.dist[i][j] for j in perm] for i in perm])
        assert n_profile(y) == base


@given(metric_spaces(max_n=5))
def test_homogeneous_rows_are_permutations(x):
    if is_homogeneous(x):
        rows = {tuple(sorted(r)) for r in x.dist}
        assert len(rows) == 1
        assert n_profile(x).coefficient_sum() == 1


# -- positivity evidence ---------------------------------------------------------

def test_negative_type_examples(willerton):
    assert all(s.passed for s in negative_type_check(one_point(), [0.1, 1, 100]))
    assert all(s.passed for s in negative_type_check(willerton, [0.1, 1, 10]))
    s = negative_type_check(validate_metric([[0, 3], [3, 0]]), [0.5])[0]
    assert s.min_eigenvalue == pytest.approx(1 - math.exp(-1.5), abs=1e-12)


def test_schoenberg_examples():
    assert not schoenberg_check(from_graph(star_graph(3)))
    assert schoenberg_check(validate_metric([[0, 5], [5, 0]]))
    assert schoenberg_check(three_point_space())


@given(metric_spaces(min_n=3, max_n=3))
def test_every_three_point_space_embeds(x):
    pts = planar_embedding_3pt(x.dist)
    assert pts is not None
    for i, j in itertools.combinations(range(3), 2):
        assert math.dist(pts[i], pts[j]) == pytest.approx(float(x.dist[i][j]), abs=1e-9)
    assert schoenberg_check(x)


# -- sampling -------------------------------------------------------------------

def test_sampler_deterministic():
    assert sample_random_metric(6, 42) == sample_random_metric(6, 42)
    assert sample_random_metric(6, 42) != sample_random_metric(6, 43)


def test_sampler_range_and_distinctness():
    spaces = [sample_random_metric(6, s) for s in range(100)]
    assert len({x.dist for x in spaces}) == 100
    for x in spaces:
        assert all(1 <= d <= 2 for d in x.finite_distances() if d)
