"""The ten acceptance criteria.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary ends
with one PASS/FAIL line per criterion.
"""

from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from finmag import io
from finmag.closed_forms import (
    bipartite_magnitude,
    family_partner,
    forest_magnitude,
    join_limit,
    speyer_magnitude,
)
from finmag.construct import construct_target_limit
from finmag.engine import (
    c_coefficients,
    f_n,
    formal_magnitude,
    numeric_magnitude,
    one_point_report,
    small_scale_limit,
)
from finmag.genfun import GenPoly, GenRat, LimitResult, genpoly_eval, genrat_limit_q1
from finmag.spaces import (
    Graph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    from_graph,
    is_isometric,
    join,
    l1_power,
    l1_product,
    negative_type_check,
    sample_random_metric,
    schoenberg_check,
    star_graph,
    uniform_space,
    validate_metric,
)

pytestmark = pytest.mark.acceptance

q = GenPoly.monomial(1)
one = GenPoly.constant(1)
finite = LimitResult.finite


def test_01_willerton_exactness(willerton):
    f = formal_magnitude(willerton)
    assert (f.num, f.den) == (GenPoly.constant(6), 4 * q + 1)
    assert small_scale_limit(willerton) == finite(F(6, 5))
    assert f_n(willerton) == 0
    c, cp = c_coefficients(willerton)
    assert c / cp == F(6, 5)


def test_02_five_point_example(five_point):
    assert small_scale_limit(five_point) == finite(F(7, 6))
    q43 = GenPoly.monomial(F(4, 3))
    displayed = GenRat(5 - 12 * q + 3 * q43 + 4 * q * q,
                       (one + q43) * (one + 2 * q * q) - 6 * q * q)
    f = formal_magnitude(five_point)
    assert (f.num, f.den) == (displayed.num, displayed.den)


def test_03_l1_powers(willerton):
    sq = l1_power(willerton, 2)
    assert sq.n == 36
    assert small_scale_limit(sq) == finite(F(36, 25))
    f = formal_magnitude(willerton)
    assert formal_magnitude(sq) == f * f
    mixed = l1_product(willerton, uniform_space(2, F(1, 2)))
    assert formal_magnitude(mixed) == f * formal_magnitude(uniform_space(2, F(1, 2)))


def _random_forest(rng, n):
    edges = []
    for v in range(1, n):
        if rng.random() < 0.7:
            edges.append((int(rng.integers(0, v)), v))
    perm = rng.permutation(n)
    return Graph.from_edges(n, [(int(perm[a]), int(perm[b])) for a, b in edges])


def test_04_closed_forms_match_engine():
    rng = np.random.default_rng(20240401)
    for _ in range(50):
        g = _random_forest(rng, int(rng.integers(1, 9)))
        f = forest_magnitude(g)
        assert f == formal_magnitude(from_graph(g))
        assert genrat_limit_q1(f) == finite(g.components())
    for m in range(1, 5):
        for n in range(1, 5):
            f = bipartite_magnitude(m, n)
            assert f == formal_magnitude(from_graph(complete_bipartite_graph(m, n)))
            assert genrat_limit_q1(f) == finite(1)
    homogeneous = ([from_graph(complete_graph(n)) for n in range(1, 9)]
                   + [from_graph(cycle_graph(n)) for n in range(3, 9)]
                   + [uniform_space(n, r) for r in (1, F(3, 2), 2) for n in range(1, 7)])
    for x in homogeneous:
        f = speyer_magnitude(x)
        assert f == formal_magnitude(x)
        assert genrat_limit_q1(f) == finite(1)


def test_05_f_n_values():
    for n in range(2, 8):
        assert f_n(uniform_space(n, 1)) == (-1) ** (n - 1) * n
    c4 = from_graph(cycle_graph(4))
    assert f_n(c4) == 0
    assert small_scale_limit(c4) == finite(1)


def test_06_explicit_limit_theorem():
    rng = np.random.default_rng(6)
    found = 0
    while found < 20:
        n, m = (int(v) for v in rng.integers(2, 7, size=2))
        r = F(int(rng.integers(1, 25)), 12)
        # partner distance making the mean distances sum to 2
        s = (2 - F(n - 1, n) * r) * F(m, m - 1)
        if not (0 < r <= 2 and 0 < s <= 2):
            continue
        x, y = uniform_space(n, r), uniform_space(m, s)
        value = join_limit(x, y)  # raises if the two limit formulas disagree
        assert 1 <= value
        assert small_scale_limit(join(x, y)) == finite(value)
        found += 1


@pytest.mark.parametrize("R", [F(1), F(6, 5), F(3, 2), F(2), F(10)])
def test_07_constructor(R, willerton):
    res = construct_target_limit(R, F(1, 10 ** 6))
    recomputed = small_scale_limit(res.space)
    assert recomputed.is_finite
    assert abs(recomputed.value - R) <= F(1, 10 ** 6)
    assert recomputed.value == res.achieved
    if R in (1, F(6, 5)):
        assert recomputed.value == R
    if R == F(6, 5):
        assert res.n == 3 and res.r == 2 and family_partner(3, 2) == 1
        assert res.space == join(uniform_space(3, 2), uniform_space(3, 1))
        assert is_isometric(res.space, willerton)


def test_08_symbolic_numeric_agreement():
    mpmath.mp.dps = 80
    rng = np.random.default_rng(8)
    for k in range(50):
        n = int(rng.integers(1, 9))
        x = sample_random_metric(n, 1000 + k, grid=24)
        f = formal_magnitude(x)
        for t in rng.uniform(0.01, 10, size=10):
            qv = mpmath.exp(-mpmath.mpf(float(t)))
            exact = genpoly_eval(f.num, qv) / genpoly_eval(f.den, qv)
            assert abs(float(exact) - numeric_magnitude(x, float(t))) <= 1e-9
        assert abs(numeric_magnitude(x, 50.0) - n) <= 1e-6


def test_09_genericity_experiment():
    bad = []
    for seed in range(200):
        x = sample_random_metric(6, seed)
        rep = one_point_report(x, verify=True)
        if rep.f_n == 0 or rep.limit != finite(1):
            bad.append(x)
    for x in bad:
        print("counterexample:", io.dumps_space(x))
    assert not bad


def test_10_negative_type_evidence(willerton):
    assert all(s.passed for s in negative_type_check(willerton, [0.1, 1.0, 10.0]))
    assert not schoenberg_check(from_graph(star_graph(3)))
    rng = np.random.default_rng(10)
    for seed in range(100):
        # sorted sides with the longest clipped to the triangle bound, plus
        # the uniform-grid sampler
        a, b, c = sorted(F(int(v), 10) for v in rng.integers(1, 40, size=3))
        c = min(c, a + b)
        assert schoenberg_check(validate_metric([[0, a, b], [a, 0, c], [b, c, 0]]))
        assert schoenberg_check(sample_random_metric(3, seed))
