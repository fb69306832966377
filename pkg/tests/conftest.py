from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from finmag.genfun import GenPoly
from finmag.spaces import five_point_space, validate_metric, willerton_space

from oracles import metric_closure

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def willerton():
    return willerton_space()


@pytest.fixture
def five_point():
    return five_point_space()


small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
exponents = st.fractions(min_value=0, max_value=4, max_denominator=4)


@st.composite
def genpolys(draw, max_terms=4, coeffs=small_rationals):
    terms = draw(st.lists(st.tuples(exponents, coeffs), max_size=max_terms))
    return GenPoly(terms)


@st.composite
def metric_spaces(draw, min_n=1, max_n=5, max_denominator=3):
    n = draw(st.integers(min_n, max_n))
    w = st.fractions(min_value=Fraction(1, 2), max_value=3, max_denominator=max_denominator)
    weights = draw(st.lists(w.filter(lambda v: v > 0), min_size=n * (n - 1) // 2,
                            max_size=n * (n - 1) // 2))
    return validate_metric(metric_closure(n, weights))


# -- acceptance summary ---------------------------------------------------------

_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))
    elif report.when == "setup" and report.outcome != "passed" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
