from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import settings
from hypothesis import strategies as st

from moyal_lie import GaussianRational, PhasePoly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# sympy oracle: symbols and conversions
sq, sp_p, shbar = sp.symbols("q p hbar")


def to_sympy(f: PhasePoly):
    return sp.Add(*[
        (sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator))
        * sq**a * sp_p**b * shbar**h
        for (a, b, h), c in f.terms.items()
    ])


def from_sympy(expr) -> PhasePoly:
    poly = sp.Poly(sp.expand(expr), sq, sp_p, shbar)
    terms = {}
    for (a, b, h), c in poly.terms():
        re, im = sp.re(c), sp.im(c)
        terms[(a, b, h)] = GaussianRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
    return PhasePoly(terms)


def sympy_star(f, g, max_k=None):
    """Groenewold bidifferential expansion done by sympy on arbitrary expressions."""
    if max_k is None:
        max_k = 12
    total = 0
    for k in range(max_k + 1):
        inner = 0
        for j in range(k + 1):
            left = sp.diff(f, sq, k - j, sp_p, j) if k else f
            right = sp.diff(g, sp_p, k - j, sq, j) if k else g
            inner += sp.binomial(k, j) * (-1) ** j * left * right
        total += (sp.I * shbar / 2) ** k / sp.factorial(k) * inner
    return sp.expand(total)


def sympy_moyal(f, g, max_k=None):
    return sp.expand(sympy_star(f, g, max_k) - sympy_star(g, f, max_k))


# hypothesis strategies

small_rational = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 6))
gaussian = st.builds(GaussianRational, small_rational, small_rational)


@st.composite
def polys(draw, max_degree=4, max_hbar=2, max_terms=5, real=False):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        d = draw(st.integers(0, max_degree))
        a = draw(st.integers(0, d))
        h = draw(st.integers(0, max_hbar))
        c = GaussianRational(draw(small_rational)) if real else draw(gaussian)
        terms[(a, d - a, h)] = c
    return PhasePoly(terms)


@pytest.fixture
def sym():
    return sq, sp_p, shbar


# acceptance report: one line per criterion

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        _criteria[n] = (title, call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, ok = _criteria[n]
        terminalreporter.write_line(f"criterion {n:2d} [{'PASS' if ok else 'FAIL'}] {title}")
    passed = sum(ok for _, ok in _criteria.values())
    terminalreporter.write_line(f"{passed}/{len(_criteria)} criteria passed")
