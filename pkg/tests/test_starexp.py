from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import polys
from moyal_lie import (
    BracketKind,
    GaussianRational,
    P,
    PhasePoly,
    Q,
    flow,
    mlt_equivalence_defect,
    moyal,
    parse_poly,
    star,
    star_conjugate,
    star_exponential_series,
    star_power,
    transform_coordinates,
)
from moyal_lie.scalars import I
from moyal_lie.starexp import _exp_series

H0 = parse_poly("(1/2)*(p^2 + q^2)")
GENS = ["(1/2)*(p^2+q^2)", "(1/3)*q^3", "(1/2)*p*q"]
OBS = ["q", "p", "p^2*q"]


def test_star_power_examples():
    assert star_power(Q, 2) == Q * Q
    assert star_power(H0, 2) == star(H0, H0) == H0 * H0 - parse_poly("(1/4)*hbar^2")
    assert star_power(H0, 1) == H0
    assert star_power(H0, 0) == 1
    with pytest.raises(ValueError):
        star_power(H0, -1)


def test_star_power_grouping_irrelevant():
    A = parse_poly("q*p^2 - i*hbar*q")
    assert star(star_power(A, 2), star_power(A, 3)) == star_power(A, 5) == star(star_power(A, 4), A)


def test_star_exponential_examples():
    assert star_exponential_series(H0, 0, 5) == 1
    assert star_exponential_series(Q, I, 1) == parse_poly("1 + i*q")
    c = Fraction(3, 2)
    e2, e1 = star_exponential_series(H0, c, 2), star_exponential_series(H0, c, 1)
    assert e2 - e1 == (H0 * H0 - parse_poly("(1/4)*hbar^2")).scale(c * c / 2)


def test_star_conjugate_zero_parameter():
    f = parse_poly("q^2*p - hbar")
    assert star_conjugate(H0, 0, f, 4) == f


def test_star_conjugate_first_order_is_moyal_bracket():
    # E(-c) * f * E(c) = f - c {A, f}_M + O(c^2)
    A, f = parse_poly("(1/3)*q^3 + p"), parse_poly("p^2*q")
    c = Fraction(1, 5)
    assert star_conjugate(A, c, f, 1) == f - moyal(A, f).scale(c)


@pytest.mark.parametrize("gen", ["(1/2)*(p^2+q^2)", "(1/2)*p*q", "p^2 - q*p"])
def test_star_conjugate_quadratic_matches_coordinates(gen):
    A = parse_poly(gen)
    c = GaussianRational(0, Fraction(2, 3))
    Qn, _ = transform_coordinates(BracketKind.MOYAL_RAW, A, -c, 4)
    assert star_conjugate(A, c, Q, 4) == Qn


@pytest.mark.parametrize("gen", GENS)
@pytest.mark.parametrize("obs", OBS)
@pytest.mark.parametrize("c", [1, I, GaussianRational(Fraction(-1, 2), 3)])
def test_mlt_equivalence(gen, obs, c):
    assert mlt_equivalence_defect(parse_poly(gen), c, parse_poly(obs), 6) == 0


def test_mlt_equivalence_zero_parameter():
    assert mlt_equivalence_defect(H0, 0, Q, 6) == 0


def test_mlt_exact_for_nilpotent_generator():
    A, f = parse_poly("(1/3)*q^3"), P
    c = Fraction(2, 3)
    # both routes terminate: the conjugation equals the exact raw flow with -c
    assert star_conjugate(A, c, f, 6) == flow(BracketKind.MOYAL_RAW, A, -c, f)


@given(polys(3, 1, 3), polys(2, 1, 3))
def test_mlt_equivalence_random(A, f):
    assert mlt_equivalence_defect(A, Fraction(1, 2), f, 4) == 0


@pytest.mark.parametrize("gen", GENS)
@given(c1=st.fractions(-2, 2, max_denominator=3), c2=st.fractions(-2, 2, max_denominator=3))
def test_exponential_group_property(gen, c1, c2):
    A, N = parse_poly(gen), 4
    # truncate the product to total order N in (c1, c2) by expanding per power
    s = _exp_series(A, N)
    lhs = PhasePoly()
    for j in range(N + 1):
        for k in range(N + 1 - j):
            lhs = lhs + star(s[j], s[k]).scale(c1**j * c2**k)
    assert lhs == star_exponential_series(A, c1 + c2, N)


@pytest.mark.parametrize("gen", GENS + ["q^2*p - p^3"])
@given(f=polys(3, 2, 4, real=True), gamma=st.fractions(-3, 3, max_denominator=4))
def test_unitarity_shadow(gen, f, gamma):
    out = star_conjugate(parse_poly(gen), I * gamma, f, 5)
    assert out.is_real
