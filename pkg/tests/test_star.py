from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given

from conftest import from_sympy, polys, sympy_moyal, sympy_star, to_sympy
from moyal_lie import I_HBAR, P, PhasePoly, Q, cross, cross_nonassoc_witness, moyal, parse_poly, poisson, star, star_bopp
from moyal_lie.randpoly import random_poly, rng_for
from moyal_lie.star import find_cross_nonassoc

H0 = parse_poly("(1/2)*(p^2 + q^2)")


# star product


def test_star_p_q():
    assert star(P, Q) == P * Q - I_HBAR * Fraction(1, 2)
    assert star(Q, P) == Q * P + I_HBAR * Fraction(1, 2)


def test_star_same_variable_collapses():
    assert star(Q, Q) == Q * Q
    assert star(P * P, P) == P**3


def test_star_q2_p2():
    want = parse_poly("q^2*p^2 + 2*i*hbar*q*p - (1/2)*hbar^2")
    assert star(parse_poly("q^2"), parse_poly("p^2")) == want
    assert star_bopp(parse_poly("q^2"), parse_poly("p^2")) == want


def test_star_oscillator_square():
    want = H0 * H0 - parse_poly("(1/4)*hbar^2")
    assert star(H0, H0) == want
    # oracle: sympy expansion of the k <= 2 series
    assert from_sympy(sympy_star(to_sympy(H0), to_sympy(H0), 2)) == want


def test_star_bopp_examples():
    assert star_bopp(P, Q) == parse_poly("p*q - (1/2)*i*hbar")
    f = parse_poly("q^3*p - i*hbar + (2/3)*p^2")
    assert star_bopp(f, PhasePoly.constant(1)) == f
    want = parse_poly("q^3*p^3 + (9/2)*i*hbar*q^2*p^2 - (9/2)*hbar^2*q*p - (3/4)*i*hbar^3")
    q3, p3 = Q**3, P**3
    assert star_bopp(q3, p3) == want
    assert star(q3, p3) == want


@pytest.mark.parametrize("seed", range(3))
def test_star_matches_sympy_oracle(seed):
    rng = rng_for(seed, "sympy-star")
    for _ in range(5):
        f, g = random_poly(rng, max_degree=4), random_poly(rng, max_degree=4)
        assert star(f, g) == from_sympy(sympy_star(to_sympy(f), to_sympy(g), 8))


def test_star_identity():
    f = parse_poly("q^2*p - i*hbar*p + 3")
    one = PhasePoly.constant(1)
    assert star(one, f) == f == star(f, one)


@given(polys(4, 2), polys(4, 2), polys(4, 2))
def test_star_associative(f, g, h):
    assert star(star(f, g), h) == star(f, star(g, h))


@given(polys(5, 2), polys(5, 2))
def test_star_equals_bopp(f, g):
    assert star(f, g) == star_bopp(f, g)


@given(polys(5, 0), polys(5, 0))
def test_classical_limit(f, g):
    assert star(f, g).hbar_coefficient(0) == f * g


@given(polys(4, 2), polys(4, 2), polys(4, 2))
def test_star_bilinear(f, g, h):
    assert star(f, g + h) == star(f, g) + star(f, h)
    assert star(f + g, h) == star(f, h) + star(g, h)


# brackets


def test_poisson_examples():
    assert poisson(Q, P) == 1
    f = parse_poly("q^3*p + hbar*p^2")
    assert poisson(f, f) == 0
    assert poisson(H0, Q) == -P


def test_moyal_examples():
    assert moyal(Q, P) == I_HBAR
    want = parse_poly("9*i*hbar*q^2*p^2 - (3/2)*i*hbar^3")
    assert moyal(Q**3, P**3) == want
    # oracle: Bopp route in both orders
    assert star_bopp(Q**3, P**3) - star_bopp(P**3, Q**3) == want
    assert from_sympy(sympy_moyal(to_sympy(Q**3), to_sympy(P**3))) == want
    f = parse_poly("q^2*p + p^3")
    assert moyal(f, f) == 0


@given(polys(5, 0), polys(5, 0))
def test_moyal_corrections_are_odd_hbar_powers(f, g):
    rest = moyal(f, g) - I_HBAR * poisson(f, g)
    assert all(h >= 3 and h % 2 for h in rest.hbar_powers())


@given(polys(3, 1, 3), polys(3, 1, 3), polys(3, 1, 3))
def test_jacobi_and_antisymmetry(f, g, h):
    for br in (poisson, moyal):
        assert br(f, g) == -br(g, f)
        assert br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g)) == 0


# cross product


def test_cross_examples():
    assert cross(Q, P) == Fraction(1, 2)
    assert cross(parse_poly("q^2*p"), PhasePoly.constant(7)) == 0
    assert cross(Q, P) - cross(P, Q) == 1 == poisson(Q, P)


@given(polys(4, 1), polys(4, 1), polys(4, 1))
def test_cross_laws(f, g, h):
    assert cross(f, g + h) == cross(f, g) + cross(f, h)
    assert cross(f + g, h) == cross(f, h) + cross(g, h)
    assert cross(f.scale(3), g) == cross(f, g).scale(3)
    assert cross(g, f) - cross(f, g) == poisson(g, f)


def test_cross_witness():
    f, g, h = cross_nonassoc_witness()
    assert all(len(x) == 1 and x.degree <= 3 for x in (f, g, h))
    assert cross(cross(f, g), h) - cross(f, cross(g, h)) != 0
    assert star(star(f, g), h) - star(f, star(g, h)) == 0


def test_cross_witness_is_the_first_found_by_search():
    # oracle: exhaustive search over unit monomials of degree <= 3
    assert find_cross_nonassoc(3) == cross_nonassoc_witness()


def test_cross_witness_by_sympy():
    f, g, h = (to_sympy(x) for x in cross_nonassoc_witness())
    q, p = sp.symbols("q p")

    def x(a, b):
        return sp.Rational(1, 2) * (sp.diff(a, q) * sp.diff(b, p) - sp.diff(a, p) * sp.diff(b, q))

    assert sp.expand(x(x(f, g), h) - x(f, x(g, h))) != 0
