import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import polys
from moyal_lie import (
    I_HBAR,
    DivisionError,
    ExponentError,
    ExprSyntaxError,
    GaussianRational,
    P,
    ParseError,
    PhasePoly,
    Q,
    SchemaError,
    format_poly,
    format_scalar,
    parse_poly,
    parse_scalar,
    poly_from_json,
    poly_to_json,
    star,
)
from moyal_lie.exprio import MAX_DEPTH, dumps_poly, poly_json_roundtrip
from moyal_lie.randpoly import random_poly, rng_for


def test_parse_example():
    f = parse_poly("p^3*q - (3/2)*hbar^2*q")
    assert f == PhasePoly({(1, 3, 0): 1, (1, 0, 2): Fraction(-3, 2)})
    assert len(f) == 2


def test_parse_imaginary_coefficient():
    assert parse_poly("(1/2)*i*hbar") == PhasePoly({(0, 0, 1): GaussianRational(0, Fraction(1, 2))})


@pytest.mark.parametrize("text", ["i*hbar/2", "q/2", "(q+1)/3", "1/q", "1/(2)", "2/0", "q^4/4"])
def test_division_errors(text):
    with pytest.raises(DivisionError):
        parse_poly(text)


@pytest.mark.parametrize("text", ["q^(-1)", "q^-1", "q^1.5", "q^p", "q^", "q^101"])
def test_exponent_errors(text):
    with pytest.raises(ExponentError):
        parse_poly(text)


@pytest.mark.parametrize("text,col", [("q p", 3), ("2q", 2), ("q + x", 5), ("(q", 3), ("q)", 2), ("", 1),
                                      ("1.5*q", 1), ("q**2", 3), ("q + $", 5)])
def test_syntax_errors_are_positioned(text, col):
    with pytest.raises(ExprSyntaxError) as exc:
        parse_poly(text)
    assert exc.value.line == 1 and exc.value.column == col
    assert str(exc.value).startswith(f"line 1, column {col}:")


def test_error_position_on_later_line():
    with pytest.raises(ParseError) as exc:
        parse_poly("q +\n  p *\n   * q")
    assert (exc.value.line, exc.value.column) == (3, 4)


def test_precedence_and_unary_minus():
    assert parse_poly("-q^2") == -(Q * Q)
    assert parse_poly("2*q + 3*p*q") == 2 * Q + 3 * P * Q
    assert parse_poly("--q") == Q
    assert parse_poly("(q - p)^2") == Q * Q - 2 * Q * P + P * P
    assert parse_poly(" q\t*\n p ") == Q * P
    assert parse_poly("i^2") == -1


def test_deep_nesting_is_rejected_cleanly():
    with pytest.raises(ExprSyntaxError):
        parse_poly("(" * (MAX_DEPTH + 5) + "q" + ")" * (MAX_DEPTH + 5))
    with pytest.raises(ExprSyntaxError):
        parse_poly("-" * (MAX_DEPTH + 5) + "q")
    assert parse_poly("(" * 50 + "q" + ")" * 50) == Q


def test_parse_scalar():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar("-i") == GaussianRational(0, -1)
    assert parse_scalar("(1/2 + 2*i)") == GaussianRational(Fraction(1, 2), 2)
    with pytest.raises(ValueError):
        parse_scalar("q")


# formatting


def test_format_examples():
    assert format_poly(PhasePoly()) == "0"
    assert format_poly(star(P, Q)) == "p*q - (1/2)*i*hbar"
    assert format_poly(parse_poly("q^2*p^3 - p")) == "p^3*q^2 - p"
    assert format_poly(parse_poly("(2 - 3*i)*q - i")) == "(2 - 3*i)*q - i"
    assert format_poly(-I_HBAR) == "-i*hbar"
    assert format_poly(parse_poly("-(1/3)")) == "-(1/3)"


def test_canonical_term_order():
    f = parse_poly("hbar^2 + q + p^2 + hbar*p^2 + q^2 + 1")
    assert format_poly(f) == "q^2 + p^2 + hbar*p^2 + q + 1 + hbar^2"


def test_format_scalar():
    z = GaussianRational(Fraction(1, 2), -1)
    assert format_scalar(z) == "((1/2) - i)"
    assert parse_scalar(format_scalar(z)) == z
    assert format_scalar(GaussianRational(0)) == "0"


@given(polys(5, 3, 6))
def test_parse_format_roundtrip_property(f):
    text = format_poly(f)
    assert parse_poly(text) == f
    assert format_poly(parse_poly(text)) == text


def test_parse_format_roundtrip_seeded():
    rng = rng_for(13, "roundtrip")
    for _ in range(100):
        f = random_poly(rng, max_degree=6, max_hbar=3, max_terms=6)
        assert parse_poly(format_poly(f)) == f


# fuzzing

ALPHABET = "qphbari0123456789+-*/^() .\n$x"


def _fuzz_one(text):
    try:
        out = parse_poly(text)
    except ParseError as exc:
        assert exc.line >= 1 and exc.column >= 1
        return "error"
    assert isinstance(out, PhasePoly)
    return "ok"


def test_fuzz_random_bytes():
    rng = random.Random(2024)
    outcomes = {"ok": 0, "error": 0}
    for _ in range(10_000):
        raw = bytes(rng.randrange(256) for _ in range(rng.randint(0, 12)))
        outcomes[_fuzz_one(raw.decode("latin-1"))] += 1
    assert outcomes["error"] > 0


def test_fuzz_grammar_alphabet():
    rng = random.Random(7)
    outcomes = {"ok": 0, "error": 0}
    for _ in range(10_000):
        text = "".join(rng.choice(ALPHABET) for _ in range(rng.randint(0, 14)))
        outcomes[_fuzz_one(text)] += 1
    assert outcomes["ok"] > 0 and outcomes["error"] > 0


@given(st.text(max_size=30))
def test_fuzz_unicode(text):
    _fuzz_one(text)


# JSON


def test_json_shape():
    f = parse_poly("p*q - (1/2)*i*hbar")
    assert poly_to_json(f) == {"terms": [
        {"q": 1, "p": 1, "hbar": 0, "re": "1/1", "im": "0/1"},
        {"q": 0, "p": 0, "hbar": 1, "re": "0/1", "im": "-1/2"},
    ]}
    assert json.loads(dumps_poly(f)) == poly_to_json(f)


@given(polys(5, 3, 6))
def test_json_roundtrip(f):
    assert poly_json_roundtrip(f) == f
    assert poly_from_json(dumps_poly(f)) == f


def test_json_empty_is_zero():
    assert poly_from_json({"terms": []}) == 0


def test_json_big_rationals_survive():
    f = PhasePoly({(2, 0, 1): Fraction(10**30 + 7, 3**25)})
    assert poly_json_roundtrip(f) == f


@pytest.mark.parametrize("bad", [
    {"terms": [{"q": 0, "p": 0, "hbar": 0, "re": "1/1"}]},
    {"terms": [{"q": -1, "p": 0, "hbar": 0, "re": "1/1", "im": "0/1"}]},
    {"terms": [{"q": 1.5, "p": 0, "hbar": 0, "re": "1/1", "im": "0/1"}]},
    {"terms": [{"q": True, "p": 0, "hbar": 0, "re": "1/1", "im": "0/1"}]},
    {"terms": [{"q": 0, "p": 0, "hbar": 0, "re": "1/0", "im": "0/1"}]},
    {"terms": [{"q": 0, "p": 0, "hbar": 0, "re": 1, "im": "0/1"}]},
    {"terms": [{"q": 0, "p": 0, "hbar": 0, "re": "1/1", "im": "0/1"}] * 2},
    {"terms": "nope"},
    {},
    [],
    "{not json",
])
def test_json_schema_errors(bad):
    with pytest.raises(SchemaError):
        poly_from_json(bad)
