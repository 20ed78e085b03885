"""Text and JSON front-end for :class:`PhasePoly`.

Grammar (whitespace is insignificant, implicit multiplication is rejected)::

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' nonneg-int)?
    base     := 'q' | 'p' | 'hbar' | 'i' | rational | '(' expr ')' | '-' factor
    rational := int ('/' posint)?

``/`` is not a general operator: it may only join two integer literals.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .phasepoly import HBAR, P, Q, PhasePoly
from .scalars import GaussianRational, I, parse_rational, rational_str

MAX_EXPONENT = 100
MAX_DEPTH = 200


class ParseError(ValueError):
    """Base class for positioned parse errors (1-based line and column)."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ExprSyntaxError(ParseError):
    pass


class ExponentError(ParseError):
    pass


class DivisionError(ParseError):
    pass


class SchemaError(ValueError):
    """Malformed PhasePoly JSON."""


@dataclass(frozen=True)
class Token:
    kind: str  # INT, DEC, NAME, OP, EOF
    text: str
    line: int
    column: int


_NAMES = {"q": Q, "p": P, "hbar": HBAR, "i": PhasePoly.constant(I)}
_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<dec>\d+\.\d*|\.\d+)|(?P<int>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()])"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        col = pos - line_start + 1
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "ws":
            for offset, ch in enumerate(lexeme):
                if ch == "\n":
                    line += 1
                    line_start = pos + offset + 1
        elif kind == "name":
            if lexeme not in _NAMES:
                raise ExprSyntaxError(f"unknown symbol {lexeme!r}", line, col)
            tokens.append(Token("NAME", lexeme, line, col))
        else:
            tokens.append(Token({"dec": "DEC", "int": "INT", "op": "OP"}[kind], lexeme, line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def at_op(self, op: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == op

    def fail(self, message: str, tok: Token | None = None, cls=ExprSyntaxError):
        tok = tok or self.tok
        raise cls(message, tok.line, tok.column)

    def parse(self) -> PhasePoly:
        result = self.expr()
        if self.tok.kind != "EOF":
            if self.at_op("/"):
                self.fail("'/' may only separate two integer literals", cls=DivisionError)
            self.fail(f"unexpected {self.tok.text!r}")
        return result

    def expr(self) -> PhasePoly:
        result = self.term()
        while self.at_op("+") or self.at_op("-"):
            op = self.advance().text
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> PhasePoly:
        result = self.factor()
        while True:
            if self.at_op("*"):
                self.advance()
                result = result * self.factor()
            elif self.at_op("/"):
                self.fail("'/' may only separate two integer literals", cls=DivisionError)
            else:
                return result

    def factor(self) -> PhasePoly:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.fail("expression nested too deeply")
        base = self.base()
        if self.at_op("^"):
            self.advance()
            t = self.tok
            if t.kind != "INT":
                self.fail("exponent must be a non-negative integer literal", cls=ExponentError)
            self.advance()
            n = int(t.text)
            if n > MAX_EXPONENT:
                self.fail(f"exponent {n} exceeds the limit of {MAX_EXPONENT}", t, ExponentError)
            base = base**n
        self.depth -= 1
        return base

    def base(self) -> PhasePoly:
        t = self.tok
        if t.kind == "NAME":
            self.advance()
            return _NAMES[t.text]
        if t.kind == "INT":
            self.advance()
            value = Fraction(int(t.text))
            if self.at_op("/"):
                slash = self.advance()
                d = self.tok
                if d.kind != "INT":
                    self.fail("denominator must be a positive integer literal", slash, DivisionError)
                self.advance()
                if int(d.text) == 0:
                    self.fail("zero denominator", d, DivisionError)
                value /= int(d.text)
            return PhasePoly.constant(value)
        if t.kind == "DEC":
            self.fail("decimal literals are not supported; write a fraction")
        if self.at_op("("):
            self.advance()
            self.depth += 1
            if self.depth > MAX_DEPTH:
                self.fail("expression nested too deeply")
            inner = self.expr()
            self.depth -= 1
            if not self.at_op(")"):
                self.fail("expected ')'")
            self.advance()
            return inner
        if self.at_op("-"):
            self.advance()
            return -self.factor()
        if t.kind == "EOF":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {t.text!r}")


def parse_poly(text: str) -> PhasePoly:
    """Parse an expression into an exact PhasePoly.

    Raises ExprSyntaxError, ExponentError or DivisionError (all subclasses of
    ParseError) carrying the 1-based line and column of the offending token.
    """
    return _Parser(text).parse()


def parse_scalar(text: str) -> GaussianRational:
    """Parse an expression that must reduce to a constant (no q, p or hbar)."""
    poly = parse_poly(text)
    if not poly.is_constant:
        raise ValueError(f"expected a constant, got {format_poly(poly)}")
    return poly.constant_value()


# formatting


def _fmt_rational(x: Fraction) -> str:
    """Unsigned magnitude; fractions are parenthesised so they bind as one factor."""
    x = abs(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"({x.numerator}/{x.denominator})"


def format_scalar(c: GaussianRational) -> str:
    """Standalone text for a scalar, e.g. ``-(1/2)*i`` or ``(1 + 2*i)``."""
    sign, body = _coeff_parts(c)
    body = body or "1"
    return f"-{body}" if sign < 0 else body


def _coeff_parts(c: GaussianRational) -> tuple[int, str]:
    """Split a coefficient into a sign and a multiplicative prefix (``""`` for 1)."""
    if c.im == 0:
        mag = abs(c.re)
        return (-1 if c.re < 0 else 1), ("" if mag == 1 else _fmt_rational(mag))
    if c.re == 0:
        mag = abs(c.im)
        return (-1 if c.im < 0 else 1), ("i" if mag == 1 else f"{_fmt_rational(mag)}*i")
    re_part = ("-" if c.re < 0 else "") + _fmt_rational(c.re)
    im_mag = abs(c.im)
    im_part = "i" if im_mag == 1 else f"{_fmt_rational(im_mag)}*i"
    return 1, f"({re_part} {'-' if c.im < 0 else '+'} {im_part})"


def _fmt_power(name: str, k: int) -> str:
    return name if k == 1 else f"{name}^{k}"


def format_poly(f: PhasePoly) -> str:
    """Canonical text: terms in canonical order, factors as coeff*hbar*p*q."""
    if not f:
        return "0"
    pieces = []
    for (a, b, h), c in f.canonical_terms():
        sign, prefix = _coeff_parts(c)
        factors = [prefix] if prefix else []
        if h:
            factors.append(_fmt_power("hbar", h))
        if b:
            factors.append(_fmt_power("p", b))
        if a:
            factors.append(_fmt_power("q", a))
        body = "*".join(factors) or "1"
        if not pieces:
            pieces.append(("-" if sign < 0 else "") + body)
        else:
            pieces.append((" - " if sign < 0 else " + ") + body)
    return "".join(pieces)


# JSON


def poly_to_json(f: PhasePoly) -> dict:
    return {
        "terms": [
            {"q": a, "p": b, "hbar": h, "re": rational_str(c.re), "im": rational_str(c.im)}
            for (a, b, h), c in f.canonical_terms()
        ]
    }


def dumps_poly(f: PhasePoly) -> str:
    return json.dumps(poly_to_json(f))


def _nonneg_int(value, field: str, idx: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise SchemaError(f"term {idx}: {field!r} must be a non-negative integer")
    return value


def poly_from_json(obj) -> PhasePoly:
    """Inverse of :func:`poly_to_json`; accepts a dict or a JSON string."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or not isinstance(obj.get("terms"), list):
        raise SchemaError("expected an object with a 'terms' array")
    terms = {}
    for idx, t in enumerate(obj["terms"]):
        if not isinstance(t, dict):
            raise SchemaError(f"term {idx}: expected an object")
        missing = {"q", "p", "hbar", "re", "im"} - t.keys()
        if missing:
            raise SchemaError(f"term {idx}: missing field(s) {sorted(missing)}")
        mono = tuple(_nonneg_int(t[k], k, idx) for k in ("q", "p", "hbar"))
        parts = []
        for k in ("re", "im"):
            if not isinstance(t[k], str):
                raise SchemaError(f"term {idx}: {k!r} must be a 'num/den' string")
            try:
                parts.append(parse_rational(t[k]))
            except ValueError as exc:
                raise SchemaError(f"term {idx}: {exc}") from None
        if mono in terms:
            raise SchemaError(f"term {idx}: duplicate monomial {mono}")
        terms[mono] = GaussianRational(*parts)
    return PhasePoly(terms)


def poly_json_roundtrip(f: PhasePoly) -> PhasePoly:
    return poly_from_json(dumps_poly(f))


__all__ = [
    "DivisionError",
    "ExponentError",
    "ExprSyntaxError",
    "ParseError",
    "SchemaError",
    "dumps_poly",
    "format_poly",
    "format_scalar",
    "parse_poly",
    "parse_scalar",
    "poly_from_json",
    "poly_json_roundtrip",
    "poly_to_json",
    "tokenize",
]
