"""Sparse phase-space polynomials in ``q``, ``p`` and a formal ``hbar``.

A :class:`PhasePoly` maps exponent triples ``(a, b, h)`` (powers of q, p and
hbar) to :class:`~moyal_lie.scalars.GaussianRational` coefficients.  Zero
coefficients are never stored, so two polynomials are equal exactly when
their term maps are equal.

hbar is a polynomial variable, not a number: it is constant under
differentiation and is only ever given a value by :func:`evaluate`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from numbers import Rational
from types import MappingProxyType
from typing import Iterator, Mapping, Tuple, Union

from .scalars import ONE, ZERO, GaussianRational, Scalar

Monomial = Tuple[int, int, int]
Number = Union[int, Fraction, float]


class NotDivisible(ArithmeticError):
    """Raised by :func:`div_i_hbar` when a term carries no factor of hbar."""


def canonical_key(mono: Monomial):
    """Sort key: total (q, p) degree descending, q-power descending, hbar ascending."""
    a, b, h = mono
    return (-(a + b), -a, h)


class PhasePoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        for mono, coeff in (terms or {}).items():
            a, b, h = mono
            if min(a, b, h) < 0:
                raise ValueError(f"negative exponent in monomial {mono}")
            c = GaussianRational.coerce(coeff)
            if c:
                clean[(int(a), int(b), int(h))] = c
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _wrap(cls, clean: dict) -> PhasePoly:
        # caller guarantees canonical keys and nonzero GaussianRational values
        obj = object.__new__(cls)
        object.__setattr__(obj, "_terms", clean)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def _from_accumulator(cls, acc: Mapping[Monomial, list]) -> PhasePoly:
        """Build from ``{mono: [re, im]}`` Fraction pairs, dropping zeros."""
        return cls._wrap(
            {m: GaussianRational._raw(re, im) for m, (re, im) in acc.items() if re or im}
        )

    @classmethod
    def constant(cls, c: Scalar) -> PhasePoly:
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0, h: int = 0, coeff: Scalar = 1) -> PhasePoly:
        return cls({(a, b, h): coeff})

    def __setattr__(self, name, value):
        raise AttributeError("PhasePoly is immutable")

    def __reduce__(self):
        return (PhasePoly, (dict(self._terms),))

    # container protocol

    @property
    def terms(self) -> Mapping[Monomial, GaussianRational]:
        return MappingProxyType(self._terms)

    def canonical_terms(self) -> list[tuple[Monomial, GaussianRational]]:
        return sorted(self._terms.items(), key=lambda kv: canonical_key(kv[0]))

    def __iter__(self) -> Iterator[tuple[Monomial, GaussianRational]]:
        return iter(self.canonical_terms())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def coeff(self, a: int, b: int, h: int = 0) -> GaussianRational:
        return self._terms.get((a, b, h), ZERO)

    # structural queries

    @property
    def degree(self) -> int:
        """Total degree in (q, p); -1 for the zero polynomial."""
        return max((a + b for a, b, _ in self._terms), default=-1)

    @property
    def degree_q(self) -> int:
        return max((a for a, _, _ in self._terms), default=-1)

    @property
    def degree_p(self) -> int:
        return max((b for _, b, _ in self._terms), default=-1)

    def hbar_powers(self) -> set[int]:
        return {h for _, _, h in self._terms}

    @property
    def lowest_hbar_power(self) -> int | None:
        return min(self.hbar_powers(), default=None)

    @property
    def is_constant(self) -> bool:
        return all(m == (0, 0, 0) for m in self._terms)

    @property
    def is_real(self) -> bool:
        return all(c.is_real for c in self._terms.values())

    def constant_value(self) -> GaussianRational:
        """The value of a constant polynomial; ValueError otherwise."""
        if not self.is_constant:
            raise ValueError(f"not a constant: {self}")
        return self._terms.get((0, 0, 0), ZERO)

    def hbar_coefficient(self, h: int) -> PhasePoly:
        """The (q, p) polynomial multiplying ``hbar**h``."""
        return PhasePoly._wrap({(a, b, 0): c for (a, b, k), c in self._terms.items() if k == h})

    # arithmetic

    def _coerce(self, other) -> PhasePoly | None:
        if isinstance(other, PhasePoly):
            return other
        try:
            return PhasePoly.constant(GaussianRational.coerce(other))
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for mono, c in o._terms.items():
            s = out.get(mono)
            if s is None:
                out[mono] = c
            else:
                s = s + c
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return PhasePoly._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return PhasePoly._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> PhasePoly:
        c = GaussianRational.coerce(c)
        if not c:
            return ZERO_POLY
        return PhasePoly._wrap({m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, PhasePoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        acc: dict[Monomial, list] = {}
        for (a1, b1, h1), c1 in self._terms.items():
            for (a2, b2, h2), c2 in other._terms.items():
                m = (a1 + a2, b1 + b2, h1 + h2)
                prod = c1 * c2
                slot = acc.get(m)
                if slot is None:
                    acc[m] = [prod.re, prod.im]
                else:
                    slot[0] += prod.re
                    slot[1] += prod.im
        return PhasePoly._from_accumulator(acc)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = ONE_POLY
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, PhasePoly) else other
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._terms.items())))
        return self._hash

    # calculus and composition

    def diff(self, var: str, order: int = 1) -> PhasePoly:
        """Partial derivative with respect to ``"q"`` or ``"p"``; hbar is a constant."""
        if var not in ("q", "p"):
            raise ValueError(f"can only differentiate by 'q' or 'p', not {var!r}")
        if order == 0:
            return self
        idx = 0 if var == "q" else 1
        out = {}
        for mono, c in self._terms.items():
            e = mono[idx]
            if e < order:
                continue
            falling = factorial(e) // factorial(e - order)
            new = list(mono)
            new[idx] = e - order
            out[tuple(new)] = c * falling
        return PhasePoly._wrap(out)

    def dqdp(self, a: int, b: int) -> PhasePoly:
        """``d_q**a d_p**b`` applied to self."""
        return self.diff("q", a).diff("p", b)

    def subst(self, q_image: PhasePoly, p_image: PhasePoly) -> PhasePoly:
        """Compose: replace q by ``q_image`` and p by ``p_image``; hbar is untouched."""
        q_pows = [ONE_POLY]
        p_pows = [ONE_POLY]
        for _ in range(self.degree_q):
            q_pows.append(q_pows[-1] * q_image)
        for _ in range(self.degree_p):
            p_pows.append(p_pows[-1] * p_image)
        result = ZERO_POLY
        for (a, b, h), c in self._terms.items():
            term = q_pows[a] * p_pows[b]
            if h:
                term = term * PhasePoly._wrap({(0, 0, h): c})
            else:
                term = term.scale(c)
            result = result + term
        return result

    def evaluate(self, pt: PhasePoint):
        """Numeric value at ``pt``.

        Exact (a GaussianRational) when every coordinate of ``pt`` is an int
        or Fraction, otherwise a Python complex.
        """
        if pt.is_exact:
            acc = ZERO
            for (a, b, h), c in self._terms.items():
                acc = acc + c * (Fraction(pt.q) ** a * Fraction(pt.p) ** b * Fraction(pt.hbar) ** h)
            return acc
        qf, pf, hf = float(pt.q), float(pt.p), float(pt.hbar)
        total = 0j
        for (a, b, h), c in self._terms.items():
            total += complex(c) * (qf**a * pf**b * hf**h)
        return total

    def div_i_hbar(self) -> PhasePoly:
        """Exact division by ``i*hbar``.

        Every term must carry at least one power of hbar; otherwise
        :class:`NotDivisible` is raised.
        """
        out = {}
        for (a, b, h), c in self._terms.items():
            if h == 0:
                raise NotDivisible(f"term q^{a} p^{b} has no factor of hbar")
            out[(a, b, h - 1)] = c.times_i_power(-1)
        return PhasePoly._wrap(out)

    # text

    def __str__(self):
        from .exprio import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"PhasePoly({str(self)!r})"


@dataclass(frozen=True)
class PhasePoint:
    """A numeric phase-space point plus the value of hbar used for evaluation.

    Coordinates given as int/Fraction make evaluation exact; any float
    switches to float mode.
    """

    q: Number
    p: Number
    hbar: Number = 0

    def __post_init__(self):
        for name in ("q", "p", "hbar"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, Rational, float)):
                raise TypeError(f"{name} must be int, Fraction or float, got {type(v).__name__}")
        if not self.is_exact and self.hbar < 0:
            raise ValueError("hbar must be non-negative")

    @property
    def is_exact(self) -> bool:
        return not any(isinstance(v, float) for v in (self.q, self.p, self.hbar))


ZERO_POLY = PhasePoly._wrap({})
ONE_POLY = PhasePoly._wrap({(0, 0, 0): ONE})
Q = PhasePoly._wrap({(1, 0, 0): ONE})
P = PhasePoly._wrap({(0, 1, 0): ONE})
HBAR = PhasePoly._wrap({(0, 0, 1): ONE})
I_HBAR = PhasePoly._wrap({(0, 0, 1): GaussianRational._raw(Fraction(0), Fraction(1))})


def add(f: PhasePoly, g: PhasePoly) -> PhasePoly:
    return f + g


def mul(f: PhasePoly, g: PhasePoly) -> PhasePoly:
    return f * g


def diff(f: PhasePoly, var: str) -> PhasePoly:
    return f.diff(var)


def subst(f: PhasePoly, q_image: PhasePoly, p_image: PhasePoly) -> PhasePoly:
    return f.subst(q_image, p_image)


def evaluate(f: PhasePoly, pt: PhasePoint):
    return f.evaluate(pt)


def div_i_hbar(f: PhasePoly) -> PhasePoly:
    return f.div_i_hbar()
