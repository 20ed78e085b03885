"""Classical and quantum Lie generators, their flows, and covariance defects.

A generator ``G`` acts on observables in one of three ways
(:class:`BracketKind`):

* ``CLASSICAL``: ``f -> {G, f}`` (Hamiltonian vector field);
* ``MOYAL_RAW``: ``f -> G*f - f*G`` (adjoint action on the star algebra);
* ``MOYAL_NORMALIZED``: the Moyal action divided by ``i hbar``, whose
  ``hbar -> 0`` limit is the classical action.

Flows ``exp(c X) f`` are Lie series in the caller-supplied scalar ``c``.
Internally a flow is kept as its coefficient list ``[f, X f, X^2 f / 2!, ...]``
(a :data:`Series`) so that defects can compare two computations power by
power in ``c`` before the numeric value of ``c`` is substituted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable, List, Optional

from .phasepoly import I_HBAR, ONE_POLY, ZERO_POLY, P, PhasePoly, Q
from .scalars import GaussianRational, Scalar
from .star import moyal, poisson, star

#: Pass as ``order`` to request the full terminating series.
EXACT = None
DEFAULT_MAX_ITER = 64

Series = List[PhasePoly]


class NonTerminating(RuntimeError):
    """An exact flow was requested but the bracket powers did not vanish."""


class NotSymplectic(ValueError):
    pass


class BracketKind(enum.Enum):
    CLASSICAL = "classical"
    MOYAL_RAW = "moyal-raw"
    MOYAL_NORMALIZED = "moyal-norm"


def bracket_apply(kind: BracketKind, G: PhasePoly, f: PhasePoly) -> PhasePoly:
    """One application of the generator ``G`` (of the given kind) to ``f``."""
    if kind is BracketKind.CLASSICAL:
        return poisson(G, f)
    if kind is BracketKind.MOYAL_RAW:
        return moyal(G, f)
    if kind is BracketKind.MOYAL_NORMALIZED:
        # every Moyal-bracket term carries at least one hbar
        return moyal(G, f).div_i_hbar()
    raise TypeError(f"unknown bracket kind {kind!r}")


# power series in the flow parameter


def series_eval(series: Series, c: Scalar) -> PhasePoly:
    """``sum_k c^k series[k]`` (Horner)."""
    c = GaussianRational.coerce(c)
    result = ZERO_POLY
    for coeff in reversed(series):
        result = result.scale(c) + coeff
    return result


def series_add(x: Series, y: Series) -> Series:
    n = max(len(x), len(y))
    return [(x[i] if i < len(x) else ZERO_POLY) + (y[i] if i < len(y) else ZERO_POLY) for i in range(n)]


def series_sub(x: Series, y: Series) -> Series:
    return series_add(x, [-t for t in y])


def series_mul(
    x: Series,
    y: Series,
    order: Optional[int] = None,
    product: Callable[[PhasePoly, PhasePoly], PhasePoly] = PhasePoly.__mul__,
) -> Series:
    """Cauchy product of two series, dropping powers above ``order`` (if given)."""
    if not x or not y:
        return []
    top = len(x) + len(y) - 2
    if order is not None:
        top = min(top, order)
    out = []
    for n in range(top + 1):
        acc = ZERO_POLY
        for i in range(max(0, n - len(y) + 1), min(n, len(x) - 1) + 1):
            if x[i] and y[n - i]:
                acc = acc + product(x[i], y[n - i])
        out.append(acc)
    return out


def series_subst(f: PhasePoly, q_series: Series, p_series: Series, order: Optional[int] = None) -> Series:
    """Series of ``f(Q(c), P(c))`` truncated at ``order``."""
    q_pows: list[Series] = [[ONE_POLY]]
    p_pows: list[Series] = [[ONE_POLY]]
    for _ in range(f.degree_q):
        q_pows.append(series_mul(q_pows[-1], q_series, order))
    for _ in range(f.degree_p):
        p_pows.append(series_mul(p_pows[-1], p_series, order))
    result: Series = []
    for (a, b, h), coeff in f.terms.items():
        prod = series_mul(q_pows[a], p_pows[b], order)
        scale = PhasePoly.monomial(0, 0, h, coeff)
        result = series_add(result, [t * scale for t in prod])
    return result


def _trim(series: Series) -> Series:
    while series and not series[-1]:
        series = series[:-1]
    return series


def lie_series(
    kind: BracketKind,
    G: PhasePoly,
    f: PhasePoly,
    order: Optional[int] = EXACT,
    max_iter: int = DEFAULT_MAX_ITER,
) -> Series:
    """Coefficients ``X^k f / k!`` for ``k = 0..order``.

    With ``order=EXACT`` iteration stops at the first vanishing power; if it
    has not vanished after ``max_iter`` applications, :class:`NonTerminating`
    is raised rather than truncating silently.
    """
    if order is not EXACT and order < 0:
        raise ValueError("order must be non-negative")
    out = [f]
    term = f
    k = 0
    while True:
        if not term:
            return _trim(out)
        if order is not EXACT and k >= order:
            return out
        if order is EXACT and k >= max_iter:
            raise NonTerminating(
                f"bracket powers of the generator have not vanished after {max_iter} iterations"
            )
        k += 1
        term = bracket_apply(kind, G, term).scale(Fraction(1, k))
        out.append(term)


def flow(
    kind: BracketKind,
    G: PhasePoly,
    c: Scalar,
    f: PhasePoly,
    order: Optional[int] = EXACT,
    max_iter: int = DEFAULT_MAX_ITER,
) -> PhasePoly:
    """``exp(c X_G) f`` summed through ``order`` (or exactly)."""
    c = GaussianRational.coerce(c)
    if not c:
        return f
    return series_eval(lie_series(kind, G, f, order, max_iter), c)


def transform_coordinates(
    kind: BracketKind,
    G: PhasePoly,
    c: Scalar,
    order: Optional[int] = EXACT,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[PhasePoly, PhasePoly]:
    """New coordinates ``(Q, P)``: the flow applied to ``q`` and ``p``."""
    return flow(kind, G, c, Q, order, max_iter), flow(kind, G, c, P, order, max_iter)


def symplectic_defect(Q_new: PhasePoly, P_new: PhasePoly, kind: str = "classical") -> PhasePoly:
    """``{Q, P} - 1`` (classical) or ``Q*P - P*Q - i hbar`` (quantum); zero means canonical."""
    if kind == "classical":
        return poisson(Q_new, P_new) - 1
    if kind == "quantum":
        return moyal(Q_new, P_new) - I_HBAR
    raise ValueError(f"kind must be 'classical' or 'quantum', not {kind!r}")


def covariance_defect(
    kind: BracketKind,
    G: PhasePoly,
    c: Scalar,
    f: PhasePoly,
    order: Optional[int] = EXACT,
    max_iter: int = DEFAULT_MAX_ITER,
) -> PhasePoly:
    """``[exp(c X_G) f](z) - f(Z)`` with both sides expanded to the same power of ``c``."""
    c = GaussianRational.coerce(c)
    if not c:
        return ZERO_POLY
    flowed = lie_series(kind, G, f, order, max_iter)
    q_ser = lie_series(kind, G, Q, order, max_iter)
    p_ser = lie_series(kind, G, P, order, max_iter)
    substituted = series_subst(f, q_ser, p_ser, order)
    return series_eval(series_sub(flowed, substituted), c)


def star_covariance_defect(
    A: PhasePoly,
    c: Scalar,
    f: PhasePoly,
    g: PhasePoly,
    order: Optional[int] = EXACT,
    max_iter: int = DEFAULT_MAX_ITER,
) -> PhasePoly:
    """``flow(f) * flow(g) - flow(f * g)`` for the raw Moyal generator ``A``.

    Both sides are truncated at the same power of ``c``.
    """
    c = GaussianRational.coerce(c)
    if not c:
        return ZERO_POLY
    kind = BracketKind.MOYAL_RAW
    fs = lie_series(kind, A, f, order, max_iter)
    gs = lie_series(kind, A, g, order, max_iter)
    lhs = series_mul(fs, gs, order, star)
    rhs = lie_series(kind, A, star(f, g), order, max_iter)
    return series_eval(series_sub(lhs, rhs), c)


# explicit differential operators


class PolyDiffOperator:
    """A finite sum ``sum coeff_(a,b)(q, p, hbar) d_q^a d_p^b``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[tuple[int, int], PhasePoly] | None = None):
        self._terms = {k: v for k, v in (terms or {}).items() if v}

    @property
    def terms(self) -> dict[tuple[int, int], PhasePoly]:
        return dict(self._terms)

    def __call__(self, f: PhasePoly) -> PhasePoly:
        result = ZERO_POLY
        for (a, b), coeff in self._terms.items():
            d = f.dqdp(a, b)
            if d:
                result = result + coeff * d
        return result

    apply = __call__

    @property
    def order(self) -> int:
        return max((a + b for a, b in self._terms), default=-1)

    def __add__(self, other: PolyDiffOperator) -> PolyDiffOperator:
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, ZERO_POLY) + v
        return PolyDiffOperator(out)

    def __neg__(self):
        return PolyDiffOperator({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: PolyDiffOperator) -> PolyDiffOperator:
        return self + (-other)

    def scale(self, c) -> PolyDiffOperator:
        if isinstance(c, PhasePoly):
            return PolyDiffOperator({k: v * c for k, v in self._terms.items()})
        return PolyDiffOperator({k: v.scale(c) for k, v in self._terms.items()})

    def compose(self, other: PolyDiffOperator) -> PolyDiffOperator:
        """The operator ``self o other`` (apply ``other`` first)."""
        out: dict[tuple[int, int], PhasePoly] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                # Leibniz: d^(a1,b1) (c2 d^(a2,b2)) = sum C(a1,i) C(b1,j) (d^(i,j) c2) d^(a1-i+a2, b1-j+b2)
                for i in range(a1 + 1):
                    for j in range(b1 + 1):
                        dc = c2.dqdp(i, j)
                        if not dc:
                            continue
                        key = (a1 - i + a2, b1 - j + b2)
                        term = (c1 * dc).scale(comb(a1, i) * comb(b1, j))
                        out[key] = out.get(key, ZERO_POLY) + term
        return PolyDiffOperator(out)

    def commutator(self, other: PolyDiffOperator) -> PolyDiffOperator:
        return self.compose(other) - other.compose(self)

    def __eq__(self, other):
        if not isinstance(other, PolyDiffOperator):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (a, b), coeff in sorted(self._terms.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0][0])):
            ds = []
            if a:
                ds.append("d_q" if a == 1 else f"d_q^{a}")
            if b:
                ds.append("d_p" if b == 1 else f"d_p^{b}")
            parts.append(f"[{coeff}]" + ("*" + "*".join(ds) if ds else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"PolyDiffOperator({str(self)!r})"


def generator_as_operator(
    A: PhasePoly,
    max_p_order: int | None = None,
    max_q_order: int | None = None,
) -> PolyDiffOperator:
    """Explicit differential operator of ``f -> A*f - f*A``.

    Coefficients are recovered by probing the Moyal bracket on the monomial
    basis: for an operator ``D = sum c_ab d_q^a d_p^b``,
    ``D(q^a p^b / a! b!) = c_ab + (lower-order coefficients times monomials)``.
    A ``d_p`` derivative only arises from a ``q``-derivative of ``A`` and
    vice versa, so the default bounds ``deg_q A`` / ``deg_p A`` are exact.
    """
    if max_p_order is None:
        max_p_order = max(A.degree_q, 0)
    if max_q_order is None:
        max_q_order = max(A.degree_p, 0)
    coeffs: dict[tuple[int, int], PhasePoly] = {}
    pairs = sorted(
        ((a, b) for a in range(max_q_order + 1) for b in range(max_p_order + 1)),
        key=lambda ab: (ab[0] + ab[1], ab[0]),
    )
    for a, b in pairs:
        probe = PhasePoly.monomial(a, b, 0, Fraction(1, factorial(a) * factorial(b)))
        c = moyal(A, probe)
        for (a2, b2), known in coeffs.items():
            if a2 <= a and b2 <= b:
                rest = PhasePoly.monomial(a - a2, b - b2, 0, Fraction(1, factorial(a - a2) * factorial(b - b2)))
                c = c - known * rest
        if c:
            coeffs[(a, b)] = c
    return PolyDiffOperator(coeffs)


def sp2_generators() -> list[tuple[str, PhasePoly, PolyDiffOperator]]:
    """The three quadratic generators of sp(2, R) and their Moyal operators."""
    quarter = Fraction(1, 4)
    gens = [
        ("A1", (Q * Q - P * P).scale(quarter)),
        ("A2", (P * P + Q * Q).scale(quarter)),
        ("A3", (P * Q).scale(Fraction(1, 2))),
    ]
    return [(label, A, generator_as_operator(A)) for label, A in gens]


@dataclass(frozen=True)
class SymplecticMatrix:
    """``[[a, b], [c, d]]`` acting as ``(P, Q) = M (p, q)``; requires ``ad - bc = 1``."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.det != 1:
            raise NotSymplectic(f"determinant is {self.det}, not 1")

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> SymplecticMatrix:
        return SymplecticMatrix(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: SymplecticMatrix) -> SymplecticMatrix:
        return SymplecticMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )


def linear_symplectic_subst(M: SymplecticMatrix, f: PhasePoly) -> PhasePoly:
    """``f(Q, P)`` with ``P = a p + b q`` and ``Q = c p + d q``."""
    if M.det != 1:
        raise NotSymplectic(f"determinant is {M.det}, not 1")
    new_p = P.scale(M.a) + Q.scale(M.b)
    new_q = P.scale(M.c) + Q.scale(M.d)
    return f.subst(new_q, new_p)


__all__ = [
    "EXACT",
    "BracketKind",
    "NonTerminating",
    "NotSymplectic",
    "PolyDiffOperator",
    "Series",
    "SymplecticMatrix",
    "bracket_apply",
    "covariance_defect",
    "flow",
    "generator_as_operator",
    "lie_series",
    "linear_symplectic_subst",
    "series_eval",
    "series_mul",
    "series_subst",
    "sp2_generators",
    "star_covariance_defect",
    "symplectic_defect",
    "transform_coordinates",
]
