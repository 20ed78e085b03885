"""Star powers, truncated star exponentials, and star-product conjugation.

``star_conjugate`` builds ``E(-c) * f * E(c)`` from star products of
truncated exponential series, an entirely different route from iterating
Moyal brackets.  Expanding to first order,
``E(-c) * f * E(c) = f - c (A*f - f*A) + ...``, so it matches the raw Moyal
flow with parameter ``-c``; :func:`mlt_equivalence_defect` compares the two
order by order.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .lie import DEFAULT_MAX_ITER, BracketKind, Series, lie_series, series_eval, series_mul, series_sub
from .phasepoly import ONE_POLY, ZERO_POLY, PhasePoly
from .scalars import GaussianRational, Scalar
from .star import star


def star_power(A: PhasePoly, k: int) -> PhasePoly:
    """``A * A * ... * A`` (k factors); ``k = 0`` gives 1."""
    if k < 0:
        raise ValueError("k must be non-negative")
    result = ONE_POLY
    for _ in range(k):
        result = star(result, A)
    return result


def _exp_series(A: PhasePoly, order: int, sign: int = 1) -> Series:
    """Coefficients of ``exp_*(sign * c A)`` in powers of c."""
    out = []
    power = ONE_POLY
    for k in range(order + 1):
        if k:
            power = star(power, A)
        out.append(power.scale(Fraction(sign**k, factorial(k))))
    return out


def star_exponential_series(A: PhasePoly, c: Scalar, order: int) -> PhasePoly:
    """``sum_{k<=order} c^k/k! A^{*k}``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    return series_eval(_exp_series(A, order), c)


def _conjugate_series(A: PhasePoly, f: PhasePoly, order: int) -> Series:
    left = series_mul(_exp_series(A, order, -1), [f], order, star)
    return series_mul(left, _exp_series(A, order), order, star)


def star_conjugate(A: PhasePoly, c: Scalar, f: PhasePoly, order: int) -> PhasePoly:
    """``E(-c) * f * E(c)`` keeping total powers of ``c`` up to ``order``."""
    c = GaussianRational.coerce(c)
    if not c:
        return f
    return series_eval(_conjugate_series(A, f, order), c)


def mlt_equivalence_defect(
    A: PhasePoly, c: Scalar, f: PhasePoly, order: int, max_iter: int = DEFAULT_MAX_ITER
) -> PhasePoly:
    """``star_conjugate(A, c, f)`` minus the raw Moyal flow of ``f`` with parameter ``-c``.

    The difference is taken coefficient by coefficient in ``c`` through
    ``order``; zero certifies that both constructions agree.
    """
    c = GaussianRational.coerce(c)
    if not c:
        return ZERO_POLY
    conj = _conjugate_series(A, f, order)
    # flow with -c: flip the sign of odd coefficients
    flowed = [t if k % 2 == 0 else -t
              for k, t in enumerate(lie_series(BracketKind.MOYAL_RAW, A, f, order, max_iter))]
    return series_eval(series_sub(conj, flowed), c)


__all__ = [
    "mlt_equivalence_defect",
    "star_conjugate",
    "star_exponential_series",
    "star_power",
]
