"""Seeded random polynomials for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .phasepoly import PhasePoly
from .scalars import GaussianRational


def rng_for(seed: int, label: str) -> random.Random:
    """Independent deterministic stream per (seed, label)."""
    return random.Random(f"{seed}:{label}")


def random_scalar(rng: random.Random, complex_prob: float = 0.3) -> GaussianRational:
    while True:
        re = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        im = Fraction(rng.randint(-6, 6), rng.randint(1, 4)) if rng.random() < complex_prob else Fraction(0)
        if re or im:
            return GaussianRational(re, im)


def random_poly(
    rng: random.Random,
    max_degree: int = 5,
    max_hbar: int = 2,
    max_terms: int = 5,
    min_degree: int = 0,
    real: bool = False,
) -> PhasePoly:
    """A nonzero polynomial with up to ``max_terms`` terms of (q, p)-degree in [min_degree, max_degree]."""
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            d = rng.randint(min_degree, max_degree)
            a = rng.randint(0, d)
            h = rng.randint(0, max_hbar)
            terms[(a, d - a, h)] = random_scalar(rng, 0.0 if real else 0.3)
        f = PhasePoly(terms)
        if f:
            return f


def random_q_poly(rng: random.Random, max_degree: int = 5, max_terms: int = 3) -> PhasePoly:
    """A nonzero polynomial in q alone with rational coefficients."""
    while True:
        terms = {(rng.randint(0, max_degree), 0, 0): random_scalar(rng, 0.0) for _ in range(rng.randint(1, max_terms))}
        f = PhasePoly(terms)
        if f:
            return f
