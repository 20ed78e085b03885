"""One-step evolution for the periodically kicked Hamiltonian ``p^2/2 + lam V(q) delta_T(t)``.

Each step applies the kick first and then the drift:

    q' = q - T p,        p' = p + lam V'(q')

The quantum observable map is the exact (terminating) composition of two
Moyal flows; the classical one is substitution of the step map.  Their
difference is the quantum-classical defect, which is O(hbar^2).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .lie import DEFAULT_MAX_ITER, BracketKind, flow
from .phasepoly import P, PhasePoint, PhasePoly, Q

log = logging.getLogger(__name__)

DEFAULT_SYMBOLIC_BUDGET = 5


@dataclass(frozen=True)
class KickedSystem:
    """Potential ``V(q)`` (no p, no hbar), kick strength ``lam`` and period ``T``."""

    V: PhasePoly
    lam: Fraction
    T: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        object.__setattr__(self, "T", Fraction(self.T))
        if any(b or h for _, b, h in self.V.terms):
            raise ValueError(f"potential must depend on q only: {self.V}")

    @property
    def kappa(self) -> Fraction:
        return self.T * self.lam

    @property
    def force(self) -> PhasePoly:
        """``V'(q)``."""
        return self.V.diff("q")

    def step_coordinates(self) -> tuple[PhasePoly, PhasePoly]:
        """The classical step map as polynomials ``(q - T p, p + lam V'(q - T p))``."""
        q_next = Q - P.scale(self.T)
        p_next = P + self.force.subst(q_next, P).scale(self.lam)
        return q_next, p_next


def classical_step_point(sys: KickedSystem, pt: PhasePoint) -> PhasePoint:
    if pt.is_exact:
        q_next = Fraction(pt.q) - sys.T * Fraction(pt.p)
        force = sys.force.evaluate(PhasePoint(q_next, 0, pt.hbar))
        return PhasePoint(q_next, Fraction(pt.p) + sys.lam * force.re, pt.hbar)
    q_next = float(pt.q) - float(sys.T) * float(pt.p)
    force = sys.force.evaluate(PhasePoint(q_next, 0.0, float(pt.hbar)))
    return PhasePoint(q_next, float(pt.p) + float(sys.lam) * force.real, pt.hbar)


def trajectory(sys: KickedSystem, pt0: PhasePoint, n: int) -> list[PhasePoint]:
    """``n`` steps from ``pt0``; the returned list has ``n + 1`` points."""
    if n < 0:
        raise ValueError("n must be non-negative")
    points = [pt0]
    for _ in range(n):
        points.append(classical_step_point(sys, points[-1]))
    return points


def quantum_step_observable(sys: KickedSystem, f: PhasePoly) -> PhasePoly:
    # kick lowers p-degree and drift lowers q-degree, so both flows terminate
    # within (degree + 1) brackets
    kicked = flow(BracketKind.MOYAL_NORMALIZED, sys.V, sys.lam, f, max_iter=max(DEFAULT_MAX_ITER, f.degree + 2))
    drift = P * P * Fraction(1, 2)
    return flow(BracketKind.MOYAL_NORMALIZED, drift, sys.T, kicked, max_iter=max(DEFAULT_MAX_ITER, kicked.degree + 2))


def classical_step_observable(sys: KickedSystem, f: PhasePoly) -> PhasePoly:
    q_next, p_next = sys.step_coordinates()
    return f.subst(q_next, p_next)


def quantum_classical_defect(sys: KickedSystem, f: PhasePoly) -> PhasePoly:
    return quantum_step_observable(sys, f) - classical_step_observable(sys, f)


def gauge_defect(sys: KickedSystem, a) -> PhasePoly:
    """One-step defect of ``Q = q + a p^3``; only the cubic part contributes."""
    return quantum_classical_defect(sys, P**3).scale(Fraction(a))


def evolve_observable(sys: KickedSystem, f: PhasePoly, steps: int, quantum: bool = True,
                      budget: int = DEFAULT_SYMBOLIC_BUDGET) -> PhasePoly:
    """Apply the quantum (or classical) observable map ``steps`` times."""
    if steps > budget:
        log.warning("symbolic evolution over %d steps exceeds the budget of %d; "
                    "polynomial degree grows with every step", steps, budget)
    step = quantum_step_observable if quantum else classical_step_observable
    for _ in range(steps):
        f = step(sys, f)
    return f


__all__ = [
    "KickedSystem",
    "classical_step_observable",
    "classical_step_point",
    "evolve_observable",
    "gauge_defect",
    "quantum_classical_defect",
    "quantum_step_observable",
    "trajectory",
]
