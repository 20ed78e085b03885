"""Exact phase-space quantum mechanics on polynomial Weyl symbols."""

from .exprio import (
    DivisionError,
    ExponentError,
    ExprSyntaxError,
    ParseError,
    SchemaError,
    format_poly,
    format_scalar,
    parse_poly,
    parse_scalar,
    poly_from_json,
    poly_to_json,
)
from .kicked import (
    KickedSystem,
    classical_step_observable,
    classical_step_point,
    evolve_observable,
    gauge_defect,
    quantum_classical_defect,
    quantum_step_observable,
    trajectory,
)
from .lie import (
    EXACT,
    BracketKind,
    NonTerminating,
    NotSymplectic,
    PolyDiffOperator,
    SymplecticMatrix,
    bracket_apply,
    covariance_defect,
    flow,
    generator_as_operator,
    linear_symplectic_subst,
    sp2_generators,
    star_covariance_defect,
    symplectic_defect,
    transform_coordinates,
)
from .phasepoly import HBAR, I_HBAR, P, Q, NotDivisible, PhasePoint, PhasePoly
from .scalars import GaussianRational
from .star import cross, cross_nonassoc_witness, moyal, poisson, star, star_bopp
from .starexp import mlt_equivalence_defect, star_conjugate, star_exponential_series, star_power
from .verify import UnknownSuite, verify_suite

__version__ = "0.1.0"
