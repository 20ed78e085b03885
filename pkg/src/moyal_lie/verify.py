"""Seeded invariant suites run by ``moyal-lie verify``.

Every property is a named check over a deterministic stream of cases
(seeded per property name); the first failing case is kept as a
counterexample rendered in canonical polynomial text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .exprio import format_poly, parse_poly
from .kicked import (
    KickedSystem,
    classical_step_observable,
    gauge_defect,
    quantum_classical_defect,
    quantum_step_observable,
    trajectory,
)
from .lie import (
    BracketKind,
    PolyDiffOperator,
    bracket_apply,
    covariance_defect,
    flow,
    sp2_generators,
    star_covariance_defect,
    symplectic_defect,
)
from .phasepoly import I_HBAR, ONE_POLY, P, PhasePoint, PhasePoly, Q
from .randpoly import random_poly, random_q_poly, rng_for
from .scalars import I
from .star import cross, cross_nonassoc_witness, moyal, poisson, star, star_bopp
from .starexp import _exp_series, mlt_equivalence_defect, star_conjugate, star_exponential_series, star_power

SUITES = ("algebra", "covariance", "kick", "starexp")


class UnknownSuite(ValueError):
    pass


@dataclass
class CaseResult:
    name: str
    count: int
    passed: bool
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        return {"name": self.name, "count": self.count, "pass": self.passed,
                "counterexample": self.counterexample}


@dataclass
class Report:
    suite: str
    seed: int
    cases: list[CaseResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def to_json(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "cases": [c.to_json() for c in self.cases]}

    def to_text(self) -> str:
        lines = [f"suite {self.suite} (seed {self.seed})"]
        for c in self.cases:
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name} ({c.count} case{'' if c.count == 1 else 's'})")
            if c.counterexample:
                for k, v in c.counterexample.items():
                    lines.append(f"      {k} = {v}")
        lines.append("all passed" if self.passed else "FAILED")
        return "\n".join(lines)


def _fmt(case: dict) -> dict:
    out = {}
    for k, v in case.items():
        if isinstance(v, KickedSystem):
            out.update(V=format_poly(v.V), **{"lambda": str(v.lam), "T": str(v.T)})
        else:
            out[k] = format_poly(v) if isinstance(v, PhasePoly) else str(v)
    return out


def _check(name: str, cases: Iterable[dict], predicate: Callable[..., bool]) -> CaseResult:
    n = 0
    for case in cases:
        n += 1
        if not predicate(**case):
            return CaseResult(name, n, False, _fmt(case))
    return CaseResult(name, n, True)


def _only_hbar_powers(f: PhasePoly, ok: Callable[[int], bool]) -> bool:
    return all(ok(h) for h in f.hbar_powers())


# algebra


def _algebra(seed: int) -> list[CaseResult]:
    def triples(label, n, **kw):
        rng = rng_for(seed, label)
        for _ in range(n):
            yield dict(f=random_poly(rng, **kw), g=random_poly(rng, **kw), h=random_poly(rng, **kw))

    def pairs(label, n, **kw):
        rng = rng_for(seed, label)
        for _ in range(n):
            yield dict(f=random_poly(rng, **kw), g=random_poly(rng, **kw))

    def jacobi(br, f, g, h):
        return br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g)) == 0

    wf, wg, wh = cross_nonassoc_witness()
    return [
        _check("star_basics", [dict(p=P, q=Q)],
               lambda p, q: star(p, q) == p * q - I_HBAR * Fraction(1, 2)
               and star(q, p) == q * p + I_HBAR * Fraction(1, 2)),
        _check("star_associativity", triples("assoc", 200),
               lambda f, g, h: star(star(f, g), h) == star(f, star(g, h))),
        _check("star_equals_star_bopp", pairs("bopp", 100),
               lambda f, g: star(f, g) == star_bopp(f, g)),
        _check("moyal_leading_order_odd_hbar", pairs("moyal-order", 100, max_hbar=0),
               lambda f, g: _only_hbar_powers(moyal(f, g) - I_HBAR * poisson(f, g),
                                              lambda h: h >= 3 and h % 2 == 1)),
        _check("classical_limit", pairs("limit", 100, max_hbar=0),
               lambda f, g: star(f, g).hbar_coefficient(0) == f * g),
        _check("star_identity", pairs("identity", 50),
               lambda f, g: star(ONE_POLY, f) == f == star(f, ONE_POLY)),
        _check("poisson_antisymmetry_jacobi", triples("pb", 50),
               lambda f, g, h: poisson(f, g) == -poisson(g, f) and jacobi(poisson, f, g, h)),
        _check("moyal_antisymmetry_jacobi", triples("mb", 50, max_degree=4),
               lambda f, g, h: moyal(f, g) == -moyal(g, f) and jacobi(moyal, f, g, h)),
        _check("cross_distributive", triples("cross", 50),
               lambda f, g, h: cross(f, g + h) == cross(f, g) + cross(f, h)
               and cross(f + g, h) == cross(f, h) + cross(g, h)),
        _check("cross_antisymmetrization_is_poisson", pairs("cross-pb", 50),
               lambda f, g: cross(g, f) - cross(f, g) == poisson(g, f)),
        _check("cross_nonassociative_witness", [dict(f=wf, g=wg, h=wh)],
               lambda f, g, h: cross(cross(f, g), h) != cross(f, cross(g, h))
               and star(star(f, g), h) == star(f, star(g, h))),
    ]


# covariance


def _monomials(max_degree: int) -> list[PhasePoly]:
    return [PhasePoly.monomial(a, d - a) for d in range(max_degree + 1) for a in range(d + 1)]


def _covariance(seed: int) -> list[CaseResult]:
    K = BracketKind
    sp2 = sp2_generators()

    def classical_cases():
        rng = rng_for(seed, "classical-cov")
        for _ in range(50):
            yield dict(G=random_poly(rng, max_degree=4, max_hbar=0, max_terms=3, min_degree=1),
                       f=random_poly(rng, max_degree=3, max_hbar=1, max_terms=3))

    def quadratic_cases():
        rng = rng_for(seed, "quadratic-cov")
        for _ in range(20):
            yield dict(G=random_poly(rng, max_degree=2, max_hbar=0, max_terms=3, min_degree=2, real=True),
                       f=random_poly(rng, max_degree=4, max_hbar=1, max_terms=3))

    def expected_sp2_ops():
        half = I_HBAR.scale(Fraction(1, 2))
        return [
            PolyDiffOperator({(1, 0): half * P, (0, 1): half * Q}),
            PolyDiffOperator({(1, 0): -half * P, (0, 1): half * Q}),
            PolyDiffOperator({(0, 1): half * P, (1, 0): -half * Q}),
        ]

    def sp2_cases():
        for (label, A, V), want in zip(sp2, expected_sp2_ops()):
            yield dict(label=label, A=A, V=V, want=want)

    def v_equals_ihbar_l():
        for _, A, _ in sp2:
            for m in _monomials(8):
                yield dict(A=A, f=m)

    def adjoint_cases():
        pairs = [(sp2[i][1], sp2[j][1]) for i in range(3) for j in range(3) if i < j]
        rng = rng_for(seed, "adjoint")
        pairs += [(random_poly(rng, max_degree=3, max_hbar=0, max_terms=2),
                   random_poly(rng, max_degree=3, max_hbar=0, max_terms=2)) for _ in range(25)]
        for A1, A2 in pairs:
            yield dict(A1=A1, A2=A2)

    def adjoint_ok(A1, A2, kind, br):
        comm = br(A1, A2)
        for m in _monomials(6):
            lhs = bracket_apply(kind, A1, bracket_apply(kind, A2, m)) - bracket_apply(kind, A2, bracket_apply(kind, A1, m))
            if lhs != bracket_apply(kind, comm, m):
                return False
        return True

    star_cov_cases = [
        dict(A=parse_poly(a), f=parse_poly(f), g=parse_poly(g))
        for a in ("(1/2)*(p^2+q^2)", "(1/3)*q^3", "(1/2)*p*q")
        for f in ("q", "p", "p^2*q")
        for g in ("q", "p", "p^2*q")
    ]

    def group_cases():
        rng = rng_for(seed, "group")
        for _ in range(10):
            yield dict(G=random_q_poly(rng, 4), f=random_poly(rng, max_degree=4, max_hbar=1),
                       c1=Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
                       c2=Fraction(rng.randint(-3, 3), rng.randint(1, 3)))

    quartic_defect = covariance_defect(K.MOYAL_NORMALIZED, parse_poly("(1/4)*q^4"), 1, parse_poly("p^3"))
    return [
        _check("classical_covariance_random", classical_cases(),
               lambda G, f: not covariance_defect(K.CLASSICAL, G, 1, f, 4)),
        _check("quantum_covariance_quadratic_order8", quadratic_cases(),
               lambda G, f: not covariance_defect(K.MOYAL_NORMALIZED, G, 1, f, 8)),
        _check("quantum_covariance_violated_quartic", [dict(defect=quartic_defect)],
               lambda defect: defect == parse_poly("-(3/2)*hbar^2*q") and defect.lowest_hbar_power == 2),
        _check("star_covariance_order6", star_cov_cases,
               lambda A, f, g: not star_covariance_defect(A, 1, f, g, 6)),
        _check("sp2_operators", sp2_cases(), lambda label, A, V, want: V == want),
        _check("sp2_moyal_is_ihbar_classical_deg8", v_equals_ihbar_l(),
               lambda A, f: bracket_apply(K.MOYAL_RAW, A, f) == I_HBAR * bracket_apply(K.CLASSICAL, A, f)),
        _check("adjoint_homomorphism_moyal", adjoint_cases(),
               lambda A1, A2: adjoint_ok(A1, A2, K.MOYAL_RAW, moyal)),
        _check("adjoint_homomorphism_poisson", adjoint_cases(),
               lambda A1, A2: adjoint_ok(A1, A2, K.CLASSICAL, poisson)),
        _check("flow_group_law", group_cases(),
               lambda G, f, c1, c2: flow(K.MOYAL_NORMALIZED, G, c1, flow(K.MOYAL_NORMALIZED, G, c2, f))
               == flow(K.MOYAL_NORMALIZED, G, c1 + c2, f)),
    ]


# kicked map

TEST_POTENTIALS = ("(1/3)*q^3", "(1/4)*q^4", "(1/5)*q^5")


def p3q_defect_formula(sys: KickedSystem) -> PhasePoly:
    """Closed form of the one-step p^3 q defect: ``-(lam hbar^2/4) (q - Tp) V'''(q - Tp)``."""
    q_next = Q - P.scale(sys.T)
    v3 = sys.V.diff("q", 3).subst(q_next, P)
    return (q_next * v3 * PhasePoly.monomial(0, 0, 2)).scale(-sys.lam / 4)


def p3q_defect_stated(sys: KickedSystem) -> PhasePoly:
    """The commonly quoted one-step p^3 q defect ``-(3/2) lam hbar^2 V'''(q - Tp)``.

    It disagrees with the computed flow; kept so the mismatch stays visible.
    """
    v3 = sys.V.diff("q", 3).subst(Q - P.scale(sys.T), P)
    return (v3 * PhasePoly.monomial(0, 0, 2)).scale(-Fraction(3, 2) * sys.lam)


def gauge_defect_formula(sys: KickedSystem, a) -> PhasePoly:
    """``-hbar^2 (a lam / 4) V'''(q - Tp)``."""
    v3 = sys.V.diff("q", 3).subst(Q - P.scale(sys.T), P)
    return (v3 * PhasePoly.monomial(0, 0, 2)).scale(-Fraction(a) * sys.lam / 4)


def _kick(seed: int) -> list[CaseResult]:
    def systems():
        for v in TEST_POTENTIALS:
            for lam, T in ((1, 1), (Fraction(2, 3), Fraction(5, 7)), (-3, Fraction(1, 2))):
                yield KickedSystem(parse_poly(v), lam, T)

    def random_systems(label, n=10):
        rng = rng_for(seed, label)
        for _ in range(n):
            yield dict(sys=KickedSystem(random_q_poly(rng, 6), Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                                        Fraction(rng.randint(-4, 4), rng.randint(1, 3))))

    def low_degree_cases():
        rng = rng_for(seed, "low-degree")
        for case in random_systems("low-degree-sys", 10):
            case["f"] = random_poly(rng, max_degree=2, max_hbar=0)
            yield case

    def any_f_cases():
        rng = rng_for(seed, "any-f")
        for case in random_systems("any-f-sys", 10):
            case["f"] = random_poly(rng, max_degree=5, max_hbar=0)
            yield case

    def kappa_cases():
        V = parse_poly("(1/4)*q^4")
        for (l1, t1), (l2, t2) in (((1, 2), (2, 1)), ((Fraction(1, 2), 4), (4, Fraction(1, 2)))):
            yield dict(d1=quantum_classical_defect(KickedSystem(V, l1, t1), P**3 * Q),
                       d2=quantum_classical_defect(KickedSystem(V, l2, t2), P**3 * Q))

    def canonical(sys):
        qc, pc = sys.step_coordinates()
        qq, pq = quantum_step_observable(sys, Q), quantum_step_observable(sys, P)
        return not symplectic_defect(qc, pc, "classical") and not symplectic_defect(qq, pq, "quantum")

    def traj_ok(sys, q0, p0):
        exact = trajectory(sys, PhasePoint(q0, p0), 50)
        approx = trajectory(sys, PhasePoint(float(q0), float(p0)), 50)
        for e, x in zip(exact, approx):
            for ev, xv in ((e.q, x.q), (e.p, x.p)):
                if abs(float(ev) - xv) > 1e-9 * max(1.0, abs(float(ev))):
                    return False
        return True

    harmonic = KickedSystem(parse_poly("(1/2)*q^2"), Fraction(1, 2), 1)
    return [
        _check("coordinates_covariant", ({"sys": s, "f": f} for s in systems() for f in (Q, P)),
               lambda sys, f: quantum_step_observable(sys, f) == classical_step_observable(sys, f)),
        _check("p3q_defect_stated_form",
               ({"sys": s, "defect": quantum_classical_defect(s, P**3 * Q), "stated": p3q_defect_stated(s)}
                for s in systems()),
               lambda sys, defect, stated: defect == stated),
        _check("p3q_defect_closed_form",
               ({"sys": s, "defect": quantum_classical_defect(s, P**3 * Q), "closed_form": p3q_defect_formula(s)}
                for s in systems()),
               lambda sys, defect, closed_form: defect == closed_form),
        _check("gauge_defect_closed_form", ({"sys": s, "a": a} for s in systems() for a in (1, Fraction(-2, 5))),
               lambda sys, a: gauge_defect(sys, a) == gauge_defect_formula(sys, a)),
        _check("low_degree_observables_no_defect", low_degree_cases(),
               lambda sys, f: not quantum_classical_defect(sys, f)),
        _check("defect_is_order_hbar2", any_f_cases(),
               lambda sys, f: (d := quantum_classical_defect(sys, f)).lowest_hbar_power is None
               or d.lowest_hbar_power >= 2),
        _check("step_is_canonical", ({"sys": s["sys"]} for s in random_systems("canon")), canonical),
        _check("kappa_not_sufficient", kappa_cases(), lambda d1, d2: d1 != d2),
        _check("trajectory_rational_vs_float",
               [dict(sys=harmonic, q0=Fraction(1, 3), p0=Fraction(-1, 2)), dict(sys=harmonic, q0=1, p0=0)],
               traj_ok),
    ]


# star exponential


def _starexp(seed: int) -> list[CaseResult]:
    gens = ("(1/2)*(p^2+q^2)", "(1/3)*q^3", "(1/2)*p*q")
    obs = ("q", "p", "p^2*q")
    mlt_cases = [dict(A=parse_poly(a), f=parse_poly(f)) for a in gens for f in obs]

    def group_ok(A, c1, c2, N=4):
        e1, e2 = _exp_series(A, N), _exp_series(A, N)
        lhs = PhasePoly()
        for j in range(N + 1):
            for k in range(N + 1 - j):
                lhs = lhs + star(e1[j], e2[k]).scale(c1**j * c2**k)
        return lhs == star_exponential_series(A, c1 + c2, N)

    def group_cases():
        rng = rng_for(seed, "exp-group")
        for a in gens:
            yield dict(A=parse_poly(a), c1=Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
                       c2=Fraction(rng.randint(-3, 3), rng.randint(1, 3)))

    def unitary_cases():
        rng = rng_for(seed, "unitary")
        for a in gens:
            yield dict(A=parse_poly(a), f=random_poly(rng, max_degree=3, max_hbar=1, real=True),
                       gamma=Fraction(rng.randint(-3, 3), rng.randint(1, 3)))

    H0 = parse_poly("(1/2)*(p^2+q^2)")
    return [
        _check("mlt_equivalence_order6", mlt_cases,
               lambda A, f: not mlt_equivalence_defect(A, 1, f, 6) and not mlt_equivalence_defect(A, I, f, 6)),
        _check("star_power_oscillator", [dict(A=H0)],
               lambda A: star_power(A, 2) == A * A - PhasePoly.monomial(0, 0, 2, Fraction(1, 4))),
        _check("star_exponential_group_law", group_cases(), group_ok),
        _check("conjugation_preserves_reality", unitary_cases(),
               lambda A, f, gamma: star_conjugate(A, I * gamma, f, 5).is_real),
    ]


_RUNNERS = {"algebra": _algebra, "covariance": _covariance, "kick": _kick, "starexp": _starexp}


def verify_suite(name: str, seed: int = 0) -> Report:
    """Run one named suite (or ``"all"``) and return its report."""
    if name == "all":
        report = Report("all", seed)
        for suite in SUITES:
            report.cases.extend(
                CaseResult(f"{suite}.{c.name}", c.count, c.passed, c.counterexample) for c in _RUNNERS[suite](seed)
            )
        return report
    if name not in _RUNNERS:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    return Report(name, seed, _RUNNERS[name](seed))
