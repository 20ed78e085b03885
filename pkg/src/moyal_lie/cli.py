"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from importlib import resources
from fractions import Fraction
from typing import Optional, Sequence, TextIO

from .exprio import format_poly, format_scalar, parse_poly, parse_scalar, poly_from_json, poly_to_json
from .kicked import (
    DEFAULT_SYMBOLIC_BUDGET,
    KickedSystem,
    evolve_observable,
    gauge_defect,
    quantum_classical_defect,
    trajectory,
)
from .lie import DEFAULT_MAX_ITER, EXACT, BracketKind, bracket_apply, flow, generator_as_operator, transform_coordinates
from .phasepoly import PhasePoint, PhasePoly
from .scalars import parse_rational, rational_str
from .star import cross, moyal, poisson, star, star_bopp
from .starexp import mlt_equivalence_defect, star_conjugate, star_exponential_series
from .verify import SUITES, verify_suite

log = logging.getLogger("moyal_lie")

KINDS = {k.value: k for k in BracketKind}


def load_schema(name: str) -> dict:
    """The published JSON schema for a subcommand's output (or ``"poly"``)."""
    return json.loads(resources.files(__package__).joinpath("schemas", f"{name}.schema.json").read_text("utf-8"))


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _poly_out(f: PhasePoly) -> dict:
    return {"text": format_poly(f), "poly": poly_to_json(f)}


def _u64(text: str) -> int:
    n = int(text)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("must be an unsigned 64-bit integer")
    return n


def _u32(text: str) -> int:
    n = int(text)
    if not 0 < n < 2**32:
        raise argparse.ArgumentTypeError("must be a positive 32-bit integer")
    return n


def _nonneg(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def _number(text: str):
    """Exact rational when it parses as one, otherwise a float."""
    try:
        return parse_rational(text)
    except ValueError:
        try:
            return float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _global_flags() -> argparse.ArgumentParser:
    # SUPPRESS lets the same flags appear before or after the subcommand
    g = _Parser(add_help=False)
    g.add_argument("--format", choices=("text", "json", "csv"), default=argparse.SUPPRESS)
    g.add_argument("--seed", type=_u64, default=argparse.SUPPRESS)
    g.add_argument("--max-iter", type=_u32, default=argparse.SUPPRESS)
    g.add_argument("--input", metavar="FILE", default=argparse.SUPPRESS,
                   help="read the last polynomial operand from PhasePoly JSON")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = _Parser(prog="moyal-lie", parents=[common],
                     description="Exact star products, Moyal-Lie flows and kicked-map defects.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    p = add("star", "Moyal star product f*g")
    p.add_argument("f")
    p.add_argument("g", nargs="?")
    p.add_argument("--method", choices=("groenewold", "bopp"), default="groenewold")

    p = add("bracket", "Poisson bracket, Moyal bracket or Poisson cross-product")
    p.add_argument("--type", choices=("poisson", "moyal", "cross"), required=True)
    p.add_argument("f")
    p.add_argument("g", nargs="?")

    p = add("apply", "one application of the Lie generator of G to f")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("G")
    p.add_argument("f", nargs="?")

    for name, help_text in (("flow", "Lie-series flow exp(c X_G) f"),
                            ("coords", "transformed coordinates (Q, P)")):
        p = add(name, help_text)
        p.add_argument("--kind", choices=KINDS, required=True)
        p.add_argument("--gen", required=True)
        p.add_argument("--param", required=True)
        how = p.add_mutually_exclusive_group(required=True)
        how.add_argument("--order", type=_nonneg)
        how.add_argument("--exact", action="store_true")
        if name == "flow":
            p.add_argument("f", nargs="?")

    p = add("operator", "differential operator of the Moyal generator of A")
    p.add_argument("A", nargs="?")

    p = add("kick", "kicked map: observable evolution, defects or trajectories")
    p.add_argument("--potential", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--T", dest="T", required=True)
    p.add_argument("--observable")
    p.add_argument("--q0", type=_number)
    p.add_argument("--p0", type=_number)
    p.add_argument("--hbar", type=_number, default=0)
    p.add_argument("--steps", type=_nonneg)
    p.add_argument("--defect", action="store_true", help="quantum minus classical one-step image")
    p.add_argument("--gauge", metavar="a", help="one-step defect of Q = q + a p^3")
    p.add_argument("--budget", type=_nonneg, default=DEFAULT_SYMBOLIC_BUDGET,
                   help="symbolic steps allowed before warning (default %(default)s)")

    p = add("starexp", "truncated star exponential and star-product conjugation")
    p.add_argument("--gen", required=True)
    p.add_argument("--param", required=True)
    p.add_argument("--order", type=_nonneg, required=True)
    p.add_argument("--conjugate", metavar="f")
    p.add_argument("--check-mlt", action="store_true")

    p = add("verify", "run a seeded invariant suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    return parser


class _Context:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.format = getattr(args, "format", "text")
        self.seed = getattr(args, "seed", 0)
        self.max_iter = getattr(args, "max_iter", DEFAULT_MAX_ITER)
        self.input = getattr(args, "input", None)

    def operand(self, attr: str) -> PhasePoly:
        """Positional polynomial operand, or the ``--input`` file standing in for it."""
        text = getattr(self.args, attr)
        if self.input is not None:
            if text is not None:
                raise UsageError(f"operand {attr} given both inline and via --input")
            with open(self.input, encoding="utf-8") as fh:
                return poly_from_json(fh.read())
        if text is None:
            raise UsageError(f"{self.args.command}: missing operand {attr}")
        return parse_poly(text)

    def symbolic_only(self):
        if self.format == "csv":
            raise UsageError(f"{self.args.command}: csv output is only available for trajectories")


def _emit_poly(ctx: _Context, out: TextIO, f: PhasePoly, **extra) -> None:
    ctx.symbolic_only()
    if ctx.format == "json":
        json.dump({"command": ctx.args.command, **extra, "result": _poly_out(f)}, out)
        out.write("\n")
    else:
        out.write(format_poly(f) + "\n")


def _cmd_star(ctx, out):
    f, g = parse_poly(ctx.args.f), ctx.operand("g")
    fn = star if ctx.args.method == "groenewold" else star_bopp
    _emit_poly(ctx, out, fn(f, g), method=ctx.args.method)


def _cmd_bracket(ctx, out):
    f, g = parse_poly(ctx.args.f), ctx.operand("g")
    fn = {"poisson": poisson, "moyal": moyal, "cross": cross}[ctx.args.type]
    _emit_poly(ctx, out, fn(f, g), type=ctx.args.type)


def _cmd_apply(ctx, out):
    G, f = parse_poly(ctx.args.G), ctx.operand("f")
    _emit_poly(ctx, out, bracket_apply(KINDS[ctx.args.kind], G, f), kind=ctx.args.kind)


def _order(args) -> Optional[int]:
    return EXACT if args.exact else args.order


def _cmd_flow(ctx, out):
    a = ctx.args
    G, c, f = parse_poly(a.gen), parse_scalar(a.param), ctx.operand("f")
    result = flow(KINDS[a.kind], G, c, f, _order(a), ctx.max_iter)
    _emit_poly(ctx, out, result, kind=a.kind, order=_order(a))


def _cmd_coords(ctx, out):
    a = ctx.args
    ctx.symbolic_only()
    Qn, Pn = transform_coordinates(KINDS[a.kind], parse_poly(a.gen), parse_scalar(a.param), _order(a), ctx.max_iter)
    if ctx.format == "json":
        json.dump({"command": "coords", "kind": a.kind, "order": _order(a),
                   "Q": _poly_out(Qn), "P": _poly_out(Pn)}, out)
        out.write("\n")
    else:
        out.write(f"Q = {format_poly(Qn)}\nP = {format_poly(Pn)}\n")


def _cmd_operator(ctx, out):
    ctx.symbolic_only()
    op = generator_as_operator(ctx.operand("A"))
    if ctx.format == "json":
        terms = [{"d_q": a, "d_p": b, "coeff": _poly_out(c)} for (a, b), c in sorted(op.terms.items())]
        json.dump({"command": "operator", "text": str(op), "terms": terms}, out)
        out.write("\n")
    else:
        out.write(str(op) + "\n")


def _point_value(x):
    return rational_str(x) if isinstance(x, Fraction) else x


def _cmd_kick(ctx, out):
    a = ctx.args
    sys_ = KickedSystem(parse_poly(a.potential), parse_rational(a.lam), parse_rational(a.T))
    numeric = a.q0 is not None or a.p0 is not None
    if numeric:
        if a.observable is not None or a.defect or a.gauge is not None:
            raise UsageError("kick: --q0/--p0 trajectories exclude --observable, --defect and --gauge")
        if a.q0 is None or a.p0 is None or a.steps is None:
            raise UsageError("kick: trajectories need --q0, --p0 and --steps")
        q0, p0, hbar = a.q0, a.p0, a.hbar
        if any(isinstance(x, float) for x in (q0, p0, hbar)):
            q0, p0, hbar = float(q0), float(p0), float(hbar)
        points = trajectory(sys_, PhasePoint(q0, p0, hbar), a.steps)
        _emit_trajectory(ctx, out, points)
        return
    ctx.symbolic_only()
    if a.gauge is not None:
        if a.observable is not None or a.defect:
            raise UsageError("kick: --gauge excludes --observable and --defect")
        result, mode = gauge_defect(sys_, parse_rational(a.gauge)), "gauge"
    elif a.observable is None:
        raise UsageError("kick: give --observable, --gauge, or --q0/--p0/--steps")
    elif a.defect:
        if a.steps not in (None, 1):
            raise UsageError("kick: --defect is a one-step quantity")
        result, mode = quantum_classical_defect(sys_, parse_poly(a.observable)), "defect"
    else:
        steps = 1 if a.steps is None else a.steps
        result = evolve_observable(sys_, parse_poly(a.observable), steps, budget=a.budget)
        mode = "observable"
    _emit_poly(ctx, out, result, mode=mode)


def _emit_trajectory(ctx, out, points):
    rows = [(n, _point_value(pt.q), _point_value(pt.p)) for n, pt in enumerate(points)]
    if ctx.format == "json":
        json.dump([{"step": n, "q": q, "p": p} for n, q, p in rows], out)
        out.write("\n")
    elif ctx.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("step", "q", "p"))
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        for n, q, p in rows:
            out.write(f"{n} {q} {p}\n")


def _cmd_starexp(ctx, out):
    a = ctx.args
    ctx.symbolic_only()
    A, c = parse_poly(a.gen), parse_scalar(a.param)
    if a.check_mlt and a.conjugate is None:
        raise UsageError("starexp: --check-mlt needs --conjugate f")
    if a.conjugate is None:
        _emit_poly(ctx, out, star_exponential_series(A, c, a.order), param=format_scalar(c), order=a.order)
        return
    f = parse_poly(a.conjugate)
    result = star_conjugate(A, c, f, a.order)
    defect = mlt_equivalence_defect(A, c, f, a.order, ctx.max_iter) if a.check_mlt else None
    if ctx.format == "json":
        json.dump({"command": "starexp", "param": format_scalar(c), "order": a.order, "result": _poly_out(result),
                   "mlt_defect": None if defect is None else _poly_out(defect)}, out)
        out.write("\n")
    else:
        out.write(format_poly(result) + "\n")
        if defect is not None:
            out.write(f"mlt defect: {format_poly(defect)}\n")
    if defect:
        raise VerificationFailed(f"star-exponential conjugation differs from the Moyal flow by {format_poly(defect)}")


def _cmd_verify(ctx, out):
    ctx.symbolic_only()
    report = verify_suite(ctx.args.suite, ctx.seed)
    if ctx.format == "json":
        json.dump(report.to_json(), out, sort_keys=True)
        out.write("\n")
    else:
        out.write(report.to_text() + "\n")
    if not report.passed:
        first = next(c for c in report.cases if not c.passed)
        detail = ", ".join(f"{k} = {v}" for k, v in (first.counterexample or {}).items())
        raise VerificationFailed(f"{first.name} failed: {detail}")


_COMMANDS = {
    "star": _cmd_star,
    "bracket": _cmd_bracket,
    "apply": _cmd_apply,
    "flow": _cmd_flow,
    "coords": _cmd_coords,
    "operator": _cmd_operator,
    "kick": _cmd_kick,
    "starexp": _cmd_starexp,
    "verify": _cmd_verify,
}


def run(argv: Optional[Sequence[str]] = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    handler = logging.StreamHandler(err)
    handler.setFormatter(logging.Formatter("warning: %(message)s"))
    log.addHandler(handler)
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        ctx = _Context(args)
        buf = io.StringIO()
        try:
            _COMMANDS[args.command](ctx, buf)
        finally:
            out.write(buf.getvalue())
        return 0
    except VerificationFailed as exc:
        err.write(f"verification failed: {exc}\n")
        return 2
    except (UsageError, ValueError, ArithmeticError, OSError, RuntimeError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    finally:
        log.removeHandler(handler)


def main() -> None:
    sys.exit(run())
