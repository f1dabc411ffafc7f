"""Command-line interface: ``mongeampere <command> [options]`` printing JSON.

Exit codes: 0 success, 1 usage or parse error, 2 invalid mathematical input,
3 internal error.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import gcs, mae
from .dsl import format_form, parse_form, parse_point, parse_poly
from .errors import DomainError, ParseError
from .exterior import Form, coordinate_names, lepage_decompose
from .invariants import (hitchin_pfaffian, hitchin_tensor, lr_metric, perfect_square_root,
                         pfaffian2, q_invariant, quartic_names, scalar_invariants)
from .linalg import signature_exact
from .polynomial import Poly, format_rational

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class CommandResult:
    command: str | None
    dim: int | None
    inputs: dict
    result: dict | None
    warnings: list = field(default_factory=list)
    exit_status: int = EXIT_OK
    error: dict | None = None
    pretty: bool = False

    def to_json(self) -> dict:
        out = {"command": self.command, "dim": self.dim, "inputs": self.inputs,
               "result": self.result, "warnings": self.warnings}
        if self.error is not None:
            out["error"] = self.error
        return out


# -- serialization ----------------------------------------------------------------

def _rat(x) -> str:
    if isinstance(x, Poly):
        x = x.constant_value()
    return format_rational(Fraction(x))


def _poly(p: Poly, n: int) -> str:
    return p.to_str(coordinate_names(n))


def _entry(x, n: int) -> str:
    if isinstance(x, Poly):
        return format_rational(x.constant_value()) if x.is_constant() else _poly(x, n)
    return format_rational(Fraction(x))


def _matrix(m, n: int) -> list:
    rows = m.rows if hasattr(m, "rows") else m
    return [[_entry(x, n) for x in row] for row in rows]


def _signature(sig) -> list:
    return sig.as_list()


# -- commands ----------------------------------------------------------------------

def _form(args) -> Form:
    """--form, or the primitive form of --symbol."""
    if args.form is not None:
        return parse_form(args.form, args.dim)
    if args.symbol is not None:
        return mae.form_from_symbol(mae.parse_symbol(args.symbol, args.dim))
    raise UsageError("--form or --symbol is required")


def _function(args) -> Poly:
    if args.function is None:
        raise UsageError("--function is required")
    return parse_poly(args.function, args.dim)


def _point(args) -> list:
    if args.point is None:
        raise UsageError("--point is required")
    pt = parse_point(args.point)
    if len(pt) != args.dim:
        raise UsageError(f"--point needs {args.dim} coordinates")
    return pt


def cmd_invariants(args) -> dict:
    w = _form(args)
    n = args.dim
    if w.degree != n:
        raise DomainError(f"invariants need an {n}-form")
    if not w.is_constant():
        raise DomainError("invariants need constant coefficients")
    if n == 2:
        out = {"pfaffian": _rat(pfaffian2(w))}
        primitive = lepage_decompose(w)[0]
        out["a"] = [_rat(x) for x in scalar_invariants(primitive, 4)]
        return out
    if n == 3:
        lam = hitchin_pfaffian(w)
        return {"lambda": _rat(lam), "K": _matrix(hitchin_tensor(w), n),
                "a": [_rat(x) for x in scalar_invariants(w, 3)],
                "metric_signature": _signature(signature_exact(
                    [[x.constant_value() for x in r] for r in lr_metric(w)]))}
    if n == 4:
        primitive = lepage_decompose(w)[0]
        q = q_invariant(primitive)
        root = perfect_square_root(q)
        return {"a": [_rat(x) for x in scalar_invariants(primitive, 4)],
                "q": q.polynomial.to_str(quartic_names(n)),
                "square_root": None if root is None else {
                    "factor": _rat(root.factor), "root": root.root.to_str(quartic_names(n))}}
    raise DomainError("invariants are available for n = 2, 3, 4")


def cmd_classify(args) -> dict:
    res = mae.classify(_form(args))
    if isinstance(res, mae.Orbit2D):
        return {"orbit": res.label, "normal_form": res.normal_form, "pfaffian": _rat(res.pfaffian)}
    if isinstance(res, mae.Orbit3D):
        return {"orbit": res.row if res.row is not None else "unclassified",
                "normal_form": res.normal_form, "lambda_sign": res.lambda_sign,
                "signature": _signature(res.signature), "lambda": _rat(res.lambda_value)}
    names = quartic_names(args.dim)
    root = res.square_root
    return {"a": [_rat(x) for x in res.invariants], "q": res.quartic.polynomial.to_str(names),
            "square_root": None if root is None else {
                "factor": _rat(root.factor), "root": root.root.to_str(names)}}


def cmd_apply(args) -> dict:
    return {"result": format_form(mae.mae_apply(_form(args), _function(args)))}


def cmd_symbol(args) -> dict:
    if args.symbol is not None and args.form is None:
        h = mae.parse_symbol(args.symbol, args.dim)
        return {"form": format_form(mae.form_from_symbol(h)), "symbol": str(h)}
    return {"symbol": str(mae.mae_symbol(_form(args)))}


def cmd_decompose(args) -> dict:
    w0, w1 = lepage_decompose(_form(args))
    return {"primitive": format_form(w0), "quotient": format_form(w1)}


def cmd_divergent(args) -> dict:
    r = mae.divergent_type(_form(args))
    return {"is_divergent": r.is_divergent, "alpha": format_form(r.alpha),
            "euler": format_form(r.euler), "mu": None if r.mu is None else _poly(r.mu, 2)}


def cmd_linearize(args) -> dict:
    r = mae.linearize(_form(args), _function(args), _point(args))
    return {"principal": _matrix(r.principal, args.dim),
            "lower_order": [_rat(x) for x in r.lower_order],
            "class": r.cls, "signature": _signature(r.signature)}


def cmd_ellipticity(args) -> dict:
    return {"class": mae.ellipticity_class(_form(args), _function(args), _point(args))}


def cmd_dual_linearize(args) -> dict:
    w, phi, pt = _form(args), _function(args), _point(args)
    d = mae.dual_linearization(w, phi, pt)
    direct = mae.linearize(w, phi, pt).principal
    ratio = None
    pairs = [(d.matrix[i][j], direct[i][j]) for i in range(3) for j in range(3)]
    if all((a == 0) == (b == 0) for a, b in pairs):
        ratios = {a / b for a, b in pairs if b}
        if len(ratios) == 1:
            ratio = _rat(ratios.pop())
    return {"matrix": _matrix(d.matrix, 3), "principal": _matrix(direct, 3),
            "dual_form": format_form(d.dual.rational), "radicand": _rat(d.dual.radicand),
            "ratio": ratio}


def cmd_conservation(args) -> dict:
    r = mae.generating_check(_form(args), _function(args))
    return {"is_generating": r.is_generating, "beta": format_form(r.beta),
            "conjugate": None if r.conjugate is None else _poly(r.conjugate, 2),
            "potential": None if r.potential is None else format_form(r.potential)}


def cmd_gcs_check(args) -> dict:
    j = gcs.gcs_from_hitchin_pair(_form(args))
    return {"J": _matrix(j.matrix, args.dim), "squares_to_minus_one": j.squares_to_minus_one(),
            "pairing_compatible": j.pairing_compatible(),
            "integrable": gcs.residual_is_zero(gcs.gcs_integrability_residual(j))}


def cmd_solution_check(args) -> dict:
    if args.surface is None:
        raise UsageError("--surface is required")
    if args.dim != 2:
        raise DomainError("solution-check works on T*R^2")
    j = gcs.gcs_from_hitchin_pair(_form(args))
    surface = gcs.SampledSurface.from_file(args.surface)
    tol = 1e-9 if args.tolerance is None else args.tolerance
    reports = gcs.generalized_solution_check(j, surface, tol)
    return {"samples": len(reports), "passed": sum(r.passed for r in reports),
            "all_passed": all(r.passed for r in reports), "tolerance": tol,
            "reports": [{"index": r.index, "passed": r.passed, "degenerate": r.degenerate,
                         "lagrangian": r.lagrangian, "a_closed": r.a_closed,
                         "omega_vanishes": r.omega_vanishes, "defect": r.j_defect}
                        for r in reports]}


COMMANDS = {
    "invariants": cmd_invariants,
    "classify": cmd_classify,
    "apply": cmd_apply,
    "symbol": cmd_symbol,
    "decompose": cmd_decompose,
    "divergent": cmd_divergent,
    "linearize": cmd_linearize,
    "ellipticity": cmd_ellipticity,
    "dual-linearize": cmd_dual_linearize,
    "conservation": cmd_conservation,
    "gcs-check": cmd_gcs_check,
    "solution-check": cmd_solution_check,
}
NUMERIC = {"solution-check"}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mongeampere", description="Symplectic Monge-Ampere toolkit.")
    parser.add_argument("--batch", metavar="FILE", help="run one invocation per line of FILE")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--dim", type=int, default=2)
        p.add_argument("--form")
        p.add_argument("--symbol", help="Hessian symbol in q, u_i, u_ij; stands in for --form")
        p.add_argument("--function")
        p.add_argument("--point")
        p.add_argument("--surface", help="sampled surface file (solution-check)")
        if name in NUMERIC:
            p.add_argument("--tolerance", type=float)
        out = p.add_mutually_exclusive_group()
        out.add_argument("--json", dest="pretty", action="store_false", default=False)
        out.add_argument("--pretty", dest="pretty", action="store_true")
    return parser


def _inputs(args) -> dict:
    keys = ("form", "symbol", "function", "point", "surface", "tolerance")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def run_command(argv) -> CommandResult:
    """Parse and execute one invocation; never raises."""
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as exc:
        return CommandResult(None, None, {}, None, exit_status=EXIT_USAGE,
                             error={"type": "usage", "message": str(exc)})
    if args.command is None:
        return CommandResult(None, None, {}, None, exit_status=EXIT_USAGE,
                             error={"type": "usage", "message": "missing command"})
    res = CommandResult(args.command, args.dim, _inputs(args), None)
    res.pretty = args.pretty
    try:
        if args.dim < 1:
            raise UsageError("--dim must be positive")
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            res.result = COMMANDS[args.command](args)
        res.warnings = [str(w.message) for w in caught]
    except (UsageError, ParseError) as exc:
        res.exit_status, res.error = EXIT_USAGE, {"type": "parse" if isinstance(exc, ParseError)
                                                  else "usage", "message": str(exc)}
    except DomainError as exc:
        res.exit_status, res.error = EXIT_DOMAIN, {"type": "domain", "message": str(exc)}
    except Exception as exc:  # noqa: BLE001
        res.exit_status, res.error = EXIT_INTERNAL, {"type": "internal",
                                                     "message": f"{type(exc).__name__}: {exc}"}
    return res


def render(res: CommandResult, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(res.to_json(), ensure_ascii=False, indent=2)
    return json.dumps(res.to_json(), ensure_ascii=False, separators=(",", ":"))


def _run_batch(path: str, out) -> int:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh]
    except OSError as exc:
        print(json.dumps({"error": {"type": "usage", "message": str(exc)}}), file=out)
        return EXIT_USAGE
    jobs = [shlex.split(ln) for ln in lines if ln and not ln.startswith("#")]
    # separate processes: warning capture is process-global
    if len(jobs) > 1:
        with ProcessPoolExecutor() as pool:
            results = list(pool.map(run_command, jobs))
    else:
        results = [run_command(j) for j in jobs]
    for r in results:
        print(render(r, r.pretty), file=out)
    return max((r.exit_status for r in results), default=EXIT_OK)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if argv[:1] == ["--batch"] or (argv and argv[0].startswith("--batch=")):
        try:
            args = build_parser().parse_args(argv)
        except UsageError as exc:
            print(f"mongeampere: {exc}", file=sys.stderr)
            return EXIT_USAGE
        return _run_batch(args.batch, sys.stdout)
    res = run_command(argv)
    print(render(res, res.pretty))
    if res.error is not None:
        print(f"mongeampere: {res.error['message']}", file=sys.stderr)
    return res.exit_status


if __name__ == "__main__":
    sys.exit(main())
