"""Command line: analyze | parametrize | verify | certify-intval.

Exit status is 0 on success, 2 when a verification or validation step fails,
1 for usage and parse errors. With --json every outcome, errors included,
is a single JSON object on stdout; errors carry a machine-readable code.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .curve import ParametrizationRejected, ingest_parametrization, singular_points
from .intval import certify_external_triple
from .parser import parse_poly
from .pipeline import MAX_D
from .poly import UV
from .report import Run, check_irreducible, read_form, run_pipeline, to_dict, to_text_report
from .verify import verify_box

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class Failure(Exception):
    """Something was checked and came out wrong: exit 2."""

    def __init__(self, code, message, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload or {}


def _common(p: argparse.ArgumentParser, pipeline=True):
    p.add_argument("form", help='ternary form in X, Y, Z, e.g. "X*Y - Z^2"')
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--assume-irreducible", action="store_true", help="skip the irreducibility check (needed for degree >= 4)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks (default 0)")
    if pipeline:
        p.add_argument("--height-bound", type=int, default=20, help="search bound for a rational point on a conic")
        p.add_argument("--param", nargs=3, metavar="EXPR", help="supply h1 h2 h3 as forms in U, V")
        p.add_argument("--max-d", type=int, default=MAX_D, help=f"largest modulus to enumerate (default {MAX_D})")
        p.add_argument("--force", action="store_true", help="enumerate residue classes even above --max-d")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dioparam", description="Integer solutions of f(X, Y, Z) = 0 from a rational parametrization.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="degree, irreducibility and singular points")
    _common(an, pipeline=False)
    an.add_argument("--param", nargs=3, metavar="EXPR", help="classify singular points against this parametrization")

    _common(sub.add_parser("parametrize", help="build the parametrization, certificates and the integer family"))

    vp = sub.add_parser("verify", help="check the family against all solutions in a box")
    _common(vp)
    vp.add_argument("--box", type=int, required=True, metavar="N", help="box [-N, N]^3")
    vp.add_argument("--samples", type=int, default=200, help="family evaluations for the soundness check")
    vp.add_argument("--workers", type=int, default=1, help="processes for the enumeration")

    cp = sub.add_parser("certify-intval", help="check an external triple of integer-valued polynomials")
    _common(cp)
    cp.add_argument("--g", nargs=3, metavar="EXPR", required=True, help="g1 g2 g3 in the variables of --vars")
    cp.add_argument("--vars", default="u,v,w", help="comma separated variables of g (default u,v,w)")
    cp.add_argument("--sample-box", type=int, default=6, help="domain box for sampling g")
    cp.add_argument("--solution-box", type=int, default=None, help="solution box for the reverse inclusion")
    return ap


def _pipeline(args) -> Run:
    return run_pipeline(
        args.form,
        param=args.param,
        height_bound=args.height_bound,
        assume_irreducible=args.assume_irreducible,
        max_d=args.max_d,
        force=args.force,
    )


def cmd_analyze(args) -> tuple[Run, int]:
    f = read_form(args.form)
    run = Run(f, args.form, check_irreducible(f, args.assume_irreducible))
    h = None
    if args.param:
        h = ingest_parametrization(f, [parse_poly(p, UV) for p in args.param])
        run.h = h
    run.singular = singular_points(f, h)
    return run, EXIT_OK


def cmd_parametrize(args) -> tuple[Run, int]:
    return _pipeline(args), EXIT_OK


def cmd_verify(args) -> tuple[Run, int]:
    try:
        run = _pipeline(args)
    except ParametrizationRejected as e:
        # a supplied triple off the curve is a verification failure, not a usage error
        raise Failure(e.code, str(e), {"verification": {"success": False, "anomalies": [str(e)]}}) from e
    run.verification = verify_box(run.f, run.h, run.family, args.box, seed=args.seed, samples=args.samples, workers=args.workers)
    return run, EXIT_OK if run.verification.success else EXIT_FAIL


def cmd_certify(args) -> tuple[Run, int]:
    run = _pipeline(args)
    gvars = tuple(v.strip() for v in args.vars.split(",") if v.strip())
    g = [parse_poly(e, gvars) for e in args.g]
    run.external = certify_external_triple(run.f, g, run.family, run.h, args.sample_box, args.solution_box)
    return run, EXIT_OK if run.external.passed else EXIT_FAIL


COMMANDS = {"analyze": cmd_analyze, "parametrize": cmd_parametrize, "verify": cmd_verify, "certify-intval": cmd_certify}


def _error(args, code, message, status, extra=None):
    if getattr(args, "json", False):
        out = {"input": getattr(args, "form", None), "error": {"code": code, "message": message}}
        out.update(extra or {})
        print(json.dumps(out, indent=2))
    else:
        print(f"error [{code}]: {message}", file=sys.stderr)
    return status


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        run, status = COMMANDS[args.command](args)
    except Failure as e:
        return _error(args, e.code, str(e), EXIT_FAIL, e.payload)
    except ParametrizationRejected as e:
        return _error(args, e.code, str(e), EXIT_FAIL)
    except ValueError as e:
        # parse errors, curve errors, ModulusTooLarge, BoxTooLarge, NotCoprimeTriple
        return _error(args, getattr(e, "code", "invalid-input"), str(e), EXIT_USAGE)
    if args.json:
        print(json.dumps(to_dict(run), indent=2))
    else:
        print(to_text_report(run))
    return status
