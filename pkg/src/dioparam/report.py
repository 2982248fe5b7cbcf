"""End-to-end runs and their JSON/text serialization.

Every polynomial in a report is written in the CLI grammar, so any report
field can be fed back to :func:`dioparam.parser.parse_poly`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .curve import (
    BinaryFormTriple,
    CurveError,
    ParametrizationRejected,
    compose,
    ingest_parametrization,
    irreducibility_status,
    is_birational,
    parametrize,
    singular_points,
)
from .intval import ExternalTripleReport
from .parser import parse_poly
from .pipeline import MAX_D, GcdBoundResult, ParamFamily, compute_gcd_bound, residue_decompose
from .poly import UV, XYZ, TernaryForm, to_text
from .resultant import BezoutCertificate
from .verify import VerificationReport


class Reducible(CurveError):
    code = "reducible"


class IrreducibilityUnknown(CurveError):
    code = "irreducibility-unchecked"


def read_form(text: str) -> TernaryForm:
    poly = parse_poly(text, XYZ)
    return TernaryForm.from_poly(poly)


@dataclass
class Run:
    f: TernaryForm
    text: str
    irreducible: tuple
    h: BinaryFormTriple | None = None
    point: tuple | None = None
    bound: GcdBoundResult | None = None
    family: ParamFamily | None = None
    singular: list = field(default_factory=list)
    birational: object = None
    verification: VerificationReport | None = None
    external: ExternalTripleReport | None = None


def check_irreducible(f: TernaryForm, assume: bool) -> tuple:
    verdict, method = irreducibility_status(f, assume)
    if verdict is False:
        raise Reducible(f"f is not absolutely irreducible: {method}")
    if verdict is None:
        raise IrreducibilityUnknown("degree >= 4: pass --assume-irreducible to proceed")
    return verdict, method


def run_pipeline(
    text: str,
    param: Sequence[str] | None = None,
    height_bound: int = 20,
    assume_irreducible: bool = False,
    max_d: int = MAX_D,
    force: bool = False,
) -> Run:
    f = read_form(text)
    run = Run(f, text, check_irreducible(f, assume_irreducible))
    if param:
        polys = [parse_poly(p, UV) for p in param]
        run.h = ingest_parametrization(f, polys)
    else:
        run.h, run.point = parametrize(f, height_bound)
    if not compose(f, run.h).is_zero():
        raise ParametrizationRejected("not-on-curve", "f(h1, h2, h3) is not identically zero")
    run.birational = is_birational(f, run.h)
    run.singular = singular_points(f, run.h)
    run.bound = compute_gcd_bound(list(run.h))
    run.family = residue_decompose(f, list(run.h), run.bound.d_tightened, max_d=max_d, force=force)
    return run


# ---------------------------------------------------------------------------
# serialization


def _cert(c: BezoutCertificate) -> dict:
    return {
        "cofactors": [to_text(p) for p in c.cofactors],
        "rhs_constant": c.rhs_constant,
        "rhs_variable": c.rhs_variable,
        "rhs_exponent": c.rhs_exponent,
        "verified": c.verify(),
    }


def _singular(s) -> dict:
    return {
        "point": list(s.point),
        "preimages": [list(p) for p in s.preimages],
        "leftover": None if s.leftover is None else str(s.leftover),
        "classification": s.classification,
        "method": s.method,
    }


def _verification(v: VerificationReport) -> dict:
    return {
        "box_bound": v.box_bound,
        "success": v.success,
        "solutions_found": v.solutions_found,
        "covered": v.covered,
        "bad_excluded": v.bad_excluded,
        "uncovered_non_bad": v.uncovered_non_bad,
        "spurious": v.spurious,
        "anomalies": v.anomalies,
        "soundness_samples": v.soundness_samples,
        "wall_time": round(v.wall_time, 3),
    }


def _external(e: ExternalTripleReport) -> dict:
    return {
        "passed": e.passed,
        "integer_valued": e.integer_valued,
        "identity_holds": e.identity_holds,
        "image_in_family": e.image_in_family,
        "family_in_image": e.family_in_image,
        "evidence": e.evidence,
        "image_points": e.image_points,
        "domain_bound": e.domain_bound,
        "solution_bound": e.solution_bound,
        "outside": e.outside,
        "missing": e.missing,
    }


def to_dict(run: Run, include_timing: bool = True) -> dict:
    out = {
        "input": run.text,
        "normalized": str(run.f),
        "degree": run.f.degree,
        "irreducibility": {"status": run.irreducible[0], "method": run.irreducible[1]},
    }
    if run.h is not None:
        out["parametrization"] = {
            "h1": str(run.h[0]),
            "h2": str(run.h[1]),
            "h3": str(run.h[2]),
            "provenance": run.h.provenance,
            "rational_point": None if run.point is None else list(run.point),
        }
    if run.birational is not None:
        b = run.birational
        out["birational"] = {"ok": b.ok, "reason": b.reason, "samples": b.samples_checked, "method": "sampled"}
    if run.bound is not None:
        out["certificates"] = {"eq2": _cert(run.bound.cert_u), "eq3": _cert(run.bound.cert_v)}
        out["d"] = run.bound.d
        out["d_tightened"] = run.bound.d_tightened
        out["tightening_complete"] = run.bound.tightening_complete
    if run.family is not None:
        out["family"] = [{"offsets": list(m.offsets), "forms": [to_text(g) for g in m.forms]} for m in run.family.members]
    out["singular_points"] = [_singular(s) for s in run.singular]
    out["verification"] = None if run.verification is None else _verification(run.verification)
    if not include_timing and out["verification"] is not None:
        out["verification"].pop("wall_time")
    if run.external is not None:
        out["external_triple"] = _external(run.external)
    return out


def to_text_report(run: Run) -> str:
    lines = [f"f = {run.f}  (degree {run.f.degree})", f"irreducible: {run.irreducible[0]} ({run.irreducible[1]})"]
    if run.h is not None:
        src = run.h.provenance + (f" from point {run.point}" if run.point else "")
        lines.append(f"parametrization [{src}]:")
        for i, g in enumerate(run.h, 1):
            lines.append(f"  h{i} = {g}")
    if run.birational is not None:
        lines.append(f"birational (sampled): {run.birational.ok} - {run.birational.reason}")
    for s in run.singular:
        pre = ", ".join(f"({u}:{v})" for u, v in s.preimages) or "none rational"
        left = f"; leftover {s.leftover}" if s.leftover is not None else ""
        lines.append(f"singular point {s.point}: {s.classification} [preimages {pre}{left}] ({s.method})")
    if run.bound is not None:
        for name, c in (("U", run.bound.cert_u), ("V", run.bound.cert_v)):
            lines.append(
                f"certificate -> {c.rhs_constant}*{c.rhs_variable}^{c.rhs_exponent}: "
                + " + ".join(f"({to_text(p)})*h{i}" for i, p in enumerate(c.cofactors, 1))
            )
        lines.append(f"d = {run.bound.d}, tightened d = {run.bound.d_tightened}")
    if run.family is not None:
        lines.append(f"family: {len(run.family)} residue classes mod {run.family.modulus} in S, T, R")
        for m in run.family.members[:12]:
            lines.append(f"  {m.offsets}: (" + ", ".join(to_text(g) for g in m.forms) + ")")
        if len(run.family) > 12:
            lines.append(f"  ... {len(run.family) - 12} more (use --json for all)")
    v = run.verification
    if v is not None:
        lines.append(
            f"verify box {v.box_bound}: {'SUCCESS' if v.success else 'FAILURE'}; solutions {v.solutions_found}, "
            f"covered {v.covered}, bad excluded {v.bad_excluded}, uncovered {len(v.uncovered_non_bad)}, "
            f"spurious {len(v.spurious)}, {v.wall_time:.2f}s"
        )
        for a in v.anomalies + v.uncovered_non_bad[:10] + v.spurious[:10]:
            lines.append(f"  ANOMALY: {a}")
    e = run.external
    if e is not None:
        lines.append(
            f"external triple: integer-valued {e.integer_valued}, identity {e.identity_holds}, "
            f"image in family {e.image_in_family}, family in image {e.family_in_image} ({e.evidence})"
        )
    return "\n".join(lines)
