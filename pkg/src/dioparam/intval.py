"""Integer-valued polynomials via the binomial basis.

p in Q[X_1..X_m] maps Z^m into Z exactly when every coefficient c_k in
p = sum_k c_k prod_i binom(X_i, k_i) is an integer. The c_k are the forward
differences of p at the origin, so they only need p on the grid
prod_i {0, ..., deg_i p}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Sequence

from .curve import BinaryFormTriple
from .pipeline import ParamFamily
from .poly import MultiPoly, TernaryForm


def binomial_poly(var: str, k: int, vars: Sequence[str]) -> MultiPoly:
    """binom(var, k) = var (var - 1) ... (var - k + 1) / k! as a polynomial."""
    x = MultiPoly.var(var, vars)
    out = MultiPoly.const(1, vars)
    for j in range(k):
        out = out * (x - j)
    return out / factorial(k)


def _grlex(ks):
    return sorted(ks, key=lambda k: (sum(k), k))


@dataclass
class IntValuedCertificate:
    poly: MultiPoly
    binomial_coefficients: dict[tuple[int, ...], Fraction | int]
    integer_valued: bool = field(init=False)

    def __post_init__(self):
        self.integer_valued = all(Fraction(c).denominator == 1 for c in self.binomial_coefficients.values())

    def reconstruct(self) -> MultiPoly:
        vars = self.poly.vars
        total = MultiPoly.zero(vars)
        for ks, c in self.binomial_coefficients.items():
            term = MultiPoly.const(c, vars)
            for v, k in zip(vars, ks):
                if k:
                    term = term * binomial_poly(v, k, vars)
            total = total + term
        return total


def to_binomial_basis(p: MultiPoly) -> IntValuedCertificate:
    """Binomial-basis coefficients by iterated forward differences at 0."""
    m = len(p.vars)
    degs = [max(p.degree_in(i), 0) for i in range(m)]
    grid = {pt: Fraction(p.evaluate(pt)) for pt in product(*(range(d + 1) for d in degs))}
    # forward differences, one axis at a time
    for axis in range(m):
        for level in range(1, degs[axis] + 1):
            for pt in sorted((q for q in grid if q[axis] >= level), key=lambda q: q[axis], reverse=True):
                prev = list(pt)
                prev[axis] -= 1
                grid[pt] = grid[pt] - grid[tuple(prev)]
    coeffs = {}
    for ks in _grlex(grid):
        c = grid[ks]
        if c:
            coeffs[ks] = c.numerator if c.denominator == 1 else c
    return IntValuedCertificate(p, coeffs)


def is_integer_valued(p: MultiPoly) -> bool:
    return to_binomial_basis(p).integer_valued


def grid_verdict(p: MultiPoly) -> bool:
    """Integrality of p on prod {0..deg_i}: the same verdict, computed directly."""
    degs = [max(p.degree_in(i), 0) for i in range(len(p.vars))]
    return all(Fraction(p.evaluate(pt)).denominator == 1 for pt in product(*(range(d + 1) for d in degs)))


@dataclass
class ExternalTripleReport:
    integer_valued: list[bool]
    identity_holds: bool
    image_in_family: str  # "pass" | "fail"
    family_in_image: str  # "pass" | "inconclusive"
    evidence: str = "bounded evidence"
    image_points: int = 0
    outside: list = field(default_factory=list)
    missing: list = field(default_factory=list)
    domain_bound: int = 0
    solution_bound: int = 0

    @property
    def passed(self) -> bool:
        return all(self.integer_valued) and self.identity_holds and self.image_in_family == "pass" and self.family_in_image == "pass"


def certify_external_triple(
    f: TernaryForm,
    g: Sequence[MultiPoly],
    family: ParamFamily,
    h: BinaryFormTriple,
    sample_box: int = 6,
    solution_box: int | None = None,
) -> ExternalTripleReport:
    """Check a single triple g of rational polynomials against the family.

    (i) each g_i is integer-valued; (ii) f(g) = 0 identically; (iii) on
    [-sample_box, sample_box]^m the image of g lies in the covered set, and
    every covered solution in [-solution_box, solution_box]^3 shows up in
    that sampled image. Part (iii) is bounded evidence only.
    """
    from .verify import enumerate_solutions, is_covered

    if solution_box is None:
        solution_box = sample_box
    iv = [is_integer_valued(gi) for gi in g]
    tvars = g[0].vars
    identity = all(gi.vars == tvars for gi in g) and f.poly.substitute(list(g)).is_zero()
    m = len(tvars)
    image = set()
    outside = []
    for pt in product(range(-sample_box, sample_box + 1), repeat=m):
        val = tuple(gi.evaluate(pt) for gi in g)
        if any(Fraction(x).denominator != 1 for x in val):
            outside.append({"at": list(pt), "value": [str(x) for x in val], "why": "not integral"})
            continue
        val = tuple(int(x) for x in val)
        image.add(val)
    for val in sorted(image):
        cov = is_covered(f, family, h, val)
        if cov.status != "covered":
            outside.append({"value": list(val), "why": cov.detail or cov.status})
        if len(outside) > 50:
            break
    missing = []
    for s in enumerate_solutions(f, solution_box):
        if s in image:
            continue
        if is_covered(f, family, h, s).status == "covered":
            missing.append(list(s))
    return ExternalTripleReport(
        iv,
        identity,
        "pass" if not outside else "fail",
        "pass" if not missing else "inconclusive",
        image_points=len(image),
        outside=outside,
        missing=missing[:50],
        domain_bound=sample_box,
        solution_bound=solution_box,
    )
