"""Brute-force check of the family against every solution in a box.

The verifier does not trust the pipeline: it enumerates all (x, y, z) in
[-N, N]^3 with f = 0 and, for each one, either rebuilds an explicit
family witness (u, v, w) -> (class, s, t, r) from the rational preimage of
the point, or shows the point is a bad singular point. Anything else is an
anomaly and is reported, never swallowed.
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from math import gcd, isqrt
from typing import Sequence

from .curve import BinaryFormTriple, compose, is_singular_point, preimage_of, primitive_point
from .pipeline import ParamFamily
from .poly import MultiPoly, TernaryForm

DEFAULT_BUDGET = 10**8


class BoxTooLarge(ValueError):
    code = "box-too-large"


class Anomaly(RuntimeError):
    code = "anomaly"

    def __init__(self, message, target=None):
        super().__init__(message)
        self.target = target


def z_coefficients(f: TernaryForm):
    """Callables c_k(x, y) with f(x, y, Z) = sum c_k(x, y) Z^k."""
    by_k: dict[int, list] = {}
    for (a, b, k), c in f.poly.terms.items():
        by_k.setdefault(k, []).append((c, a, b))
    n = max(by_k)

    def make(items):
        def c(x, y):
            return sum(co * x**a * y**b for co, a, b in items)

        return c

    zero = lambda x, y: 0  # noqa: E731
    return [make(by_k[k]) if k in by_k else zero for k in range(n + 1)]


def integer_roots_in_range(coeffs: Sequence[int], N: int) -> list[int]:
    """Sorted integer z in [-N, N] with sum coeffs[k] z^k = 0."""
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        return list(range(-N, N + 1))
    if len(cs) == 1:
        return []
    roots = []
    low = 0
    while cs[low] == 0:
        low += 1
    if low:
        roots.append(0)
    cs = cs[low:]
    if len(cs) == 1:
        return roots
    if len(cs) == 2:
        if cs[0] % cs[1] == 0:
            z = -cs[0] // cs[1]
            if abs(z) <= N:
                roots.append(z)
        return sorted(roots)
    if len(cs) == 3:
        c, b, a = cs
        disc = b * b - 4 * a * c
        if disc >= 0:
            s = isqrt(disc)
            if s * s == disc:
                for num in {-b + s, -b - s}:
                    if num % (2 * a) == 0 and abs(num // (2 * a)) <= N:
                        roots.append(num // (2 * a))
        return sorted(set(roots))
    c0 = abs(cs[0])
    for z in range(1, min(N, c0) + 1):
        if c0 % z:
            continue
        for zz in (z, -z):
            acc = 0
            for c in reversed(cs):
                acc = acc * zz + c
            if acc == 0:
                roots.append(zz)
    return sorted(roots)


def _slab(args):
    f_poly, xs, N, fast = args
    f = TernaryForm(f_poly)
    out = []
    if not fast:
        ev = f.poly.compile()
        for x in xs:
            for y in range(-N, N + 1):
                for z in range(-N, N + 1):
                    if ev((x, y, z)) == 0:
                        out.append((x, y, z))
        return out
    coeffs = z_coefficients(f)
    vars = f.poly.vars
    Y, Z = MultiPoly.var("Y", vars), MultiPoly.var("Z", vars)
    for x in xs:
        # a slab where f(x, Y, Z) is a nonzero constant has no solutions
        spec = f.poly.substitute([MultiPoly.const(x, vars), Y, Z])
        if spec.is_constant() and not spec.is_zero():
            continue
        for y in range(-N, N + 1):
            for z in integer_roots_in_range([c(x, y) for c in coeffs], N):
                out.append((x, y, z))
    return out


def enumerate_solutions(
    f: TernaryForm, N: int, fast: bool = True, workers: int = 1, budget: int = DEFAULT_BUDGET
) -> list[tuple[int, int, int]]:
    """All (x, y, z) in [-N, N]^3 with f = 0, sorted; (0, 0, 0) included."""
    if N < 0:
        raise ValueError("box bound must be non-negative")
    side = 2 * N + 1
    cost = side**2 if fast else side**3
    if cost > budget:
        raise BoxTooLarge(f"box N = {N} needs about {cost} evaluations (budget {budget})")
    xs = list(range(-N, N + 1))
    if workers <= 1:
        sols = _slab((f.poly, xs, N, fast))
    else:
        chunks = [xs[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            parts = ex.map(_slab, [(f.poly, c, N, fast) for c in chunks])
            sols = [s for part in parts for s in part]
    return sorted(sols)


@dataclass
class Coverage:
    status: str  # "covered" | "bad" | "anomaly"
    target: tuple[int, int, int]
    offsets: tuple[int, int, int] | None = None
    params: tuple[int, int, int] | None = None
    preimage: tuple[int, int] | None = None
    w: int | None = None
    detail: str = ""


def is_covered(f: TernaryForm, family: ParamFamily, h: BinaryFormTriple, target) -> Coverage:
    """Exact coverage decision for one solution, with an explicit witness.

    For the primitive point p = h(u, v) / c with (u, v) coprime and
    c = gcd(h(u, v)), target = m p gives w = m d / c, and the witness is the
    class (u, v, w) mod d with s, t, r the quotients.
    """
    target = tuple(int(x) for x in target)
    d = family.modulus
    if f(*target) != 0:
        return Coverage("anomaly", target, detail="target does not satisfy f = 0")
    if target == (0, 0, 0):
        m = family.member_for((0, 0, 0))
        if m is None or m(0, 0, 0) != target:
            return Coverage("anomaly", target, detail="class (0, 0, 0) missing")
        return Coverage("covered", target, (0, 0, 0), (0, 0, 0), (0, 0), 0)
    pre = preimage_of(h, target)
    if not pre.rational:
        if is_singular_point(f, primitive_point(target)):
            return Coverage("bad", target, detail=f"no rational preimage; leftover {pre.leftover_text}")
        return Coverage("anomaly", target, detail="non-singular point without a rational preimage")
    u, v = pre.rational[0]
    vals = h(u, v)
    c = reduce(gcd, vals, 0)
    p = tuple(x // c for x in vals)
    k = next(i for i in range(3) if p[i])
    if target[k] % p[k]:
        return Coverage("anomaly", target, preimage=(u, v), detail=f"target not an integer multiple of {p}")
    mult = target[k] // p[k]
    if tuple(mult * x for x in p) != target:
        return Coverage("anomaly", target, preimage=(u, v), detail=f"target not parallel to {p}")
    if d % c:
        return Coverage("anomaly", target, preimage=(u, v), detail=f"gcd {c} of h({u}, {v}) does not divide d = {d}")
    w = mult * d // c
    offsets = (u % d, v % d, w % d)
    member = family.member_for(offsets)
    if member is None:
        return Coverage("anomaly", target, offsets, preimage=(u, v), w=w, detail="residue class not in the family")
    params = ((u - offsets[0]) // d, (v - offsets[1]) // d, (w - offsets[2]) // d)
    if member(*params) != target:
        return Coverage("anomaly", target, offsets, params, (u, v), w, "witness does not reproduce the target")
    return Coverage("covered", target, offsets, params, (u, v), w)


@dataclass
class VerificationReport:
    box_bound: int
    solutions_found: int = 0
    covered: int = 0
    bad_excluded: int = 0
    uncovered_non_bad: list = field(default_factory=list)
    spurious: list = field(default_factory=list)
    anomalies: list = field(default_factory=list)
    soundness_samples: int = 0
    wall_time: float = 0.0

    @property
    def success(self) -> bool:
        return not self.uncovered_non_bad and not self.spurious and not self.anomalies


def verify_box(
    f: TernaryForm,
    h: BinaryFormTriple,
    family: ParamFamily,
    N: int,
    seed: int = 0,
    samples: int = 200,
    fast: bool = True,
    workers: int = 1,
) -> VerificationReport:
    start = time.perf_counter()
    rep = VerificationReport(N)
    if not compose(f, h).is_zero():
        rep.anomalies.append("f(h1, h2, h3) is not identically zero")
    sols = enumerate_solutions(f, N, fast=fast, workers=workers)
    rep.solutions_found = len(sols)
    for s in sols:
        cov = is_covered(f, family, h, s)
        if cov.status == "covered":
            rep.covered += 1
        elif cov.status == "bad":
            rep.bad_excluded += 1
        else:
            rep.uncovered_non_bad.append({"target": list(s), "detail": cov.detail})

    rng = random.Random(seed)
    d = family.modulus
    # parameters with |s|, |t| <= span keep many outputs inside the box
    span = max(1, round((N / max(1, d)) ** (1 / max(1, h.degree))))
    for member in family.members:
        for _ in range(max(1, samples // max(1, len(family.members)))):
            st = (rng.randint(-span, span), rng.randint(-span, span), rng.randint(-span, span))
            out = member(*st)
            rep.soundness_samples += 1
            if any(not isinstance(x, int) for x in out) or f(*out) != 0:
                rep.spurious.append({"offsets": list(member.offsets), "params": list(st), "value": [str(x) for x in out]})
    rep.wall_time = time.perf_counter() - start
    return rep
