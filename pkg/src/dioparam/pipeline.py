"""From a parametrization (h1, h2, h3) to a finite family of integer triples.

Steps:

1. ``eliminate_to_monomial`` builds phi_i with sum(phi_i * h_i) = a * W^delta
   for W = U and for W = V, by splitting off t = gcd(h1, h2), taking a
   resultant certificate for the coprime cofactors, and then a second one
   against h3.
2. ``compute_gcd_bound`` sets d = lcm(|a_U|, |a_V|). For coprime (u, v) the
   gcd of h_i(u, v) divides both a_U u^delta and a_V v^delta, hence d. The
   bound is then tightened by enumerating residues.
3. ``residue_decompose`` splits {(w h(u, v)) / d integral} into congruence
   classes (u0, v0, w0) mod d, each giving polynomials with integer
   coefficients in S, T, R.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from math import gcd, lcm
from typing import Sequence

from sympy import factorint

from .poly import (
    BinaryForm,
    MultiPoly,
    TernaryForm,
    exact_quotient,
    form_from_monomial,
    gcd_bivariate,
    gcd_forms,
)
from .resultant import BezoutCertificate, bezout_cofactors

log = logging.getLogger(__name__)

STR = ("S", "T", "R")
WARN_D = 30
MAX_D = 200
# residue pairs enumerated per prime power while tightening d
TIGHTEN_BUDGET = 250_000


class NotCoprimeTriple(ValueError):
    code = "not-coprime-triple"


class ModulusTooLarge(ValueError):
    code = "modulus-too-large"


def _monomial_power(form: BinaryForm, var: int) -> int | None:
    """k if form is c * W^k with W the variable at index ``var``, else None."""
    terms = form.poly.terms
    if len(terms) != 1:
        return None
    (exps,) = terms
    return exps[var] if exps[1 - var] == 0 else None


def eliminate_to_monomial(h: Sequence[BinaryForm], target="U") -> BezoutCertificate:
    """Cofactors phi with phi1 h1 + phi2 h2 + phi3 h3 = a * target^delta, a != 0."""
    h = list(h)
    vars = h[0].vars
    t_idx = vars.index(target)
    other = vars[1 - t_idx]
    zero = MultiPoly.zero(vars)

    live = [i for i, f in enumerate(h) if not f.is_zero()]
    if not live:
        raise NotCoprimeTriple("all forms are zero")
    if gcd_forms(h).degree > 0:
        raise NotCoprimeTriple(f"h1, h2, h3 share the factor {gcd_forms(h)}")

    cof = [zero] * len(h)
    if len(live) == 1:
        # a single nonzero form with trivial gcd is a constant
        i = live[0]
        cof[i] = MultiPoly.const(1, vars)
        return BezoutCertificate(cof, h, h[i].poly.constant_value(), target, 0)

    i1, i2 = live[0], live[1]
    A, B = h[i1], h[i2]
    t = gcd_bivariate(A, B)
    A1, B1 = exact_quotient(A, t), exact_quotient(B, t)
    first = _pair_certificate(A1, B1, other)
    rho1, rho2 = first.cofactors
    a, delta = first.rhs_constant, first.rhs_exponent
    # rho1 * A + rho2 * B = a * t * W^delta
    if len(live) == 2:
        # trivial gcd of the triple forces t = 1 here
        cof[i1], cof[i2] = rho1, rho2
        return _reduce(BezoutCertificate(cof, h, a, target, delta))

    i3 = live[2]
    C = h[i3]
    P = t * form_from_monomial(1, _exps(t_idx, delta), vars)
    g = gcd_bivariate(P, C)
    alpha = _monomial_power(g, t_idx)
    if alpha is None:
        raise NotCoprimeTriple(f"gcd(t*W^delta, h3) = {g} is not a power of {target}")
    P1, C1 = exact_quotient(P, g), exact_quotient(C, g)
    second = _pair_certificate(P1, C1, other)
    sigma, tau = second.cofactors
    # sigma * P + tau * C = a' * W^(delta' + alpha); multiply through by a
    cof[i1] = sigma * rho1
    cof[i2] = sigma * rho2
    cof[i3] = tau * a
    a1 = a * second.rhs_constant
    cert = BezoutCertificate(cof, h, a1, target, second.rhs_exponent + alpha)
    cert.notes.append(f"t = {t}; first step a = {a}, delta = {delta}; gcd with h3 = {g}")
    return _reduce(cert)


def _exps(idx, k):
    e = [0, 0]
    e[idx] = k
    return e


def _pair_certificate(A: BinaryForm, B: BinaryForm, eliminate: str) -> BezoutCertificate:
    """Bezout certificate for a coprime pair, allowing constant members."""
    vars = A.vars
    one = MultiPoly.const(1, vars)
    zero = MultiPoly.zero(vars)
    if A.degree == 0:
        return BezoutCertificate([one, zero], [A, B], A.poly.constant_value(), _other(vars, eliminate), 0)
    if B.degree == 0:
        return BezoutCertificate([zero, one], [A, B], B.poly.constant_value(), _other(vars, eliminate), 0)
    return bezout_cofactors(A, B, eliminate)


def _other(vars, name):
    return vars[1 - vars.index(name)]


def _reduce(cert: BezoutCertificate) -> BezoutCertificate:
    """Divide cofactors and constant by their common integer factor."""
    g = abs(cert.rhs_constant)
    for c in cert.cofactors:
        for v in c.terms.values():
            g = gcd(g, v)
    if g > 1:
        cert = BezoutCertificate(
            [MultiPoly(c.vars, {e: v // g for e, v in c.terms.items()}) for c in cert.cofactors],
            cert.inputs,
            cert.rhs_constant // g,
            cert.rhs_variable,
            cert.rhs_exponent,
            cert.notes + [f"divided by common factor {g}"],
        )
    if not cert.verify():
        raise ArithmeticError("elimination certificate failed to verify")
    return cert


# ---------------------------------------------------------------------------


@dataclass
class GcdBoundResult:
    cert_u: BezoutCertificate
    cert_v: BezoutCertificate
    d: int
    d_tightened: int
    tightening_complete: bool = True
    # prime -> (exponent in d, exponent kept)
    prime_powers: dict[int, tuple[int, int]] = field(default_factory=dict)


def _value_gcd(h: Sequence[BinaryForm], u: int, v: int, mod: int) -> int:
    g = mod
    for f in h:
        g = gcd(g, f.evaluate(u, v))
        if g == 1:
            break
    return g


def compute_gcd_bound(h: Sequence[BinaryForm], tighten: bool = True) -> GcdBoundResult:
    """Monomial certificates for U and V, d = lcm(a_U, a_V) and a tightened divisor of d.

    The tightened value is lcm over residue pairs (u, v) mod d with
    gcd(u, v, d) = 1 of gcd(h1(u,v), h2(u,v), h3(u,v), d). By the Chinese
    remainder theorem this is enumerated one prime power p^e || d at a time;
    a prime power whose p^(2e) residue pairs exceed the budget is kept whole.
    """
    cert_u = eliminate_to_monomial(h, "U" if "U" in h[0].vars else h[0].vars[0])
    cert_v = eliminate_to_monomial(h, "V" if "V" in h[0].vars else h[0].vars[1])
    d = lcm(abs(cert_u.rhs_constant), abs(cert_v.rhs_constant))
    if not tighten:
        return GcdBoundResult(cert_u, cert_v, d, d, tightening_complete=False)
    dt = 1
    complete = True
    powers = {}
    for p, e in sorted(factorint(d).items()):
        q = p**e
        if q * q > TIGHTEN_BUDGET:
            log.warning("d-tightening skipped for %d^%d (too many residues)", p, e)
            complete = False
            powers[p] = (e, e)
            dt *= q
            continue
        best = 1
        for u in range(q):
            for v in range(q):
                if u % p == 0 and v % p == 0:
                    continue
                best = max(best, _value_gcd(h, u, v, q))
                if best == q:
                    break
            if best == q:
                break
        kept = 0
        while best % p == 0:
            best //= p
            kept += 1
        powers[p] = (e, kept)
        dt *= p**kept
    return GcdBoundResult(cert_u, cert_v, d, dt, complete, powers)


# ---------------------------------------------------------------------------


@dataclass
class FamilyMember:
    offsets: tuple[int, int, int]
    forms: tuple[MultiPoly, MultiPoly, MultiPoly]

    def __call__(self, s, t, r):
        return tuple(g.evaluate((s, t, r)) for g in self.forms)


@dataclass
class ParamFamily:
    modulus: int
    members: list[FamilyMember]
    source: tuple[BinaryForm, BinaryForm, BinaryForm]

    def member_for(self, offsets) -> FamilyMember | None:
        return self._index().get(tuple(offsets))

    def _index(self):
        idx = getattr(self, "_idx", None)
        if idx is None:
            idx = {m.offsets: m for m in self.members}
            self._idx = idx
        return idx

    def __len__(self):
        return len(self.members)


def kept_classes(h: Sequence[BinaryForm], d: int) -> list[tuple[int, int, int]]:
    """Residue classes (u0, v0, w0) mod d with w0 * h_i(u0, v0) = 0 mod d for all i."""
    out = []
    for u0, v0 in product(range(d), repeat=2):
        vals = [f.evaluate(u0, v0) for f in h]
        step = d // gcd(d, *vals)
        # w0 must be a multiple of d / gcd(d, values)
        for w0 in range(0, d, step):
            out.append((u0, v0, w0))
    return sorted(out)


def _shifted_forms(h: Sequence[BinaryForm], u0, v0, w0, d) -> tuple[MultiPoly, ...]:
    S, T, R = (MultiPoly.var(x, STR) for x in STR)
    u = S * d + u0
    v = T * d + v0
    w = R * d + w0
    out = []
    for f in h:
        g = f.poly.substitute([u, v]) * w
        if any(c % d for c in g.terms.values()):
            raise ArithmeticError(f"class {(u0, v0, w0)}: coefficients of {g} not divisible by {d}")
        out.append(MultiPoly(STR, {e: c // d for e, c in g.terms.items()}))
    return tuple(out)


def vanishes_identically(f: TernaryForm, forms: Sequence[MultiPoly]) -> bool:
    """Exact test of f(G1, G2, G3) == 0 by evaluation on a full grid.

    A polynomial of degree at most D_j in variable j that vanishes on
    prod_j {0, ..., D_j} is zero, so this is an identity test, not sampling.
    """
    n = f.degree
    nv = len(forms[0].vars)
    bounds = [n * max(g.degree_in(j) for g in forms) for j in range(nv)]
    evals = [g.compile() for g in forms]
    fe = f.poly.compile()
    for pt in product(*(range(b + 1) for b in bounds)):
        if fe(tuple(e(pt) for e in evals)) != 0:
            return False
    return True


def residue_decompose(
    f: TernaryForm, h: Sequence[BinaryForm], d: int, max_d: int = MAX_D, force: bool = False
) -> ParamFamily:
    if d < 1:
        raise ValueError("d must be positive")
    if d > max_d and not force:
        raise ModulusTooLarge(f"d = {d} exceeds the limit {max_d}; pass force to enumerate {d}^3 classes")
    if d > WARN_D:
        log.warning("d = %d: enumerating %d residue classes", d, d**3)
    h = tuple(h)
    members = []
    for u0, v0, w0 in kept_classes(h, d):
        forms = _shifted_forms(h, u0, v0, w0, d)
        members.append(FamilyMember((u0, v0, w0), forms))
    fam = ParamFamily(d, members, h)
    for m in members:
        if not vanishes_identically(f, m.forms):
            raise ArithmeticError(f"f does not vanish on family member {m.offsets}")
    return fam
