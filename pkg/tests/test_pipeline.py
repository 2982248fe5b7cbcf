import random
from functools import reduce
from itertools import product
from math import gcd, lcm

import pytest

from conftest import form, random_coprime_triple, triple
from dioparam.parser import parse_poly
from dioparam.pipeline import (
    STR,
    ModulusTooLarge,
    NotCoprimeTriple,
    compute_gcd_bound,
    eliminate_to_monomial,
    kept_classes,
    residue_decompose,
    vanishes_identically,
)


def test_pythagorean_certificates(pyth):
    b = pyth.bound
    # frozen from an independent run of the elimination chain
    assert (b.cert_u.rhs_constant, b.cert_u.rhs_exponent) == (2, 8)
    assert (b.cert_v.rhs_constant, b.cert_v.rhs_exponent) == (-2, 8)
    assert b.d == 2 and b.d_tightened == 2


def test_xy_conic_bound(xy_conic):
    assert xy_conic.bound.d == 1 and xy_conic.bound.d_tightened == 1
    assert len(xy_conic.family) == 1
    (m,) = xy_conic.family.members
    assert m.offsets == (0, 0, 0)


def test_cubic_bound(cubic):
    b = cubic.bound
    assert abs(b.cert_u.rhs_constant) == 7 and abs(b.cert_v.rhs_constant) == 7
    assert b.d == 7 and b.d_tightened == 7
    assert len(cubic.family) == 91


def test_pythagorean_classes_by_hand():
    # (u, v) mod 2: gcd(u^2 - v^2, 2uv, u^2 + v^2) is even only for u = v = 1
    # and for u = v = 0; those admit w in {0, 1}, the rest only w = 0
    h = triple("U^2 - V^2", "2*U*V", "U^2 + V^2")
    expected = []
    for u, v, w in product(range(2), repeat=3):
        vals = [u * u - v * v, 2 * u * v, u * u + v * v]
        if all((w * x) % 2 == 0 for x in vals):
            expected.append((u, v, w))
    assert kept_classes(list(h), 2) == sorted(expected)
    assert len(expected) == 6


def test_family_forms_are_integral_and_on_curve(any_fixture):
    fam = any_fixture.family
    for m in fam.members:
        assert all(g.has_integer_coefficients() and g.vars == STR for g in m.forms)
        assert any_fixture.f.poly.substitute(list(m.forms)).is_zero()


def test_vanishes_identically_detects_failure():
    f = form("X^2 + Y^2 - Z^2")
    S, T, R = (parse_poly(v, STR) for v in STR)
    assert vanishes_identically(f, [S * S - T * T, S * T * 2, S * S + T * T])
    assert not vanishes_identically(f, [S * S - T * T, S * T * 2, S * S + T * T * 2])


def test_common_factor_rejected():
    h = triple("U^2 - U*V", "U*V - V^2", "U^2 - V^2")
    with pytest.raises(NotCoprimeTriple):
        eliminate_to_monomial(list(h), "U")


def test_modulus_limit(pyth):
    with pytest.raises(ModulusTooLarge):
        residue_decompose(pyth.f, list(pyth.h), 300)


def _oracle_dt(h, bound=40):
    vals = []
    coeffs = [f.poly for f in h]
    for u, v in product(range(-bound, bound + 1), repeat=2):
        if gcd(u, v) == 1:
            vals.append(reduce(gcd, (p.evaluate((u, v)) for p in coeffs), 0))
    return reduce(lcm, vals, 1)


def test_tightened_bound_matches_brute_force():
    rng = random.Random(20)
    checked = 0
    while checked < 40:
        h = random_coprime_triple(rng, max_degree=3, lo=-5, hi=5)
        b = compute_gcd_bound(h)
        if b.d > 40:
            continue
        assert b.tightening_complete
        assert b.d_tightened == _oracle_dt(h)
        checked += 1


def test_certificates_shape():
    rng = random.Random(21)
    for _ in range(30):
        h = random_coprime_triple(rng)
        for target, idx in (("U", 0), ("V", 1)):
            c = eliminate_to_monomial(h, target)
            assert c.verify() and c.rhs_variable == target
            # divided by the common integer factor of cofactors and constant
            g = abs(c.rhs_constant)
            for p in c.cofactors:
                for v in p.terms.values():
                    g = gcd(g, v)
            assert g == 1
