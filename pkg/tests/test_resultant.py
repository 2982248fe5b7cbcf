import random

import pytest
import sympy
from sympy.polys.subresultants_qq_zz import sylvester as sympy_sylvester

from conftest import random_form
from dioparam.parser import parse_poly
from dioparam.poly import UV, BinaryForm, MultiPoly, gcd_bivariate
from dioparam.resultant import NotCoprime, bezout_cofactors, det, resultant, resultant_general, sylvester

SU, SV = sympy.symbols("U V")


def bf(text, degree=None):
    return BinaryForm.of(parse_poly(text, UV), degree)


def sym(p):
    return sympy.expand(sum((c * SU ** e[0] * SV ** e[1] for e, c in p.terms.items()), sympy.Integer(0)))


def oracle(p, q):
    # sympy.resultant has sign slips for some degree patterns; the Sylvester
    # determinant is the definition
    return sympy.expand(sympy_sylvester(p, q, SV).det())


def test_difference_of_squares_pair():
    g, h = bf("U^2 - V^2"), bf("2*U*V")
    assert resultant(g, h, "V") == parse_poly("4*U^4", UV)
    assert resultant(g, h, "U") == parse_poly("-4*V^4", UV)
    cert = bezout_cofactors(g, h, "V")
    assert cert.cofactors == [parse_poly("4*U^2", UV), parse_poly("2*U*V", UV)]
    assert cert.verify()


def test_pure_powers():
    cert = bezout_cofactors(bf("U^2"), bf("V^2"), "V")
    assert cert.rhs == parse_poly("U^4", UV)
    assert cert.cofactors[1].is_zero()


def test_common_factor_rejected():
    g, h = bf("U^2 - V^2"), bf("U*V + V^2")
    assert resultant(g, h).is_zero()
    with pytest.raises(NotCoprime):
        bezout_cofactors(g, h)


def test_matches_sympy_and_sign_symmetry():
    rng = random.Random(10)
    for _ in range(150):
        g = random_form(rng, rng.randint(1, 5))
        h = random_form(rng, rng.randint(1, 5))
        r = resultant(g, h, "V")
        assert sym(r) == oracle(sym(g.poly), sym(h.poly))
        m, k = (max(e[1] for e in f.poly.terms) for f in (g, h))
        assert resultant(h, g, "V") == r * (-1) ** (m * k)
        if m == g.degree and k == h.degree:
            assert resultant(h, g, "V") == r * (-1) ** (g.degree * h.degree)
        assert r.is_zero() == (gcd_bivariate(g, h).degree > 0)


def test_bareiss_matches_sympy():
    rng = random.Random(11)
    for n in range(1, 8):
        M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert det(M) == sympy.Matrix(M).det()


def test_sylvester_shape():
    M = sylvester([1, 2, 3], [4, 5])
    assert len(M) == 3 and all(len(row) == 3 for row in M)


def test_general_resultant_matches_sympy():
    rng = random.Random(12)
    for _ in range(60):
        p = MultiPoly(UV, {(rng.randint(0, 3), rng.randint(0, 3)): rng.randint(-5, 5) for _ in range(4)})
        q = MultiPoly(UV, {(rng.randint(0, 3), rng.randint(0, 3)): rng.randint(-5, 5) for _ in range(4)})
        if p.degree_in(1) < 1 or q.degree_in(1) < 1:
            continue
        ours = resultant_general(p, q, "V")
        assert sym(ours) == oracle(sym(p), sym(q))


def test_certificate_degrees():
    rng = random.Random(13)
    for _ in range(100):
        g = random_form(rng, rng.randint(1, 4))
        h = random_form(rng, rng.randint(1, 4))
        if gcd_bivariate(g, h).degree:
            continue
        cert = bezout_cofactors(g, h, "U")
        dd = g.degree * h.degree
        r, s = cert.cofactors
        assert r.is_zero() or r.is_homogeneous(dd - g.degree)
        assert s.is_zero() or s.is_homogeneous(dd - h.degree)
        assert cert.rhs_variable == "V" and cert.rhs_exponent == dd
