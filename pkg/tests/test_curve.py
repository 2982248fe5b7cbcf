import random

import pytest
import sympy

from conftest import CUBIC_PARAM, form, triple
from dioparam.curve import (
    NotFound,
    ParametrizationRejected,
    compose,
    conic_determinant,
    find_rational_point,
    ingest_parametrization,
    irreducibility_status,
    is_birational,
    parametrize,
    parametrize_conic,
    parametrize_line,
    preimage_of,
    singular_points,
)
from dioparam.parser import parse_poly
from dioparam.poly import UV, XYZ, MultiPoly, TernaryForm


def texts(h):
    return [str(x) for x in h]


def test_lines():
    assert texts(parametrize_line(form("X + Y + Z"))) == ["U", "V", "-U - V"]
    assert texts(parametrize_line(form("X - Y"))) == ["U", "U", "V"]
    f = form("2*X + 3*Y - 5*Z")
    h = parametrize_line(f)
    assert compose(f, h).is_zero() and is_birational(f, h).ok


def test_rational_point_search():
    assert find_rational_point(form("X*Y - Z^2"), 1) == (1, 0, 0)
    assert find_rational_point(form("X^2 + Y^2 - Z^2"), 1) == (1, 0, 1)
    with pytest.raises(NotFound):
        find_rational_point(form("X^2 + Y^2 + Z^2"), 100)
    # X^2 + Y^2 = 3 Z^2 has no rational point either
    with pytest.raises(NotFound):
        find_rational_point(form("X^2 + Y^2 - 3*Z^2"), 30)
    p = find_rational_point(form("X^2 + Y^2 - 5*Z^2"), 10)
    assert p[0] ** 2 + p[1] ** 2 == 5 * p[2] ** 2 and any(p)


def _random_conic_through_point(rng):
    while True:
        p = (1, rng.randint(-4, 4), rng.randint(-4, 4))
        terms = {}
        for e in ((0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1)):
            terms[e] = rng.randint(-6, 6)
        rest = MultiPoly(XYZ, terms)
        terms[(2, 0, 0)] = -rest.evaluate(p)
        poly = MultiPoly(XYZ, terms)
        if poly.total_degree() != 2 or not poly.is_homogeneous():
            continue
        f = TernaryForm.from_poly(poly)
        if conic_determinant(f) != 0:
            return f, p


def test_random_conics():
    rng = random.Random(30)
    for _ in range(60):
        f, p = _random_conic_through_point(rng)
        h = parametrize_conic(f, p)
        assert h.degree == 2
        assert compose(f, h).is_zero()
        assert is_birational(f, h).ok
        assert all(f(*h(u, v)) == 0 for u, v in ((1, 0), (2, -3), (5, 7)))


def test_conic_pencil_hits_base_point():
    f = form("X^2 + Y^2 - Z^2")
    h, p = parametrize(f)
    pre = preimage_of(h, p)
    assert pre.rational


def test_birationality_witness():
    f = form("X*Y - Z^2")
    check = is_birational(f, triple("U^4", "V^4", "U^2*V^2"))
    assert not check.ok
    assert set(check.witness) == {(1, 1), (1, -1)}


def test_irreducibility():
    assert irreducibility_status(form("X^2 + Y^2 - Z^2"))[0] is True
    assert irreducibility_status(form("X^2 + Y^2"))[0] is False
    assert irreducibility_status(form("X^2 - Y^2"))[0] is False
    assert irreducibility_status(form("X^3 + Y^3 + Z^3"))[0] is True
    assert irreducibility_status(form("X^3 - X*Y*Z"))[0] is False
    assert irreducibility_status(form("X^3 + Y^3"))[0] is False
    assert irreducibility_status(form("X^4 + Y^4 - Z^4"))[0] is None
    assert irreducibility_status(form("X^4 + Y^4 - Z^4"), assume=True)[0] is True


def _sympy_singular(f):
    # affine charts Z = 1, then Y = 1 on Z = 0, then (1, 0, 0)
    x, y, z = sympy.symbols("X Y Z")
    F = sum(c * x ** e[0] * y ** e[1] * z ** e[2] for e, c in f.poly.terms.items())
    grads = [sympy.diff(F, s) for s in (x, y, z)]
    pts = set()

    def add(p):
        p = [sympy.Rational(c) for c in p]
        den = sympy.ilcm(*[c.q for c in p])
        ints = [int(c * den) for c in p]
        g = sympy.igcd(*ints)
        ints = [c // g for c in ints]
        if next(c for c in ints if c) < 0:
            ints = [-c for c in ints]
        pts.add(tuple(ints))

    for sol in sympy.solve([g.subs(z, 1) for g in grads], [x, y], dict=True):
        if all(v.is_rational for v in sol.values()) and len(sol) == 2:
            add((sol[x], sol[y], 1))
    for sol in sympy.solve([g.subs({z: 0, y: 1}) for g in grads], [x], dict=True):
        if sol[x].is_rational:
            add((sol[x], 1, 0))
    if all(g.subs({x: 1, y: 0, z: 0}) == 0 for g in grads):
        add((1, 0, 0))
    return sorted(pts)


@pytest.mark.parametrize(
    "text",
    [
        "X^3 + Y^3 + X^2*Z - 2*Y^2*Z",
        "Y^2*Z - X^3 - X^2*Z",
        "Y^2*Z - X^3",
        "X^3 + Y^3 + Z^3",
        "X^2*Y^2 + Y^2*Z^2 + Z^2*X^2 - 2*X*Y*Z*(X + Y + Z)",
        "(X - 2*Z)^2*Y + X^3 - Z^3 + Y^3",
    ],
)
def test_singular_points_match_sympy(text):
    f = form(text)
    ours = [s.point for s in singular_points(f)]
    assert ours == _sympy_singular(f)


def test_cubic_bad_point(cubic):
    (s,) = singular_points(cubic.f, cubic.h)
    assert s.point == (0, 0, 1) and s.classification == "bad"
    assert s.leftover.poly in (parse_poly("2*U^2 - V^2", UV), parse_poly("V^2 - 2*U^2", UV))


def test_good_singular_point():
    # nodal cubic Y^2 Z = X^3 + X^2 Z with tangents of slope +-1: both branches rational
    f = form("Y^2*Z - X^3 - X^2*Z")
    h = ingest_parametrization(f, [parse_poly(t, UV) for t in ("U*(V^2 - U^2)", "V*(V^2 - U^2)", "U^3")])
    (s,) = singular_points(f, h)
    assert s.point == (0, 0, 1) and s.classification == "good"
    assert len(s.preimages) == 2


def test_ingest_rejections():
    f = form("X^2 + Y^2 - Z^2")
    P = lambda *ts: [parse_poly(t, UV) for t in ts]  # noqa: E731
    cases = {
        "not-on-curve": P("U^2 - V^2", "2*U*V", "U^2 + 2*V^2"),
        "not-homogeneous": P("U^2 - V", "2*U*V", "U^2 + V^2"),
        "zero-triple": P("0", "0", "0"),
        "not-birational": P("U^4 - V^4", "2*U^2*V^2", "U^4 + V^4"),
    }
    for code, polys in cases.items():
        with pytest.raises(ParametrizationRejected) as err:
            ingest_parametrization(f, polys)
        assert err.value.code == code
    with pytest.raises(ParametrizationRejected) as err:
        ingest_parametrization(f, P("U", "V"))
    assert err.value.code == "arity"


def test_ingest_normalizes_common_factor():
    f = form("X^2 + Y^2 - Z^2")
    polys = [parse_poly(t, UV) for t in ("U*(U^2 - V^2)", "2*U^2*V", "U*(U^2 + V^2)")]
    h = ingest_parametrization(f, polys)
    assert texts(h) == ["U^2 - V^2", "2*U*V", "U^2 + V^2"]


def test_cubic_param_ingested(cubic):
    assert cubic.h.degree == 3
    assert texts(cubic.h) == [str(parse_poly(t, UV)) for t in CUBIC_PARAM]
