import random

import pytest

from dioparam.curve import BinaryFormTriple, ingest_parametrization, parametrize
from dioparam.parser import parse_poly
from dioparam.pipeline import compute_gcd_bound, residue_decompose
from dioparam.poly import UV, BinaryForm, MultiPoly, TernaryForm, gcd_forms

XY_CONIC = "X*Y - Z^2"
PYTH = "X^2 + Y^2 - Z^2"
CUBIC = "X^3 + Y^3 + X^2*Z - 2*Y^2*Z"
CUBIC_PARAM = ("V*(2*U^2-V^2)", "U*(2*U^2-V^2)", "V^3+U^3")


def form(text):
    return TernaryForm.from_poly(parse_poly(text, ("X", "Y", "Z")))


def triple(*texts):
    polys = [parse_poly(t, UV) for t in texts]
    deg = max(p.total_degree() for p in polys)
    return BinaryFormTriple(tuple(BinaryForm(p, deg) for p in polys), "fixture")


class Fixture:
    def __init__(self, name, text, param=None):
        self.name = name
        self.f = form(text)
        if param:
            self.h = ingest_parametrization(self.f, [parse_poly(p, UV) for p in param])
            self.point = None
        else:
            self.h, self.point = parametrize(self.f)
        self.bound = compute_gcd_bound(list(self.h))
        self.family = residue_decompose(self.f, list(self.h), self.bound.d_tightened)


_cache = {}


def fixture(name):
    if name not in _cache:
        known = {"xy_conic": (XY_CONIC, None), "pyth": (PYTH, None), "cubic": (CUBIC, CUBIC_PARAM)}[name]
        _cache[name] = Fixture(name, *known)
    return _cache[name]


@pytest.fixture(params=["xy_conic", "pyth", "cubic"])
def any_fixture(request):
    return fixture(request.param)


@pytest.fixture
def xy_conic():
    return fixture("xy_conic")


@pytest.fixture
def pyth():
    return fixture("pyth")


@pytest.fixture
def cubic():
    return fixture("cubic")


def random_form(rng, degree, lo=-20, hi=20, vars=UV):
    while True:
        coeffs = [rng.randint(lo, hi) for _ in range(degree + 1)]
        if any(coeffs):
            break
    terms = {(i, degree - i): c for i, c in enumerate(coeffs)}
    return BinaryForm(MultiPoly(vars, terms), degree)


def random_coprime_triple(rng, max_degree=3, lo=-9, hi=9):
    while True:
        n = rng.randint(1, max_degree)
        h = [random_form(rng, n, lo, hi) for _ in range(3)]
        if gcd_forms(h).degree == 0:
            return h


# --- acceptance summary -------------------------------------------------------

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and "::test_ac" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        if report.when == "call" or report.outcome != "passed":
            prev = _acceptance.get(name)
            if prev != "FAIL":
                _acceptance[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name]}  {name}")


@pytest.fixture
def rng():
    return random.Random(0)
