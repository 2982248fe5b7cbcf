"""Sylvester resultants of bivariate polynomials and integer Bezout cofactors.

For coprime binary forms g, h of degrees d1, d2 the resultant with respect
to one variable is a nonzero integer multiple of the other variable raised
to d1*d2, and the Sylvester adjugate gives integer cofactors r, s with
g*r + h*s equal to it.

Sylvester matrices use the observed degree of each input in the eliminated
variable. For coprime forms at most one input can lose degree there, so the
result is still homogeneous of degree d1*d2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import univariate as up
from .poly import BinaryForm, MultiPoly


class NotCoprime(ValueError):
    code = "not-coprime"


def _var_index(vars, eliminate) -> int:
    if isinstance(eliminate, int):
        return eliminate
    try:
        return vars.index(eliminate)
    except ValueError:
        raise ValueError(f"cannot eliminate {eliminate!r}: variables are {vars}") from None


def sylvester(a: Sequence, b: Sequence) -> list[list]:
    """Sylvester matrix of a, b given as coefficient lists (low degree first).

    The first deg(b) rows hold shifts of a, the next deg(a) rows shifts of b.
    Column j multiplies the power t^(N-1-j).
    """
    m, k = len(a) - 1, len(b) - 1
    n = m + k
    rows = []
    ar, br = list(reversed(a)), list(reversed(b))
    for i in range(k):
        rows.append([0] * i + ar + [0] * (n - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + br + [0] * (n - k - 1 - i))
    return rows


def det(matrix) -> int | Fraction:
    """Fraction-free Bareiss determinant; exact for ints, also accepts Fractions."""
    M = [list(r) for r in matrix]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * pivot - M[i][k] * M[k][j]
                if isinstance(num, int) and isinstance(prev, int):
                    M[i][j] = num // prev
                else:
                    M[i][j] = Fraction(num) / prev
            M[i][k] = 0
        prev = pivot
    return sign * M[n - 1][n - 1]


def _solve(matrix, rhs) -> list[Fraction]:
    """Solve a nonsingular square system exactly."""
    n = len(matrix)
    A = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = next(i for i in range(col, n) if A[i][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    return [A[i][n] for i in range(n)]


def _univariate_resultant(a, b):
    """Resultant of two univariate coefficient lists (observed degrees)."""
    m, k = up.degree(a), up.degree(b)
    if m < 0 or k < 0:
        return 0
    if m == 0 and k == 0:
        raise ValueError("resultant undefined: both inputs have degree 0 in the eliminated variable")
    if m == 0:
        return a[0] ** k
    if k == 0:
        return b[0] ** m
    return det(sylvester(a, b))


def resultant(g: BinaryForm, h: BinaryForm, eliminate="V") -> MultiPoly:
    """Res of two binary forms with respect to ``eliminate`` (a name or index).

    Computed at the other variable equal to 1 and rehomogenized: for forms the
    resultant is c * other^(d1*d2) whenever it is nonzero.
    """
    if g.vars != h.vars:
        raise ValueError("forms must share their variables")
    if g.is_zero() or h.is_zero():
        raise ValueError("resultant needs nonzero inputs")
    e = _var_index(g.vars, eliminate)
    c = _univariate_resultant(g.dehomogenize(e), h.dehomogenize(e))
    exps = [0, 0]
    exps[1 - e] = g.degree * h.degree
    return MultiPoly.monomial(c, exps, g.vars)


@dataclass
class BezoutCertificate:
    """sum(cofactors[i] * inputs[i]) == rhs_constant * rhs_variable^rhs_exponent."""

    cofactors: list[MultiPoly]
    inputs: list[BinaryForm]
    rhs_constant: int
    rhs_variable: str
    rhs_exponent: int
    notes: list[str] = field(default_factory=list)

    @property
    def rhs(self) -> MultiPoly:
        vars = self.inputs[0].vars
        exps = [self.rhs_exponent if v == self.rhs_variable else 0 for v in vars]
        return MultiPoly.monomial(self.rhs_constant, exps, vars)

    def lhs(self) -> MultiPoly:
        vars = self.inputs[0].vars
        total = MultiPoly.zero(vars)
        for c, h in zip(self.cofactors, self.inputs):
            total = total + c * h.poly
        return total

    def verify(self) -> bool:
        return (
            self.rhs_constant != 0
            and len(self.cofactors) == len(self.inputs)
            and all(c.has_integer_coefficients() for c in self.cofactors)
            and isinstance(self.rhs_constant, int)
            and self.lhs() == self.rhs
        )


def bezout_cofactors(g: BinaryForm, h: BinaryForm, eliminate="V") -> BezoutCertificate:
    """Integer r, s with g*r + h*s = Res(g, h) (a monomial in the other variable).

    The cofactors are the last-column cofactors of the Sylvester matrix:
    replacing its last column by the stack (t^(k-1) g, ..., g, t^(m-1) h, ..., h)
    leaves the determinant unchanged, and expanding along that column gives
    the identity. They are read off the adjugate, M^T y = det * e_last.
    """
    if g.vars != h.vars:
        raise ValueError("forms must share their variables")
    vars = g.vars
    e = _var_index(vars, eliminate)
    other = vars[1 - e]
    if g.is_zero() or h.is_zero():
        raise NotCoprime("a zero input shares every factor with the other")
    a, b = g.dehomogenize(e), h.dehomogenize(e)
    m, k = up.degree(a), up.degree(b)
    if m == 0 and k == 0:
        raise ValueError("resultant undefined: both inputs have degree 0 in the eliminated variable")
    res = _univariate_resultant(a, b)
    if res == 0:
        raise NotCoprime(f"{g} and {h} have a common factor")

    if m == 0:
        r_coeffs, s_coeffs = [a[0] ** (k - 1)], []
    elif k == 0:
        r_coeffs, s_coeffs = [], [b[0] ** (m - 1)]
    else:
        M = sylvester(a, b)
        n = m + k
        MT = [[M[j][i] for j in range(n)] for i in range(n)]
        y = _solve(MT, [0] * (n - 1) + [res])
        if any(v.denominator != 1 for v in y):
            raise ArithmeticError("adjugate entries are not integral")
        y = [int(v) for v in y]
        # row i < k carries t^(k-1-i) * g, row k+j carries t^(m-1-j) * h
        r_coeffs = [y[k - 1 - p] for p in range(k)]
        s_coeffs = [y[k + m - 1 - p] for p in range(m)]

    dd = g.degree * h.degree
    r = _homogenize(r_coeffs, dd - g.degree, vars, e)
    s = _homogenize(s_coeffs, dd - h.degree, vars, e)
    cert = BezoutCertificate([r, s], [g, h], res, other, dd)
    if not cert.verify():
        raise ArithmeticError("Bezout identity failed to verify")
    return cert


def _homogenize(coeffs, degree, vars, keep) -> MultiPoly:
    coeffs = up.trim(coeffs)
    if not coeffs:
        return MultiPoly.zero(vars)
    return BinaryForm.homogenize(coeffs, degree, vars, keep).poly


def resultant_general(p: MultiPoly, q: MultiPoly, eliminate) -> MultiPoly:
    """Resultant of two (not necessarily homogeneous) bivariate polynomials.

    Evaluates the other variable at enough integers, takes integer Sylvester
    determinants and interpolates. The result is a polynomial in the same two
    variables that does not involve ``eliminate``.
    """
    if p.vars != q.vars or len(p.vars) != 2:
        raise ValueError("need two polynomials in the same two variables")
    vars = p.vars
    e = _var_index(vars, eliminate)
    o = 1 - e

    def split(poly):
        deg = poly.degree_in(e)
        cols = [[0] * (poly.degree_in(o) + 1) for _ in range(deg + 1)]
        for exps, c in poly.terms.items():
            cols[exps[e]][exps[o]] += c
        return cols

    if p.is_zero() or q.is_zero():
        return MultiPoly.zero(vars)
    pc, qc = split(p), split(q)
    m, k = len(pc) - 1, len(qc) - 1
    if m == 0 and k == 0:
        raise ValueError("resultant undefined: both inputs have degree 0 in the eliminated variable")
    bound = k * p.degree_in(o) + m * q.degree_in(o)
    xs = list(range(bound + 1))
    ys = []
    for x in xs:
        a = [up.evaluate(c, x) for c in pc]
        b = [up.evaluate(c, x) for c in qc]
        ys.append(det(sylvester(a, b)) if m and k else (a[0] ** k if m == 0 else b[0] ** m))
    coeffs = _interpolate(xs, ys)
    terms = {}
    for i, c in enumerate(coeffs):
        ex = [0, 0]
        ex[o] = i
        terms[tuple(ex)] = c
    return MultiPoly(vars, terms)


def _interpolate(xs, ys) -> list:
    """Newton interpolation, exact; returns coefficients low degree first."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly: list = [coef[-1]]
    for i in range(n - 2, -1, -1):
        poly = up.add(up.mul(poly, [-xs[i], 1]), [coef[i]])
    return up.trim(poly)
