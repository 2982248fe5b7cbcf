"""Exact sparse multivariate polynomials and the binary/ternary forms built on them.

A :class:`MultiPoly` is a map from exponent tuples to nonzero rational
coefficients over an ordered tuple of variable names. Values are immutable;
every operation returns a new polynomial in canonical form, so equality is
plain map equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from . import univariate as up

UV = ("U", "V")
XYZ = ("X", "Y", "Z")


class VariableMismatch(ValueError):
    pass


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _grlex_key(exps):
    return (sum(exps), exps)


class MultiPoly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.vars = tuple(vars)
        clean = {}
        n = len(self.vars)
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} does not match {n} variables")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            if c != 0:
                clean[exps] = _norm(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars, terms):
        obj = cls.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, vars):
        return cls(vars)

    @classmethod
    def const(cls, c, vars):
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, name, vars):
        vars = tuple(vars)
        exps = tuple(1 if v == name else 0 for v in vars)
        if name not in vars:
            raise VariableMismatch(f"unknown variable {name!r}")
        return cls(vars, {exps: 1})

    @classmethod
    def monomial(cls, c, exps, vars):
        return cls(vars, {tuple(exps): c})

    # basic queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.vars), 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self, deg: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return deg is None or degs == {deg}

    def has_integer_coefficients(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def sorted_terms(self):
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_coefficient(self):
        """Coefficient of the largest monomial in lexicographic order."""
        if not self.terms:
            return 0
        return self.terms[max(self.terms)]

    # arithmetic -----------------------------------------------------------
    def _check(self, other):
        if self.vars != other.vars:
            raise VariableMismatch(f"variable lists differ: {self.vars} vs {other.vars}")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(other, self.vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = _norm(s)
        return MultiPoly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return MultiPoly._raw(self.vars, {})
            return MultiPoly._raw(self.vars, {e: _norm(c * other) for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.vars, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        if c == 0:
            raise ZeroDivisionError("division of polynomial by zero")
        return MultiPoly._raw(self.vars, {e: _norm(Fraction(v) / c) for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MultiPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.const(other, self.vars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self.vars}, {self})"

    def __str__(self):
        return to_text(self)

    # evaluation / composition ---------------------------------------------
    def evaluate(self, point: Sequence):
        if len(point) != len(self.vars):
            raise VariableMismatch(f"expected {len(self.vars)} coordinates, got {len(point)}")
        total = 0
        for exps, c in self.terms.items():
            t = c
            for x, e in zip(point, exps):
                if e:
                    t *= x**e
            total += t
        return _norm(total) if isinstance(total, Fraction) else total

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        if len(images) != len(self.vars):
            raise VariableMismatch(f"expected {len(self.vars)} images, got {len(images)}")
        tvars = images[0].vars
        for im in images:
            if im.vars != tvars:
                raise VariableMismatch("substitution images must share one variable list")
        powers: list[dict[int, MultiPoly]] = [{0: MultiPoly.const(1, tvars)} for _ in images]

        def pw(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = images[i] ** e
            return cache[e]

        total = MultiPoly.zero(tvars)
        for exps, c in self.terms.items():
            term = MultiPoly.const(c, tvars)
            for i, e in enumerate(exps):
                if e:
                    term = term * pw(i, e)
            total = total + term
        return total

    def derivative(self, i: int) -> "MultiPoly":
        out = {}
        for exps, c in self.terms.items():
            if exps[i]:
                e = list(exps)
                e[i] -= 1
                out[tuple(e)] = c * exps[i]
        return MultiPoly(self.vars, out)

    def rename(self, vars: Sequence[str]) -> "MultiPoly":
        if len(vars) != len(self.vars):
            raise VariableMismatch("rename must keep the variable count")
        return MultiPoly._raw(tuple(vars), dict(self.terms))

    def denominator_lcm(self) -> int:
        return reduce(lcm, (Fraction(c).denominator for c in self.terms.values()), 1)

    def compile(self):
        """Fast integer evaluator: returns a callable on a coordinate tuple."""
        items = [(c, exps) for exps, c in self.terms.items()]

        def f(point):
            total = 0
            for c, exps in items:
                t = c
                for x, e in zip(point, exps):
                    if e:
                        t *= x**e
                total += t
            return total

        return f


def to_text(p: MultiPoly) -> str:
    """Render in the CLI grammar: explicit ``*``, ``^`` powers, ``a/b`` rationals."""
    if p.is_zero():
        return "0"
    parts = []
    for exps, c in p.sorted_terms():
        neg = c < 0
        a = -c if neg else c
        factors = [v if e == 1 else f"{v}^{e}" for v, e in zip(p.vars, exps) if e]
        if isinstance(a, Fraction):
            coef = f"{a.numerator}/{a.denominator}"
        else:
            coef = str(a)
        if factors:
            body = "*".join(factors) if coef == "1" else coef + "*" + "*".join(factors)
        else:
            body = coef
        parts.append(("-" if neg else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def content_and_primitive(p: MultiPoly) -> tuple[int, MultiPoly]:
    """Split an integer polynomial into content and primitive part.

    The primitive part has a positive lexicographic leading coefficient, so
    the content carries the sign. The zero polynomial returns ``(0, 0)``.
    """
    if p.is_zero():
        return 0, p
    if not p.has_integer_coefficients():
        raise ValueError("content_and_primitive needs integer coefficients")
    c = reduce(gcd, p.terms.values(), 0)
    if p.leading_coefficient() < 0:
        c = -c
    return c, MultiPoly._raw(p.vars, {e: v // c for e, v in p.terms.items()})


def clear_denominators(p: MultiPoly) -> MultiPoly:
    return p * p.denominator_lcm()


def partial_derivatives(f: "TernaryForm | MultiPoly") -> tuple[MultiPoly, ...]:
    poly = f.poly if isinstance(f, TernaryForm) else f
    return tuple(poly.derivative(i) for i in range(len(poly.vars)))


# ---------------------------------------------------------------------------
# binary forms


@dataclass(frozen=True)
class BinaryForm:
    """A homogeneous polynomial in two variables with an explicit degree.

    The zero form keeps the degree it was declared with.
    """

    poly: MultiPoly
    degree: int

    def __post_init__(self):
        if len(self.poly.vars) != 2:
            raise VariableMismatch("binary forms have exactly two variables")
        if not self.poly.is_homogeneous(self.degree):
            raise ValueError(f"{self.poly} is not homogeneous of degree {self.degree}")

    @classmethod
    def of(cls, poly: MultiPoly, degree: int | None = None) -> "BinaryForm":
        if degree is None:
            if poly.is_zero():
                raise ValueError("the zero form needs an explicit degree")
            degree = poly.total_degree()
        return cls(poly, degree)

    @property
    def vars(self):
        return self.poly.vars

    def is_zero(self):
        return self.poly.is_zero()

    def dehomogenize(self, keep: int = 0) -> list:
        """Coefficients (low to high) in variable ``keep`` after setting the other to 1."""
        coeffs = [0] * (self.degree + 1)
        for exps, c in self.poly.terms.items():
            coeffs[exps[keep]] += c
        return up.trim(coeffs)

    @classmethod
    def homogenize(cls, coeffs, degree: int, vars=UV, keep: int = 0) -> "BinaryForm":
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                if i > degree:
                    raise ValueError("coefficient list exceeds the target degree")
                e = [0, 0]
                e[keep] = i
                e[1 - keep] = degree - i
                terms[tuple(e)] = c
        return cls(MultiPoly(vars, terms), degree)

    def valuation(self, var: int) -> int:
        """Largest power of variable ``var`` dividing the form."""
        if self.is_zero():
            raise ValueError("valuation of the zero form")
        return min(e[var] for e in self.poly.terms)

    def evaluate(self, u, v):
        return self.poly.evaluate((u, v))

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        return BinaryForm(self.poly * other.poly, self.degree + other.degree)

    def scale(self, c) -> "BinaryForm":
        return BinaryForm(self.poly * c, self.degree)

    def __str__(self):
        return to_text(self.poly)


def form_from_monomial(c, exps, vars=UV) -> BinaryForm:
    return BinaryForm(MultiPoly.monomial(c, exps, vars), sum(exps))


def exact_quotient(a: BinaryForm, b: BinaryForm) -> BinaryForm:
    """a / b for binary forms, raising ArithmeticError if b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero form")
    deg = a.degree - b.degree
    if a.is_zero():
        return BinaryForm(MultiPoly.zero(a.vars), max(deg, 0))
    q = up.exact_div(a.dehomogenize(0), b.dehomogenize(0))
    if deg < 0 or up.degree(q) > deg:
        raise ArithmeticError(f"{b} does not divide {a}")
    out = BinaryForm.homogenize(q, deg, a.vars)
    if out.poly * b.poly != a.poly:
        raise ArithmeticError(f"{b} does not divide {a}")
    return out


def primitive_form(a: BinaryForm) -> BinaryForm:
    c, prim = content_and_primitive(clear_denominators(a.poly))
    return BinaryForm(prim, a.degree)


def gcd_bivariate(a: BinaryForm, b: BinaryForm) -> BinaryForm:
    """Primitive gcd of two binary forms (positive lexicographic leading coefficient).

    Uses the factorization form = V^k * (form with V not dividing it) and a
    univariate gcd after setting V = 1.
    """
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero forms is undefined")
    if b.is_zero():
        return primitive_form(a)
    if a.is_zero():
        return primitive_form(b)
    ka, kb = a.valuation(1), b.valuation(1)
    g = up.gcd_poly(a.dehomogenize(0), b.dehomogenize(0))
    deg = up.degree(g) + min(ka, kb)
    return primitive_form(BinaryForm.homogenize(g, deg, a.vars))


def gcd_forms(forms: Iterable[BinaryForm]) -> BinaryForm:
    forms = [f for f in forms]
    nonzero = [f for f in forms if not f.is_zero()]
    if not nonzero:
        raise ValueError("gcd of zero forms is undefined")
    return reduce(gcd_bivariate, nonzero[1:], primitive_form(nonzero[0]))


def rational_linear_factors(a: BinaryForm) -> tuple[list[tuple[tuple[int, int], int]], BinaryForm]:
    """Split a nonzero form into rational linear factors and a remainder.

    Returns ``([((u, v), multiplicity), ...], remainder)`` where each (u, v) is
    a coprime integer root representative (u:v) of the form, and the
    remainder (primitive) has no rational root. Root order: the point
    (1:0) first if present, then ascending u/v.
    """
    if a.is_zero():
        raise ValueError("the zero form has no finite factorization")
    out = []
    rem = primitive_form(a)
    # roots (u:v) with v = 0 correspond to V dividing the form
    k = rem.valuation(1)
    if k:
        out.append(((1, 0), k))
        rem = exact_quotient(rem, form_from_monomial(1, (0, k), a.vars))
    coeffs = rem.dehomogenize(0)
    for r in up.rational_roots(coeffs):
        m = up.root_multiplicity(coeffs, r)
        u, v = r.numerator, r.denominator
        lin = BinaryForm(MultiPoly(a.vars, {(1, 0): v, (0, 1): -u}), 1)
        for _ in range(m):
            rem = exact_quotient(rem, lin)
        out.append(((u, v), m))
    return out, primitive_form(rem)


# ---------------------------------------------------------------------------
# ternary forms


@dataclass(frozen=True)
class TernaryForm:
    """A nonzero homogeneous integer form f(X, Y, Z), normalized.

    Normalization divides by the content and makes the lexicographic leading
    coefficient positive; both leave the zero set unchanged.
    """

    poly: MultiPoly

    def __post_init__(self):
        p = self.poly
        if p.vars != XYZ:
            raise VariableMismatch(f"ternary forms use variables X, Y, Z, got {p.vars}")
        if p.is_zero():
            raise ValueError("f must be nonzero")
        if not p.has_integer_coefficients():
            raise ValueError("f must have integer coefficients")
        if not p.is_homogeneous():
            raise ValueError(f"{p} is not homogeneous")
        if p.total_degree() < 1:
            raise ValueError("f must have degree at least 1")
        c, prim = content_and_primitive(p)
        object.__setattr__(self, "poly", prim)

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "TernaryForm":
        return cls(clear_denominators(p))

    @property
    def degree(self) -> int:
        return self.poly.total_degree()

    def __call__(self, x, y, z):
        return self.poly.evaluate((x, y, z))

    def __str__(self):
        return to_text(self.poly)
