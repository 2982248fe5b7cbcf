"""Dense univariate polynomials over Q, stored low degree first.

These are small helpers used by the bivariate code after dehomogenizing a
binary form. Coefficients are ints or Fractions; integral Fractions are kept
as ints so that integer-only inputs stay on the fast path.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from sympy import divisors


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def trim(p):
    p = [_norm(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p) -> int:
    return len(p) - 1 if p else -1


def add(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a, b):
    return add(a, [-c for c in b])


def mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def scale(a, c):
    return trim([c * x for x in a])


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return _norm(acc)


def divmod_poly(a, b):
    """Quotient and remainder of a by b over Q."""
    a, b = trim(list(a)), trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(len(a) - len(b) + 1, 0)
    lc = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        top = a[-1]
        if isinstance(top, int) and isinstance(lc, int) and top % lc == 0:
            c = top // lc
        else:
            c = _norm(Fraction(top) / lc)
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        a = trim(a)
    return trim(q), a


def exact_div(a, b):
    q, r = divmod_poly(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def content(p) -> Fraction:
    """Rational content: positive c with p / c primitive integral."""
    if not p:
        return Fraction(0)
    fr = [Fraction(c) for c in p]
    den = reduce(lcm, (c.denominator for c in fr), 1)
    num = reduce(gcd, (c.numerator * (den // c.denominator) for c in fr), 0)
    return Fraction(num, den)


def primitive(p):
    """Integral primitive associate of p with positive leading coefficient."""
    p = trim(p)
    if not p:
        return []
    c = content(p)
    if p[-1] < 0:
        c = -c
    return [_norm(Fraction(x) / c) for x in p]


def gcd_poly(a, b):
    """Primitive integral gcd (positive leading coefficient); gcd(0, 0) = 0."""
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, primitive(r) if r else []
    return primitive(a)


def _int_divisors(n: int):
    return divisors(abs(n)) if n else [0]


def rational_roots(p) -> list[Fraction]:
    """Distinct rational roots of p, ascending."""
    p = primitive(p)
    if len(p) <= 1:
        return []
    roots = set()
    k = 0
    while p[k] == 0:
        k += 1
    if k:
        roots.add(Fraction(0))
    p = p[k:]
    if len(p) == 2:
        roots.add(Fraction(-p[0], p[1]))
        return sorted(roots)
    n = len(p) - 1
    for q in _int_divisors(p[-1]):
        for a in _int_divisors(p[0]):
            if gcd(a, q) != 1:
                continue
            for num in (a, -a):
                # q^n p(num/q), exact in integers
                val = sum(c * num**i * q ** (n - i) for i, c in enumerate(p))
                if val == 0:
                    roots.add(Fraction(num, q))
    return sorted(roots)


def root_multiplicity(p, r: Fraction) -> int:
    lin = [-r, 1]
    m = 0
    while p:
        q, rem = divmod_poly(p, lin)
        if rem:
            break
        p = q
        m += 1
    return m
