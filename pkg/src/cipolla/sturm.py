"""Sturm sequences and certified real-root isolation for exact polynomials.

Polynomials are coefficient lists in ascending order with int or Fraction
entries.  All arithmetic is exact; refinement is bisection on dyadic
rationals, so every returned interval provably contains exactly one root.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _primitive(p):
    """Scale to coprime integers with positive leading coefficient."""
    p = [Fraction(c) for c in _trim(p)]
    if not p:
        return []
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def _derivative(p):
    return [k * p[k] for k in range(1, len(p))]


def _rem(a, b):
    a = [Fraction(c) for c in a]
    db, lb = len(b) - 1, Fraction(b[-1])
    while len(a) - 1 >= db and a:
        q = a[-1] / lb
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a = _trim(a)
    return a


def _gcd(a, b):
    a, b = _primitive(a), _primitive(b)
    while b:
        a, b = b, _primitive(_rem(a, b))
    return a


def _div(a, b):
    a = [Fraction(c) for c in a]
    db, lb = len(b) - 1, Fraction(b[-1])
    q = [Fraction(0)] * max(len(a) - db, 1)
    while a and len(a) - 1 >= db:
        c = a[-1] / lb
        shift = len(a) - 1 - db
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        a = _trim(a)
    return q


def squarefree(p):
    """The squarefree part of ``p`` as a primitive integer polynomial."""
    p = _primitive(p)
    if len(p) <= 2:
        return p
    g = _gcd(p, _derivative(p))
    if len(g) <= 1:
        return p
    return _primitive(_div(p, g))


def sturm_sequence(p):
    """Sturm chain of the squarefree part of ``p`` (each member rescaled by a positive constant)."""
    p = squarefree(p)
    seq = [p, _primitive(_derivative(p))]
    while len(seq[-1]) > 1:
        r = _rem(seq[-2], seq[-1])
        if not r:
            break
        r = _primitive(r)
        # the chain needs -rem; _primitive made the leading coefficient positive
        lead = Fraction(_rem(seq[-2], seq[-1])[-1])
        seq.append(r if lead < 0 else [-c for c in r])
    return seq


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign(v):
    return (v > 0) - (v < 0)


def sign_changes(seq, x) -> int:
    signs = [s for s in (_sign(evaluate(q, x)) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_changes_at_inf(seq, direction: int) -> int:
    signs = []
    for q in seq:
        s = _sign(q[-1])
        if direction < 0 and (len(q) - 1) % 2:
            s = -s
        signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p, lo=None, hi=None) -> int:
    """Distinct real roots in (lo, hi]; ``None`` means -inf / +inf."""
    seq = sturm_sequence(p)
    if len(seq[0]) <= 1:
        return 0
    a = _sign_changes_at_inf(seq, -1) if lo is None else sign_changes(seq, Fraction(lo))
    b = _sign_changes_at_inf(seq, +1) if hi is None else sign_changes(seq, Fraction(hi))
    return a - b


def cauchy_bound(p) -> Fraction:
    p = _primitive(p)
    lead = abs(p[-1])
    return 1 + Fraction(max(abs(c) for c in p[:-1]), lead) if len(p) > 1 else Fraction(1)


def isolate(p, lo=None, hi=None):
    """Disjoint intervals (a, b], each containing exactly one real root of ``p`` in (lo, hi]."""
    seq = sturm_sequence(p)
    if len(seq[0]) <= 1:
        return []
    B = cauchy_bound(seq[0])
    # a power of two above the Cauchy bound keeps every endpoint dyadic
    R = Fraction(1)
    while R <= B:
        R *= 2
    lo = -R if lo is None else max(Fraction(lo), -R)
    hi = R if hi is None else min(Fraction(hi), R)
    out = []
    stack = [(lo, hi, sign_changes(seq, lo), sign_changes(seq, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n <= 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        vm = sign_changes(seq, m)
        stack.append((m, b, vm, vb))
        stack.append((a, m, va, vm))
    out.sort()
    return out


def refine(p, a, b, tol) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval (a, b] of the squarefree part below width ``tol``."""
    q = squarefree(p)
    a, b = Fraction(a), Fraction(b)
    tol = Fraction(tol)
    sb = _sign(evaluate(q, b))
    if sb == 0:
        return b, b
    while b - a > tol:
        m = (a + b) / 2
        sm = _sign(evaluate(q, m))
        if sm == 0:
            return m, m
        if sm == sb:
            b = m
        else:
            a = m
    return a, b


def real_roots(p, tol=Fraction(1, 2**60), lo=None, hi=None):
    """Certified enclosures of all distinct real roots in (lo, hi]."""
    return [refine(p, a, b, tol) for a, b in isolate(p, lo, hi)]
