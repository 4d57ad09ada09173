"""Multivariate polynomial gcd over Q.

Recursive content / primitive-part scheme: a polynomial is viewed as a
univariate polynomial in its highest-indexed variable with coefficients in
the remaining variables.  Contents are computed recursively and the
primitive parts are combined with a primitive pseudo-remainder sequence.
Results are normalised to be monic in the lex order.
"""

from __future__ import annotations

from functools import reduce

from .poly import Poly


def _monomial_gcd(m: Poly, p: Poly) -> Poly:
    """gcd of a single-term polynomial ``m`` with ``p``."""
    (mono,) = m.terms
    low = list(mono)
    for e in p.terms:
        low = [min(a, b) for a, b in zip(low, e)]
        if not any(low):
            break
    return Poly.monomial(m.nvars, tuple(low))


def _top_variable(p: Poly, q: Poly) -> int:
    return max(p.variables() | q.variables())


def content_in(p: Poly, i: int) -> Poly:
    """gcd of the coefficients of ``p`` viewed as a polynomial in ``x_i``."""
    coeffs = sorted(p.coefficients_in(i).values(), key=len)
    g = coeffs[0].monic()
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = gcd(g, c)
    return g


def primitive_part_in(p: Poly, i: int) -> Poly:
    c = content_in(p, i)
    return p if c == 1 else p.divexact(c)


def pseudo_remainder(a: Poly, b: Poly, i: int) -> Poly:
    """Pseudo-remainder of ``a`` by ``b`` as polynomials in ``x_i``."""
    db = b.degree_in(i)
    lb = b.coefficients_in(i)[db]
    r = a
    dr = r.degree_in(i)
    while r and dr >= db:
        lr = r.coefficients_in(i)[dr]
        r = r * lb - (b * lr).shift(i, dr - db)
        dr = r.degree_in(i)
    return r


def _primitive_prs(a: Poly, b: Poly, i: int) -> Poly:
    # a, b primitive in x_i with positive degree
    if a.degree_in(i) < b.degree_in(i):
        a, b = b, a
    while True:
        r = pseudo_remainder(a, b, i)
        if not r:
            return b
        if r.degree_in(i) <= 0:
            return Poly.one(a.nvars)
        a, b = b, primitive_part_in(r, i).monic()


def gcd(p: Poly, q: Poly) -> Poly:
    """Monic greatest common divisor of two polynomials (gcd(0, 0) = 0)."""
    p._check(q)
    if not p:
        return q.monic()
    if not q:
        return p.monic()
    if p.is_constant() or q.is_constant():
        return Poly.one(p.nvars)
    if q.is_monomial():
        return _monomial_gcd(q, p)
    if p.is_monomial():
        return _monomial_gcd(p, q)
    if p.monic() == q.monic():
        return p.monic()
    i = _top_variable(p, q)
    di, dq = p.degree_in(i), q.degree_in(i)
    if di <= 0:
        return gcd(p, content_in(q, i))
    if dq <= 0:
        return gcd(content_in(p, i), q)
    cp, cq = content_in(p, i), content_in(q, i)
    pp = p if cp == 1 else p.divexact(cp)
    pq = q if cq == 1 else q.divexact(cq)
    c = gcd(cp, cq)
    g = _primitive_prs(pp.monic(), pq.monic(), i)
    return (c * primitive_part_in(g, i)).monic()


def gcd_list(polys) -> Poly:
    polys = [p for p in polys if p]
    if not polys:
        raise ValueError("gcd of an empty or all-zero list")
    return reduce(gcd, polys[1:], polys[0].monic())


def lcm(p: Poly, q: Poly) -> Poly:
    """Monic least common multiple."""
    if not p or not q:
        return Poly.zero(p.nvars)
    return (p * q).divexact(gcd(p, q)).monic()
