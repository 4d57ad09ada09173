"""Hypothesis strategies and a sympy bridge used as an independent oracle."""

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from nilder.derivation import Derivation
from nilder.poly import Poly
from nilder.ratfunc import RatFunc

COEFF = st.integers(-9, 9)


def monomials(n, max_deg=2, first=1):
    """Exponent vectors of total degree <= max_deg using variables first..n."""
    return st.lists(st.integers(first, n), max_size=max_deg).map(
        lambda vs: tuple(sum(1 for v in vs if v == i) for i in range(1, n + 1)))


def polys(n, max_deg=2, max_terms=4, first=1):
    return st.lists(st.tuples(monomials(n, max_deg, first), COEFF), max_size=max_terms).map(
        lambda ts: Poly(n, ts))


def nonzero_polys(n, max_deg=2, max_terms=3):
    return polys(n, max_deg, max_terms).filter(bool)


def ratfuncs(n, max_deg=2):
    return st.tuples(polys(n, max_deg), nonzero_polys(n, 1, 2)).map(lambda t: RatFunc(t[0], t[1]))


def derivations(n, max_deg=2, max_terms=3):
    return st.lists(polys(n, max_deg, max_terms), min_size=n, max_size=n).map(Derivation)


def triangular_derivations(n, max_deg=2, max_terms=2):
    """Coefficient i uses only x_{i+1}..x_n; coefficient n is constant."""
    parts = [polys(n, max_deg, max_terms, first=i + 1) if i < n else COEFF.map(lambda c: Poly.const(n, c))
             for i in range(1, n + 1)]
    return st.tuples(*parts).map(lambda cs: Derivation(list(cs)))


SYMS = sympy.symbols("x1:10")


def to_sympy(f):
    if isinstance(f, RatFunc):
        return to_sympy(f.num) / to_sympy(f.den)
    expr = sympy.Integer(0)
    for mono, c in f.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for i, e in enumerate(mono):
            term *= SYMS[i] ** e
        expr += term
    return expr


def from_sympy(expr, n):
    num, den = sympy.fraction(sympy.together(expr))

    def conv(e):
        p = sympy.Poly(e, *SYMS[:n])
        return Poly(n, [(m, Fraction(int(c.p), int(c.q))) for m, c in p.terms()])

    return RatFunc(conv(num), conv(den))


def sympy_equal(a, b) -> bool:
    return sympy.simplify(sympy.cancel(a - b)) == 0
