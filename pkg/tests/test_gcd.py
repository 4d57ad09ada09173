import sympy
from hypothesis import given

from nilder.gcd import content_in, gcd, lcm, primitive_part_in
from nilder.parsing import parse_poly
from nilder.poly import Poly

from strategies import SYMS, nonzero_polys, polys, to_sympy


def P(text, n=3):
    return parse_poly(text, n)


def test_gcd_examples():
    assert gcd(P("x2^2 - x3^2"), P("x2*x3 + x3^2")) == P("x2 + x3")
    assert gcd(P("6*x1"), P("4*x1^2")) == P("x1")
    assert gcd(P("x1 + 1"), P("x2")) == 1
    assert gcd(P("0"), P("3*x2 + 6")) == P("x2 + 2")


def test_content_and_primitive_part():
    p = P("x2*x3*x1^2 + x2^2*x1")
    c = content_in(p, 1)
    assert gcd(c, P("x2")) == P("x2")
    assert c * primitive_part_in(p, 1) == p


def test_lcm():
    assert lcm(P("x2*x3"), P("x3^2")) == P("x2*x3^2")


def _ratio_constant(a, b):
    return sympy.cancel(a / b).is_number


@given(nonzero_polys(3), nonzero_polys(3), nonzero_polys(3))
def test_gcd_matches_sympy(p, q, r):
    a, b = p * q, p * r
    g = gcd(a, b)
    assert g.leading_coefficient() == 1
    assert _ratio_constant(to_sympy(g), sympy.gcd(to_sympy(a), to_sympy(b), *SYMS[:3]))


@given(polys(3), nonzero_polys(3))
def test_gcd_divides(p, q):
    g = gcd(p, q)
    assert p.divexact(g) * g == p
    assert q.divexact(g) * g == q


@given(nonzero_polys(3), nonzero_polys(3))
def test_gcd_is_symmetric(p, q):
    assert gcd(p, q) == gcd(q, p)
