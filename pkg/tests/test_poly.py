from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from nilder.parsing import parse_poly
from nilder.poly import DimensionError, NotExactError, Poly, divided_power, format_poly

from strategies import SYMS, nonzero_polys, polys, to_sympy

x = [None] + [Poly.var(3, i) for i in range(1, 4)]


def P(text, n=3):
    return parse_poly(text, n)


def test_cancellation():
    assert (x[1] + 1) + (x[1] - 1) == 2 * x[1]


def test_monomial_product():
    assert x[1] * x[2] == Poly.monomial(3, (1, 1, 0))


def test_difference_of_squares():
    p = (x[2] + x[3]) * (x[2] - x[3])
    assert p == P("x2^2 - x3^2")
    assert format_poly(p) == "x2^2 - x3^2"


def test_mismatched_rings():
    with pytest.raises(DimensionError):
        Poly.var(2, 1) + Poly.var(3, 1)


@pytest.mark.parametrize("text, i, expected", [
    ("x3^2", 3, "2*x3"),
    ("x1*x2", 3, "0"),
    ("x2^2*x3 + x3", 2, "2*x2*x3"),
])
def test_partial_derivative(text, i, expected):
    assert P(text).diff(i) == P(expected)


def test_derivative_index_out_of_range():
    with pytest.raises(IndexError):
        x[1].diff(4)


def test_zero_has_no_terms():
    z = x[1] - x[1]
    assert z.is_zero() and z.terms == {} and z == 0


def test_lex_order_leading_term():
    p = P("x3^5 + x2*x3 + x1")
    assert p.leading_term() == ((1, 0, 0), 1)
    assert [m for m, _ in p.sorted_terms()] == [(1, 0, 0), (0, 1, 1), (0, 0, 5)]


def test_divexact():
    p = P("x2^2 - x3^2")
    assert p.divexact(x[2] + x[3]) == x[2] - x[3]
    with pytest.raises(NotExactError):
        p.divexact(x[1])


def test_divided_power():
    assert divided_power(3, 3, 2) == P("x3^2") * Fraction(1, 2)
    assert format_poly(divided_power(3, 3, 2)) == "1/2*x3^2"


@given(polys(3), polys(3), polys(3))
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p and p * q == q * p
    assert p - p == 0


@given(polys(3), polys(3))
def test_product_matches_sympy(p, q):
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0


@given(polys(3), polys(3), st.integers(1, 3))
def test_leibniz(p, q, i):
    assert (p * q).diff(i) == p.diff(i) * q + p * q.diff(i)


@given(polys(3), st.integers(1, 3))
def test_derivative_matches_sympy(p, i):
    assert sympy.expand(to_sympy(p.diff(i)) - sympy.diff(to_sympy(p), SYMS[i - 1])) == 0


@given(polys(3), nonzero_polys(3))
def test_divexact_inverts_product(p, q):
    assert (p * q).divexact(q) == p


@given(polys(3))
def test_text_round_trip(p):
    assert parse_poly(format_poly(p), 3) == p


@given(polys(3), polys(3))
def test_equal_means_identical_storage(p, q):
    a, b = (p + q) * q, p * q + q * q
    assert a == b and a.sorted_terms() == b.sorted_terms() and hash(a) == hash(b)
