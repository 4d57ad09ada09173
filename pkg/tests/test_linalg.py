from itertools import combinations

import sympy
from hypothesis import given, strategies as st

from nilder import linalg
from nilder.parsing import parse_ratfunc
from nilder.ratfunc import RatFunc

from strategies import ratfuncs, to_sympy


def rows_of(*rows, n=3):
    return [[parse_ratfunc(t, n) for t in r] for r in rows]


def test_identity_is_independent():
    res = linalg.solve_dependence(rows_of(("1", "0"), ("0", "1")))
    assert res.independent and res.rank == 2


def test_scalar_multiple():
    res = linalg.solve_dependence(rows_of(("1", "0"), ("x2", "0")))
    assert not res.independent
    assert [str(c) for c in res.coefficients] == ["x2", "-1"]


def test_vanishing_determinant():
    res = linalg.solve_dependence(rows_of(("1", "x2"), ("x3", "x2*x3")))
    assert not res.independent
    assert [str(c) for c in res.coefficients] == ["x3", "-1"]


def test_empty_input():
    assert linalg.solve_dependence([]).independent


def test_solve_and_rank():
    cols = rows_of(("1", "x3", "0"), ("0", "1", "0"))
    sol = linalg.solve(cols, [parse_ratfunc(t, 3) for t in ("x1", "x1*x3 + x2", "0")])
    assert [str(c) for c in sol] == ["x1", "x2"]
    assert linalg.solve(cols, [RatFunc.zero(3), RatFunc.zero(3), RatFunc.one(3)]) is None
    assert linalg.rank(rows_of(("1", "0"), ("x2", "0"), ("0", "x1"))) == 2


def _det(mat):
    return sympy.Matrix([[to_sympy(x) for x in r] for r in mat]).det(method="berkowitz")


@given(st.integers(1, 3).flatmap(
    lambda m: st.lists(st.lists(ratfuncs(3, 1), min_size=m, max_size=m), min_size=1, max_size=m + 1)))
def test_dependence_or_pivots(rows):
    res = linalg.solve_dependence(rows)
    if res.independent:
        sub = [[r[c] for c in res.pivots] for r in rows]
        assert sympy.cancel(_det(sub)) != 0
        assert linalg.determinant(sub) != 0
    else:
        width = len(rows[0])
        combo = [sum((c * r[j] for c, r in zip(res.coefficients, rows)), RatFunc.zero(3)) for j in range(width)]
        assert all(not v for v in combo)
        assert any(res.coefficients)


def _minor_rank(rows):
    mat = sympy.Matrix([[to_sympy(x) for x in r] for r in rows])
    for k in range(min(mat.shape), 0, -1):
        for rs in combinations(range(mat.rows), k):
            for cs in combinations(range(mat.cols), k):
                if sympy.cancel(mat.extract(list(rs), list(cs)).det(method="berkowitz")) != 0:
                    return k
    return 0


@given(st.lists(st.lists(ratfuncs(3, 1), min_size=2, max_size=2), min_size=1, max_size=3))
def test_rank_matches_minors(rows):
    assert linalg.rank(rows) == _minor_rank(rows)


def test_determinant_oracle():
    mat = rows_of(("x1", "1"), ("x2", "x3"))
    assert linalg.determinant(mat) == parse_ratfunc("x1*x3 - x2", 3)
