from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nilder.classifier import build_L1, build_L2, random_nilpotent
from nilder.derivation import Derivation, bracket
from nilder.lie import (JordanChainError, NotFiniteDimensionalError, NotInvariantError,
                        SpannedLieAlgebra, center, central_ideal, central_rank_ideal, centralizer,
                        close_under_bracket, is_constant, is_nilpotent, jordan_chain,
                        lower_central_series, rank_over_R)
from nilder.parsing import parse_derivations, parse_ratfunc
from nilder.ratfunc import RatFunc

from strategies import polys


def alg(text, n=None):
    return close_under_bracket(parse_derivations(text, n))


def names(a):
    return [str(b) for b in a.basis]


H2 = "d1; d2 + x3*d1; d3"


def test_closure_abelian():
    a = alg("d1; d2")
    assert names(a) == ["d1", "d2"] and a.sparse_structure() == []


def test_closure_h2():
    a = alg("d2 + x3*d1; d3")
    assert names(a) == ["x3*d1 + d2", "d3", "d1"]
    assert len(a.sparse_structure()) == 1


def test_closure_divided_powers():
    a = alg("d2; x2^2/2*d1", 2)
    assert names(a) == ["d2", "1/2*x2^2*d1", "x2*d1", "d1"]


def test_closure_overflow():
    with pytest.raises(NotFiniteDimensionalError):
        alg("d1; x1^3*d1", 1).dim


@pytest.mark.parametrize("text, n, rank", [
    ("d1", 3, 1),
    ("d1; x2*d1; d2", 3, 2),
    (H2, 3, 3),
])
def test_rank(text, n, rank):
    assert rank_over_R(alg(text, n)) == rank


@pytest.mark.parametrize("text, cls", [
    ("d1; d2", 1),
    (H2, 2),
    ("d3; x3^2/2*d1; x3*d1; d1", 3),
])
def test_nilpotency_class(text, cls):
    res = is_nilpotent(alg(text, 3))
    assert res.nilpotent and res.nilpotency_class == cls


def test_not_nilpotent():
    assert not is_nilpotent(alg("x1*d1; d1", 1)).nilpotent


def test_center_abelian():
    cd = center(alg("d1; d2"))
    assert cd.subspace.dim == 2 and cd.corank == 0


def test_center_h2():
    cd = center(alg(H2))
    assert [str(z) for z in cd.center_basis] == ["d1"]
    assert (cd.rank_over_R, cd.corank) == (1, 2)


def test_center_of_two_slice_model():
    cd = center(build_L2(3, 1))
    assert cd.rank_over_R == 1


def test_central_rank_ideal():
    a = alg("d1; d2")
    assert central_rank_ideal(a).dim == a.dim
    assert names(central_rank_ideal(alg(H2))) == ["d1"]
    ideal = central_rank_ideal(build_L1(3, 2))
    assert sorted(names(ideal)) == sorted(
        ["d1", "x3*d1", "1/2*x3^2*d1", "d2", "x3*d2", "1/2*x3^2*d2"])
    assert ideal.is_abelian()


def test_centralizer():
    a = alg("d1; d2")
    assert centralizer(a, a.basis).dim == 2
    h = alg(H2)
    assert centralizer(h, [Derivation.coordinate(3, 1)]).dim == 3
    m = build_L2(3, 1)
    ideal = central_ideal(m)
    assert centralizer(m, ideal) == ideal


def test_is_constant():
    assert is_constant(RatFunc.const(3, 5), alg(H2))
    assert is_constant(RatFunc.var(3, 1), alg("d2; d3"))
    assert not is_constant(RatFunc.var(3, 3), alg(H2))


@pytest.mark.parametrize("sub, expected", [
    ("d2", ["d2"]),
    ("d2; x3*d2", ["d2", "x3*d2"]),
    ("d2; x3*d2; x3^2/2*d2", ["d2", "x3*d2", "1/2*x3^2*d2"]),
])
def test_jordan_chain(sub, expected):
    d3 = Derivation.coordinate(3, 3)
    chain = jordan_chain(d3, parse_derivations(sub, 3))
    assert [str(v) for v in chain] == expected


def test_jordan_chain_errors():
    d3 = Derivation.coordinate(3, 3)
    with pytest.raises(JordanChainError):
        jordan_chain(d3, parse_derivations("d1; d2", 3))
    with pytest.raises(JordanChainError):
        jordan_chain(parse_derivations("x1*d1", 1)[0], parse_derivations("d1", 1))


def test_lower_central_series_dims():
    assert [s.dim for s in lower_central_series(build_L1(3, 2))] == [7, 4, 2, 0]


@settings(max_examples=25)
@given(st.integers(3, 4), st.integers(0, 10_000), st.integers(1, 3))
def test_central_ideal_is_abelian_ideal(n, seed, size):
    a = random_nilpotent(n, seed, size)
    ideal = central_rank_ideal(a)
    assert ideal.is_abelian()
    for b in a.basis:
        for i in ideal.basis:
            assert ideal.coords(bracket(b, i)) is not None


@settings(max_examples=25)
@given(st.integers(3, 4), st.integers(0, 10_000), st.integers(1, 3))
def test_structure_table(n, seed, size):
    a = random_nilpotent(n, seed, size)
    m = a.dim
    cd = center(a)
    assert cd.rank_over_R <= rank_over_R(a) and cd.corank >= 0
    table = {(i, j): a.structure_constant(i, j) for i in range(m) for j in range(m)}
    for (i, j), c in table.items():
        assert [-x for x in c] == table[j, i]
    # Jacobi as an identity of the table
    for i in range(m):
        for j in range(m):
            for k in range(m):
                total = [Fraction(0)] * m
                for (p, q, r) in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = table[q, r]
                    for t, c in enumerate(inner):
                        if c:
                            total = [x + c * y for x, y in zip(total, table[p, t])]
                assert not any(total)


@given(st.lists(polys(3, 2, 2, first=2), min_size=1, max_size=4), st.integers(1, 3))
def test_rank_one_is_abelian(coeffs, direction):
    base = Derivation.coordinate(3, 1) + Derivation.coordinate(3, 2) * direction
    gens = [base * RatFunc(c) for c in coeffs if c]
    if not gens:
        return
    try:
        a = close_under_bracket(gens, max_dim=16)
    except NotFiniteDimensionalError:
        return
    if rank_over_R(a) == 1 and is_nilpotent(a).nilpotent:
        assert a.is_abelian()


@given(st.integers(1, 5))
def test_jordan_chain_property(k):
    d3 = Derivation.coordinate(3, 3)
    sub = [Derivation.coordinate(3, 1) * parse_ratfunc(f"x3^{i}", 3) for i in range(k)]
    chain = jordan_chain(d3, sub)
    assert len(chain) == k
    assert not bracket(d3, chain[0])
    for lower, upper in zip(chain, chain[1:]):
        assert bracket(d3, upper) == lower


def test_from_basis_rejects_open_span():
    with pytest.raises(NotInvariantError):
        SpannedLieAlgebra.from_basis(parse_derivations("d3; x3^2*d1", 3))
