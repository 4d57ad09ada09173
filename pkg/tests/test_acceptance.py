"""The nine acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS`` or ``FAIL`` line to the
terminal (even without ``-s``) before pytest reports the outcome.
"""

import json
import random
import time
from contextlib import contextmanager
from math import comb

import pytest

from nilder.classifier import (Case, build_L1, build_L2, classify, embed, h2_plus_abelian,
                               random_nilpotent, random_triangular)
from nilder.cli import main
from nilder.derivation import (Derivation, NilpotencyStatus, apply, bracket, find_slice,
                               local_nilpotency)
from nilder.lie import (central_ideal, close_under_bracket, is_nilpotent, rank_over_R,
                        structure_report)
from nilder.parsing import parse_derivation, parse_derivations
from nilder.poly import Poly
from nilder.qlinalg import unit
from nilder.ratfunc import RatFunc
from nilder.triangular import (is_member_un, local_nilpotency_of_fg_subalgebras,
                               non_nilpotency_witness)


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title):
        start = time.perf_counter()
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"\ncriterion {number}: FAIL  {title}")
            raise
        with capsys.disabled():
            print(f"\ncriterion {number}: PASS  {title} ({time.perf_counter() - start:.1f}s)")
    return run


def random_poly(rng, n, degree=2, bound=9, terms=3):
    out = {}
    for _ in range(rng.randint(0, terms)):
        mono = [0] * n
        for _ in range(rng.randint(0, degree)):
            mono[rng.randrange(n)] += 1
        out[tuple(mono)] = rng.randint(-bound, bound)
    return Poly(n, out)


def random_derivation(rng, n):
    return Derivation([random_poly(rng, n) for _ in range(n)])


def test_criterion_1_kernel_identities(criterion):
    with criterion(1, "Jacobi, anticommutativity and the bracket as a derivation on 500 triples"):
        rng = random.Random(1)
        start = time.perf_counter()
        for _ in range(500):
            n = rng.randint(1, 4)
            A, B, C = (random_derivation(rng, n) for _ in range(3))
            f, g = random_poly(rng, n), random_poly(rng, n)
            AB = bracket(A, B)
            assert AB == -bracket(B, A)
            assert not (bracket(A, bracket(B, C)) + bracket(B, bracket(C, A))
                        + bracket(C, bracket(A, B)))
            assert apply(AB, f) == apply(A, apply(B, f)) - apply(B, apply(A, f))
            assert apply(AB, f * g) == apply(AB, f) * g + f * apply(AB, g)
        assert time.perf_counter() - start < 30


def test_criterion_2_constants_factor_out(criterion):
    with criterion(2, "[aD1, bD2] = ab[D1, D2] for constants a, b on 100 quadruples"):
        rng = random.Random(2)
        n = 4

        def upper():
            # a polynomial in x3, x4 only
            p = random_poly(rng, 2)
            return Poly(n, {(0, 0) + m: c for m, c in p.terms.items()})

        for _ in range(100):
            D1 = Derivation([upper(), upper(), Poly.zero(n), Poly.zero(n)])
            D2 = Derivation([upper(), upper(), Poly.zero(n), Poly.zero(n)])
            den = upper()
            a = RatFunc(upper(), den if den else Poly.const(n, 1))
            b = RatFunc(upper())
            assert not any(apply(D, c) for D in (D1, D2) for c in (a, b))
            assert bracket(D1 * a, D2 * b) == bracket(D1, D2) * (a * b)


def test_criterion_3_central_rank_ideal(criterion):
    with criterion(3, "I = RZ ∩ L is an abelian ideal on 50 seeded random algebras"):
        for seed in range(50):
            n = 2 + seed % 3
            alg = random_nilpotent(n, seed, 2 + seed % 2)
            ideal = central_ideal(alg)
            for u in ideal.rows:
                for v in ideal.rows:
                    assert not any(alg.bracket_coords(u, v))
                for i in range(alg.dim):
                    assert ideal.contains(alg.bracket_coords(unit(alg.dim, i), u))


def test_criterion_4_rank_two_example(criterion):
    with criterion(4, "closure of {d2, x2^2/2*d1} is the 4-element rank-2 model"):
        alg = close_under_bracket(parse_derivations("d2; x2^2/2*d1"))
        expected = parse_derivations("d2; 1/2*x2^2*d1; x2*d1; d1", 2)
        assert alg.dim == 4
        assert all(alg.coords(E) is not None for E in expected)
        assert rank_over_R(alg) == 2 and not alg.is_abelian()


MODELS = [(f, n, k) for f in ("L1", "L2") for n in (3, 4) for k in (1, 2, 3)]


def _build(family, n, k):
    return (build_L1 if family == "L1" else build_L2)(n, k)


def test_criterion_5_round_trips(criterion):
    with criterion(5, "classify recovers L1 and L2 for n in {3, 4} and k in {1, 2, 3}"):
        for family, n, k in MODELS:
            v = classify(_build(family, n, k))
            assert v.case is (Case.TYPE_L1 if family == "L1" else Case.TYPE_L2), (family, n, k)
            basis = v.adapted_basis
            assert apply(basis[-1], v.b) == 1
            assert all(not apply(D, v.b) for D in basis[:-1])
            if family == "L2":
                assert apply(basis[-2], v.a) == 1
                assert all(not apply(D, v.a) for i, D in enumerate(basis) if i != n - 2)
            assert v.checks["slice_equations"] and all(v.checks.values())


def test_criterion_6_embeddings(criterion):
    with criterion(6, "embeddings into u_n are injective Lie homomorphisms"):
        algebras = [_build(*m) for m in MODELS] + [h2_plus_abelian(3), h2_plus_abelian(4)]
        for alg in algebras:
            emb = embed(classify(alg), alg)
            assert all(is_member_un(img) for img in emb.images)
            assert emb.checks == {"images_in_u_n": True, "injective": True, "brackets_preserved": True}
            assert emb.pairs_checked == comb(alg.dim, 2)
        start = time.perf_counter()
        alg = build_L2(4, 3)
        emb = embed(classify(alg), alg)
        assert emb.pairs_checked >= 300 and all(emb.checks.values())
        assert time.perf_counter() - start < 60


def test_criterion_7_triangular_dichotomy(criterion):
    with criterion(7, "u_3 has class above 12 while 100 finite subsets of u_4 are nilpotent"):
        chain = non_nilpotency_witness(3, 12)
        assert len(chain) == 12 and all(chain)
        d3 = Derivation.coordinate(3, 3)
        last = chain[-1]
        assert bracket(d3, last) == Derivation.coordinate(3, 1)
        classes = {}
        for seed in range(100):
            rng = random.Random(seed)
            sample = [random_triangular(rng, 4, degree=2) for _ in range(3)]
            classes[seed] = local_nilpotency_of_fg_subalgebras(sample)
        assert all(c >= 1 for c in classes.values())
        over = {seed: c for seed, c in classes.items() if c > 12}
        # the bound is kept as stated; test_triangular certifies the exceptions
        assert not over, f"nilpotent, but class above 12 for seeds {over}"


def test_criterion_8_slices(criterion):
    with criterion(8, "find_slice on 50 triangular derivations and local nilpotency verdicts"):
        for seed in range(50):
            rng = random.Random(1000 + seed)
            n = 2 + seed % 3
            D = random_triangular(rng, n)
            gens = [RatFunc.var(n, i) for i in range(1, n + 1)]
            _, a = find_slice(D, gens)
            assert apply(D, a) == 1
            assert local_nilpotency(D, gens).status is NilpotencyStatus.PROVED_LOCALLY_NILPOTENT
        v = local_nilpotency(parse_derivation("x1*d1"), [RatFunc.var(1, 1)])
        assert v.status is NilpotencyStatus.EXCEEDED_CAP


def _cli(capsys, text):
    code = main(["classify", text])
    out, _ = capsys.readouterr()
    return code, json.loads(out)


def test_criterion_9_degenerate_inputs(criterion, capsys):
    with criterion(9, "rank-1 inputs are abelian; corank 3 and non-nilpotent inputs exit 3"):
        for text in ("d1", "d1; x2*d1; x2^2*d1", "x3*d2; x3^2*d2; d2"):
            alg = close_under_bracket(parse_derivations(text))
            assert rank_over_R(alg) == 1 and structure_report(alg)["abelian"]
            code, report = _cli(capsys, text)
            assert code == 3 and report["failed_check"] == "rank_at_least_3"
            assert report["facts"]["abelian"] is True
        code, report = _cli(capsys, "d4; x4*d3; x3*d2; x2*d1")
        assert code == 3 and report["failed_check"] == "center_corank_at_most_2"
        assert report["case"] == "OutOfScope"
        for text in ("x1*d1; d1", "x2*d1; x1*d2"):
            assert not is_nilpotent(close_under_bracket(parse_derivations(text), max_dim=8)).nilpotent
            code, report = _cli(capsys, text)
            assert code == 3 and report["failed_check"] == "nilpotent"
