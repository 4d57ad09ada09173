"""The triangular Lie algebra u_n of polynomial vector fields.

``D = f_1 d1 + ... + f_n dn`` belongs to u_n when every ``f_i`` is a
polynomial in ``x_{i+1}, ..., x_n`` alone (so ``f_n`` is a constant).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Sequence

from .derivation import Derivation, bracket
from .lie import (DEFAULT_MAX_DIM, NotFiniteDimensionalError, close_under_bracket,
                  is_nilpotent)
from .poly import Poly


class NotAPolynomialError(ValueError):
    pass


class FalsificationCandidate(RuntimeError):
    """A finitely generated subalgebra of u_n failed to close to a nilpotent algebra."""


def is_member_un(D: Derivation) -> bool:
    for i, c in enumerate(D.coeffs, start=1):
        if not c.is_poly():
            raise NotAPolynomialError(f"coefficient of d{i} is not a polynomial: {c}")
        if any(v <= i for v in c.num.variables()):
            return False
    return True


def non_nilpotency_witness(n: int, length: int) -> list[Derivation]:
    """``[(ad dn)^k (x_n^L / L! d1) for k in 0..L-1]``.

    Every element is checked to be nonzero and ``(ad dn)^L`` of the seed is
    checked to be ``d1``, so the subalgebra generated by ``dn`` and the seed
    has nilpotency class above ``length``.
    """
    if n < 2:
        raise ValueError("need at least two variables")
    if length < 0:
        raise ValueError("length must be nonnegative")
    if length == 0:
        return []
    dn = Derivation.coordinate(n, n)
    mono = tuple(length if k == n - 1 else 0 for k in range(n))
    seed = Derivation.coordinate(n, 1) * Poly.monomial(n, mono, Fraction(1, factorial(length)))
    chain = []
    cur = seed
    for _ in range(length):
        if not cur:
            raise AssertionError("witness chain hit zero early")
        chain.append(cur)
        cur = bracket(dn, cur)
    if cur != Derivation.coordinate(n, 1):
        raise AssertionError("witness chain does not end at d1")
    return chain


def local_nilpotency_of_fg_subalgebras(sample: Sequence[Derivation],
                                       max_dim: int = DEFAULT_MAX_DIM) -> int:
    """Nilpotency class of the subalgebra generated by triangular ``sample``."""
    if not sample:
        return 0
    for D in sample:
        if not is_member_un(D):
            raise ValueError(f"{D} is not in u_n")
    try:
        alg = close_under_bracket(list(sample), max_dim=max_dim)
    except NotFiniteDimensionalError as exc:
        raise FalsificationCandidate(f"closure exceeded {max_dim}: {[str(d) for d in sample]}") from exc
    res = is_nilpotent(alg)
    if not res.nilpotent:
        raise FalsificationCandidate(f"closure is not nilpotent: {[str(d) for d in sample]}")
    return res.nilpotency_class
