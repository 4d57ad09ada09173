"""Derivations of Q[x1..xn] extended to the fraction field.

A :class:`Derivation` is a vector field ``sum_i c_i d/dx_i`` with rational
function coefficients, i.e. an element of ``W(A) = R Der(A)``.  This module
also holds the locally nilpotent machinery: iteration, the triangularity
test, preslice / slice search and expansion along a slice.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence

from .poly import DimensionError, Poly
from .ratfunc import RatFunc

DEFAULT_CAP = 32


class NoSliceError(ValueError):
    """The derivation has no preslice among the supplied generators."""


def _as_ratfunc(f, nvars: int) -> RatFunc:
    if isinstance(f, RatFunc):
        return f
    if isinstance(f, Poly):
        return RatFunc.from_poly(f)
    if isinstance(f, (int, Fraction)):
        return RatFunc.const(nvars, f)
    raise TypeError(f"cannot use {f!r} as a coefficient")


class Derivation:
    """Immutable vector field with :class:`RatFunc` coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Sequence):
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("a derivation needs at least one variable")
        n = next((c.nvars for c in coeffs if isinstance(c, (Poly, RatFunc))), len(coeffs))
        if n != len(coeffs):
            raise DimensionError(f"{len(coeffs)} coefficients for a ring in {n} variables")
        self.coeffs = tuple(_as_ratfunc(c, n) for c in coeffs)
        if any(c.nvars != n for c in self.coeffs):
            raise DimensionError("coefficients live in different rings")
        self._hash = None

    @classmethod
    def zero(cls, nvars: int) -> "Derivation":
        return cls([RatFunc.zero(nvars)] * nvars)

    @classmethod
    def coordinate(cls, nvars: int, i: int) -> "Derivation":
        """``d/dx_i`` (1-based)."""
        if not 1 <= i <= nvars:
            raise IndexError(f"derivation index {i} out of range 1..{nvars}")
        c = [RatFunc.zero(nvars)] * nvars
        c[i - 1] = RatFunc.one(nvars)
        return cls(c)

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> RatFunc:
        """Coefficient of ``d/dx_i`` (1-based)."""
        return self.coeffs[i - 1]

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_polynomial(self) -> bool:
        return all(c.is_poly() for c in self.coeffs)

    def _check(self, other: "Derivation") -> None:
        if self.nvars != other.nvars:
            raise DimensionError(f"ring mismatch: {self.nvars} vs {other.nvars} variables")

    def __add__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        self._check(other)
        return Derivation([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        self._check(other)
        return Derivation([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Derivation":
        return Derivation([-a for a in self.coeffs])

    def __mul__(self, f):
        if isinstance(f, Derivation):
            return NotImplemented
        f = _as_ratfunc(f, self.nvars)
        return Derivation([c * f for c in self.coeffs])

    __rmul__ = __mul__

    def __truediv__(self, f):
        f = _as_ratfunc(f, self.nvars)
        return self * f.inverse()

    def __call__(self, f):
        return apply(self, f)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __str__(self) -> str:
        return format_derivation(self)

    def __repr__(self) -> str:
        return f"Derivation({self.nvars}, {format_derivation(self)!r})"


def format_derivation(D: Derivation) -> str:
    out = ""
    for i, c in enumerate(D.coeffs, start=1):
        if not c:
            continue
        if c == 1:
            t = f"d{i}"
        elif c == -1:
            t = f"-d{i}"
        elif c.is_poly() and c.num.is_monomial():
            t = f"{c}*d{i}"
        else:
            t = f"({c})*d{i}"
        if not out:
            out = t
        elif t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out or "0"


def apply(D: Derivation, f) -> RatFunc:
    """``D(f)``; quotient rule for fractions: D(p/q) = (D(p) q - p D(q)) / q^2."""
    f = _as_ratfunc(f, D.nvars)
    if f.nvars != D.nvars:
        raise DimensionError(f"ring mismatch: {D.nvars} vs {f.nvars} variables")
    if not f.num:
        return f
    if f.den.is_constant():
        return _apply_poly(D, f.num)
    dn = _apply_poly(D, f.num)
    dd = _apply_poly(D, f.den)
    if not dd:
        return dn / RatFunc.from_poly(f.den)
    return (dn * RatFunc.from_poly(f.den) - dd * RatFunc.from_poly(f.num)) / RatFunc.from_poly(f.den * f.den)


def _apply_poly(D: Derivation, p: Poly) -> RatFunc:
    total = RatFunc.zero(D.nvars)
    if p.is_constant():
        return total
    used = p.variables()
    for i, c in enumerate(D.coeffs, start=1):
        if c and i in used:
            total = total + c * p.diff(i)
    return total


def bracket(D1: Derivation, D2: Derivation) -> Derivation:
    """Lie bracket ``[D1, D2] = D1 D2 - D2 D1``.

    Coefficient ``j`` of the result is ``D1(c2_j) - D2(c1_j)``.
    """
    D1._check(D2)
    return Derivation([apply(D1, b) - apply(D2, a) for a, b in zip(D1.coeffs, D2.coeffs)])


def ad_power(D: Derivation, E: Derivation, k: int) -> Derivation:
    """``(ad D)^k (E)``."""
    for _ in range(k):
        E = bracket(D, E)
    return E


def iterates(D: Derivation, f, cap: int = DEFAULT_CAP) -> tuple[list[RatFunc], bool]:
    """``[f, D f, D^2 f, ...]`` up to the first zero, at most ``cap`` applications.

    The flag is True when a zero iterate was reached (the zero is not listed).
    """
    f = _as_ratfunc(f, D.nvars)
    seq = []
    for _ in range(cap + 1):
        if not f:
            return seq, True
        seq.append(f)
        f = apply(D, f)
    return seq, not f


def is_triangular(D: Derivation) -> bool:
    """Coefficient of ``d/dx_i`` is a polynomial in ``x_{i+1}, ..., x_n`` only."""
    for i, c in enumerate(D.coeffs, start=1):
        if not c.is_poly():
            return False
        if any(v <= i for v in c.num.variables()):
            return False
    return True


class NilpotencyStatus(enum.Enum):
    PROVED_LOCALLY_NILPOTENT = "ProvedLocallyNilpotent"
    NILPOTENT_ON_GENERATORS = "NilpotentOnGeneratorsUpTo"
    EXCEEDED_CAP = "ExceededCap"


@dataclass(frozen=True)
class LocalNilpotencyVerdict:
    status: NilpotencyStatus
    cap: int
    witness: Optional[RatFunc] = None
    depths: tuple = ()

    @property
    def nilpotent(self) -> bool:
        return self.status is not NilpotencyStatus.EXCEEDED_CAP

    def __str__(self) -> str:
        if self.status is NilpotencyStatus.EXCEEDED_CAP:
            return f"ExceededCap({self.witness})"
        if self.status is NilpotencyStatus.NILPOTENT_ON_GENERATORS:
            return f"NilpotentOnGeneratorsUpTo({self.cap})"
        return "ProvedLocallyNilpotent"


def local_nilpotency(D: Derivation, generators, cap: int = DEFAULT_CAP) -> LocalNilpotencyVerdict:
    """Local nilpotency of ``D`` on the ring generated by ``generators``.

    Triangular ``D`` with polynomial generators is locally nilpotent on
    the whole polynomial ring, which is a proof.  Otherwise the iterates on
    each generator are computed up to ``cap`` steps; this only shows
    nilpotency on the generators themselves.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    gens = [_as_ratfunc(g, D.nvars) for g in generators]
    if is_triangular(D) and all(g.is_poly() for g in gens):
        return LocalNilpotencyVerdict(NilpotencyStatus.PROVED_LOCALLY_NILPOTENT, cap)
    depths = []
    for g in gens:
        seq, reached = iterates(D, g, cap)
        if not reached:
            return LocalNilpotencyVerdict(NilpotencyStatus.EXCEEDED_CAP, cap, witness=seq[-1])
        depths.append(len(seq))
    return LocalNilpotencyVerdict(NilpotencyStatus.NILPOTENT_ON_GENERATORS, cap, depths=tuple(depths))


def find_slice(D: Derivation, generators, cap: int = DEFAULT_CAP) -> tuple[RatFunc, RatFunc]:
    """Preslice ``p`` and slice ``a = p / D(p)`` with ``D(a) = 1``.

    Each generator is iterated until ``D`` kills it; the last element before
    the kernel is a preslice candidate.  Candidates whose image ``D(p)`` is a
    nonzero constant are preferred (no localisation needed), then generator
    order decides.
    """
    best = None
    for idx, g in enumerate(generators):
        seq, reached = iterates(D, g, cap)
        if not reached:
            raise NoSliceError(f"D is not nilpotent on {g} within {cap} steps")
        if len(seq) < 2:
            continue
        p, dp = seq[-2], seq[-1]
        key = (not dp.is_constant(), idx)
        if best is None or key < best[0]:
            best = (key, p, dp)
    if best is None:
        raise NoSliceError("D vanishes on every generator")
    _, p, dp = best
    return p, p / dp


def kernel_projection(D: Derivation, s: RatFunc, f, cap: int = DEFAULT_CAP) -> RatFunc:
    """Project ``f`` onto ``ker D`` along a slice ``s`` (``D(s) = 1``).

    Returns ``sum_k (-s)^k / k! * D^k(f)``, which ``D`` annihilates whenever
    ``D`` is nilpotent on ``f``.
    """
    seq, reached = iterates(D, f, cap)
    if not reached:
        raise ValueError(f"D is not nilpotent on {f} within {cap} steps")
    total = RatFunc.zero(D.nvars)
    power = RatFunc.one(D.nvars)
    for k, t in enumerate(seq):
        total = total + power * t / factorial(k)
        power = power * (-s)
    return total


def slice_expansion(D: Derivation, s: RatFunc, f, cap: int = DEFAULT_CAP) -> list[RatFunc]:
    """Coefficients ``c_j`` (in ``ker D``) with ``f = sum_j c_j s^j / j!``."""
    seq, reached = iterates(D, f, cap)
    if not reached:
        raise ValueError(f"D is not nilpotent on {f} within {cap} steps")
    return [kernel_projection(D, s, t, cap) for t in seq]


def integrate_along(D: Derivation, s: RatFunc, f, cap: int = DEFAULT_CAP) -> RatFunc:
    """An antiderivative ``u`` with ``D(u) = f`` and zero constant of integration."""
    total = RatFunc.zero(D.nvars)
    for j, c in enumerate(slice_expansion(D, s, f, cap)):
        total = total + c * s ** (j + 1) / factorial(j + 1)
    return total
