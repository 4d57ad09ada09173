"""Rational functions ``R = Q(x1, ..., xn)`` as reduced fractions of polynomials."""

from __future__ import annotations

from fractions import Fraction

from .gcd import gcd
from .poly import DimensionError, Poly


class RatFunc:
    """Immutable reduced fraction ``num / den``.

    Canonical form: ``gcd(num, den) = 1``, ``den`` monic in lex order and
    zero is ``0/1``.  Two equal rational functions therefore have identical
    numerators and denominators.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        if isinstance(num, RatFunc):
            if den is not None:
                raise TypeError("use division to combine two RatFunc values")
            self.num, self.den, self._hash = num.num, num.den, None
            return
        if not isinstance(num, Poly):
            raise TypeError("numerator must be a Poly")
        if den is None:
            den = Poly.one(num.nvars)
        elif isinstance(den, (int, Fraction)):
            den = Poly.const(num.nvars, den)
        num._check(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _reduce(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        f = object.__new__(cls)
        f.num, f.den, f._hash = num, den, None
        return f

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFunc":
        return cls._raw(p, Poly.one(p.nvars))

    @classmethod
    def const(cls, nvars: int, c) -> "RatFunc":
        return cls._raw(Poly.const(nvars, c), Poly.one(nvars))

    @classmethod
    def zero(cls, nvars: int) -> "RatFunc":
        return cls._raw(Poly.zero(nvars), Poly.one(nvars))

    @classmethod
    def one(cls, nvars: int) -> "RatFunc":
        return cls.const(nvars, 1)

    @classmethod
    def var(cls, nvars: int, i: int) -> "RatFunc":
        return cls._raw(Poly.var(nvars, i), Poly.one(nvars))

    @property
    def nvars(self) -> int:
        return self.num.nvars

    # -- predicates ----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_poly(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.den.is_constant() and self.num.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value()

    def as_poly(self) -> Poly:
        if not self.is_poly():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    def variables(self) -> set[int]:
        return self.num.variables() | self.den.variables()

    # -- arithmetic ----------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, RatFunc):
            if other.nvars != self.nvars:
                raise DimensionError(f"ring mismatch: {self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, Poly):
            self.num._check(other)
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            if self.den.is_constant():
                return RatFunc._raw(self.num + other.num, self.den)
            return RatFunc(self.num + other.num, self.den)
        if other.den.is_constant():
            return RatFunc._raw(self.num + other.num * self.den, self.den)
        if self.den.is_constant():
            return RatFunc._raw(self.num * other.den + other.num, other.den)
        g = gcd(self.den, other.den)
        if g == 1:
            return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)
        a, b = self.den.divexact(g), other.den.divexact(g)
        return RatFunc(self.num * b + other.num * a, a * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc._raw(-self.num, self.den)

    def __pos__(self) -> "RatFunc":
        return self

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFunc._raw(self.num.scale(other), self.den)
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return RatFunc.zero(self.nvars)
        if self.den.is_constant() and other.den.is_constant():
            return RatFunc._raw(self.num * other.num, self.den)
        # cross-cancel before multiplying keeps the gcds small
        g1 = gcd(self.num, other.den)
        g2 = gcd(other.num, self.den)
        n1, d2 = (self.num, other.den) if g1 == 1 else (self.num.divexact(g1), other.den.divexact(g1))
        n2, d1 = (other.num, self.den) if g2 == 1 else (other.num.divexact(g2), self.den.divexact(g2))
        num, den = n1 * n2, d1 * d2
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        return RatFunc._raw(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        lc = self.num.leading_coefficient()
        return RatFunc._raw(self.den.scale(1 / lc), self.num.scale(1 / lc))

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if not isinstance(k, int):
            raise TypeError("integer exponent required")
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc._raw(self.num**k, self.den**k)

    def diff(self, i: int) -> "RatFunc":
        """Partial derivative by the quotient rule."""
        dn = self.num.diff(i)
        if self.den.is_constant():
            return RatFunc._raw(dn, self.den)
        dd = self.den.diff(i)
        if not dd:
            return RatFunc(dn, self.den)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def normalized(self) -> "RatFunc":
        """Re-run canonicalisation (the identity on canonical values)."""
        return RatFunc(self.num, self.den)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Poly):
            return self.den == 1 and self.num == other
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self) -> str:
        return format_ratfunc(self)

    def __repr__(self) -> str:
        return f"RatFunc({self.nvars}, {format_ratfunc(self)!r})"


def _reduce(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if not num:
        return Poly.zero(num.nvars), Poly.one(num.nvars)
    if den.is_constant():
        c = den.constant_value()
        return num.scale(1 / c), Poly.one(num.nvars)
    g = gcd(num, den)
    if g != 1:
        num, den = num.divexact(g), den.divexact(g)
    lc = den.leading_coefficient()
    if lc != 1:
        num, den = num.scale(1 / lc), den.scale(1 / lc)
    if den.is_constant():
        den = Poly.one(num.nvars)
    return num, den


def _is_atom(p: Poly) -> bool:
    # a single power of a single variable, safe to print without parentheses
    if len(p) != 1:
        return False
    mono, c = next(iter(p.terms.items()))
    return c == 1 and sum(1 for e in mono if e) == 1


def format_ratfunc(f: RatFunc) -> str:
    if f.den == 1:
        return str(f.num)
    num = str(f.num)
    if len(f.num) > 1:
        num = f"({num})"
    den = str(f.den) if _is_atom(f.den) else f"({f.den})"
    return f"{num}/{den}"
