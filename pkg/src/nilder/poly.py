"""Sparse multivariate polynomials over the rationals.

A :class:`Poly` lives in ``Q[x1, ..., xn]`` and stores a map from exponent
tuples to nonzero :class:`fractions.Fraction` coefficients.  Terms are
ordered lexicographically with ``x1 > x2 > ... > xn``, which is exactly
Python's tuple ordering on the exponent vectors.

Variables are addressed with 1-based indices everywhere in the public API,
so ``Poly.var(3, 1)`` is ``x1`` in three variables.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Iterator, Tuple

Monomial = Tuple[int, ...]


class DimensionError(ValueError):
    """Operands live in polynomial rings with different numbers of variables."""


class NotExactError(ArithmeticError):
    """An exact division had a nonzero remainder."""


def _coerce_scalar(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"not an exact scalar: {c!r}")


class Poly:
    """Immutable polynomial with rational coefficients in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Dict[Monomial, Fraction] | Iterable = ()):
        if nvars < 0:
            raise ValueError("number of variables must be nonnegative")
        self.nvars = nvars
        items = terms.items() if isinstance(terms, dict) else terms
        clean: Dict[Monomial, Fraction] = {}
        for mono, c in items:
            mono = tuple(mono)
            if len(mono) != nvars:
                raise DimensionError(f"exponent {mono} does not have length {nvars}")
            c = _coerce_scalar(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
                if not clean[mono]:
                    del clean[mono]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Monomial, Fraction]) -> "Poly":
        # terms must already be clean: right lengths, nonzero Fractions
        p = object.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        c = _coerce_scalar(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, nvars: int) -> "Poly":
        return cls.const(nvars, 1)

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        """The variable ``x_i`` (1-based)."""
        if not 1 <= i <= nvars:
            raise IndexError(f"variable index {i} out of range 1..{nvars}")
        mono = [0] * nvars
        mono[i - 1] = 1
        return cls._raw(nvars, {tuple(mono): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, exps: Monomial, c=1) -> "Poly":
        return cls(nvars, {tuple(exps): c})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        """Read-only view of the coefficient map (do not mutate)."""
        return self._terms

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in decreasing lex order, the canonical stored order."""
        return sorted(self._terms.items(), reverse=True)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        if not self._terms:
            return True
        return len(self._terms) == 1 and not any(next(iter(self._terms)))

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial (raises if not constant)."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self._terms.values()), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def leading_term(self) -> tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self._terms)
        return mono, self._terms[mono]

    def leading_coefficient(self) -> Fraction:
        return self.leading_term()[1]

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        """Degree in ``x_i`` (1-based); -1 for zero."""
        return max((m[i - 1] for m in self._terms), default=-1)

    def variables(self) -> set[int]:
        """1-based indices of the variables that actually occur."""
        used = set()
        for m in self._terms:
            for k, e in enumerate(m):
                if e:
                    used.add(k + 1)
        return used

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise DimensionError(f"ring mismatch: {self.nvars} vs {other.nvars} variables")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __pos__(self) -> "Poly":
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

    def scale(self, c) -> "Poly":
        c = _coerce_scalar(c)
        if not c:
            return Poly.zero(self.nvars)
        if c == 1:
            return self
        return Poly._raw(self.nvars, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        if not self._terms or not other._terms:
            return Poly.zero(self.nvars)
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out: Dict[Monomial, Fraction] = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                s = out.get(m)
                out[m] = ca * cb if s is None else s + ca * cb
        return Poly._raw(self.nvars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers need a nonnegative integer exponent")
        result = Poly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def diff(self, i: int) -> "Poly":
        """Formal partial derivative with respect to ``x_i`` (1-based)."""
        if not 1 <= i <= self.nvars:
            raise IndexError(f"variable index {i} out of range 1..{self.nvars}")
        k = i - 1
        out = {}
        for m, c in self._terms.items():
            e = m[k]
            if e:
                out[m[:k] + (e - 1,) + m[k + 1:]] = c * e
        return Poly._raw(self.nvars, out)

    def monic(self) -> "Poly":
        """Scale so the lex-leading coefficient is 1 (zero stays zero)."""
        if not self._terms:
            return self
        return self.scale(1 / self.leading_coefficient())

    def divexact(self, other: "Poly") -> "Poly":
        """Exact quotient ``self / other``; raises :class:`NotExactError`."""
        self._check(other)
        if not other._terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_constant():
            return self.scale(1 / other.constant_value())
        lm, lc = other.leading_term()
        rest = [(m, c) for m, c in other._terms.items() if m != lm]
        rem = dict(self._terms)
        quot: Dict[Monomial, Fraction] = {}
        while rem:
            m = max(rem)
            shift = tuple(x - y for x, y in zip(m, lm))
            if min(shift) < 0:
                raise NotExactError(f"{other} does not divide {self}")
            q = rem.pop(m) / lc
            quot[shift] = q
            for mo, co in rest:
                t = tuple(x + y for x, y in zip(mo, shift))
                v = rem.get(t, 0) - q * co
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return Poly._raw(self.nvars, quot)

    def evaluate(self, point) -> Fraction:
        """Value at a rational point (sequence of length ``nvars``)."""
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total

    def extend(self, nvars: int) -> "Poly":
        """Embed into a ring with more variables (new ones appended)."""
        if nvars < self.nvars:
            raise DimensionError("cannot shrink the variable set")
        pad = (0,) * (nvars - self.nvars)
        return Poly._raw(nvars, {m + pad: c for m, c in self._terms.items()})

    # -- univariate views used by gcd ---------------------------------------

    def coefficients_in(self, i: int) -> Dict[int, "Poly"]:
        """Split as ``sum_d c_d * x_i^d``; the ``c_d`` do not involve ``x_i``."""
        k = i - 1
        parts: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            e = m[k]
            parts.setdefault(e, {})[m[:k] + (0,) + m[k + 1:]] = c
        return {e: Poly._raw(self.nvars, t) for e, t in parts.items()}

    def shift(self, i: int, d: int) -> "Poly":
        """Multiply by ``x_i^d``."""
        k = i - 1
        return Poly._raw(
            self.nvars,
            {m[:k] + (m[k] + d,) + m[k + 1:]: c for m, c in self._terms.items()},
        )

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {format_poly(self)!r})"


def _format_monomial(mono: Monomial) -> str:
    parts = []
    for k, e in enumerate(mono):
        if e == 1:
            parts.append(f"x{k + 1}")
        elif e:
            parts.append(f"x{k + 1}^{e}")
    return "*".join(parts)


def _format_term(mono: Monomial, c: Fraction) -> str:
    ms = _format_monomial(mono)
    if not ms:
        return str(c)
    if c == 1:
        return ms
    if c == -1:
        return "-" + ms
    return f"{c}*{ms}"


def format_poly(p: Poly) -> str:
    if not p:
        return "0"
    out = ""
    for mono, c in p.sorted_terms():
        t = _format_term(mono, c)
        if not out:
            out = t
        elif t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out


def divided_power(nvars: int, i: int, k: int) -> Poly:
    """``x_i^k / k!``."""
    mono = [0] * nvars
    mono[i - 1] = k
    return Poly._raw(nvars, {tuple(mono): Fraction(1, factorial(k))})
