"""Dense linear algebra over Q with ``Fraction`` entries, plus a Q-span of derivations."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

from .derivation import Derivation
from .gcd import lcm
from .poly import Poly

QVector = List[Fraction]


def rref(rows: Sequence[Sequence[Fraction]], width: Optional[int] = None) -> tuple[list[QVector], list[int]]:
    """Reduced row echelon form (zero rows dropped) and pivot columns."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if width is None:
        width = len(mat[0]) if mat else 0
    pivots = []
    r = 0
    for col in range(width):
        p = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    return mat[:r], pivots


def nullspace(rows: Sequence[Sequence[Fraction]], width: int) -> list[QVector]:
    """Basis of ``{v : row . v = 0}``, one vector per free column, in RREF."""
    red, pivots = rref(rows, width)
    basis = []
    for free in range(width):
        if free in pivots:
            continue
        v = [Fraction(0)] * width
        v[free] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return rref(basis, width)[0] if basis else []


def reduce_mod(v: Sequence[Fraction], red: Sequence[QVector], pivots: Sequence[int]) -> QVector:
    """Residual of ``v`` after eliminating the pivots of an RREF basis."""
    v = list(v)
    for row, pc in zip(red, pivots):
        if v[pc]:
            f = v[pc]
            v = [x - f * y for x, y in zip(v, row)]
    return v


def in_span(v: Sequence[Fraction], red: Sequence[QVector], pivots: Sequence[int]) -> bool:
    return not any(reduce_mod(v, red, pivots))


def solve(columns: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> Optional[QVector]:
    """Some ``c`` with ``sum c_k columns[k] == target`` or ``None``."""
    m = len(columns)
    height = len(target)
    aug = [[columns[k][i] for k in range(m)] + [target[i]] for i in range(height)]
    red, pivots = rref(aug, m + 1)
    if m in pivots:
        return None
    sol = [Fraction(0)] * m
    for row, pc in zip(red, pivots):
        sol[pc] = row[m]
    return sol


def unit(width: int, i: int) -> QVector:
    v = [Fraction(0)] * width
    v[i] = Fraction(1)
    return v


def combine(vectors: Sequence[Sequence[Fraction]], coeffs: Sequence[Fraction]) -> QVector:
    width = len(vectors[0]) if vectors else 0
    out = [Fraction(0)] * width
    for c, v in zip(coeffs, vectors):
        if c:
            out = [x + c * y for x, y in zip(out, v)]
    return out


class DerivationSpan:
    """Incrementally built Q-linearly independent list of derivations.

    Derivations are flattened to sparse Q-vectors keyed by ``(i, monomial)``
    after multiplying coefficient ``i`` by a common multiple ``M_i`` of all
    denominators seen so far.  A new denominator that does not divide
    ``M_i`` triggers a rebuild.  An echelon basis with tracked combinations
    gives exact coordinates.
    """

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.elements: list[Derivation] = []
        self._mult = [Poly.one(nvars) for _ in range(nvars)]
        self._echelon: list[tuple[tuple, dict, dict]] = []

    def __len__(self) -> int:
        return len(self.elements)

    def _fits(self, D: Derivation) -> bool:
        for c, m in zip(D.coeffs, self._mult):
            if not c.den.is_constant():
                try:
                    m.divexact(c.den)
                except ArithmeticError:
                    return False
        return True

    def _flatten(self, D: Derivation) -> dict:
        out = {}
        for i, (c, m) in enumerate(zip(D.coeffs, self._mult)):
            if not c:
                continue
            p = c.num if m == 1 and c.den == 1 else c.num * m.divexact(c.den)
            for mono, v in p.terms.items():
                out[(i, mono)] = v
        return out

    def _reduce(self, vec: dict) -> tuple[dict, dict]:
        combo: dict = {}
        for key, row, rcombo in self._echelon:
            f = vec.get(key)
            if not f:
                continue
            for k, v in row.items():
                nv = vec.get(k, 0) - f * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
            for k, v in rcombo.items():
                nv = combo.get(k, 0) + f * v
                if nv:
                    combo[k] = nv
                else:
                    combo.pop(k, None)
        return vec, combo

    def _insert(self, vec: dict, index: int) -> None:
        vec, combo = self._reduce(vec)
        if not vec:
            raise ValueError("inserted vector is dependent")
        combo = {k: -v for k, v in combo.items()}
        combo[index] = combo.get(index, 0) + 1
        key = max(vec)
        inv = 1 / vec[key]
        vec = {k: v * inv for k, v in vec.items()}
        combo = {k: v * inv for k, v in combo.items()}
        self._echelon.append((key, vec, combo))

    def _rebuild(self, extra: Derivation) -> None:
        for c_idx in range(self.nvars):
            c = extra.coeffs[c_idx]
            if not c.den.is_constant():
                self._mult[c_idx] = lcm(self._mult[c_idx], c.den)
        self._echelon = []
        for idx, D in enumerate(self.elements):
            self._insert(self._flatten(D), idx)

    def coordinates(self, D: Derivation) -> Optional[QVector]:
        """Coordinates over ``elements`` or ``None`` if outside the span."""
        if not self._fits(D):
            return None
        vec, combo = self._reduce(self._flatten(D))
        if vec:
            return None
        out = [Fraction(0)] * len(self.elements)
        for k, v in combo.items():
            out[k] = v
        return out

    def __contains__(self, D: Derivation) -> bool:
        return self.coordinates(D) is not None

    def add(self, D: Derivation) -> bool:
        """Append ``D`` if it is independent of the current elements."""
        if D.nvars != self.nvars:
            raise ValueError("ring mismatch")
        if not D:
            return False
        if not self._fits(D):
            self._rebuild(D)
        vec, _ = self._reduce(self._flatten(D))
        if not vec:
            return False
        self.elements.append(D)
        self._insert(self._flatten(D), len(self.elements) - 1)
        return True


def independent_derivations(derivs: Sequence[Derivation], nvars: int) -> list[Derivation]:
    span = DerivationSpan(nvars)
    for D in derivs:
        span.add(D)
    return span.elements
