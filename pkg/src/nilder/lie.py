"""Finite-dimensional Lie algebras spanned by derivations.

The ground field for all linear algebra here is Q.  A
:class:`SpannedLieAlgebra` keeps a Q-basis closed under the bracket,
together with its structure constants; subspaces are :class:`Subspace`
objects holding RREF coordinate rows over that basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg, qlinalg
from .derivation import Derivation, apply, bracket
from .gcd import lcm
from .poly import Poly
from .qlinalg import DerivationSpan, QVector
from .ratfunc import RatFunc

DEFAULT_MAX_DIM = 64


class NotFiniteDimensionalError(RuntimeError):
    """Bracket closure did not terminate within the dimension bound."""


class InvariantViolation(AssertionError):
    """A structural property that must hold for valid input failed."""


class NotInvariantError(ValueError):
    pass


class JordanChainError(ValueError):
    pass


def _normalize(D: Derivation) -> Derivation:
    # scale by a rational so the first nonzero coefficient has a monic numerator
    for c in D.coeffs:
        if c:
            lc = c.num.leading_coefficient()
            return D if lc == 1 else D * (1 / lc)
    return D


class SpannedLieAlgebra:
    """Q-span of derivations closed under the Lie bracket."""

    def __init__(self, nvars: int, generators: Sequence[Derivation], span: DerivationSpan,
                 structure: dict):
        self.nvars = nvars
        self.generators = tuple(generators)
        self._span = span
        self.basis = tuple(span.elements)
        self._structure = structure

    @classmethod
    def from_basis(cls, basis: Sequence[Derivation], nvars: Optional[int] = None,
                   generators: Optional[Sequence[Derivation]] = None) -> "SpannedLieAlgebra":
        """Wrap a basis that is already closed; raises if it is not."""
        if nvars is None:
            if not basis:
                raise ValueError("nvars is required for an empty basis")
            nvars = basis[0].nvars
        span = DerivationSpan(nvars)
        for D in basis:
            if not span.add(D):
                raise ValueError(f"basis element {D} is linearly dependent")
        structure = {}
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                c = span.coordinates(bracket(basis[i], basis[j]))
                if c is None:
                    raise NotInvariantError(f"[{basis[i]}, {basis[j]}] leaves the span")
                structure[i, j] = tuple(c)
        return cls(nvars, basis if generators is None else generators, span, structure)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, D: Derivation) -> Optional[QVector]:
        return self._span.coordinates(D)

    def element(self, coords: Sequence[Fraction]) -> Derivation:
        out = Derivation.zero(self.nvars)
        for c, b in zip(coords, self.basis):
            if c:
                out = out + b * c
        return out

    def structure_constant(self, i: int, j: int) -> QVector:
        """Coordinates of ``[b_i, b_j]``."""
        if i == j:
            return [Fraction(0)] * self.dim
        if i < j:
            return list(self._structure[i, j])
        return [-x for x in self._structure[j, i]]

    def bracket_coords(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> QVector:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b or i == j:
                    continue
                f = a * b
                for k, c in enumerate(self.structure_constant(i, j)):
                    if c:
                        out[k] += f * c
        return out

    def is_abelian(self) -> bool:
        return not any(any(c) for c in self._structure.values())

    def sparse_structure(self) -> list[tuple[int, int, int, Fraction]]:
        """Nonzero constants ``(i, j, k, c)`` with ``i < j``."""
        out = []
        for (i, j), vec in sorted(self._structure.items()):
            for k, c in enumerate(vec):
                if c:
                    out.append((i, j, k, c))
        return out

    def whole(self) -> "Subspace":
        return Subspace(self, [qlinalg.unit(self.dim, i) for i in range(self.dim)])

    def __repr__(self) -> str:
        return f"SpannedLieAlgebra(nvars={self.nvars}, dim={self.dim})"


class Subspace:
    """Q-subspace of an algebra, kept as RREF rows over its basis coordinates."""

    def __init__(self, alg: SpannedLieAlgebra, rows: Sequence[Sequence[Fraction]]):
        self.alg = alg
        self.rows, self.pivots = qlinalg.rref(rows, alg.dim)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def elements(self) -> list[Derivation]:
        return [self.alg.element(r) for r in self.rows]

    def contains(self, v: Sequence[Fraction]) -> bool:
        return qlinalg.in_span(v, self.rows, self.pivots)

    def reduce(self, v: Sequence[Fraction]) -> QVector:
        return qlinalg.reduce_mod(v, self.rows, self.pivots)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.alg is other.alg and self.rows == other.rows

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} of {self.alg.dim})"


def close_under_bracket(generators: Sequence[Derivation], max_dim: int = DEFAULT_MAX_DIM,
                        nvars: Optional[int] = None) -> SpannedLieAlgebra:
    """Smallest Q-subspace containing the generators and closed under brackets.

    New elements are adjoined in the order brackets ``[b_j, b_k]`` (``j < k``)
    are discovered, each scaled so its first nonzero coefficient has monic
    numerator.
    """
    if nvars is None:
        if not generators:
            raise ValueError("nvars is required when there are no generators")
        nvars = generators[0].nvars
    span = DerivationSpan(nvars)
    for g in generators:
        if g.nvars != nvars:
            raise ValueError("generators live in different rings")
        span.add(g)
        if len(span) > max_dim:
            raise NotFiniteDimensionalError(f"dimension exceeds {max_dim}")
    brackets = {}
    k = 0
    while k < len(span.elements):
        bk = span.elements[k]
        for j in range(k):
            br = bracket(span.elements[j], bk)
            brackets[j, k] = br
            if br and br not in span:
                span.add(_normalize(br))
                if len(span) > max_dim:
                    raise NotFiniteDimensionalError(f"dimension exceeds {max_dim}")
        k += 1
    structure = {key: tuple(span.coordinates(br)) for key, br in brackets.items()}
    return SpannedLieAlgebra(nvars, generators, span, structure)


def rank_over_R(alg_or_derivs) -> int:
    """Dimension of the R-span (``rk_R``)."""
    derivs = alg_or_derivs.basis if isinstance(alg_or_derivs, SpannedLieAlgebra) else alg_or_derivs
    return linalg.rank([D.coeffs for D in derivs])


def r_independent(derivs: Sequence[Derivation]) -> list[Derivation]:
    """Greedy maximal R-independent sublist, in order."""
    idx = linalg.independent_subset([D.coeffs for D in derivs])
    return [derivs[i] for i in idx]


def commutator_subspace(alg: SpannedLieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    rows = [alg.bracket_coords(u, v) for u in a.rows for v in b.rows]
    return Subspace(alg, rows)


def lower_central_series(alg: SpannedLieAlgebra) -> list[Subspace]:
    """``L^1 = L, L^{k+1} = [L, L^k]`` until zero or stabilisation."""
    series = [alg.whole()]
    whole = series[0]
    while series[-1].dim:
        nxt = commutator_subspace(alg, whole, series[-1])
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
    return series


@dataclass(frozen=True)
class NilpotencyResult:
    nilpotent: bool
    nilpotency_class: Optional[int]


def is_nilpotent(alg: SpannedLieAlgebra) -> NilpotencyResult:
    """Nilpotency and class (the last index with ``L^c != 0``; 0 for the zero algebra)."""
    series = lower_central_series(alg)
    last = series[-1]
    if last.dim and commutator_subspace(alg, alg.whole(), last).dim:
        return NilpotencyResult(False, None)
    if last.dim:
        return NilpotencyResult(True, len(series))
    return NilpotencyResult(True, len(series) - 1)


def centralizer(alg: SpannedLieAlgebra, sub) -> Subspace:
    """Elements of ``alg`` commuting with every element of ``sub``.

    ``sub`` is a :class:`Subspace` or a list of derivations lying in ``alg``.
    """
    if not isinstance(sub, Subspace):
        rows = []
        for D in sub:
            c = alg.coords(D)
            if c is None:
                raise ValueError(f"{D} is not in the algebra")
            rows.append(c)
        sub = Subspace(alg, rows)
    # column i: [b_i, s] for each s, stacked
    eqs = []
    cols = [[alg.bracket_coords(qlinalg.unit(alg.dim, i), s) for s in sub.rows] for i in range(alg.dim)]
    for t in range(sub.dim):
        for k in range(alg.dim):
            eqs.append([cols[i][t][k] for i in range(alg.dim)])
    return Subspace(alg, qlinalg.nullspace(eqs, alg.dim))


@dataclass(frozen=True)
class CenterData:
    center_basis: tuple
    subspace: Subspace
    rank_over_R: int
    corank: int


def center(alg: SpannedLieAlgebra) -> CenterData:
    z = centralizer(alg, alg.whole())
    elems = z.elements()
    rz = rank_over_R(elems)
    return CenterData(tuple(elems), z, rz, rank_over_R(alg) - rz)


def r_span_intersection(alg: SpannedLieAlgebra, derivs: Sequence[Derivation]) -> Subspace:
    """The Q-subspace ``R<derivs> ∩ L`` of the algebra."""
    n = alg.nvars
    rows = [D.coeffs for D in derivs if D]
    if rows and linalg.rank(rows) == n:
        return alg.whole()
    if rows:
        annihilator = linalg.nullspace(rows, n, n)
    else:
        annihilator = [[RatFunc.one(n) if j == i else RatFunc.zero(n) for j in range(n)]
                       for i in range(n)]
    eqs = []
    for w in annihilator:
        vals = []
        for b in alg.basis:
            s = RatFunc.zero(n)
            for x, y in zip(w, b.coeffs):
                if x and y:
                    s = s + x * y
            vals.append(s)
        mult = Poly.one(n)
        for v in vals:
            if not v.den.is_constant():
                mult = lcm(mult, v.den)
        polys = [v.num if mult == 1 else v.num * mult.divexact(v.den) for v in vals]
        monos = set()
        for p in polys:
            monos.update(p.terms)
        for mono in sorted(monos):
            eqs.append([p.coefficient(mono) for p in polys])
    return Subspace(alg, qlinalg.nullspace(eqs, alg.dim) if eqs else [
        qlinalg.unit(alg.dim, i) for i in range(alg.dim)])


def central_ideal(alg: SpannedLieAlgebra, center_data: Optional[CenterData] = None) -> Subspace:
    """``I = RZ ∩ L`` as a subspace, verified to be an abelian ideal."""
    cd = center(alg) if center_data is None else center_data
    ideal = r_span_intersection(alg, list(cd.center_basis))
    for u in ideal.rows:
        for v in ideal.rows:
            if any(alg.bracket_coords(u, v)):
                raise InvariantViolation("RZ ∩ L is not abelian")
        for i in range(alg.dim):
            if not ideal.contains(alg.bracket_coords(qlinalg.unit(alg.dim, i), u)):
                raise InvariantViolation("RZ ∩ L is not an ideal")
    return ideal


def central_rank_ideal(alg: SpannedLieAlgebra) -> SpannedLieAlgebra:
    """The abelian ideal ``I = RZ ∩ L`` as an algebra in its own right."""
    ideal = central_ideal(alg)
    return SpannedLieAlgebra.from_basis(ideal.elements(), nvars=alg.nvars)


def subalgebra(alg: SpannedLieAlgebra, sub: Subspace) -> SpannedLieAlgebra:
    return SpannedLieAlgebra.from_basis(sub.elements(), nvars=alg.nvars)


def is_constant(f, alg) -> bool:
    """True iff every generator (or basis element) of ``alg`` kills ``f``."""
    if isinstance(alg, SpannedLieAlgebra):
        derivs = alg.generators or alg.basis
    else:
        derivs = alg
    return all(not apply(D, f) for D in derivs)


def constants_field_witnesses(alg: SpannedLieAlgebra) -> list[RatFunc]:
    """Best-effort search for nonconstant elements of the constants field.

    Tries the variables and the ratios of nonzero basis coefficients (same
    coordinate, any two elements).  An empty result does not prove F = Q.
    """
    n = alg.nvars
    cands = [RatFunc.var(n, i) for i in range(1, n + 1)]
    for i in range(n):
        column = [b.coeffs[i] for b in alg.basis if b.coeffs[i]]
        for a in column:
            for b in column:
                cands.append(a / b)
    seen = set()
    out = []
    for f in cands:
        if f.is_constant() or f in seen:
            continue
        seen.add(f)
        if is_constant(f, alg):
            out.append(f)
    return out


def ad_matrix(D: Derivation, span: DerivationSpan) -> list[QVector]:
    """Columns: coordinates of ``[D, e_j]`` over the span elements."""
    cols = []
    for e in span.elements:
        c = span.coordinates(bracket(D, e))
        if c is None:
            raise NotInvariantError(f"[{D}, {e}] leaves the subspace")
        cols.append(c)
    return cols


def _apply_cols(cols: Sequence[QVector], v: Sequence[Fraction]) -> QVector:
    return qlinalg.combine(cols, v) if cols else []


def jordan_chain(D: Derivation, subspace: Sequence[Derivation]) -> list[Derivation]:
    """Single Jordan chain of ``ad D`` on an invariant subspace.

    Returns ``[v_1, ..., v_k]`` with ``[D, v_i] = v_{i-1}`` and ``[D, v_1] = 0``.
    The top vector is the first subspace basis element outside
    ``ker (ad D)^(k-1)``.
    """
    if not subspace:
        return []
    span = DerivationSpan(D.nvars)
    for e in subspace:
        span.add(e)
    m = len(span)
    cols = ad_matrix(D, span)
    powers = [qlinalg.unit(m, j) for j in range(m)]
    for _ in range(m):
        powers = [_apply_cols(cols, v) for v in powers]
    if any(any(v) for v in powers):
        raise JordanChainError("ad D is not nilpotent on the subspace")
    kernel = qlinalg.nullspace([[cols[j][i] for j in range(m)] for i in range(m)], m)
    if len(kernel) != 1:
        raise JordanChainError(f"kernel has dimension {len(kernel)}, expected 1")
    top = None
    for j in range(m):
        v = qlinalg.unit(m, j)
        w = v
        for _ in range(m - 1):
            w = _apply_cols(cols, w)
        if any(w):
            top = v
            break
    chain = [top]
    for _ in range(m - 1):
        chain.append(_apply_cols(cols, chain[-1]))
    chain.reverse()
    elems = span.elements
    out = []
    for v in chain:
        d = Derivation.zero(D.nvars)
        for c, e in zip(v, elems):
            if c:
                d = d + e * c
        out.append(d)
    return out


def structure_report(alg: SpannedLieAlgebra) -> dict:
    """JSON-ready summary: basis, sparse structure constants, rank, center, class."""
    cd = center(alg)
    nil = is_nilpotent(alg)
    return {
        "nvars": alg.nvars,
        "dim": alg.dim,
        "basis": [str(b) for b in alg.basis],
        "structure_constants": [[i, j, k, str(c)] for i, j, k, c in alg.sparse_structure()],
        "rank": cd.rank_over_R + cd.corank,
        "center": [str(z) for z in cd.center_basis],
        "center_rank": cd.rank_over_R,
        "corank": cd.corank,
        "abelian": alg.is_abelian(),
        "nilpotent": nil.nilpotent,
        "nilpotency_class": nil.nilpotency_class,
        "lower_central_series_dims": [s.dim for s in lower_central_series(alg)],
    }
