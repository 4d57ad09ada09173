"""Linear algebra over the rational function field R.

Vectors are sequences of :class:`RatFunc`.  Elimination is fraction free:
each row is first multiplied by the lcm of its denominators, after which all
arithmetic happens in the polynomial ring.  Row multipliers are tracked so a
row that reduces to zero yields an explicit R-linear dependence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .gcd import gcd, lcm
from .poly import DimensionError, Poly
from .ratfunc import RatFunc

Vector = Sequence[RatFunc]


@dataclass(frozen=True)
class DependenceResult:
    """Outcome of :func:`solve_dependence`.

    ``independent`` rows come with the pivot columns of the elimination;
    otherwise ``coefficients`` holds ``c`` with ``sum(c[i] * rows[i]) == 0``.
    """

    independent: bool
    pivots: tuple = ()
    coefficients: Optional[tuple] = None
    rank: int = 0


@dataclass
class _Row:
    index: int
    entries: List[Poly]
    combo: List[Poly]  # row == sum(combo[k] * original_row[k])
    done: bool = field(default=False)


def _nvars_of(rows) -> int:
    for r in rows:
        for e in r:
            return e.nvars
    return 0


def _polynomial_rows(rows: Sequence[Vector]) -> list[_Row]:
    m = len(rows)
    nv = _nvars_of(rows)
    out = []
    for i, row in enumerate(rows):
        mult = Poly.one(nv)
        for e in row:
            if not e.den.is_constant():
                mult = lcm(mult, e.den)
        entries = [e.num if mult == 1 else e.num * mult.divexact(e.den) for e in row]
        combo = [Poly.zero(nv)] * m
        combo[i] = mult
        out.append(_Row(i, entries, combo))
    return out


def _remove_content(row: _Row) -> None:
    polys = [p for p in row.entries if p] + [p for p in row.combo if p]
    if not polys or any(p.is_constant() for p in polys):
        return
    g = polys[0].monic()
    for p in polys[1:]:
        g = gcd(g, p)
        if g == 1:
            return
    row.entries = [p.divexact(g) for p in row.entries]
    row.combo = [p.divexact(g) for p in row.combo]


def _eliminate(rows: Sequence[Vector], stop_at_zero: bool):
    """Fraction-free forward elimination.

    Pivot rule: for each column in order, the remaining row whose entry has
    minimal total degree, ties broken by row index.  Returns the pivot list
    ``[(row_index, column)]`` and the first row (if any) reduced to zero.
    """
    if not rows:
        return [], None, []
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionError("vectors have different lengths")
    work = _polynomial_rows(rows)
    for r in work:
        if not any(r.entries):
            return [], r, work
    pivots = []
    active = list(work)
    for col in range(width):
        cands = [r for r in active if r.entries[col]]
        if not cands:
            continue
        piv = min(cands, key=lambda r: (r.entries[col].total_degree(), r.index))
        active.remove(piv)
        pivots.append((piv.index, col))
        pc = piv.entries[col]
        for r in cands:
            if r is piv:
                continue
            f = r.entries[col]
            g = gcd(pc, f)
            a, b = (pc, f) if g == 1 else (pc.divexact(g), f.divexact(g))
            r.entries = [a * x - b * y for x, y in zip(r.entries, piv.entries)]
            r.combo = [a * x - b * y for x, y in zip(r.combo, piv.combo)]
            _remove_content(r)
            if stop_at_zero and not any(r.entries):
                return pivots, r, work
    zero = next((r for r in active if not any(r.entries)), None)
    return pivots, zero, work


def solve_dependence(rows: Sequence[Vector]) -> DependenceResult:
    """Decide R-linear independence of ``rows``.

    Returns pivot columns for independent input, otherwise one nontrivial
    dependence, scaled so its last nonzero coefficient is -1.

    >>> from nilder.parsing import parse_ratfunc as P
    >>> solve_dependence([[P("1", 2), P("0", 2)], [P("x2"), P("0", 2)]]).coefficients
    (RatFunc(2, 'x2'), RatFunc(2, '-1'))
    """
    pivots, zero, _ = _eliminate(rows, stop_at_zero=True)
    if zero is None:
        return DependenceResult(True, tuple(c for _, c in pivots), None, len(pivots))
    coeffs = [RatFunc.from_poly(c) for c in zero.combo]
    last = max(k for k, c in enumerate(coeffs) if c)
    scale = -coeffs[last].inverse()
    coeffs = tuple(c * scale for c in coeffs)
    return DependenceResult(False, tuple(c for _, c in pivots), coeffs, len(pivots))


class _Echelon:
    """Polynomial rows in echelon form, grown one vector at a time.

    Used for rank questions, where no dependence needs to be recorded.
    Each new vector is reduced against at most ``width`` pivots, which
    keeps degree growth in check when there are many more vectors than
    columns.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows: list[tuple[int, List[Poly]]] = []

    def add(self, vec: Vector) -> bool:
        """Insert ``vec``; False when it lies in the R-span of earlier rows."""
        (row,) = _polynomial_rows([vec])
        entries = row.entries
        for col, piv in self.rows:
            f = entries[col]
            if not f:
                continue
            pc = piv[col]
            g = gcd(pc, f)
            a, b = (pc, f) if g == 1 else (pc.divexact(g), f.divexact(g))
            entries = [a * x - b * y for x, y in zip(entries, piv)]
            tmp = _Row(0, entries, [])
            _remove_content(tmp)
            entries = tmp.entries
        col = next((k for k, e in enumerate(entries) if e), None)
        if col is None:
            return False
        # kept sorted by pivot column so later reductions never refill a cleared column
        self.rows.append((col, entries))
        self.rows.sort(key=lambda t: t[0])
        return True


def rank(rows: Sequence[Vector]) -> int:
    """Dimension over R of the span of ``rows``."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    ech = _Echelon(len(rows[0]))
    for r in rows:
        if len(r) != ech.width:
            raise DimensionError("vectors have different lengths")
        ech.add(r)
        if len(ech.rows) == ech.width:
            break
    return len(ech.rows)


def independent_subset(rows: Sequence[Vector]) -> list[int]:
    """Greedy indices of a maximal R-independent subset, in input order."""
    chosen: list[int] = []
    ech = None
    for i, r in enumerate(rows):
        if not any(r):
            continue
        if ech is None:
            ech = _Echelon(len(r))
        if len(chosen) == ech.width:
            break
        if ech.add(r):
            chosen.append(i)
    return chosen


def solve(columns: Sequence[Vector], target: Vector) -> Optional[list[RatFunc]]:
    """Coordinates ``c`` with ``sum(c[k] * columns[k]) == target``.

    ``columns`` must be R-independent.  Returns ``None`` when the target is
    outside their R-span.
    """
    nv = _nvars_of([target]) or _nvars_of(columns)
    if not any(target):
        return [RatFunc.zero(nv) for _ in columns]
    res = solve_dependence(list(columns) + [target])
    if res.independent:
        return None
    c = res.coefficients
    if not c[-1]:
        raise ValueError("columns are R-dependent")
    scale = -c[-1].inverse()
    return [x * scale for x in c[:-1]]


def nullspace(rows: Sequence[Vector], width: int, nvars: int) -> list[list[RatFunc]]:
    """R-basis of ``{w : row . w = 0 for every row}`` (Gauss-Jordan over R)."""
    mat = [list(r) for r in rows if any(r)]
    pivcols = []
    r = 0
    for col in range(width):
        p = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        inv = mat[r][col].inverse()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivcols.append(col)
        r += 1
        if r == len(mat):
            break
    basis = []
    for free in range(width):
        if free in pivcols:
            continue
        w = [RatFunc.zero(nvars) for _ in range(width)]
        w[free] = RatFunc.one(nvars)
        for i, pc in enumerate(pivcols):
            w[pc] = -mat[i][free]
        basis.append(w)
    return basis


def determinant(mat: Sequence[Vector]) -> RatFunc:
    """Cofactor-expansion determinant; an independent oracle for small matrices."""
    n = len(mat)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return mat[0][0]
    total = RatFunc.zero(mat[0][0].nvars)
    for j in range(n):
        if not mat[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in (list(r) for r in mat[1:])]
        term = mat[0][j] * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total
