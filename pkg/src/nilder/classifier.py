"""Classification of nilpotent derivation algebras whose center has corank <= 2.

For a nilpotent algebra ``L`` of rank ``n >= 3`` over R the classifier
returns one of

* ``AbelianDimN`` / ``DirectSum3PlusAbelian`` when ``dim L = n``;
* ``TypeL1``: a commuting R-basis ``D_1..D_n`` and ``b`` with
  ``D_i(b) = 0`` (``i < n``), ``D_n(b) = 1`` such that ``L`` lies in the
  span of ``b^i/i! D_k`` (``k < n``) and ``D_n``;
* ``TypeL2``: additionally ``a`` with ``D_{n-1}(a) = 1``, ``D_n(a) = 0``
  and ``L`` inside the span of ``a^i b^j/(i! j!) D_k`` (``k <= n-2``),
  ``b^i/i! D_{n-1}`` and ``D_n``.

Every verdict is checked before it is returned; hypotheses that fail give
``OutOfScope`` with the name of the failed check.  :func:`embed` turns a
verdict into an explicit Lie algebra embedding into the triangular algebra.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional

from . import linalg, qlinalg
from .derivation import (DEFAULT_CAP, Derivation, NoSliceError, apply, bracket, find_slice,
                         integrate_along, kernel_projection, slice_expansion)
from .lie import (DEFAULT_MAX_DIM, InvariantViolation, NotFiniteDimensionalError,
                  SpannedLieAlgebra, Subspace, center, central_ideal, centralizer,
                  close_under_bracket, constants_field_witnesses, is_nilpotent, r_independent,
                  r_span_intersection, rank_over_R)
from .poly import Poly
from .qlinalg import DerivationSpan
from .ratfunc import RatFunc
from .triangular import is_member_un


class Case(enum.Enum):
    ABELIAN_DIM_N = "AbelianDimN"
    DIRECT_SUM = "DirectSum3PlusAbelian"
    TYPE_L1 = "TypeL1"
    TYPE_L2 = "TypeL2"
    OUT_OF_SCOPE = "OutOfScope"


@dataclass
class ClassificationVerdict:
    case: Case
    n: int
    adapted_basis: tuple = ()
    a: Optional[RatFunc] = None
    b: Optional[RatFunc] = None
    reason: Optional[str] = None
    detail: str = ""
    abelian_part: tuple = ()
    quotient_chain: tuple = ()
    checks: dict = field(default_factory=dict)
    facts: dict = field(default_factory=dict)
    constants_flags: tuple = ()

    @property
    def in_scope(self) -> bool:
        return self.case is not Case.OUT_OF_SCOPE

    def to_json(self) -> dict:
        out = {
            "case": self.case.value,
            "n": self.n,
            "adapted_basis": [str(D) for D in self.adapted_basis],
            "a": None if self.a is None else str(self.a),
            "b": None if self.b is None else str(self.b),
            "checks": dict(self.checks),
            "facts": dict(self.facts),
            "constants_flags": [str(f) for f in self.constants_flags],
        }
        if self.case is Case.DIRECT_SUM:
            out["abelian_part"] = [str(D) for D in self.abelian_part]
        if self.quotient_chain:
            out["quotient_chain"] = [str(D) for D in self.quotient_chain]
        if self.reason is not None:
            out["failed_check"] = self.reason
            out["detail"] = self.detail
        return out


class OutOfScopeError(ValueError):
    """Raised by :func:`embed` when no embedding over Q can be produced."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail


class _OutOfScope(Exception):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(reason)
        self.reason = reason
        self.detail = detail


# ---------------------------------------------------------------------------
# truncated model algebras


def _divided(nvars: int, powers: dict) -> Poly:
    mono = [0] * nvars
    denom = 1
    for var, e in powers.items():
        mono[var - 1] = e
        denom *= factorial(e)
    return Poly.monomial(nvars, tuple(mono), Fraction(1, denom))


def build_L1(n: int, k: int) -> SpannedLieAlgebra:
    """``{x_n^i/i! d_j : i <= k, j < n} ∪ {d_n}`` in ``n`` variables."""
    if n < 3 or k < 0:
        raise ValueError("need n >= 3 and k >= 0")
    basis = []
    for j in range(1, n):
        for i in range(k + 1):
            basis.append(Derivation.coordinate(n, j) * _divided(n, {n: i}))
    basis.append(Derivation.coordinate(n, n))
    return SpannedLieAlgebra.from_basis(basis)


def build_L2(n: int, k: int) -> SpannedLieAlgebra:
    """Truncation of the two-slice family with ``a = x_{n-1}``, ``b = x_n``.

    Starts from ``x_{n-1}^i x_n^j/(i! j!) d_m`` for ``i + j <= k``,
    ``m <= n-2``, then ``x_n^i/i! d_{n-1}`` for ``i <= k`` and ``d_n``.
    For ``k >= 2`` that list is not bracket closed (``[b^2/2 d_{n-1}, a^2/2 d_1]``
    has degree 3), so the missing ``a^i b^j/(i! j!) d_m`` are added; only
    ``ad(b^i d_{n-1})`` raises degree and it lowers the power of ``a``, so
    this terminates.
    """
    if n < 3 or k < 0:
        raise ValueError("need n >= 3 and k >= 0")
    keys = [(i, total - i) for total in range(k + 1) for i in range(total, -1, -1)]
    seen = set(keys)
    todo = list(keys)
    while todo:
        p, q = todo.pop(0)
        if p == 0:
            continue
        for i in range(k + 1):
            new = (p - 1, q + i)
            if new not in seen:
                seen.add(new)
                keys.append(new)
                todo.append(new)
    basis = []
    for m in range(1, n - 1):
        for i, j in keys:
            basis.append(Derivation.coordinate(n, m) * _divided(n, {n - 1: i, n: j}))
    for i in range(k + 1):
        basis.append(Derivation.coordinate(n, n - 1) * _divided(n, {n: i}))
    basis.append(Derivation.coordinate(n, n))
    return SpannedLieAlgebra.from_basis(basis)


def h2_plus_abelian(n: int) -> SpannedLieAlgebra:
    """``<d1, d2 + x3 d1, d3> ⊕ <d4, ..., dn>``."""
    if n < 3:
        raise ValueError("need n >= 3")
    d = [Derivation.coordinate(n, i) for i in range(1, n + 1)]
    x3 = RatFunc.var(n, 3)
    return SpannedLieAlgebra.from_basis([d[0], d[1] + d[0] * x3, d[2]] + d[3:])


# ---------------------------------------------------------------------------
# helpers


def _r_coords(basis, D: Derivation) -> list[RatFunc]:
    c = linalg.solve([B.coeffs for B in basis], D.coeffs)
    if c is None:
        raise _OutOfScope("r_span", f"{D} is outside the R-span of the adapted basis")
    return c


def _in_constants(f: RatFunc, derivs) -> bool:
    return all(not apply(D, f) for D in derivs)


def _ideal_generators(alg, ideal: Subspace, central) -> list[RatFunc]:
    """R-coordinates of the ideal's Q-basis over an R-basis of the center."""
    gens = []
    seen = set()
    for E in ideal.elements():
        for r in _r_coords(central, E):
            if r and not r.is_constant() and r not in seen:
                seen.add(r)
                gens.append(r)
    return gens


def _quotient_center(alg: SpannedLieAlgebra, ideal: Subspace) -> tuple[list[int], list[list[Fraction]]]:
    comp = [i for i in range(alg.dim) if i not in ideal.pivots]
    eqs = []
    for j in range(alg.dim):
        images = [ideal.reduce(alg.structure_constant(c, j)) for c in comp]
        for k in range(alg.dim):
            eqs.append([img[k] for img in images])
    sols = qlinalg.nullspace(eqs, len(comp))
    lifted = []
    for s in sols:
        v = [Fraction(0)] * alg.dim
        for c, x in zip(comp, s):
            v[c] = x
        lifted.append(v)
    return comp, lifted


def _quotient_is_abelian(alg, ideal, comp) -> bool:
    for x in range(len(comp)):
        for y in range(x + 1, len(comp)):
            if any(ideal.reduce(alg.structure_constant(comp[x], comp[y]))):
                return False
    return True


def _quotient_chain(alg, ideal, ideal1, dn1, dn, rbasis, b, cap):
    """Jordan chain of ad D_n on I_1/I through D_{n-1}, in divided-power form.

    Each new preimage is shifted by a constant multiple of ``D_{n-1}`` so its
    ``D_{n-1}``-coordinate is exactly ``b^i / i!``.  Returns the chain (as
    coordinate vectors) and ``b`` (taken from the chain when not given).
    """
    rows = ideal1.rows
    images = [ideal.reduce(alg.bracket_coords(dn, u)) for u in rows]
    chain = [list(dn1)]
    limit = ideal1.dim - ideal.dim
    while len(chain) <= limit:
        target = ideal.reduce(chain[-1])
        mu = qlinalg.solve(images, target)
        if mu is None:
            break
        w = qlinalg.combine(rows, mu)
        c = _r_coords(rbasis, alg.element(w))[-1]
        i = len(chain)
        if b is None:
            b = c
        alpha = c - b**i / factorial(i)
        if not alpha.is_constant():
            if _in_constants(alpha, list(rbasis) + [alg.element(dn)]):
                raise _OutOfScope("constants_field_is_Q", f"chain offset {alpha} is a nonrational constant")
            raise _OutOfScope("quotient_chain_shape", f"chain element {i + 1} is not b^{i}/{i}! D_(n-1)")
        shift = alpha.constant_value()
        w = [x - shift * y for x, y in zip(w, dn1)]
        chain.append(w)
    if len(chain) != limit:
        raise _OutOfScope("single_jordan_chain",
                          f"chain of length {len(chain)} in a quotient of dimension {limit}")
    return chain, b


def _two_slices(S: Derivation, T: Derivation, gens, cap):
    """Slices ``a, b`` with S(a)=1, T(a)=0, S(b)=0, T(b)=1 for commuting S, T."""
    try:
        _, s = find_slice(S, gens, cap)
        kern = []
        for g in gens:
            k = kernel_projection(S, s, g, cap)
            if k and not k.is_constant() and k not in kern:
                kern.append(k)
        _, b = find_slice(T, kern, cap)
        a = kernel_projection(T, b, s, cap)
    except (NoSliceError, ValueError) as exc:
        raise _OutOfScope("two_commuting_slices", str(exc)) from exc
    return a, b


# ---------------------------------------------------------------------------
# classification


def classify(alg: SpannedLieAlgebra, cap: int = DEFAULT_CAP) -> ClassificationVerdict:
    """Classify ``alg``; see the module docstring for the possible cases."""
    facts = {"dim": alg.dim}
    nil = is_nilpotent(alg)
    facts["nilpotent"] = nil.nilpotent
    n = rank_over_R(alg)
    facts["rank"] = n
    if not nil.nilpotent:
        return _oos(n, facts, "nilpotent", "the lower central series stabilises at a nonzero term")
    facts["nilpotency_class"] = nil.nilpotency_class
    if n < 3:
        facts["abelian"] = alg.is_abelian()
        if n == 1 and not alg.is_abelian():
            raise InvariantViolation("a nilpotent algebra of rank 1 must be abelian")
        return _oos(n, facts, "rank_at_least_3", f"rank {n} < 3")
    cd = center(alg)
    facts.update(center_rank=cd.rank_over_R, corank=cd.corank, center_dim=cd.subspace.dim)
    if cd.corank > 2:
        return _oos(n, facts, "center_corank_at_most_2", f"corank {cd.corank} > 2")
    flags = tuple(constants_field_witnesses(alg))
    try:
        if alg.dim == n:
            verdict = _classify_dim_n(alg, n, cd)
        elif cd.corank == 0:
            raise _OutOfScope("constants_field_is_Q", "abelian with dim > rank, so F is larger than Q")
        elif cd.corank == 1:
            verdict = _classify_corank1(alg, n, cd, cap)
        else:
            verdict = _classify_corank2(alg, n, cd, cap)
        verdict.facts.update(facts)
        verdict.constants_flags = flags
        verify_verdict(verdict, alg, cap)
        if not verdict.checks.get("contained_in_model", True):
            if verdict.case is Case.TYPE_L1 and cd.corank == 2:
                verdict = _upgrade_to_L2(verdict, alg, cap)
                verify_verdict(verdict, alg, cap)
            if not verdict.checks["contained_in_model"]:
                raise _OutOfScope("model_form", verdict.detail)
    except _OutOfScope as exc:
        reason, detail = exc.reason, exc.detail
        if flags and reason != "constants_field_is_Q":
            reason, detail = "constants_field_is_Q", f"{exc.reason} failed and F contains {flags[0]}"
        v = _oos(n, facts, reason, detail)
        v.constants_flags = flags
        return v
    if not all(verdict.checks.values()):
        failed = sorted(k for k, ok in verdict.checks.items() if not ok)
        if flags:
            v = _oos(n, facts, "constants_field_is_Q", f"checks {failed} failed; F contains {flags[0]}")
            v.constants_flags = flags
            return v
        raise InvariantViolation(f"verdict failed its own checks: {failed}")
    extra = _nonrational_coefficients(verdict, alg, cap)
    verdict.facts["model_coefficients_rational"] = not extra
    verdict.constants_flags = flags + tuple(f for f in extra if f not in flags)
    return verdict


def _nonrational_coefficients(verdict, alg, cap) -> list[RatFunc]:
    """Model coefficients that lie in F but not in Q (witnesses of F != Q)."""
    if verdict.case not in (Case.TYPE_L1, Case.TYPE_L2):
        return []
    out = []
    for B in alg.basis:
        for table in _expand(verdict, B, cap).values():
            for c in table.values():
                if not c.is_constant() and c not in out:
                    out.append(c)
    return out


def _oos(n, facts, reason, detail) -> ClassificationVerdict:
    return ClassificationVerdict(Case.OUT_OF_SCOPE, n, reason=reason, detail=detail, facts=dict(facts))


def _classify_dim_n(alg, n, cd) -> ClassificationVerdict:
    if alg.is_abelian():
        return ClassificationVerdict(Case.ABELIAN_DIM_N, n, adapted_basis=alg.basis)
    pair = next((i, j) for i in range(alg.dim) for j in range(i + 1, alg.dim)
                if any(alg.structure_constant(i, j)))
    i, j = pair
    z = alg.structure_constant(i, j)
    zsub = cd.subspace
    if zsub.dim != n - 2 or not zsub.contains(z):
        raise _OutOfScope("class_two_with_center_of_codim_two",
                          f"center has dimension {zsub.dim}, expected {n - 2}")
    part = [z]
    rest = []
    for row in zsub.rows:
        if not qlinalg.in_span(row, *qlinalg.rref(part, alg.dim)):
            part.append(row)
            rest.append(row)
    X, Y = alg.basis[i], alg.basis[j]
    abelian = tuple(alg.element(r) for r in rest)
    return ClassificationVerdict(Case.DIRECT_SUM, n, adapted_basis=(X, Y, alg.element(z)) + abelian,
                                 abelian_part=abelian)


def _classify_corank1(alg, n, cd, cap) -> ClassificationVerdict:
    ideal = central_ideal(alg, cd)
    central = r_independent(list(cd.center_basis))
    if alg.dim - ideal.dim != 1:
        raise _OutOfScope("quotient_dimension", f"dim L/I = {alg.dim - ideal.dim}, expected 1")
    top = next(k for k in range(alg.dim) if k not in ideal.pivots)
    Dn = alg.basis[top]
    gens = _ideal_generators(alg, ideal, central)
    try:
        _, b = find_slice(Dn, gens, cap)
    except NoSliceError as exc:
        raise _OutOfScope("slice_exists", str(exc)) from exc
    return ClassificationVerdict(Case.TYPE_L1, n, adapted_basis=tuple(central) + (Dn,), b=b,
                                 facts={"dim_I": ideal.dim, "route": "center_rank_n-1"})


def _classify_corank2(alg, n, cd, cap) -> ClassificationVerdict:
    ideal = central_ideal(alg, cd)
    central = r_independent(list(cd.center_basis))
    comp, qcenter = _quotient_center(alg, ideal)
    abelian_q = _quotient_is_abelian(alg, ideal, comp)
    cent = centralizer(alg, ideal)
    c_is_i = cent.dim == ideal.dim
    if abelian_q:
        if len(comp) != 2:
            raise _OutOfScope("abelian_quotient_has_dim_2", f"dim L/I = {len(comp)}")
        extra = [r for r in cent.rows if not ideal.contains(r)]
        dn1 = extra[0] if extra else qlinalg.unit(alg.dim, comp[0])
    else:
        if len(qcenter) != 1:
            raise _OutOfScope("quotient_center_one_dimensional",
                              f"center of L/I has dimension {len(qcenter)}")
        dn1 = qcenter[0]
        if not c_is_i and not cent.contains(dn1):
            raise _OutOfScope("centralizer_contains_quotient_center", "D_(n-1) does not centralise I")
    Dn1 = alg.element(dn1)
    ideal1 = r_span_intersection(alg, central + [Dn1])
    top = next((k for k in comp if not ideal1.contains(qlinalg.unit(alg.dim, k))), None)
    if top is None:
        raise _OutOfScope("adapted_rank", "L is inside R(I + Q D_(n-1))")
    dn = qlinalg.unit(alg.dim, top)
    Dn = alg.basis[top]
    if rank_over_R(central + [Dn1, Dn]) != n:
        raise _OutOfScope("adapted_rank", "D_1..D_n are not an R-basis")
    rbasis = central + [Dn1]
    facts = {"dim_I": ideal.dim, "centralizer_is_I": c_is_i, "quotient_abelian": abelian_q}
    a = None
    if ideal.dim == n - 2:
        if abelian_q:
            raise _OutOfScope("quotient_nonabelian", "I = Z with abelian quotient forces dim L = n")
        chain, b = _quotient_chain(alg, ideal, ideal1, dn1, dn, rbasis, None, cap)
        case = Case.TYPE_L1
        facts["route"] = "I=Z"
    elif c_is_i:
        a, b = _two_slices(Dn1, Dn, _ideal_generators(alg, ideal, central), cap)
        case = Case.TYPE_L2
        facts["route"] = "C(I)=I"
    else:
        try:
            _, b = find_slice(Dn, _ideal_generators(alg, ideal, central), cap)
        except NoSliceError as exc:
            raise _OutOfScope("slice_exists", str(exc)) from exc
        case = Case.TYPE_L1
        facts["route"] = "C(I)!=I"
    chain = []
    if not abelian_q:
        chain, b = _quotient_chain(alg, ideal, ideal1, dn1, dn, rbasis, b, cap)
    # make D_{n-1} commute with D_n
    comm = bracket(Dn, Dn1)
    Dn1_adj = Dn1
    if comm:
        h = _r_coords(central, comm)
        for Dk, hk in zip(central, h):
            if hk:
                try:
                    u = integrate_along(Dn, b, hk, cap)
                except ValueError as exc:
                    raise _OutOfScope("correction_term", str(exc)) from exc
                Dn1_adj = Dn1_adj - Dk * u
    facts["corrected_D_(n-1)"] = bool(comm)
    return ClassificationVerdict(case, n, adapted_basis=tuple(central) + (Dn1_adj, Dn), a=a, b=b,
                                 quotient_chain=tuple(alg.element(w) for w in chain), facts=facts)


def _upgrade_to_L2(verdict, alg, cap) -> ClassificationVerdict:
    """Add a second slice ``a`` for ``D_{n-1}`` when one slice is not enough.

    The I_1 elements are ``r D_{n-1}`` plus R-combinations of the central
    ``D_i`` whose coefficients need not be constants of ``D_{n-1}``; then
    ``L`` lies in the two-slice family instead.
    """
    n = verdict.n
    basis = verdict.adapted_basis
    S, T = basis[n - 2], basis[n - 1]
    gens = []
    for B in alg.basis:
        for r in _r_coords(basis, B)[:n - 2]:
            if r and not r.is_constant() and r not in gens:
                gens.append(r)
    try:
        _, s = find_slice(S, gens, cap)
        a = kernel_projection(T, verdict.b, s, cap)
    except (NoSliceError, ValueError) as exc:
        raise _OutOfScope("model_form", f"{verdict.detail}; no second slice: {exc}") from exc
    facts = dict(verdict.facts, route=verdict.facts.get("route", "") + "+second_slice")
    return ClassificationVerdict(Case.TYPE_L2, n, adapted_basis=basis, a=a, b=verdict.b,
                                 quotient_chain=verdict.quotient_chain, facts=facts,
                                 constants_flags=verdict.constants_flags)


# ---------------------------------------------------------------------------
# verification and expansion in the model basis


def _expand(verdict: ClassificationVerdict, D: Derivation, cap: int) -> dict:
    """Model-basis expansion of ``D``.

    Returns ``{k: {(i, j): c}}`` meaning ``D = sum c a^i b^j / (i! j!) D_k``
    (``i = 0`` throughout for TypeL1), with every ``c`` a constant of the
    adapted basis.  Raises ``_OutOfScope`` if ``D`` is not of that form.
    """
    basis = verdict.adapted_basis
    n = verdict.n
    Dn = basis[-1]
    coords = _r_coords(basis, D)
    out = {}
    for k, r in enumerate(coords, start=1):
        if not r:
            continue
        if k == n:
            table = {(0, 0): r}
        else:
            try:
                bexp = slice_expansion(Dn, verdict.b, r, cap)
            except ValueError as exc:
                raise _OutOfScope("model_form", str(exc)) from exc
            table = {}
            for j, c in enumerate(bexp):
                if not c:
                    continue
                if verdict.case is Case.TYPE_L2 and k <= n - 2:
                    try:
                        aexp = slice_expansion(basis[n - 2], verdict.a, c, cap)
                    except ValueError as exc:
                        raise _OutOfScope("model_form", str(exc)) from exc
                    for i, e in enumerate(aexp):
                        if e:
                            table[i, j] = e
                else:
                    table[0, j] = c
        for c in table.values():
            if not _in_constants(c, basis):
                raise _OutOfScope("model_form", f"coefficient {c} of D_{k} is not a constant")
        out[k] = table
    return out


def _try_expand(verdict, D, cap):
    try:
        return _expand(verdict, D, cap)
    except _OutOfScope as exc:
        verdict.detail = exc.detail
        return None


def verify_verdict(verdict: ClassificationVerdict, alg: SpannedLieAlgebra, cap: int = DEFAULT_CAP) -> dict:
    """Recompute every defining property of the verdict into ``verdict.checks``."""
    checks = {}
    basis = verdict.adapted_basis
    n = verdict.n
    case = verdict.case
    checks["adapted_rank"] = rank_over_R(list(basis)) == n and len(basis) == n
    if case in (Case.ABELIAN_DIM_N, Case.DIRECT_SUM):
        span = DerivationSpan(alg.nvars)
        ok = all(span.add(B) for B in basis) and len(span) == alg.dim
        ok = ok and all(alg.coords(B) is not None for B in basis)
        checks["adapted_is_Q_basis"] = ok
        if case is Case.ABELIAN_DIM_N:
            checks["abelian"] = alg.is_abelian()
        else:
            X, Y, Z = basis[:3]
            checks["bracket_XY_is_Z"] = bracket(X, Y) == Z and bool(Z)
            checks["Z_central"] = all(not bracket(Z, B) for B in basis)
            checks["abelian_part_central"] = all(not bracket(M, B) for M in verdict.abelian_part for B in basis)
            checks["abelian_part_size"] = len(verdict.abelian_part) == n - 3
        verdict.checks = checks
        return checks
    a, b = verdict.a, verdict.b
    checks["adapted_basis_commutes"] = all(
        not bracket(basis[i], basis[j]) for i in range(n) for j in range(i + 1, n))
    if case is Case.TYPE_L1:
        checks["slice_equations"] = (all(not apply(D, b) for D in basis[:-1])
                                     and apply(basis[-1], b) == 1)
    else:
        checks["slice_equations"] = (
            apply(basis[n - 2], a) == 1 and not apply(basis[n - 1], a)
            and not apply(basis[n - 2], b) and apply(basis[n - 1], b) == 1
            and all(not apply(D, a) and not apply(D, b) for D in basis[:n - 2]))
    ok = True
    for B in alg.basis:
        table = _try_expand(verdict, B, cap)
        if table is None:
            ok = False
            break
        for k, t in table.items():
            if k == n and set(t) != {(0, 0)}:
                ok = False
            if k == n - 1 and any(i for i, _ in t):
                ok = False
    checks["contained_in_model"] = ok
    if verdict.quotient_chain:
        rb = list(basis[:n - 2]) + [verdict.quotient_chain[0]]
        ok = True
        for i, E in enumerate(verdict.quotient_chain):
            c = _r_coords(rb, E)[-1]
            ok = ok and c == b**i / factorial(i)
        checks["quotient_chain_divided_powers"] = ok
    if case is Case.TYPE_L2:
        ok = True
        for B in alg.basis:
            coords = _r_coords(basis, B)
            if any(coords[n - 2:]):
                continue
            table = _try_expand(verdict, B, cap)
            ok = ok and table is not None and all(k <= n - 2 for k in table)
        checks["ideal_polynomial_in_a_b"] = ok
    verdict.checks = checks
    return checks


# ---------------------------------------------------------------------------
# embeddings into the triangular algebra


@dataclass
class EmbeddingMap:
    """Basis element of the source algebra -> image in u_n (n = rank)."""

    source: tuple
    images: tuple
    n: int
    checks: dict = field(default_factory=dict)
    pairs_checked: int = 0

    def image(self, coords) -> Derivation:
        out = Derivation.zero(self.n)
        for c, img in zip(coords, self.images):
            if c:
                out = out + img * c
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "table": [[str(s), str(t)] for s, t in zip(self.source, self.images)],
            "checks": dict(self.checks),
            "pairs_checked": self.pairs_checked,
        }


def _rational(c: RatFunc) -> Fraction:
    if not c.is_constant():
        raise OutOfScopeError("constants_field_is_Q", f"model coefficient {c} is not rational")
    return c.constant_value()


def embed(verdict: ClassificationVerdict, alg: SpannedLieAlgebra, cap: int = DEFAULT_CAP) -> EmbeddingMap:
    """Explicit injective Lie homomorphism from ``alg`` into ``u_n(Q)``."""
    if not verdict.in_scope:
        raise OutOfScopeError(verdict.reason, "cannot embed an out-of-scope verdict")
    if verdict.facts.get("model_coefficients_rational") is False:
        raise OutOfScopeError("constants_field_is_Q",
                              f"model coefficients lie in F but not in Q, e.g. {verdict.constants_flags[0]}")
    n = verdict.n
    d = [Derivation.coordinate(n, i) for i in range(1, n + 1)]
    images = []
    if verdict.case in (Case.ABELIAN_DIM_N, Case.DIRECT_SUM):
        if verdict.case is Case.ABELIAN_DIM_N:
            targets = d
        else:
            x3 = RatFunc.var(n, 3)
            X, Y = d[1] + d[0] * x3, d[2]
            targets = [X, Y, bracket(X, Y)] + d[3:]
        span = DerivationSpan(alg.nvars)
        for B in verdict.adapted_basis:
            span.add(B)
        for B in alg.basis:
            c = span.coordinates(B)
            out = Derivation.zero(n)
            for x, t in zip(c, targets):
                if x:
                    out = out + t * x
            images.append(out)
    else:
        for B in alg.basis:
            try:
                table = _expand(verdict, B, cap)
            except _OutOfScope as exc:
                raise InvariantViolation(str(exc)) from exc
            out = Derivation.zero(n)
            for k, t in table.items():
                for (i, j), c in t.items():
                    powers = {n: j}
                    if i:
                        powers[n - 1] = i
                    out = out + d[k - 1] * (_divided(n, powers) * _rational(c))
            images.append(out)
    emb = EmbeddingMap(tuple(alg.basis), tuple(images), n)
    verify_embedding(emb, alg)
    if not all(emb.checks.values()):
        failed = sorted(k for k, ok in emb.checks.items() if not ok)
        raise InvariantViolation(f"embedding failed checks: {failed}")
    return emb


def verify_embedding(emb: EmbeddingMap, alg: SpannedLieAlgebra) -> dict:
    checks = {}
    checks["images_in_u_n"] = all(is_member_un(img) for img in emb.images)
    span = DerivationSpan(emb.n)
    checks["injective"] = all(span.add(img) for img in emb.images)
    ok = True
    count = 0
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            lhs = emb.image(alg.structure_constant(i, j))
            ok = ok and lhs == bracket(emb.images[i], emb.images[j])
            count += 1
    checks["brackets_preserved"] = ok
    emb.pairs_checked = count
    emb.checks = checks
    return checks


# ---------------------------------------------------------------------------
# random test inputs


def random_triangular(rng: random.Random, n: int, degree: int = 2, coeff_bound: int = 9,
                      max_terms: int = 2) -> Derivation:
    """A nonzero triangular derivation with small integer coefficients."""
    while True:
        coeffs = []
        for i in range(1, n + 1):
            later = list(range(i + 1, n + 1))
            if rng.random() < 0.4:
                coeffs.append(Poly.zero(n))
                continue
            terms = {}
            for _ in range(rng.randint(1, max_terms)):
                mono = [0] * n
                if later:
                    for _ in range(rng.randint(0, degree)):
                        mono[rng.choice(later) - 1] += 1
                c = rng.choice([x for x in range(-coeff_bound, coeff_bound + 1) if x])
                terms[tuple(mono)] = c
            coeffs.append(Poly(n, terms))
        D = Derivation(coeffs)
        if D:
            return D


def random_nilpotent(n: int, seed: int, size: int, max_dim: int = DEFAULT_MAX_DIM,
                     degree: int = 2) -> SpannedLieAlgebra:
    """Bracket closure of ``size`` random triangular derivations (deterministic per seed)."""
    if not 1 <= n <= 5 or not 0 <= size <= 12:
        raise ValueError("need 1 <= n <= 5 and 0 <= size <= 12")
    attempt = 0
    while True:
        rng = random.Random(seed * 7919 + attempt)
        gens = [random_triangular(rng, n, degree) for _ in range(size)]
        try:
            return close_under_bracket(gens, max_dim=max_dim, nvars=n)
        except NotFiniteDimensionalError:
            attempt += 1
