"""Discrete symplectic invariants of restriction classes.

All four invariants are computed exactly over the rationals: the
symplectic multiplicity (orbit codimension), the index of isotropy
(maximal vanishing order of a closed representative), the Lagrangian
tangency order (maximal tangency to nearby Lagrangian submanifolds), and
proportionality of minimal-degree parts, which separates classes that no
quasi-degree-preserving scaling can identify.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .curves import (
    AlgRestriction,
    GradedPiece,
    MonomialCurve,
    monomials_of_qdeg,
    restriction_quotient,
)
from .errors import InputError
from .forms import DifferentialForm, ext_der
from .linalg import in_span, solve_linear
from .poly import Polynomial, UniPoly

Extended = int | float


def symplectic_multiplicity(
    curve: MonomialCurve, a: AlgRestriction, policy: str = "grlex"
) -> int:
    """Codimension of the orbit of a in the closed-restriction space."""
    from .symmetry import orbit_tangent_space

    return a.basis.dim - orbit_tangent_space(curve, a, policy).dim


def _vanishing_order_bound(piece: GradedPiece, part_coords: Sequence[Fraction]) -> int:
    """Largest q such that some closed form in the class vanishes to order q.

    Solves for theta in the full graded component: theta must project onto
    the given quotient coordinates, be closed as a form, and have all
    coefficient monomials of total degree at least q; returns the largest
    feasible q (0 when already infeasible at q = 1).
    """
    ncols = len(piece.columns)
    quotient_rows: list[list[Fraction]] = []
    for rho in range(len(piece.rep_cols)):
        quotient_rows.append([Fraction(0)] * ncols)
    for j in range(ncols):
        unit = [Fraction(0)] * ncols
        unit[j] = Fraction(1)
        reduced = piece.quotient_coords(unit)
        for rho, value in enumerate(reduced):
            quotient_rows[rho][j] = value
    piece3 = restriction_quotient(piece.curve, 3, piece.d)
    col_index = {key: i for i, key in enumerate(piece3.columns)}
    der_rows: list[list[Fraction]] = [
        [Fraction(0)] * ncols for _ in piece3.columns
    ]
    for j, (idx, exps) in enumerate(piece.columns):
        dcol = ext_der(
            DifferentialForm.from_term(
                piece.curve.ambient, idx, Polynomial.monomial(exps)
            )
        )
        for didx, poly in dcol.coeffs.items():
            for dexps, coeff in poly:
                der_rows[col_index[(didx, dexps)]][j] = coeff
    degrees = [sum(exps) for _, exps in piece.columns]
    max_degree = max(degrees, default=0)

    def feasible(q: int) -> bool:
        rows = [row[:] for row in quotient_rows]
        rhs = [Fraction(v) for v in part_coords]
        for row in der_rows:
            rows.append(row[:])
            rhs.append(Fraction(0))
        for j, deg in enumerate(degrees):
            if deg < q:
                unit = [Fraction(0)] * ncols
                unit[j] = Fraction(1)
                rows.append(unit)
                rhs.append(Fraction(0))
        return solve_linear(rows, rhs) is not None

    if not feasible(0):
        raise InputError("quotient coordinates do not come from this graded component")
    best = 0
    for q in range(1, max_degree + 2):
        if not feasible(q):
            break
        best = q
    return best


def _part_quotient_coords(a: AlgRestriction, d: int) -> list[Fraction]:
    piece = restriction_quotient(a.basis.curve, 2, d)
    coords = [Fraction(0)] * len(piece.rep_cols)
    for el, coeff in zip(a.basis.elements, a.coords):
        if coeff and el.qdeg == d:
            for rho, value in enumerate(el.vector):
                coords[rho] += coeff * value
    return coords


def index_of_isotropy(curve: MonomialCurve, a: AlgRestriction) -> Extended:
    """Maximal order of vanishing over closed representatives; inf for zero."""
    if a.is_zero():
        return math.inf
    best: Extended = math.inf
    for d in a.nonzero_qdegs():
        piece = restriction_quotient(curve, 2, d)
        best = min(best, _vanishing_order_bound(piece, _part_quotient_coords(a, d)))
    return best


def _lagrangian_span_vectors(
    curve: MonomialCurve, d: int, j: int
) -> list[list[Fraction]]:
    """Quotient coordinates of [d(m dx_i)] for i <= j and qdeg(m) = d - lam_i."""
    piece = restriction_quotient(curve, 2, d)
    pad = (0,) * (curve.ambient - len(curve.lams))
    vectors: list[list[Fraction]] = []
    for i in range(j):
        lam = curve.lams[i]
        for exps in monomials_of_qdeg(curve.lams, d - lam):
            one_form = DifferentialForm.from_term(
                curve.ambient, (i,), Polynomial.monomial(exps + pad)
            )
            two_form = ext_der(one_form)
            vec = piece.vectorize(two_form)
            vectors.append(list(piece.quotient_coords(vec)))
    return vectors


def lagrangian_tangency_order(
    curve: MonomialCurve,
    a: AlgRestriction,
    iota: Extended | None = None,
) -> Extended | None:
    """Maximal tangency order with Lagrangian submanifolds.

    Returns inf for the zero class, None when the index of isotropy is 0
    (the order is then governed directly by the first nonzero quasi-degree
    and is not computed here), and min over nonzero graded parts of
    d - lam_j otherwise, where j is the smallest coordinate whose span of
    exact classes d(m dx_i), i <= j, captures the part.  Pass a
    precomputed index of isotropy as ``iota`` to skip recomputing it.
    """
    if a.is_zero():
        return math.inf
    if iota is None:
        iota = index_of_isotropy(curve, a)
    if iota == 0:
        return None
    best: Extended = math.inf
    for d in a.nonzero_qdegs():
        coords = _part_quotient_coords(a, d)
        order: Extended | None = None
        for j in range(1, len(curve.lams) + 1):
            vectors = _lagrangian_span_vectors(curve, d, j)
            if in_span(vectors, coords):
                order = d - curve.lams[j - 1]
                break
        assert order is not None, "a nonzero part must lie in the full exact span"
        best = min(best, order)
    return best


def tangency_order(
    curve_or_components: MonomialCurve | Sequence[UniPoly],
    constraints: Sequence[Polynomial],
) -> Extended:
    """Minimal vanishing order of the constraints along a parameterized curve."""
    if isinstance(curve_or_components, MonomialCurve):
        components = curve_or_components.images()
    else:
        components = list(curve_or_components)
    best: Extended = math.inf
    for h in constraints:
        if h.nvars != len(components):
            raise InputError(
                f"constraint in {h.nvars} variables does not match a curve with "
                f"{len(components)} components"
            )
        along = h.substitute(components)
        order = along.order()
        if order is not None:
            best = min(best, order)
    return best


@dataclass(frozen=True)
class PmqdVerdict:
    """Comparison of the minimal nonzero quasi-degree parts of two classes."""

    kind: str
    qdegs: tuple[int | None, int | None]
    constant: Fraction | None = None

    def __str__(self) -> str:
        if self.kind == "proportional":
            return f"proportional with constant {self.constant}"
        return self.kind.replace("-", " ")


def pmqd_compare(a1: AlgRestriction, a2: AlgRestriction) -> PmqdVerdict:
    """Compare minimal-degree parts: equal classes under scalings must agree."""
    a1._check_same_basis(a2)
    p1 = a1.min_qdeg_part()
    p2 = a2.min_qdeg_part()
    if p1 is None and p2 is None:
        return PmqdVerdict(kind="both-zero", qdegs=(None, None))
    if p1 is None or p2 is None:
        return PmqdVerdict(
            kind="one-zero",
            qdegs=(None if p1 is None else p1[0], None if p2 is None else p2[0]),
        )
    (d1, part1), (d2, part2) = p1, p2
    if d1 != d2:
        return PmqdVerdict(kind="not-proportional", qdegs=(d1, d2))
    ratio: Fraction | None = None
    for u, v in zip(part1.coords, part2.coords):
        if not u and not v:
            continue
        if not u or not v:
            return PmqdVerdict(kind="not-proportional", qdegs=(d1, d2))
        if ratio is None:
            ratio = v / u
        elif v / u != ratio:
            return PmqdVerdict(kind="not-proportional", qdegs=(d1, d2))
    return PmqdVerdict(kind="proportional", qdegs=(d1, d2), constant=ratio)


def _pfaffian_principal(block: list[list[Polynomial]], rows: Sequence[int]) -> Polynomial:
    """Pfaffian of a principal 2x2 or 4x4 antisymmetric polynomial block."""
    if len(rows) == 2:
        i, j = rows
        return block[i][j]
    i, j, k, l = rows
    return (
        block[i][j] * block[k][l]
        - block[i][k] * block[j][l]
        + block[i][l] * block[j][k]
    )


def representable_by_symplectic(
    curve: MonomialCurve, a: AlgRestriction, n: int
) -> bool:
    """Whether some symplectic form on R^{2n} restricts to the class a.

    Decided by the generic rank, over all representatives, of the constant
    part of the 2-form on the first s coordinates: the class is realizable
    iff that rank is at least 2s - 2n.
    """
    if n < 2:
        raise InputError("the ambient symplectic space needs n >= 2")
    s = len(curve.lams)
    threshold = 2 * s - 2 * n
    if threshold <= 0:
        return True
    if threshold > 4:
        raise InputError(
            "generic-rank computation is implemented for thresholds up to 4 "
            "(curves with at most four branch coordinates beyond n)"
        )
    nparams = 0
    adjustments: list[list[list[Fraction]]] = []
    rep = a.rep_form()
    constant: list[list[Fraction]] = [[Fraction(0)] * s for _ in range(s)]
    for i in range(s):
        for j in range(i + 1, s):
            c = rep.coefficient((i, j)).constant_term()
            constant[i][j] = c
            constant[j][i] = -c
    zero_exps = (0,) * curve.ambient
    seen_degrees = set()
    for i in range(s):
        for j in range(i + 1, s):
            d = curve.lams[i] + curve.lams[j]
            if d in seen_degrees:
                continue
            seen_degrees.add(d)
            piece = restriction_quotient(curve, 2, d)
            col_pos = {key: pos for pos, key in enumerate(piece.columns)}
            for zrow in piece.zrows:
                adj = [[Fraction(0)] * s for _ in range(s)]
                nonzero = False
                for p in range(s):
                    for q in range(p + 1, s):
                        key = ((p, q), zero_exps)
                        pos = col_pos.get(key)
                        if pos is not None and zrow[pos]:
                            adj[p][q] = zrow[pos]
                            adj[q][p] = -zrow[pos]
                            nonzero = True
                if nonzero:
                    adjustments.append(adj)
                    nparams += 1
    block: list[list[Polynomial]] = [
        [Polynomial.constant(nparams, constant[i][j]) for j in range(s)]
        for i in range(s)
    ]
    for k, adj in enumerate(adjustments):
        for i in range(s):
            for j in range(s):
                if adj[i][j]:
                    block[i][j] = block[i][j] + Polynomial.monomial(
                        tuple(1 if v == k else 0 for v in range(nparams)), adj[i][j]
                    )
    generic_rank = 0
    for size in (2, 4):
        if size > s:
            break
        found = False
        for rows in itertools.combinations(range(s), size):
            if not _pfaffian_principal(block, rows).is_zero():
                found = True
                break
        if found:
            generic_rank = size
        else:
            break
    return generic_rank >= threshold


@dataclass(frozen=True)
class InvariantReport:
    """All discrete invariants of one restriction class."""

    mu: int
    iota: Extended
    lt: Extended | None
    min_qdeg: int | None


def invariant_report(
    curve: MonomialCurve, a: AlgRestriction, policy: str = "grlex"
) -> InvariantReport:
    located = a.min_qdeg_part()
    iota = index_of_isotropy(curve, a)
    return InvariantReport(
        mu=symplectic_multiplicity(curve, a, policy),
        iota=iota,
        lt=lagrangian_tangency_order(curve, a, iota=iota),
        min_qdeg=None if located is None else located[0],
    )
