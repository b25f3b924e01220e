"""Exact linear algebra over Q and over the rational function field Q(t).

The row-reduction code only needs its scalars to support +, -, *, /, and
truthiness for "nonzero", so the same routine serves Fraction matrices and
RationalFunctionT matrices.  ``solve_param_linear`` solves systems whose
entries are univariate polynomials in a parameter t and reports whether the
solution stays pole-free on the closed interval [0, 1], using Sturm chains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, TypeVar

from .poly import RationalFunctionT, UniPoly

S = TypeVar("S")
Row = list


@dataclass
class RrefResult:
    rows: list[list]
    pivots: list[int]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(rows: Sequence[Sequence[S]], width: int | None = None) -> RrefResult:
    """Reduced row echelon form; scalars need field ops plus truthiness."""
    mat = [list(r) for r in rows]
    if width is None:
        width = len(mat[0]) if mat else 0
    for r in mat:
        if len(r) != width:
            raise ValueError("ragged matrix")
    pivots: list[int] = []
    row_at = 0
    for col in range(width):
        pivot_row = None
        for r in range(row_at, len(mat)):
            if mat[r][col]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        mat[row_at], mat[pivot_row] = mat[pivot_row], mat[row_at]
        inv = mat[row_at][col]
        mat[row_at] = [entry / inv for entry in mat[row_at]]
        for r in range(len(mat)):
            if r != row_at and mat[r][col]:
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[row_at])]
        pivots.append(col)
        row_at += 1
        if row_at == len(mat):
            break
    return RrefResult(rows=mat[:row_at], pivots=pivots)


def rank(rows: Sequence[Sequence[S]], width: int | None = None) -> int:
    return rref(rows, width).rank


def kernel_basis(rows: Sequence[Sequence[Fraction]], width: int) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column.

    Each basis vector has a 1 in its free column and zeros in the other
    free columns, so the result is deterministic given the column order.
    """
    red = rref(rows, width)
    pivot_set = set(red.pivots)
    free_cols = [c for c in range(width) if c not in pivot_set]
    basis: list[list[Fraction]] = []
    for fc in free_cols:
        vec = [Fraction(0)] * width
        vec[fc] = Fraction(1)
        for r, pc in enumerate(red.pivots):
            vec[pc] = -red.rows[r][fc]
        basis.append(vec)
    return basis


def solve_linear(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
) -> list[Fraction] | None:
    """One solution of A x = b with free variables set to zero, or None."""
    if len(rows) != len(rhs):
        raise ValueError("rhs length does not match row count")
    width = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red = rref(aug, width + 1)
    if width in red.pivots:
        return None
    solution = [Fraction(0)] * width
    for r, pc in enumerate(red.pivots):
        solution[pc] = red.rows[r][width]
    return solution


def in_span(vectors: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> bool:
    """Whether ``target`` lies in the span of ``vectors``."""
    if not any(target):
        return True
    if not vectors:
        return False
    width = len(target)
    cols = [list(v) for v in vectors]
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(width)]
    return solve_linear(rows, list(target)) is not None


def sign_variations(values: Sequence[Fraction]) -> int:
    signs = [1 if v > 0 else -1 for v in values if v]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_chain(p: UniPoly) -> list[UniPoly]:
    chain = [p, p.derivative()]
    while chain[-1]:
        rem = chain[-2] % chain[-1]
        if not rem:
            break
        chain.append(-rem)
    return [q for q in chain if q]


def sturm_count(p: UniPoly, a: Fraction | int, b: Fraction | int) -> int:
    """Number of distinct real roots of p in the half-open interval (a, b]."""
    a = Fraction(a)
    b = Fraction(b)
    if b <= a:
        return 0
    sf = p.square_free_part()
    if sf.degree() < 1:
        return 0
    chain = sturm_chain(sf)
    va = sign_variations([q.evaluate(a) for q in chain])
    vb = sign_variations([q.evaluate(b) for q in chain])
    return va - vb


def poles_in_closed_unit_interval(f: RationalFunctionT) -> int:
    """Distinct poles of a reduced rational function in [0, 1]."""
    den = f.den
    if den.degree() < 1:
        return 0
    count = sturm_count(den, 0, 1)
    if not den.evaluate(0):
        count += 1
    return count


@dataclass
class ParamSolution:
    """Outcome of solving a linear system over Q(t)."""

    consistent: bool
    solution: list[RationalFunctionT] = field(default_factory=list)
    pole_counts: list[int] = field(default_factory=list)

    @property
    def feasible_on_unit_interval(self) -> bool:
        return self.consistent and not any(self.pole_counts)


def solve_param_linear(
    rows: Sequence[Sequence[UniPoly]],
    rhs: Sequence[UniPoly],
) -> ParamSolution:
    """Solve A(t) x = b(t) over Q(t); free variables are set to zero.

    Reports, per component of the solution, how many poles land in the
    closed interval [0, 1].
    """
    if len(rows) != len(rhs):
        raise ValueError("rhs length does not match row count")
    width = len(rows[0]) if rows else 0
    aug = [
        [RationalFunctionT(entry) for entry in row] + [RationalFunctionT(b)]
        for row, b in zip(rows, rhs)
    ]
    red = rref(aug, width + 1)
    if width in red.pivots:
        return ParamSolution(consistent=False)
    solution = [RationalFunctionT.zero()] * width
    for r, pc in enumerate(red.pivots):
        solution[pc] = red.rows[r][width]
    poles = [poles_in_closed_unit_interval(f) for f in solution]
    return ParamSolution(consistent=True, solution=solution, pole_counts=poles)
