"""Graded algebraic-restriction engine for monomial curve germs.

A curve ``g(t) = (t^l1, ..., t^ls, 0, ..., 0)`` induces, in each quasi-degree
d, a finite quotient of the quasi-homogeneous k-forms by the subspace of
forms with zero restriction (forms vanishing on the curve plus exact
differentials of vanishing forms).  ``restriction_quotient`` builds one such
quotient piece exactly, ``build_basis`` scans degrees and returns the labeled
basis of classes of closed 2-forms, and ``project`` expresses any closed
polynomial 2-form in that basis.

Everything is exact over Q; pieces are cached per curve, degree, and form
degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import InputError, NotClosedError, ScanBoundError
from .forms import DifferentialForm, IndexTuple, Weights, ext_der
from .linalg import kernel_basis, rref, solve_linear
from .poly import Exponent, Polynomial, Scalar, UniPoly


@dataclass(frozen=True)
class MonomialCurve:
    """The germ t -> (t^l1, ..., t^ls, 0, ..., 0) in ``ambient`` variables."""

    lams: tuple[int, ...]
    ambient: int = 0

    def __post_init__(self) -> None:
        lams = tuple(int(v) for v in self.lams)
        object.__setattr__(self, "lams", lams)
        if not lams:
            raise InputError("need at least one exponent")
        if any(v <= 0 for v in lams):
            raise InputError("exponents must be positive")
        if any(a >= b for a, b in zip(lams, lams[1:])):
            raise InputError("exponents must be strictly increasing")
        g = 0
        for v in lams:
            g = gcd(g, v)
        if g != 1:
            raise InputError("exponents must have gcd 1 (reparameterize the curve)")
        for i, v in enumerate(lams):
            others = lams[:i] + lams[i + 1:]
            if others and _in_semigroup_of(others, v):
                raise InputError(f"exponent {v} is generated by the others; drop it")
        ambient = self.ambient or len(lams)
        if ambient < len(lams):
            raise InputError("ambient dimension smaller than the exponent list")
        object.__setattr__(self, "ambient", int(ambient))

    @property
    def branch_dim(self) -> int:
        """Number of curve-supported coordinates."""
        return len(self.lams)

    @property
    def weights(self) -> Weights:
        return Weights(self.lams, self.ambient)

    def images(self) -> list[UniPoly]:
        """Component series of the curve, one per ambient variable."""
        series = [UniPoly.t_power(v) for v in self.lams]
        series += [UniPoly.zero()] * (self.ambient - len(self.lams))
        return series

    def in_semigroup(self, value: int) -> bool:
        return value >= 0 and _in_semigroup_of(self.lams, value)

    @property
    def conductor(self) -> int:
        return _conductor(self.lams)

    @property
    def gaps(self) -> tuple[int, ...]:
        c = self.conductor
        return tuple(v for v in range(1, c) if not self.in_semigroup(v))

    def with_ambient(self, ambient: int) -> MonomialCurve:
        return MonomialCurve(self.lams, ambient)

    def __str__(self) -> str:
        return "(" + ", ".join(f"t^{v}" for v in self.lams) + ")"


def _in_semigroup_of(gens: tuple[int, ...], value: int) -> bool:
    if value == 0:
        return True
    table = _membership_table(gens, value)
    return table[value]


@lru_cache(maxsize=None)
def _membership_cached(gens: tuple[int, ...], limit: int) -> tuple[bool, ...]:
    table = [False] * (limit + 1)
    table[0] = True
    for n in range(1, limit + 1):
        table[n] = any(g <= n and table[n - g] for g in gens)
    return tuple(table)


def _membership_table(gens: tuple[int, ...], limit: int) -> tuple[bool, ...]:
    # round the limit up so the cache is reused across nearby queries
    rounded = max(64, 1 << (limit.bit_length() + 1))
    return _membership_cached(gens, rounded)


@lru_cache(maxsize=None)
def _conductor(gens: tuple[int, ...]) -> int:
    smallest = min(gens)
    limit = max(64, (smallest - 1) * (max(gens) - 1) + smallest + 1)
    while True:
        table = _membership_table(gens, limit)
        run = 0
        for n in range(len(table)):
            run = run + 1 if table[n] else 0
            if run == smallest:
                return n - smallest + 1
        limit *= 2


@lru_cache(maxsize=None)
def monomials_of_qdeg(wvec: tuple[int, ...], d: int) -> tuple[Exponent, ...]:
    """All exponent tuples with weighted degree d, graded-lex descending."""
    if d < 0:
        return ()

    def extend(pos: int, remaining: int) -> list[Exponent]:
        if pos == len(wvec):
            return [()] if remaining == 0 else []
        out = []
        w = wvec[pos]
        for e in range(remaining // w + 1):
            for tail in extend(pos + 1, remaining - e * w):
                out.append((e,) + tail)
        return out

    mons = extend(0, d)
    mons.sort(key=lambda exps: (sum(exps), exps), reverse=True)
    return tuple(mons)


@lru_cache(maxsize=None)
def ideal_graded_basis(curve: MonomialCurve, qdeg: int) -> tuple[Polynomial, ...]:
    """Basis of quasi-homogeneous polynomials of the given quasi-degree
    vanishing on the curve."""
    mons = monomials_of_qdeg(curve.weights.wvec, qdeg)
    if not mons:
        return ()
    images = curve.images()
    values = [Polynomial.monomial(m).substitute(images) for m in mons]
    powers = sorted({e for v in values for e in range(len(v.coeffs)) if v.coefficient(e)})
    rows = [[v.coefficient(e) for v in values] for e in powers]
    kern = kernel_basis(rows, len(mons))
    nvars = curve.ambient
    return tuple(
        Polynomial(nvars, {mons[j]: vec[j] for j in range(len(mons)) if vec[j]})
        for vec in kern
    )


def vanishes_on_curve(curve: MonomialCurve, poly: Polynomial) -> bool:
    if poly.nvars != curve.ambient:
        raise InputError("polynomial variable count does not match the curve")
    return poly.substitute(curve.images()).is_zero()


@dataclass(frozen=True)
class GradedPiece:
    """One graded quotient piece: k-forms of quasi-degree d modulo the
    forms with zero restriction."""

    curve: MonomialCurve
    k: int
    d: int
    columns: tuple[tuple[IndexTuple, Exponent], ...]
    zrows: tuple[tuple[Fraction, ...], ...]
    zpivots: tuple[int, ...]
    rep_cols: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.rep_cols)

    @property
    def ambient_dim(self) -> int:
        return len(self.columns)

    def column_form(self, col: int) -> DifferentialForm:
        idx, exps = self.columns[col]
        return DifferentialForm.from_term(
            self.curve.ambient, idx, Polynomial.monomial(exps)
        )

    def vectorize(self, form: DifferentialForm) -> list[Fraction]:
        """Coordinates of a quasi-homogeneous degree-d k-form."""
        if form.nvars != self.curve.ambient:
            raise InputError("form variable count does not match the curve")
        if form.degree != self.k:
            raise InputError(f"expected a {self.k}-form")
        index = {key: i for i, key in enumerate(self.columns)}
        vec = [Fraction(0)] * len(self.columns)
        for idx, poly in form.coeffs.items():
            for exps, coeff in poly.terms.items():
                pos = index.get((idx, exps))
                if pos is None:
                    raise InputError(
                        f"term x^{exps} dx{idx} is not quasi-homogeneous of degree {self.d}"
                    )
                vec[pos] = coeff
        return vec

    def quotient_coords(self, vec: Sequence[Fraction]) -> list[Fraction]:
        """Reduce modulo the zero-restriction subspace; coordinates on the
        representative columns."""
        work = list(vec)
        for row, pivot in zip(self.zrows, self.zpivots):
            factor = work[pivot]
            if factor:
                work = [a - factor * b for a, b in zip(work, row)]
        return [work[c] for c in self.rep_cols]

    def rep_form(self, j: int) -> DifferentialForm:
        return self.column_form(self.rep_cols[j])

    def coords_to_form(self, coords: Sequence[Fraction]) -> DifferentialForm:
        form = DifferentialForm.zero(self.k, self.curve.ambient)
        for j, c in enumerate(coords):
            if c:
                form = form + self.rep_form(j) * c
        return form


@lru_cache(maxsize=None)
def restriction_quotient(curve: MonomialCurve, k: int, d: int) -> GradedPiece:
    """Build the graded piece of k-form restrictions in quasi-degree d."""
    if k < 0:
        raise InputError("form degree must be nonnegative")
    if d < 0:
        raise InputError("quasi-degree must be nonnegative")
    m = curve.ambient
    weights = curve.weights
    columns: list[tuple[IndexTuple, Exponent]] = []
    for idx in itertools.combinations(range(m), k):
        e = d - sum(weights.weight(i) for i in idx)
        for exps in monomials_of_qdeg(weights.wvec, e):
            columns.append((idx, exps))
    index = {key: i for i, key in enumerate(columns)}
    width = len(columns)

    def vectorize(form: DifferentialForm) -> list[Fraction]:
        vec = [Fraction(0)] * width
        for idx, poly in form.coeffs.items():
            for exps, coeff in poly.terms.items():
                vec[index[(idx, exps)]] = coeff
        return vec

    gens: list[list[Fraction]] = []
    for idx in itertools.combinations(range(m), k):
        e = d - sum(weights.weight(i) for i in idx)
        for q in ideal_graded_basis(curve, e):
            gens.append(vectorize(DifferentialForm.from_term(m, idx, q)))
    if k >= 1:
        for jdx in itertools.combinations(range(m), k - 1):
            e = d - sum(weights.weight(i) for i in jdx)
            for q in ideal_graded_basis(curve, e):
                gens.append(vectorize(ext_der(DifferentialForm.from_term(m, jdx, q))))
    red = rref(gens, width)
    pivot_set = set(red.pivots)
    rep_cols = tuple(c for c in range(width) if c not in pivot_set)
    return GradedPiece(
        curve=curve,
        k=k,
        d=d,
        columns=tuple(columns),
        zrows=tuple(tuple(row) for row in red.rows),
        zpivots=tuple(red.pivots),
        rep_cols=rep_cols,
    )


@dataclass(frozen=True)
class BasisElement:
    """One labeled basis class of closed 2-form restrictions."""

    label: str
    qdeg: int
    vector: tuple[Fraction, ...]
    rep: DifferentialForm


def _degree_labels(d: int, count: int) -> list[str]:
    if count == 1:
        return [f"a{d}"]
    if count == 2:
        return [f"a{d}+", f"a{d}-"]
    return [f"a{d}.{i + 1}" for i in range(count)]


def default_scan_bound(curve: MonomialCurve) -> int:
    lams = curve.lams
    second = lams[-2] if len(lams) >= 2 else lams[-1]
    return curve.conductor + 3 * lams[-1] + second


class RestrictionBasis:
    """Labeled basis of the space of closed 2-form restriction classes."""

    __slots__ = (
        "curve",
        "max_qdeg",
        "elements",
        "label_index",
        "by_degree",
        "last_nonzero_qdeg",
    )

    def __init__(self, curve: MonomialCurve, max_qdeg: int | None = None):
        self.curve = curve
        bound = default_scan_bound(curve) if max_qdeg is None else int(max_qdeg)
        self.max_qdeg = bound
        elements: list[BasisElement] = []
        by_degree: dict[int, list[tuple[int, tuple[Fraction, ...]]]] = {}
        last_nonzero = 0
        for d in range(1, bound + 1):
            piece2 = restriction_quotient(curve, 2, d)
            if piece2.dim == 0:
                continue
            last_nonzero = d
            piece3 = restriction_quotient(curve, 3, d)
            image_cols = [
                piece3.quotient_coords(piece3.vectorize(ext_der(piece2.rep_form(j))))
                for j in range(piece2.dim)
            ]
            map_rows = [
                [image_cols[j][i] for j in range(piece2.dim)]
                for i in range(piece3.dim)
            ]
            kern = kernel_basis(map_rows, piece2.dim)
            if not kern:
                continue
            canon = rref(kern, piece2.dim)
            ordered = sorted(
                zip(canon.pivots, canon.rows), key=lambda item: item[0], reverse=True
            )
            labels = _degree_labels(d, len(ordered))
            entries: list[tuple[int, tuple[Fraction, ...]]] = []
            for label, (_, vec) in zip(labels, ordered):
                vector = tuple(vec)
                rep = piece2.coords_to_form(vector)
                entries.append((len(elements), vector))
                elements.append(BasisElement(label, d, vector, rep))
            by_degree[d] = entries
        window = 2 * curve.lams[-1]
        top_closed = elements[-1].qdeg if elements else 0
        if top_closed > bound - window:
            raise ScanBoundError(
                f"graded scan up to quasi-degree {bound} found a closed class at "
                f"{top_closed}, inside the trailing stabilization window of {window}; "
                f"rerun with max_qdeg >= {top_closed + window}"
            )
        self.elements = tuple(elements)
        self.label_index = {el.label: i for i, el in enumerate(elements)}
        self.by_degree = by_degree
        self.last_nonzero_qdeg = last_nonzero

    @property
    def dim(self) -> int:
        return len(self.elements)

    @property
    def top_qdeg(self) -> int:
        """Largest quasi-degree carrying a basis element."""
        return self.elements[-1].qdeg if self.elements else 0

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(el.label for el in self.elements)

    def element(self, label: str) -> BasisElement:
        i = self.label_index.get(label)
        if i is None:
            raise InputError(f"unknown basis label {label!r}; have {', '.join(self.labels)}")
        return self.elements[i]

    def solve_in_closed(self, d: int, coords2: Sequence[Fraction]) -> dict[int, Fraction]:
        """Express quotient coordinates at degree d in the closed basis there.

        Returns a map from global element index to coefficient; raises if the
        class does not lie in the closed subspace (the caller is expected to
        have verified closedness already).
        """
        entries = self.by_degree.get(d, [])
        if not entries:
            if any(coords2):
                raise NotClosedError(
                    f"nonzero restriction class of quasi-degree {d} is not closed"
                )
            return {}
        rows = [
            [vec[i] for _, vec in entries]
            for i in range(len(coords2))
        ]
        solution = solve_linear(rows, list(coords2))
        if solution is None:
            raise NotClosedError(
                f"restriction class of quasi-degree {d} lies outside the closed subspace"
            )
        return {
            entries[j][0]: solution[j] for j in range(len(entries)) if solution[j]
        }


@lru_cache(maxsize=None)
def cached_basis(curve: MonomialCurve, max_qdeg: int | None = None) -> RestrictionBasis:
    return RestrictionBasis(curve, max_qdeg)


class AlgRestriction:
    """A class of closed 2-form restrictions, as coordinates in a basis."""

    __slots__ = ("basis", "coords")

    def __init__(self, basis: RestrictionBasis, coords: Iterable[Scalar]):
        self.basis = basis
        cs = tuple(Fraction(c) for c in coords)
        if len(cs) != basis.dim:
            raise InputError("coordinate count does not match the basis")
        self.coords = cs

    @classmethod
    def zero(cls, basis: RestrictionBasis) -> AlgRestriction:
        return cls(basis, (Fraction(0),) * basis.dim)

    @classmethod
    def from_coeffs(
        cls, basis: RestrictionBasis, coeffs: Mapping[str, Scalar]
    ) -> AlgRestriction:
        vec = [Fraction(0)] * basis.dim
        for label, value in coeffs.items():
            i = basis.label_index.get(label)
            if i is None:
                raise InputError(
                    f"unknown basis label {label!r}; have {', '.join(basis.labels)}"
                )
            vec[i] += Fraction(value)
        return cls(basis, vec)

    def _check_same_basis(self, other: AlgRestriction) -> None:
        if self.basis is not other.basis and (
            self.basis.curve != other.basis.curve
            or self.basis.labels != other.basis.labels
        ):
            raise InputError("restriction classes live in different bases")

    def __add__(self, other: AlgRestriction) -> AlgRestriction:
        if not isinstance(other, AlgRestriction):
            return NotImplemented
        self._check_same_basis(other)
        return AlgRestriction(self.basis, (a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: AlgRestriction) -> AlgRestriction:
        if not isinstance(other, AlgRestriction):
            return NotImplemented
        self._check_same_basis(other)
        return AlgRestriction(self.basis, (a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> AlgRestriction:
        return AlgRestriction(self.basis, (-a for a in self.coords))

    def __mul__(self, scalar: Scalar) -> AlgRestriction:
        c = Fraction(scalar)
        return AlgRestriction(self.basis, (a * c for a in self.coords))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgRestriction):
            return NotImplemented
        return self.basis.curve == other.basis.curve and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.basis.curve, self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def coefficient(self, label: str) -> Fraction:
        i = self.basis.label_index.get(label)
        if i is None:
            raise InputError(f"unknown basis label {label!r}")
        return self.coords[i]

    def nonzero_qdegs(self) -> list[int]:
        return sorted(
            {el.qdeg for el, c in zip(self.basis.elements, self.coords) if c}
        )

    def part(self, qdeg: int) -> AlgRestriction:
        """The graded part living in one quasi-degree."""
        return AlgRestriction(
            self.basis,
            (
                c if el.qdeg == qdeg else Fraction(0)
                for el, c in zip(self.basis.elements, self.coords)
            ),
        )

    def min_qdeg_part(self) -> tuple[int, AlgRestriction] | None:
        degs = self.nonzero_qdegs()
        if not degs:
            return None
        return degs[0], self.part(degs[0])

    def rep_form(self) -> DifferentialForm:
        form = DifferentialForm.zero(2, self.basis.curve.ambient)
        for el, c in zip(self.basis.elements, self.coords):
            if c:
                form = form + el.rep * c
        return form

    def __str__(self) -> str:
        parts: list[str] = []
        for el, c in zip(self.basis.elements, self.coords):
            if not c:
                continue
            if c == 1:
                body = el.label
            elif c == -1:
                body = f"-{el.label}"
            else:
                body = f"{c}*{el.label}"
            if parts and not body.startswith("-"):
                parts.append(f"+ {body}")
            elif parts:
                parts.append(f"- {body[1:]}")
            else:
                parts.append(body)
        return " ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"AlgRestriction({self})"


def drop_off_curve(form: DifferentialForm, branch_dim: int) -> DifferentialForm:
    """Pull a form back along the inclusion of the curve-supported subspace.

    Deletes every term containing an off-curve variable or differential and
    re-expresses the rest in the first ``branch_dim`` variables.  The class
    of the restriction is unchanged: a term p dx_j ^ dx_I with j off-curve
    equals d(+- x_j p dx_I) up to a form with vanishing coefficients on the
    curve, and both lie in the zero-restriction space.
    """
    m = form.nvars
    if branch_dim > m:
        raise InputError("branch dimension exceeds the form's variable count")
    coeffs: dict[IndexTuple, Polynomial] = {}
    for idx, poly in form.coeffs.items():
        if any(i >= branch_dim for i in idx):
            continue
        terms = {
            exps[:branch_dim]: c
            for exps, c in poly.terms.items()
            if all(e == 0 for e in exps[branch_dim:])
        }
        if terms:
            coeffs[idx] = Polynomial(branch_dim, terms)
    return DifferentialForm(form.degree, branch_dim, coeffs)


def project(
    curve: MonomialCurve,
    form: DifferentialForm,
    basis: RestrictionBasis,
) -> AlgRestriction:
    """Express the restriction class of a closed polynomial 2-form in the basis."""
    if basis.curve != curve:
        raise InputError("basis was built for a different curve")
    if form.nvars != curve.ambient:
        raise InputError(
            f"form has {form.nvars} variables, curve ambient dimension is {curve.ambient}"
        )
    if form.degree != 2:
        raise InputError("only 2-forms can be projected to this basis")
    weights = curve.weights
    dform = ext_der(form)
    for d, part in dform.graded_parts(weights).items():
        piece3 = restriction_quotient(curve, 3, d)
        coords3 = piece3.quotient_coords(piece3.vectorize(part))
        if any(coords3):
            raise NotClosedError(
                f"exterior derivative has a nonzero restriction in quasi-degree {d}"
            )
    coords = [Fraction(0)] * basis.dim
    for d, part in form.graded_parts(weights).items():
        piece2 = restriction_quotient(curve, 2, d)
        coords2 = piece2.quotient_coords(piece2.vectorize(part))
        if not any(coords2):
            continue
        if d > basis.max_qdeg:
            raise ScanBoundError(
                f"the class has a nonzero part in quasi-degree {d}, beyond the scanned "
                f"bound {basis.max_qdeg}; rebuild the basis with max_qdeg >= {d}"
            )
        for i, c in basis.solve_in_closed(d, coords2).items():
            coords[i] += c
    return AlgRestriction(basis, coords)
