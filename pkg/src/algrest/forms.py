"""Polynomial differential forms, vector fields, and polynomial map germs.

Forms are sparse: a ``DifferentialForm`` of degree k in m variables maps
strictly increasing k-tuples of variable indices (0-based) to polynomial
coefficients.  The operations here are the classical exact ones: wedge
product, exterior derivative, interior product, Lie derivative via Cartan's
formula, and pullback along a polynomial map germ.

``Weights`` fixes the quasi-homogeneous grading: coordinate i carries the
i-th curve exponent, and every coordinate beyond the curve's ambient block
carries the largest exponent plus one, which keeps all graded pieces
finite-dimensional.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import InputError
from .poly import Exponent, Polynomial, Scalar, UniPoly

IndexTuple = tuple[int, ...]


@dataclass(frozen=True)
class Weights:
    """Quasi-homogeneous weights for ``ambient`` variables.

    The first ``len(lams)`` variables carry the given weights; any further
    variable carries ``max(lams) + 1``.
    """

    lams: tuple[int, ...]
    ambient: int

    def __post_init__(self) -> None:
        if self.ambient < len(self.lams):
            raise InputError("ambient dimension smaller than the weight list")
        if any(w <= 0 for w in self.lams):
            raise InputError("weights must be positive")

    def weight(self, index: int) -> int:
        if not 0 <= index < self.ambient:
            raise InputError(f"variable index {index} out of range")
        if index < len(self.lams):
            return self.lams[index]
        return self.lams[-1] + 1

    @property
    def wvec(self) -> tuple[int, ...]:
        return tuple(self.weight(i) for i in range(self.ambient))

    def qdeg_monomial(self, exps: Exponent) -> int:
        return sum(e * w for e, w in zip(exps, self.wvec))

    def qdeg_term(self, exps: Exponent, idx: IndexTuple) -> int:
        """Quasi-degree of the form term x^exps dx_idx."""
        return self.qdeg_monomial(exps) + sum(self.weight(i) for i in idx)


def _merge_sign(left: IndexTuple, right: IndexTuple) -> tuple[int, IndexTuple] | None:
    """Sign and sorted tuple for dx_left ^ dx_right; None if an index repeats."""
    if set(left) & set(right):
        return None
    merged = list(left)
    sign = 1
    for idx in right:
        pos = len(merged)
        while pos > 0 and merged[pos - 1] > idx:
            pos -= 1
        sign *= (-1) ** (len(merged) - pos)
        merged.insert(pos, idx)
    return sign, tuple(merged)


class DifferentialForm:
    """Degree-k polynomial differential form in ``nvars`` variables."""

    __slots__ = ("degree", "nvars", "coeffs")

    def __init__(
        self,
        degree: int,
        nvars: int,
        coeffs: Mapping[IndexTuple, Polynomial] | None = None,
    ):
        if degree < 0:
            raise InputError("form degree must be nonnegative")
        # degree > nvars is allowed; such a form is necessarily zero.
        self.degree = degree
        self.nvars = nvars
        clean: dict[IndexTuple, Polynomial] = {}
        if coeffs:
            for idx, poly in coeffs.items():
                idx = tuple(idx)
                if len(idx) != degree:
                    raise InputError(f"index tuple {idx} has wrong length for degree {degree}")
                if any(not 0 <= i < nvars for i in idx):
                    raise InputError(f"index tuple {idx} out of range for {nvars} variables")
                if list(idx) != sorted(set(idx)):
                    raise InputError(f"index tuple {idx} must be strictly increasing")
                if poly.nvars != nvars:
                    raise InputError("coefficient variable count mismatch")
                if poly:
                    clean[idx] = poly
        self.coeffs = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, degree: int, nvars: int) -> DifferentialForm:
        return cls(degree, nvars)

    @classmethod
    def from_term(
        cls,
        nvars: int,
        idx: Iterable[int],
        poly: Polynomial | Scalar,
    ) -> DifferentialForm:
        idx = tuple(idx)
        if not isinstance(poly, Polynomial):
            poly = Polynomial.constant(nvars, poly)
        return cls(len(idx), nvars, {idx: poly})

    @classmethod
    def function(cls, poly: Polynomial) -> DifferentialForm:
        return cls(0, poly.nvars, {(): poly})

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coefficient(self, idx: Iterable[int]) -> Polynomial:
        return self.coeffs.get(tuple(idx), Polynomial.zero(self.nvars))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.nvars == other.nvars
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.nvars, frozenset(self.coeffs.items())))

    def sorted_terms(self) -> list[tuple[IndexTuple, Polynomial]]:
        return sorted(self.coeffs.items(), key=lambda item: item[0])

    # -- linear structure ---------------------------------------------------

    def _check_compatible(self, other: DifferentialForm) -> None:
        if self.nvars != other.nvars:
            raise InputError("variable count mismatch")
        if self.degree != other.degree:
            raise InputError("form degree mismatch")

    def __add__(self, other: DifferentialForm) -> DifferentialForm:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        self._check_compatible(other)
        coeffs = dict(self.coeffs)
        for idx, poly in other.coeffs.items():
            new = coeffs.get(idx)
            total = poly if new is None else new + poly
            if total:
                coeffs[idx] = total
            else:
                coeffs.pop(idx, None)
        result = DifferentialForm.__new__(DifferentialForm)
        result.degree = self.degree
        result.nvars = self.nvars
        result.coeffs = coeffs
        return result

    def __neg__(self) -> DifferentialForm:
        result = DifferentialForm.__new__(DifferentialForm)
        result.degree = self.degree
        result.nvars = self.nvars
        result.coeffs = {idx: -poly for idx, poly in self.coeffs.items()}
        return result

    def __sub__(self, other: DifferentialForm) -> DifferentialForm:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> DifferentialForm:
        value = Fraction(scalar)
        coeffs = {}
        if value:
            coeffs = {idx: poly * value for idx, poly in self.coeffs.items()}
        result = DifferentialForm.__new__(DifferentialForm)
        result.degree = self.degree
        result.nvars = self.nvars
        result.coeffs = coeffs
        return result

    __rmul__ = __mul__

    # -- grading ------------------------------------------------------------

    def quasi_degrees(self, weights: Weights) -> set[int]:
        if weights.ambient != self.nvars:
            raise InputError("weights do not match the form's variable count")
        degrees: set[int] = set()
        for idx, poly in self.coeffs.items():
            for exps in poly.terms:
                degrees.add(weights.qdeg_term(exps, idx))
        return degrees

    def graded_parts(self, weights: Weights) -> dict[int, DifferentialForm]:
        """Split into quasi-homogeneous parts, keyed by quasi-degree."""
        if weights.ambient != self.nvars:
            raise InputError("weights do not match the form's variable count")
        parts: dict[int, dict[IndexTuple, dict[Exponent, Fraction]]] = {}
        for idx, poly in self.coeffs.items():
            for exps, coeff in poly.terms.items():
                d = weights.qdeg_term(exps, idx)
                parts.setdefault(d, {}).setdefault(idx, {})[exps] = coeff
        return {
            d: DifferentialForm(
                self.degree,
                self.nvars,
                {idx: Polynomial(self.nvars, terms) for idx, terms in data.items()},
            )
            for d, data in sorted(parts.items())
        }

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for idx, poly in self.sorted_terms():
            wedge = "^".join(f"dx{i + 1}" for i in idx)
            if not wedge:
                parts.append(f"({poly})")
            elif str(poly) == "1":
                parts.append(wedge)
            else:
                parts.append(f"({poly})*{wedge}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"DifferentialForm({self})"


def wedge(left: DifferentialForm, right: DifferentialForm) -> DifferentialForm:
    if left.nvars != right.nvars:
        raise InputError("variable count mismatch")
    degree = left.degree + right.degree
    nvars = left.nvars
    if degree > nvars:
        return DifferentialForm.zero(min(degree, nvars), nvars)
    coeffs: dict[IndexTuple, Polynomial] = {}
    for idx_l, poly_l in left.coeffs.items():
        for idx_r, poly_r in right.coeffs.items():
            merged = _merge_sign(idx_l, idx_r)
            if merged is None:
                continue
            sign, idx = merged
            term = poly_l * poly_r
            if sign < 0:
                term = -term
            prev = coeffs.get(idx)
            total = term if prev is None else prev + term
            if total:
                coeffs[idx] = total
            else:
                coeffs.pop(idx, None)
    return DifferentialForm(degree, nvars, coeffs)


def ext_der(form: DifferentialForm) -> DifferentialForm:
    """Exterior derivative."""
    nvars = form.nvars
    degree = form.degree + 1
    if degree > nvars:
        return DifferentialForm.zero(min(degree, nvars), nvars)
    coeffs: dict[IndexTuple, Polynomial] = {}
    for idx, poly in form.coeffs.items():
        for i in range(nvars):
            dp = poly.partial(i)
            if not dp:
                continue
            merged = _merge_sign((i,), idx)
            if merged is None:
                continue
            sign, new_idx = merged
            term = dp if sign > 0 else -dp
            prev = coeffs.get(new_idx)
            total = term if prev is None else prev + term
            if total:
                coeffs[new_idx] = total
            else:
                coeffs.pop(new_idx, None)
    return DifferentialForm(degree, nvars, coeffs)


class VectorField:
    """Polynomial vector field, one component polynomial per variable."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[Polynomial]):
        if not components:
            raise InputError("vector field needs at least one component")
        nvars = len(components)
        for comp in components:
            if comp.nvars != nvars:
                raise InputError("component variable count mismatch")
        self.components = list(components)

    @property
    def nvars(self) -> int:
        return len(self.components)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.components == other.components

    def quasi_degrees(self, weights: Weights) -> set[int]:
        """Shifts s such that some term of some component has qdeg w_i + s."""
        if weights.ambient != self.nvars:
            raise InputError("weights do not match the field's variable count")
        shifts: set[int] = set()
        for i, comp in enumerate(self.components):
            w_i = weights.weight(i)
            for exps in comp.terms:
                shifts.add(weights.qdeg_monomial(exps) - w_i)
        return shifts

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self) -> str:
        return f"VectorField{self}"


def interior(field: VectorField, form: DifferentialForm) -> DifferentialForm:
    """Interior product (contraction in the first slot)."""
    if field.nvars != form.nvars:
        raise InputError("variable count mismatch")
    nvars = form.nvars
    if form.degree == 0:
        return DifferentialForm.zero(0, nvars)
    coeffs: dict[IndexTuple, Polynomial] = {}
    for idx, poly in form.coeffs.items():
        for pos, i in enumerate(idx):
            comp = field.components[i]
            if not comp:
                continue
            term = poly * comp
            if pos % 2:
                term = -term
            new_idx = idx[:pos] + idx[pos + 1:]
            prev = coeffs.get(new_idx)
            total = term if prev is None else prev + term
            if total:
                coeffs[new_idx] = total
            else:
                coeffs.pop(new_idx, None)
    return DifferentialForm(form.degree - 1, nvars, coeffs)


def lie_derivative(field: VectorField, form: DifferentialForm) -> DifferentialForm:
    """Cartan's formula: L_X = i_X d + d i_X."""
    return interior(field, ext_der(form)) + ext_der(interior(field, form))


class PolyMap:
    """Origin-preserving polynomial map germ between coordinate spaces."""

    __slots__ = ("components", "source_dim")

    def __init__(self, components: Sequence[Polynomial], source_dim: int | None = None):
        if not components:
            raise InputError("map needs at least one component")
        if source_dim is None:
            source_dim = components[0].nvars
        for comp in components:
            if comp.nvars != source_dim:
                raise InputError("component variable count mismatch")
            if comp.constant_term():
                raise InputError("map must fix the origin (nonzero constant term)")
        self.components = list(components)
        self.source_dim = source_dim

    @property
    def target_dim(self) -> int:
        return len(self.components)

    @classmethod
    def identity(cls, nvars: int) -> PolyMap:
        return cls([Polynomial.variable(nvars, i) for i in range(nvars)], nvars)

    @classmethod
    def diagonal(cls, factors: Sequence[Scalar]) -> PolyMap:
        nvars = len(factors)
        return cls(
            [Polynomial.variable(nvars, i) * Fraction(factors[i]) for i in range(nvars)],
            nvars,
        )

    def linear_matrix(self) -> list[list[Fraction]]:
        """Matrix of the linear part, rows indexed by target components."""
        rows = []
        for comp in self.components:
            row = []
            for j in range(self.source_dim):
                unit = tuple(1 if k == j else 0 for k in range(self.source_dim))
                row.append(comp.terms.get(unit, Fraction(0)))
            rows.append(row)
        return rows

    def compose(self, inner: PolyMap) -> PolyMap:
        """self after inner: (self . inner)(x) = self(inner(x))."""
        if inner.target_dim != self.source_dim:
            raise InputError("composition dimension mismatch")
        return PolyMap(
            [comp.subst_poly(inner.components) for comp in self.components],
            inner.source_dim,
        )

    def apply_series(self, images: Sequence[UniPoly]) -> list[UniPoly]:
        """Compose with a curve t -> images, one UniPoly per source variable."""
        return [comp.substitute(images) for comp in self.components]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.source_dim == other.source_dim and self.components == other.components

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self) -> str:
        return f"PolyMap{self}"


def pullback(phi: PolyMap, form: DifferentialForm) -> DifferentialForm:
    """Pullback phi^* form; the form lives on phi's target space."""
    if form.nvars != phi.target_dim:
        raise InputError("form variable count does not match the map's target")
    n = phi.source_dim
    differentials: list[DifferentialForm] = []
    for comp in phi.components:
        coeffs = {}
        for j in range(n):
            dp = comp.partial(j)
            if dp:
                coeffs[(j,)] = dp
        differentials.append(DifferentialForm(1, n, coeffs))
    result = DifferentialForm.zero(form.degree, n)
    for idx, poly in form.coeffs.items():
        pulled_coeff = poly.subst_poly(phi.components)
        if not pulled_coeff:
            continue
        term = DifferentialForm.function(pulled_coeff)
        for i in idx:
            term = wedge(term, differentials[i])
            if not term:
                break
        if term and term.degree == form.degree:
            result = result + term
    return result
