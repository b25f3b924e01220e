"""Liftable vector fields, Lie actions on restriction classes, orbit tangent
spaces, Moser-homotopy reduction, and symmetries acting by pullback.

A field X is liftable over the curve g with shift s when X(g(t)) =
t^{s+1} g'(t); such fields act on restriction classes by Lie derivative.
The admissible shifts are s = 0 (the Euler field) and every s >= 1 with
lam_i + s in the semigroup for all i, so each component can be written as
lam_i times a monomial of quasi-degree lam_i + s.  Two deterministic
monomial-choice policies are shipped: ``grlex`` picks the graded-lex
minimal exponent vector, ``pinned`` replays a fixed table of recorded
choices for the three bundled semigroups.  Actions do not depend on the
choice; the policies exist for byte-stable table output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .curves import (
    AlgRestriction,
    MonomialCurve,
    RestrictionBasis,
    cached_basis,
    monomials_of_qdeg,
    project,
)
from .errors import InputError, LiftError, NotSymmetryError
from .forms import DifferentialForm, PolyMap, VectorField, lie_derivative, pullback
from .linalg import ParamSolution, rref, solve_param_linear
from .poly import Exponent, Polynomial, RationalFunctionT, Scalar, UniPoly


def admissible_shifts(curve: MonomialCurve, bound: int) -> list[int]:
    """Shift 0 plus every s >= 1 with lam_i + s in the semigroup for all i."""
    shifts = [0]
    for s in range(1, bound + 1):
        if all(curve.in_semigroup(lam + s) for lam in curve.lams):
            shifts.append(s)
    return shifts


def nonsemigroup_shifts(curve: MonomialCurve, bound: int) -> list[int]:
    """Admissible positive shifts that are not semigroup elements.

    These exist because admissibility only needs lam_i + s in the semigroup;
    they are genuinely liftable and are reported alongside action tables.
    """
    return [
        s
        for s in admissible_shifts(curve, bound)
        if s > 0 and not curve.in_semigroup(s)
    ]


# Recorded monomial choices per (exponents, shift): one exponent tuple per
# curve coordinate, matching the published generator lists for the three
# bundled semigroups.
_PINNED: dict[tuple[tuple[int, ...], int], tuple[Exponent, ...]] = {
    ((4, 5, 6, 7), 0): ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)),
    ((4, 5, 6, 7), 1): ((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (2, 0, 0, 0)),
    ((4, 5, 6, 7), 2): ((0, 0, 1, 0), (0, 0, 0, 1), (2, 0, 0, 0), (1, 1, 0, 0)),
    ((4, 5, 6, 7), 3): ((0, 0, 0, 1), (2, 0, 0, 0), (1, 1, 0, 0), (1, 0, 1, 0)),
    ((4, 5, 6, 7), 4): ((2, 0, 0, 0), (1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1)),
    ((4, 5, 6, 7), 5): ((1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1), (3, 0, 0, 0)),
    ((4, 5, 6, 7), 6): ((1, 0, 1, 0), (1, 0, 0, 1), (3, 0, 0, 0), (2, 1, 0, 0)),
    ((4, 5, 6), 0): ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((4, 5, 6), 4): ((2, 0, 0), (1, 1, 0), (1, 0, 1)),
    ((4, 5, 6), 5): ((1, 1, 0), (0, 2, 0), (0, 1, 1)),
    ((4, 5, 6), 6): ((1, 0, 1), (0, 1, 1), (0, 0, 2)),
    ((4, 5, 6), 7): ((0, 1, 1), (0, 0, 2), (2, 1, 0)),
    ((4, 5, 6), 8): ((3, 0, 0), (2, 1, 0), (2, 0, 1)),
    ((4, 5, 6), 9): ((2, 1, 0), (1, 2, 0), (1, 1, 1)),
    ((4, 5, 6), 10): ((2, 0, 1), (1, 1, 1), (1, 0, 2)),
    ((4, 5, 7), 0): ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((4, 5, 7), 3): ((0, 0, 1), (2, 0, 0), (0, 2, 0)),
    ((4, 5, 7), 4): ((2, 0, 0), (1, 1, 0), (1, 0, 1)),
    ((4, 5, 7), 5): ((1, 1, 0), (0, 2, 0), (0, 1, 1)),
    ((4, 5, 7), 6): ((0, 2, 0), (1, 0, 1), (2, 1, 0)),
    ((4, 5, 7), 7): ((1, 0, 1), (0, 1, 1), (0, 0, 2)),
    ((4, 5, 7), 8): ((3, 0, 0), (2, 1, 0), (2, 0, 1)),
    ((4, 5, 7), 9): ((2, 1, 0), (1, 2, 0), (1, 1, 1)),
}

LIFT_POLICIES = ("grlex", "pinned")


@dataclass(frozen=True)
class LiftableField:
    """A validated liftable field: X(g(t)) = t^{s+1} g'(t)."""

    shift: int
    field: VectorField
    policy: str

    def __str__(self) -> str:
        return f"X_{self.shift} = {self.field}"


def _curve_monomials(curve: MonomialCurve, qdeg: int) -> list[Exponent]:
    """Curve-supported monomials of a quasi-degree, padded to ambient width."""
    pad = (0,) * (curve.ambient - len(curve.lams))
    return [m + pad for m in monomials_of_qdeg(curve.lams, qdeg)]


def liftable_field(
    curve: MonomialCurve,
    s: int,
    policy: str | Sequence[Exponent] = "grlex",
) -> LiftableField:
    """Build the liftable field X_s under a monomial-choice policy.

    ``policy`` is "grlex", "pinned", or an explicit list of exponent tuples
    (one per curve coordinate, over the curve coordinates).
    """
    if s < 0:
        raise InputError("shift must be nonnegative")
    lams = curve.lams
    if any(not curve.in_semigroup(lam + s) for lam in lams):
        raise LiftError(
            f"no monomial lift exists for shift {s}: some lam_i + {s} is outside the semigroup"
        )
    m = curve.ambient
    pad = (0,) * (m - len(lams))
    if isinstance(policy, str):
        if policy == "grlex":
            exps_list = []
            for lam in lams:
                candidates = _curve_monomials(curve, lam + s)
                if not candidates:
                    raise LiftError(f"no monomial of quasi-degree {lam + s} exists")
                exps_list.append(min(candidates, key=lambda e: (sum(e), e)))
            tag = "grlex"
        elif policy == "pinned":
            stored = _PINNED.get((lams, s))
            if stored is None:
                raise InputError(
                    f"no pinned lift stored for curve {lams} and shift {s}; "
                    "use the grlex policy"
                )
            exps_list = [e + pad for e in stored]
            tag = "pinned"
        else:
            raise InputError(f"unknown lift policy {policy!r}; use grlex or pinned")
    else:
        exps_list = [tuple(e) + pad if len(e) < m else tuple(e) for e in policy]
        if len(exps_list) != len(lams):
            raise InputError("need one exponent tuple per curve coordinate")
        tag = "explicit"
    components = [
        Polynomial.monomial(exps_list[i], lams[i]) for i in range(len(lams))
    ]
    components += [Polynomial.zero(m)] * (m - len(lams))
    field = VectorField(components)
    if not validate_liftable(curve, field, s):
        raise LiftError(
            f"the chosen monomials do not satisfy X(g(t)) = t^{s + 1} g'(t)"
        )
    return LiftableField(shift=s, field=field, policy=tag)


def validate_liftable(curve: MonomialCurve, field: VectorField, s: int) -> bool:
    """Substitution check: X(g(t)) = t^{s+1} g'(t) componentwise."""
    if field.nvars != curve.ambient:
        return False
    images = curve.images()
    for i, comp in enumerate(field.components):
        value = comp.substitute(images)
        if i < len(curve.lams):
            expected = UniPoly.t_power(curve.lams[i] + s, curve.lams[i])
        else:
            expected = UniPoly.zero()
        if value != expected:
            return False
    return True


def lie_action(
    curve: MonomialCurve,
    lifted: LiftableField,
    a: AlgRestriction,
) -> AlgRestriction:
    """Lie derivative of a restriction class along a liftable field."""
    if not validate_liftable(curve, lifted.field, lifted.shift):
        raise LiftError("field fails the liftability substitution check")
    return project(curve, lie_derivative(lifted.field, a.rep_form()), a.basis)


@lru_cache(maxsize=None)
def _action_matrix(
    curve: MonomialCurve, max_qdeg: int, s: int, policy: str
) -> tuple[tuple[Fraction, ...], ...]:
    """Column j holds the basis coordinates of the action on element j."""
    basis = cached_basis(curve, max_qdeg)
    lifted = liftable_field(curve, s, policy)
    return tuple(
        project(curve, lie_derivative(lifted.field, el.rep), basis).coords
        for el in basis.elements
    )


def shift_action(a: AlgRestriction, s: int, policy: str = "grlex") -> AlgRestriction:
    """Action of X_s on a class, via the cached per-shift matrix."""
    basis = a.basis
    matrix = _action_matrix(basis.curve, basis.max_qdeg, s, policy)
    out = [Fraction(0)] * basis.dim
    for j, cj in enumerate(a.coords):
        if cj:
            col = matrix[j]
            for i in range(basis.dim):
                if col[i]:
                    out[i] += cj * col[i]
    return AlgRestriction(basis, out)


@dataclass(frozen=True)
class ActionTable:
    """Lie actions of every admissible X_s on every basis element."""

    curve: MonomialCurve
    policy: str
    shifts: tuple[int, ...]
    labels: tuple[str, ...]
    entries: Mapping[tuple[int, str], AlgRestriction]
    nonsemigroup: tuple[int, ...]

    def entry(self, s: int, label: str) -> AlgRestriction:
        key = (s, label)
        if key not in self.entries:
            raise InputError(f"no action entry for shift {s} and label {label!r}")
        return self.entries[key]


def action_table(
    curve: MonomialCurve,
    policy: str = "grlex",
    basis: RestrictionBasis | None = None,
) -> ActionTable:
    if basis is None:
        basis = cached_basis(curve)
    if not basis.elements:
        return ActionTable(curve, policy, (), (), {}, ())
    min_qdeg = basis.elements[0].qdeg
    bound = basis.top_qdeg - min_qdeg
    shifts = admissible_shifts(curve, bound)
    entries: dict[tuple[int, str], AlgRestriction] = {}
    for s in shifts:
        for el in basis.elements:
            unit = AlgRestriction(
                basis,
                tuple(
                    Fraction(1) if other is el else Fraction(0)
                    for other in basis.elements
                ),
            )
            entries[(s, el.label)] = shift_action(unit, s, policy)
    return ActionTable(
        curve=curve,
        policy=policy,
        shifts=tuple(shifts),
        labels=basis.labels,
        entries=entries,
        nonsemigroup=tuple(nonsemigroup_shifts(curve, bound)),
    )


@dataclass(frozen=True)
class TangentSpace:
    """Orbit tangent space at a restriction class."""

    base: AlgRestriction
    shifts: tuple[int, ...]
    vectors: tuple[AlgRestriction, ...]

    @property
    def dim(self) -> int:
        rows = [list(v.coords) for v in self.vectors if not v.is_zero()]
        if not rows:
            return 0
        return rref(rows, len(self.base.coords)).rank

    def contains(self, direction: AlgRestriction) -> bool:
        if direction.is_zero():
            return True
        rows = [list(v.coords) for v in self.vectors if not v.is_zero()]
        width = len(direction.coords)
        base_rank = rref(rows, width).rank if rows else 0
        return rref(rows + [list(direction.coords)], width).rank == base_rank


def orbit_tangent_space(
    curve: MonomialCurve,
    a: AlgRestriction,
    policy: str = "grlex",
) -> TangentSpace:
    """Span of the actions of all admissible X_s at the class a."""
    located = a.min_qdeg_part()
    if located is None:
        return TangentSpace(base=a, shifts=(), vectors=())
    min_qdeg = located[0]
    bound = a.basis.top_qdeg - min_qdeg
    shifts = tuple(admissible_shifts(curve, bound)) if bound >= 0 else ()
    vectors = tuple(shift_action(a, s, policy) for s in shifts)
    return TangentSpace(base=a, shifts=shifts, vectors=vectors)


def is_modulus(
    curve: MonomialCurve,
    a: AlgRestriction,
    direction: AlgRestriction,
    policy: str = "grlex",
) -> bool:
    """True iff the direction is transverse to the orbit tangent space at a."""
    return not orbit_tangent_space(curve, a, policy).contains(direction)


@dataclass(frozen=True)
class HomotopyResult:
    """Outcome of a Moser-homotopy reduction attempt."""

    feasible: bool
    consistent: bool
    shifts: tuple[int, ...]
    coefficients: dict[int, RationalFunctionT]
    pole_counts: dict[int, int]


def moser_reduce(
    curve: MonomialCurve,
    a: AlgRestriction,
    kill: AlgRestriction,
    policy: str = "grlex",
) -> HomotopyResult:
    """Try to remove one graded component of a along A_t = a - t*kill.

    Solves sum_s b_s(t) * L_{X_s} A_t = kill for rational functions b_s; the
    reduction is feasible when the system is consistent and the solution has
    no poles in [0, 1].
    """
    kill._check_same_basis(a)
    kill_degs = kill.nonzero_qdegs()
    if len(kill_degs) > 1:
        raise InputError("kill target must be a single graded component")
    if kill_degs and kill != a.part(kill_degs[0]):
        raise InputError(
            "kill target must equal the graded component of a in its quasi-degree"
        )
    if not kill_degs:
        return HomotopyResult(
            feasible=True, consistent=True, shifts=(), coefficients={}, pole_counts={}
        )
    located = a.min_qdeg_part()
    assert located is not None
    bound = a.basis.top_qdeg - located[0]
    shifts = tuple(admissible_shifts(curve, bound)) if bound >= 0 else (0,)
    v = {s: shift_action(a, s, policy).coords for s in shifts}
    w = {s: shift_action(kill, s, policy).coords for s in shifts}
    dim = a.basis.dim
    rows = [
        [
            UniPoly([v[s][i], -w[s][i]])
            for s in shifts
        ]
        for i in range(dim)
    ]
    rhs = [UniPoly.constant(kill.coords[i]) for i in range(dim)]
    solution: ParamSolution = solve_param_linear(rows, rhs)
    coeffs = {
        s: solution.solution[j] if solution.consistent else RationalFunctionT.zero()
        for j, s in enumerate(shifts)
    }
    poles = {
        s: solution.pole_counts[j] if solution.consistent else 0
        for j, s in enumerate(shifts)
    }
    return HomotopyResult(
        feasible=solution.feasible_on_unit_interval,
        consistent=solution.consistent,
        shifts=shifts,
        coefficients=coeffs,
        pole_counts=poles,
    )


def _bezout(values: Sequence[int]) -> list[int]:
    """Integer coefficients alpha with sum(alpha_i * values_i) = gcd."""
    coeffs = [0] * len(values)
    g = 0
    for i, v in enumerate(values):
        if g == 0:
            g, coeffs[i] = v, 1
            continue
        old_r, r = g, v
        old_s, s = 1, 0
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
        # old_r = gcd(g, v) = old_s * g + t * v with t derived below
        t = (old_r - old_s * g) // v
        for j in range(i):
            coeffs[j] *= old_s
        coeffs[i] = t
        g = old_r
    return coeffs


def symmetry_constant(curve: MonomialCurve, phi: PolyMap) -> Fraction:
    """Leading reparameterization constant of a curve symmetry.

    Raises a ``NotSymmetryError`` unless phi maps the curve germ to itself,
    i.e. phi(g(t)) = g(phi(t)) for a formal reparameterization phi(t) =
    c*t + higher order terms; returns c.
    """
    m = curve.ambient
    if phi.source_dim != m or phi.target_dim != m:
        raise InputError(
            f"map must be an endomorphism of the curve's {m}-dimensional ambient space"
        )
    linear = phi.linear_matrix()
    if rref(linear, m).rank != m:
        raise NotSymmetryError("not a local symmetry of the curve: linear part is singular")
    u = phi.apply_series(curve.images())
    lams = curve.lams
    for i in range(len(lams), m):
        if u[i]:
            raise NotSymmetryError(
                "not a local symmetry of the curve: an off-curve component is nonzero along it"
            )
    leads: list[Fraction] = []
    for i, lam in enumerate(lams):
        if u[i].order() != lam:
            raise NotSymmetryError(
                f"not a local symmetry of the curve: component {i + 1} has order "
                f"{u[i].order()} along the curve, expected {lam}"
            )
        leads.append(u[i].coefficient(lam))
    alphas = _bezout(lams)
    c = Fraction(1)
    for lead, alpha in zip(leads, alphas):
        if alpha >= 0:
            c *= lead**alpha
        else:
            c *= (Fraction(1) / lead) ** (-alpha)
    for lead, lam in zip(leads, lams):
        if lead != c**lam:
            raise NotSymmetryError(
                "not a local symmetry of the curve: component leading coefficients "
                "are not powers of a common constant"
            )
    lam1 = lams[0]
    u1 = u[0]
    for i, lam in enumerate(lams):
        if u[i] ** lam1 != u1**lam:
            raise NotSymmetryError(
                "not a local symmetry of the curve: components do not share a "
                "common reparameterization"
            )
    return c


def pullback_restriction(
    curve: MonomialCurve,
    phi: PolyMap,
    a: AlgRestriction,
) -> AlgRestriction:
    """Action of a curve symmetry on a restriction class, by pullback."""
    symmetry_constant(curve, phi)
    return project(curve, pullback(phi, a.rep_form()), a.basis)


def _rational_root(value: Fraction, r: int) -> Fraction | None:
    """Exact r-th root of a rational, or None; negative values need odd r."""
    if value == 0:
        return Fraction(0)
    if value < 0:
        if r % 2 == 0:
            return None
        root = _rational_root(-value, r)
        return None if root is None else -root

    def int_root(n: int) -> int | None:
        lo, hi = 0, max(1, n)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid**r < n:
                lo = mid + 1
            else:
                hi = mid
        return lo if lo**r == n else None

    p = int_root(value.numerator)
    q = int_root(value.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


@dataclass(frozen=True)
class ScalingResult:
    """Diagonal scaling symmetry normalizing one basis coefficient."""

    verdict: str
    map: PolyMap | None
    constant: Fraction | None


def scaling_symmetry(
    curve: MonomialCurve,
    target: str,
    value: Scalar,
    basis: RestrictionBasis | None = None,
) -> ScalingResult:
    """Diagonal symmetry rescaling the coefficient of one basis element.

    The coefficient of a quasi-degree-r element can be driven to 1 when r is
    odd or the value is positive, and to -1 when r is even and the value is
    negative; the map exists whenever the needed r-th root is rational.
    """
    value = Fraction(value)
    if value == 0:
        raise InputError("cannot normalize a zero coefficient")
    if basis is None:
        basis = cached_basis(curve)
    r = basis.element(target).qdeg
    if r % 2 == 1 or value > 0:
        verdict = "normalize to 1"
        wanted = Fraction(1) / value
    else:
        verdict = "normalize to -1"
        wanted = Fraction(-1) / value
    u = _rational_root(wanted, r)
    if u is None:
        return ScalingResult(verdict=verdict, map=None, constant=None)
    weights = curve.weights
    factors = [u ** weights.weight(i) for i in range(curve.ambient)]
    return ScalingResult(verdict=verdict, map=PolyMap.diagonal(factors), constant=u)


def curve_scaling(curve: MonomialCurve, c: Scalar) -> PolyMap:
    """The diagonal symmetry x_i -> c^{w_i} x_i, covering t -> c*t."""
    c = Fraction(c)
    if c == 0:
        raise InputError("scaling constant must be nonzero")
    weights = curve.weights
    return PolyMap.diagonal([c ** weights.weight(i) for i in range(curve.ambient)])
