from fractions import Fraction

import pytest

from algrest.errors import InputError
from algrest.forms import (
    DifferentialForm,
    PolyMap,
    VectorField,
    Weights,
    ext_der,
    interior,
    lie_derivative,
    pullback,
    wedge,
)
from algrest.poly import Polynomial, UniPoly


def var(i, n=4):
    return Polynomial.variable(n, i)


def dx(i, n=4):
    return DifferentialForm.from_term(n, (i,), 1)


def dxx(i, j, n=4):
    return DifferentialForm.from_term(n, (i, j), 1)


def test_wedge_antisymmetry_and_zero_square():
    assert wedge(dx(0), dx(1)) == -wedge(dx(1), dx(0))
    assert wedge(dx(0), dx(0)).is_zero()
    a = wedge(dx(0), dx(1))
    assert wedge(a, a).is_zero()


def test_wedge_with_function_scales():
    f = DifferentialForm.function(var(0))
    assert wedge(f, dx(1)) == DifferentialForm.from_term(4, (1,), var(0))


def test_wedge_associativity_spot():
    a = wedge(DifferentialForm.function(var(0)), dx(1))
    b = dx(2)
    c = dx(3)
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


def test_ext_der_of_function():
    f = DifferentialForm.function(var(0) * var(1))
    df = ext_der(f)
    assert df.coefficient((0,)) == var(1)
    assert df.coefficient((1,)) == var(0)


def test_ext_der_of_one_form():
    # d(x1 dx2) = dx1 ^ dx2
    form = DifferentialForm.from_term(4, (1,), var(0))
    assert ext_der(form) == dxx(0, 1)


def test_ext_der_squared_zero_spot():
    form = DifferentialForm.from_term(4, (1,), var(0) * var(2) + var(3) ** 2)
    assert ext_der(ext_der(form)).is_zero()


def test_interior_product():
    field = VectorField([Polynomial.constant(4, 1)] + [Polynomial.zero(4)] * 3)
    assert interior(field, dxx(0, 1)) == dx(1)
    assert interior(field, dxx(1, 2)).is_zero()
    # i_X on a function is zero
    assert interior(field, DifferentialForm.function(var(2))).is_zero()


def test_cartan_formula_spot():
    field = VectorField([var(1), var(0) * var(0), Polynomial.zero(4), var(3)])
    form = DifferentialForm.from_term(4, (0, 2), var(1)) + dxx(1, 3)
    direct = lie_derivative(field, form)
    cartan = interior(field, ext_der(form)) + ext_der(interior(field, form))
    assert direct == cartan


def test_euler_field_scales_by_quasi_degree():
    weights = Weights((4, 5, 6, 7), 4)
    euler = VectorField([weights.weight(i) * var(i) for i in range(4)])
    form = DifferentialForm.from_term(4, (0, 1), var(0))  # qdeg 4+4+5 = 13
    assert lie_derivative(euler, form) == 13 * form


def test_graded_parts_split_by_quasi_degree():
    weights = Weights((4, 5, 6, 7), 4)
    form = dxx(0, 1) + DifferentialForm.from_term(4, (2, 3), var(0))
    parts = form.graded_parts(weights)
    assert set(parts) == {9, 17}
    assert parts[9] == dxx(0, 1)
    assert sum(parts.values(), DifferentialForm.zero(2, 4)) == form


def test_weights_off_curve_variables():
    weights = Weights((4, 5, 6), 6)
    assert weights.wvec == (4, 5, 6, 7, 7, 7)
    with pytest.raises(InputError):
        weights.weight(6)


def test_polymap_requires_vanishing_constant_term():
    with pytest.raises(InputError):
        PolyMap([var(0) + Polynomial.constant(4, 1), var(1), var(2), var(3)])


def test_polymap_identity_diagonal_compose():
    ident = PolyMap.identity(3)
    diag = PolyMap.diagonal([2, 3, Fraction(1, 2)])
    assert diag.linear_matrix() == [
        [Fraction(2), Fraction(0), Fraction(0)],
        [Fraction(0), Fraction(3), Fraction(0)],
        [Fraction(0), Fraction(0), Fraction(1, 2)],
    ]
    assert diag.compose(ident).components == diag.components
    twice = diag.compose(diag)
    assert twice.linear_matrix()[0][0] == 4


def test_polymap_apply_series():
    phi = PolyMap([var(0, 2) * var(1, 2), var(1, 2)], source_dim=2)
    images = phi.apply_series([UniPoly.t_power(4), UniPoly.t_power(5)])
    assert images[0] == UniPoly.t_power(9)
    assert images[1] == UniPoly.t_power(5)


def test_pullback_linear_map_gives_determinant_factor():
    phi = PolyMap([2 * var(0, 2), 3 * var(1, 2)], source_dim=2)
    form = DifferentialForm.from_term(2, (0, 1), 1)
    assert pullback(phi, form) == 6 * form


def test_pullback_functorial_spot():
    phi = PolyMap([var(1, 3), var(0, 3), var(2, 3) + var(0, 3)])
    psi = PolyMap([var(0, 3) * var(2, 3), var(1, 3), var(2, 3)])
    form = DifferentialForm.from_term(3, (0, 2), var(1, 3))
    lhs = pullback(psi, pullback(phi, form))
    rhs = pullback(phi.compose(psi), form)
    assert lhs == rhs


def test_pullback_commutes_with_ext_der_spot():
    phi = PolyMap([var(0, 3) + var(1, 3) * var(2, 3), var(1, 3), var(2, 3)])
    form = DifferentialForm.from_term(3, (1,), var(0, 3) * var(0, 3))
    assert pullback(phi, ext_der(form)) == ext_der(pullback(phi, form))
