from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import small_fractions, unit_p
from elements import constant, monomial, poly
from errors import ConstraintViolation, DegenerateVariance
from expectation import expect_product, power_beta, uniform
from pcov import (
    PCovOp,
    cov_matrix,
    cov_p,
    fixed_var,
    is_p_uncorrelated,
    normalize_p,
    pcov_op,
    proj_onto,
    rho_p,
    shrink_factor,
    var1_envelope_identity,
    var_p,
)

X, X2 = monomial(1), monomial(2)


def test_ordinary_covariance(ordinary):
    assert var_p(ordinary, X) == F(1, 12)
    assert cov_p(ordinary, X, X2) == F(1, 12)
    assert var_p(ordinary, X2) == F(4, 45)


def test_intermediate_p(unit):
    op = pcov_op(unit, constant(F(1)), F(1, 2))
    assert var_p(op, X) == F(5, 24)
    assert cov_p(op.with_p(0), X, X2) == F(1, 4)


def test_fixed_variable_x(half_x):
    assert var_p(half_x, X) == F(1, 6)


def test_orthogonal_family_of_fixed_variables(unit):
    op = pcov_op(unit, [constant(F(1)), poly([F(-1, 2), 1])], 1)
    assert var_p(op, X2) == F(1, 180)
    assert var_p(op, X) == 0


def test_fixed_variable_validation(unit):
    with pytest.raises(ConstraintViolation):
        fixed_var(unit, constant(F(0)))
    with pytest.raises(ConstraintViolation):
        fixed_var(unit, [constant(F(1)), X])
    with pytest.raises(ConstraintViolation):
        fixed_var(unit, [])
    with pytest.raises(ConstraintViolation):
        pcov_op(unit, constant(F(1)), F(3, 2))


def test_operator_rejects_foreign_space(unit):
    z = fixed_var(uniform(), constant(F(1)))
    with pytest.raises(ConstraintViolation):
        PCovOp(unit, z, 1)


def test_rho_and_degenerate_variance(ordinary):
    assert rho_p(ordinary, X, X) == 1
    assert rho_p(ordinary, X, X2) == pytest.approx(15 ** 0.5 / 4)
    with pytest.raises(DegenerateVariance):
        rho_p(ordinary, constant(F(1)), X)


def test_projection_and_uncorrelated(ordinary, half_x):
    assert proj_onto(ordinary, X2) == constant(F(1, 3))
    assert proj_onto(half_x, X2) == monomial(1).scaled(F(3, 4))
    assert is_p_uncorrelated(ordinary, constant(F(1)), X)
    assert not is_p_uncorrelated(ordinary, X, X2)


def test_shrink_factor():
    assert shrink_factor(F(3, 4)) == F(1, 2)
    assert shrink_factor(1) == 1
    assert shrink_factor(0) == 0


def test_normalized_variable_has_unit_second_moment(unit):
    op = pcov_op(unit, constant(F(1)), F(3, 4))
    n = normalize_p(op, X)
    assert float(expect_product(unit, n, n)) == pytest.approx(1.0)


def test_cov_matrix_symmetry(ordinary):
    m = cov_matrix(ordinary, [X, X2, monomial(3)])
    assert m[0][:2] == [F(1, 12), F(1, 12)]
    assert all(m[i][j] == m[j][i] for i in range(3) for j in range(3))


def test_envelope_identity(ordinary):
    lhs, rhs = var1_envelope_identity(ordinary, X, 0, 1)
    assert lhs == rhs == F(1, 12)


def test_envelope_identity_needs_single_z(unit):
    op = pcov_op(unit, [constant(F(1)), poly([F(-1, 2), 1])], 1)
    with pytest.raises(ConstraintViolation):
        var1_envelope_identity(op, X, 0, 1)


@given(p=unit_p())
@settings(max_examples=50, deadline=None)
def test_variance_is_monotone_in_p(p):
    """var_p = E(X^2) - p * (...) shrinks linearly from E(X^2) to var_1."""
    op = pcov_op(uniform(), monomial(1), p)
    v = var_p(op, X2)
    assert var_p(op.with_p(1), X2) <= v <= var_p(op.with_p(0), X2)
    assert v == F(1, 5) - p * F(1, 4) ** 2 / F(1, 3)


def test_normalized_variable_is_not_p_unit_in_between(unit):
    op = pcov_op(unit, constant(F(1)), F(3, 4))
    n = normalize_p(op, X)
    assert float(var_p(op, n)) == pytest.approx(19 / 28)
    for p in (0, 1):
        edge = op.with_p(p)
        assert float(var_p(edge, normalize_p(edge, X))) == pytest.approx(1.0)


def test_float_weight_does_not_leak_into_exact_results():
    assert var_p(pcov_op(power_beta(0.5), constant(F(1)), 0), X) == pytest.approx(3 / 7)
    exact = var_p(pcov_op(power_beta(F(1, 2)), constant(F(1)), 0), X)
    assert exact == F(3, 7)
    assert isinstance(exact, F)


# ---------------------------------------------------------------------
# Randomized identities on polynomial inputs over [0, 1]
# ---------------------------------------------------------------------
polys = st.lists(small_fractions(), min_size=1, max_size=4).map(poly)
nonzero_polys = st.lists(small_fractions(), min_size=1, max_size=3).filter(any).map(poly)


@given(x=polys, z=nonzero_polys)
@settings(max_examples=200, deadline=None)
def test_variance_chain(x, z):
    op = pcov_op(uniform(), z, 0)
    values = [var_p(op.with_p(p), x) for p in (1, F(3, 4), F(1, 2), F(1, 4), 0)]
    assert 0 <= values[0]
    assert values == sorted(values)
    assert values[-1] == expect_product(op.space, x, x)


@given(x=polys, y=polys, z=nonzero_polys, p=unit_p(), a=small_fractions(), b=small_fractions())
@settings(max_examples=200, deadline=None)
def test_symmetry_bilinearity_and_shift(x, y, z, p, a, b):
    op = pcov_op(uniform(), z, p)
    one = constant(F(1))
    assert cov_p(op, x, y) == cov_p(op, y, x)
    assert cov_p(op, x.scaled(a), y.scaled(b)) == a * b * cov_p(op, x, y)
    shifted = cov_p(op, x.plus(constant(a)), y.plus(constant(b)))
    assert shifted == cov_p(op, x, y) + a * cov_p(op, one, y) + b * cov_p(op, x, one) + a * b * cov_p(op, one, one)
    assert cov_p(op, x.scaled(a).plus(y.scaled(b)), z) == a * cov_p(op, x, z) + b * cov_p(op, y, z)


@given(x=polys, y=polys, z=nonzero_polys, p=unit_p(), a=small_fractions(), b=small_fractions())
@settings(max_examples=200, deadline=None)
def test_sum_rule(x, y, z, p, a, b):
    op = pcov_op(uniform(), z, p)
    lhs = var_p(op, x.scaled(a).plus(y.scaled(b)))
    assert lhs == a * a * var_p(op, x) + b * b * var_p(op, y) + 2 * a * b * cov_p(op, x, y)


@given(x=polys, y=polys, z=nonzero_polys, p=unit_p())
@settings(max_examples=200, deadline=None)
def test_cauchy_schwarz(x, y, z, p):
    op = pcov_op(uniform(), z, p)
    assert cov_p(op, x, y) ** 2 <= var_p(op, x) * var_p(op, y)


@given(x=polys, y=polys, p=unit_p())
@settings(max_examples=200, deadline=None)
def test_fixed_variable_equal_to_x(x, y, p):
    assume(x.terms)
    op = pcov_op(uniform(), x.scaled(F(-3, 2)), p)
    assert cov_p(op, x, y) == (1 - p) * expect_product(op.space, x, y)


@given(x=polys, z1=nonzero_polys, z2=nonzero_polys, p=unit_p())
@settings(max_examples=200, deadline=None)
def test_adding_an_orthogonal_fixed_variable_lowers_variance(x, z1, z2, p):
    space = uniform()
    # make z2 orthogonal to z1
    z2 = z2.plus(z1.scaled(-expect_product(space, z1, z2) / expect_product(space, z1, z1)))
    assume(z2.terms)
    single = pcov_op(space, z1, p)
    double = pcov_op(space, [z1, z2], p)
    assert var_p(double, x) <= var_p(single, x)
