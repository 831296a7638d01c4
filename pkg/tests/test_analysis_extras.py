import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from analysis_extras import (
    BoundInputs,
    bessel_improved,
    gruss_bound,
    gruss_product_bound,
    lagrange_basis,
    lagrange_weights,
    parseval_p,
    pv_quad_weights,
    quadrature_error,
    two_point_weights,
)
from conftest import small_fractions
from elements import FunctionElement, constant, monomial, monomials, poly
from errors import ConstraintViolation, DuplicateNodes, InvalidBounds, NotOrthogonal
from expectation import discrete, uniform
from pcov import pcov_op, var_p
from polyfam import jacobi_base
from uncorrelate import basis_from_elements, gram_schmidt_p

X, X2 = monomial(1), monomial(2)


# ---------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------
def test_two_node_weights(ordinary):
    rule = pv_quad_weights(ordinary, [0, 1])
    assert rule.weights == (F(-1, 12), F(1, 12))
    assert quadrature_error(rule, X2) == F(1, 180)


def test_moment_rule_exact_below_node_count(half_x):
    rule = pv_quad_weights(half_x, [0, F(1, 2), 1])
    for k in range(3):
        assert quadrature_error(rule, monomial(k)) == 0
    assert quadrature_error(rule, monomial(3)) != 0


def test_two_point_closed_form_matches_vandermonde(half_x):
    nodes = (F(1, 4), F(2, 3))
    assert two_point_weights(half_x, *nodes).weights == pv_quad_weights(half_x, nodes).weights


def test_lagrange_basis_is_cardinal():
    nodes = [0, F(1, 3), 1]
    for k, lk in enumerate(lagrange_basis(nodes)):
        assert [lk.at(x) for x in nodes] == [1 if j == k else 0 for j in range(3)]


@settings(max_examples=30, deadline=None)
@given(
    nodes=st.lists(small_fractions(0, 1, 6), min_size=1, max_size=4, unique=True),
    data=st.data(),
)
def test_lagrange_rule_reproduces_low_degree_polynomials(nodes, data):
    coeffs = data.draw(st.lists(small_fractions(), min_size=1, max_size=len(nodes)))
    op = pcov_op(uniform(), X, F(1, 2))
    f = poly(coeffs)
    assert quadrature_error(lagrange_weights(op, nodes, f), f) == 0


@pytest.mark.parametrize("nodes", [[0, 0], [F(1, 2), 1, F(2, 4)]])
def test_duplicate_nodes(ordinary, nodes):
    with pytest.raises(DuplicateNodes):
        pv_quad_weights(ordinary, nodes)


def test_empty_nodes(ordinary):
    with pytest.raises(ConstraintViolation):
        pv_quad_weights(ordinary, [])


def test_two_point_rejects_equal_nodes(ordinary):
    with pytest.raises(DuplicateNodes):
        two_point_weights(ordinary, F(1, 2), F(1, 2))


# ---------------------------------------------------------------------
# Gruss-type bounds
# ---------------------------------------------------------------------
def test_gruss_on_unit_interval(ordinary):
    result = gruss_bound(ordinary, X, X2, BoundInputs(0, 1, 0, 1))
    assert result.cov1 == F(1, 12)
    assert result.bound == F(1, 4)
    assert result.product_bound == F(1, 18)
    assert abs(result.cov1) <= result.bound
    assert result.cov1 ** 2 <= result.product_bound


def test_gruss_uses_p_one_whatever_the_operator(unit):
    op = pcov_op(unit, constant(F(1)), 0)
    assert gruss_bound(op, X, X2, BoundInputs(0, 1, 0, 1)).cov1 == F(1, 12)


def test_gruss_on_discrete_space():
    op = pcov_op(discrete([1, 2, 3]), X, 1)
    result = gruss_bound(op, X2, X2, BoundInputs(1, 3, 1, 3))
    assert result.cov1 == F(38, 21)
    assert result.bound == F(14, 3)
    assert result.product_bound == F(484, 49)
    assert gruss_product_bound(op, X2, X2, BoundInputs(1, 3, 1, 3)) == F(484, 49)


def test_envelope_violation(ordinary):
    with pytest.raises(InvalidBounds):
        gruss_bound(ordinary, X2, X, BoundInputs(0, F(1, 2), 0, 1))


def test_bounds_must_be_ordered():
    with pytest.raises(InvalidBounds):
        BoundInputs(1, 0, 0, 1)


def test_gruss_needs_single_fixed_variable(unit):
    op = pcov_op(unit, [constant(F(1)), poly([F(-1, 2), 1])], 1)
    with pytest.raises(ConstraintViolation):
        gruss_bound(op, X, X2, BoundInputs(0, 1, 0, 1))


# ---------------------------------------------------------------------
# Bessel and Parseval
# ---------------------------------------------------------------------
def test_bessel_with_legendre_is_exact():
    op = pcov_op(uniform(-1, 1), X, F(1, 2))
    base = jacobi_base(0, 0)
    family = [poly(base.monic(n)) for n in range(3)]
    result = bessel_improved(op, family, monomial(3))
    assert result.s_n == F(4, 175)
    assert result.r_sq == 0
    assert result.v_n == F(4, 175)
    assert result.holds


def test_bessel_with_sines():
    op = pcov_op(uniform(0, math.pi), X, F(1, 2))
    family = [FunctionElement(lambda t, k=k: np.sin(k * t), f"sin({k}x)") for k in range(1, 4)]
    result = bessel_improved(op, family, X)
    assert result.holds
    assert result.v_n >= 0
    assert result.s_n >= result.r_sq


def test_bessel_rejects_non_orthogonal_family(ordinary):
    with pytest.raises(NotOrthogonal):
        bessel_improved(ordinary, [constant(F(1)), X], X2)


@settings(max_examples=25, deadline=None)
@given(
    p=st.fractions(min_value=0, max_value=F(7, 8), max_denominator=8),
    f=st.lists(small_fractions(), min_size=1, max_size=4),
    g=st.lists(small_fractions(), min_size=1, max_size=4),
)
def test_parseval_on_polynomials(p, f, g):
    op = pcov_op(uniform(), X, p)
    basis = gram_schmidt_p(op, monomials(3))
    lhs, rhs = parseval_p(op, basis, poly(f), poly(g))
    assert lhs == rhs


def test_parseval_rejects_zero_variance_member(ordinary):
    basis = basis_from_elements(ordinary, [constant(F(1))])
    assert var_p(ordinary, constant(F(1))) == 0
    with pytest.raises(ConstraintViolation):
        parseval_p(ordinary, basis, X, X)
