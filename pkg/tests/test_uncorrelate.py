from fractions import Fraction as F

import pytest

from elements import constant, monomial, monomials, poly, power_term
from errors import DegenerateBasis
from expectation import expect_product, power_beta, uniform
from pcov import cov_p, pcov_op, var_p
from uncorrelate import (
    basis_from_elements,
    describe_basis,
    element_by_determinant,
    exp_sine_family,
    gram_det,
    gram_schmidt_p,
    orthogonal_companion,
    sine_basis,
    verify_basis,
)


def test_shifted_legendre_at_p_zero(unit):
    op = pcov_op(unit, constant(F(1)), 0)
    basis = gram_schmidt_p(op, monomials(2))
    assert basis[1] == poly([F(-1, 2), 1])
    assert basis[2] == poly([F(1, 6), -1, 1])
    assert basis.variances == (1, F(1, 12), F(1, 180))


def test_determinant_form_matches_gram_schmidt(half_x):
    v = monomials(3)
    basis = gram_schmidt_p(half_x, v)
    for n in range(4):
        assert element_by_determinant(half_x, v, n, monic=True) == basis[n]


@pytest.mark.parametrize(
    "space, z, p",
    [
        (uniform(), monomial(1), F(1, 2)),
        (uniform(), constant(F(1)), F(3, 4)),
        (uniform(), power_term(F(1, 2)), 1),
        (power_beta(F(1, 2)), poly([1, 1]), F(1, 3)),
        (uniform(), monomial(2), 0),
    ],
    ids=["x-half", "one-three-quarters", "sqrt-one", "beta-linear-third", "legendre"],
)
def test_determinant_form_matches_gram_schmidt_to_degree_six(space, z, p):
    op = pcov_op(space, z, p)
    v = monomials(6)
    basis = gram_schmidt_p(op, v)
    for n in range(7):
        assert element_by_determinant(op, v, n, monic=True) == basis[n]


def test_gram_det_ratios(half_x):
    v = monomials(3)
    basis = gram_schmidt_p(half_x, v)
    assert gram_det(half_x, v, -1) == 1
    for n in range(4):
        assert gram_det(half_x, v, n) / gram_det(half_x, v, n - 1) == basis.variances[n]


def test_strict_mode_stops_on_vanishing_variance(ordinary):
    with pytest.raises(DegenerateBasis) as info:
        gram_schmidt_p(ordinary, monomials(2))
    assert info.value.index == 0


def test_dependent_sources(half_x):
    with pytest.raises(DegenerateBasis):
        gram_schmidt_p(half_x, [monomial(1), monomial(1).scaled(2)])


def test_verify_basis_reports_exact_pass(half_x):
    report = verify_basis(half_x, gram_schmidt_p(half_x, monomials(4)))
    assert report["status"] == "pass"
    assert report["exact"] is True
    assert report["size"] == 5


def test_verify_basis_flags_correlated_family(ordinary):
    report = verify_basis(ordinary, basis_from_elements(ordinary, [monomial(1), monomial(2)]))
    assert report["status"] == "fail"


def test_orthogonal_companion_is_orthogonal(unit):
    op = pcov_op(unit, constant(F(1)), F(3, 4))
    basis = gram_schmidt_p(op, monomials(3))
    g = orthogonal_companion(op, basis)
    for i in range(4):
        for j in range(4):
            expected = basis.variances[i] if i == j else 0
            assert expect_product(unit, g[i], g[j]) == expected


def test_sine_basis_is_uncorrelated():
    basis = sine_basis(4)
    assert verify_basis(basis.op, basis)["status"] == "pass"
    # sin(2x) is already uncorrelated with sin(x) on [0, pi]
    assert basis.variances[1] == pytest.approx(0.5)


@pytest.mark.parametrize("c1, lam_star", [(1.0, 0.0), (2.0, 0.0), (1.0, 0.25)])
def test_exp_sine_family_is_uncorrelated(c1, lam_star):
    op, family = exp_sine_family(4, c1, lam_star)
    assert len(family) == 4
    for i in range(4):
        assert float(var_p(op, family[i])) > 0
        for j in range(i):
            assert abs(float(cov_p(op, family[i], family[j]))) <= 1e-9


def test_describe_basis(half_x):
    rows = describe_basis(gram_schmidt_p(half_x, monomials(1)))
    assert rows[0] == {"index": 0, "element": "1", "var_p": "5/8"}
