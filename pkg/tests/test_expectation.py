import math
from fractions import Fraction as F

import numpy as np
import pytest

from elements import FunctionElement, Tabulated, Vector, constant, monomial, power_term
from errors import ConstraintViolation, DivergentMoment, IncompatibleRepr, InvalidBounds
from expectation import (
    chebyshev,
    custom,
    discrete,
    expect,
    expect_product,
    jacobi,
    linear_expect,
    moment_kz,
    power_beta,
    power_gamma,
    uniform,
    vectors,
)


@pytest.mark.parametrize("k", range(6))
def test_uniform_monomials_exact(k):
    value = expect(uniform(), monomial(k))
    assert value == F(1, k + 1) and isinstance(value, F)


def test_uniform_other_interval():
    assert expect(uniform(0, 2), monomial(2)) == F(4, 3)
    assert expect(uniform(-1, 1), monomial(3)) == 0


def test_linear_expect():
    assert linear_expect(uniform(), [(3, monomial(2)), (1, monomial(1))]) == F(3, 2)


def test_power_beta_moments():
    assert expect(power_beta(1, 0), monomial(1)) == F(2, 3)
    # Beta(3/2, 3/2) mean is 1/2
    assert expect(power_beta(F(1, 2), F(1, 2)), monomial(1)) == F(1, 2)
    # E[(1-x)^(1/2)] under the uniform weight
    assert expect(uniform(), power_term(0, F(1, 2))) == F(2, 3)


def test_jacobi_and_chebyshev_moments():
    assert expect(jacobi(0, 0), monomial(2)) == F(1, 3)
    assert expect(chebyshev(1), monomial(2)) == F(1, 2)
    assert expect(chebyshev(2), monomial(2)) == F(1, 4)
    assert expect(jacobi(0, 0), power_term(0, 2)) == F(4, 3)


def test_power_gamma_moments():
    assert expect(power_gamma(0), monomial(3)) == 6
    assert expect(power_gamma(1, 2), monomial(1)) == 1


def test_weight_factor_normalizes():
    space = uniform(factor=power_term(0, 2))
    assert expect(space, monomial(1)) == F(1, 4)
    assert expect(space, constant(F(1))) == 1


def test_discrete_and_vector_spaces():
    space = discrete([0, 1, 2], [1, 1, 2])
    assert expect(space, monomial(1)) == F(5, 4)
    assert expect(space, Tabulated([4, 0, 0])) == 1
    assert expect(vectors(3), Vector([1, 2, 3])) == 2
    assert expect(vectors(2), constant(F(5))) == 5


def test_numeric_fallback():
    assert expect(uniform(), FunctionElement(np.exp)) == pytest.approx(math.e - 1, rel=1e-10)
    assert expect(uniform(0, math.pi), FunctionElement(np.sin)) == pytest.approx(2 / math.pi, rel=1e-10)
    assert expect(power_gamma(0), FunctionElement(lambda x: np.exp(-x))) == pytest.approx(0.5, rel=1e-9)
    gauss = custom(lambda x: np.exp(-x * x), -5, 5, "gauss")
    assert expect(gauss, monomial(2)) == pytest.approx(0.5, rel=1e-8)


def test_expect_product_and_moment_kz():
    assert expect_product(uniform(), monomial(1), monomial(2)) == F(1, 4)
    assert moment_kz(uniform(), 2, monomial(1)) == F(1, 4)
    with pytest.raises(ConstraintViolation):
        moment_kz(uniform(), -1, monomial(1))


def test_divergent_moment():
    with pytest.raises(DivergentMoment):
        expect(uniform(), power_term(-1))


def test_incompatible_elements():
    with pytest.raises(IncompatibleRepr):
        expect(jacobi(0, 0), power_term(F(1, 2)))
    with pytest.raises(IncompatibleRepr):
        expect(uniform(), Tabulated([1, 2]))


def test_space_validation():
    with pytest.raises(InvalidBounds):
        uniform(1, 0)
    with pytest.raises(ConstraintViolation):
        discrete([0, 0])
    with pytest.raises(ConstraintViolation):
        discrete([0, 1], [1, 0])
    with pytest.raises(ConstraintViolation):
        power_beta(-1)
    with pytest.raises(ConstraintViolation):
        chebyshev(5)
    with pytest.raises(ConstraintViolation):
        uniform(factor=power_term(0, 1, F(-1)))
