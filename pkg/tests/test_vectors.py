from fractions import Fraction as F

import pytest

from elements import Vector
from errors import ConstraintViolation, DegenerateBasis
from expectation import expect_product
from vectors import vector_basis, vector_companions, vector_conjecture_check

IDENTITY = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
Z = [1, 2, 3]


@pytest.mark.parametrize("p", [F(0), F(1, 4), F(1, 2), F(3, 4), F(9, 10), F(999999, 1000000)])
def test_unit_vectors_against_fixed_vector(p):
    basis = vector_basis(IDENTITY, Z, p)
    assert basis[0] == Vector([1, 0, 0])
    assert basis[1] == Vector([2 * p / (14 - p), 1, 0])
    assert basis[2] == Vector([3 * p / (14 - 5 * p), 6 * p / (14 - 5 * p), 1])


def test_just_below_p_one_stays_a_basis():
    basis = vector_basis(IDENTITY, Z, 1 - F(1, 10**6))
    assert 0 < basis.variances[2] < F(1, 10**6)
    limit = [F(1, 3), F(2, 3), 1]
    assert all(abs(a - b) < F(1, 10**6) for a, b in zip(basis[2].values, limit))


def test_last_vector_degenerates_at_p_one():
    with pytest.raises(DegenerateBasis) as info:
        vector_basis(IDENTITY, Z, 1)
    assert info.value.index == 2

    basis = vector_basis(IDENTITY, Z, 1, strict=False)
    assert basis[2] == Vector([F(1, 3), F(2, 3), 1])
    assert basis.variances[2] == 0


def test_companions_are_orthogonal():
    basis = vector_basis(IDENTITY, Z, F(3, 4))
    g = vector_companions(basis)
    space = basis.op.space
    for i in range(3):
        for j in range(3):
            assert expect_product(space, g[i], g[j]) == (basis.variances[i] if i == j else 0)


def test_collapse_check_on_square_system():
    check = vector_conjecture_check(IDENTITY, Z)
    assert check.parallel
    assert check.predicted == Vector([F(1, 3), F(2, 3), 1])


def test_collapse_check_with_general_sources():
    check = vector_conjecture_check([[1, 1, 0], [0, 1, 1], [1, 0, 2]], [1, -1, 1])
    assert check.parallel


def test_collapse_check_validation():
    with pytest.raises(ConstraintViolation):
        vector_conjecture_check(IDENTITY[:2], Z)
    with pytest.raises(DegenerateBasis):
        vector_conjecture_check(IDENTITY, [1, 1, 0])
