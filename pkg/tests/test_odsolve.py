from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from errors import ConstraintViolation, RankDeficient, SingularModifiedSystem
from linalg import rank
from odsolve import ls_solve, objectives, overdetermined_problem, pv_solve

A = [[-1, 1], [2, -1], [1, -2], [-1, 2]]
B = [1, 2, 3, 4]


@pytest.fixture
def ex13():
    return overdetermined_problem(A, B, p=1)


def test_least_squares_solution(ex13):
    x = ls_solve(ex13)
    assert x == [F(9, 7), 1]
    assert objectives(ex13, x) == (F(185, 7), F(1459, 196))


def test_p_variance_solution(ex13):
    x = pv_solve(ex13)
    assert x == [F(4, 37), F(13, 74)]
    assert objectives(ex13, x) == (F(80335, 2738), F(361, 74))


def test_p_zero_is_least_squares():
    prob = overdetermined_problem(A, B, p=0)
    assert pv_solve(prob) == ls_solve(prob)


def test_float_inputs_agree_with_exact():
    prob = overdetermined_problem([[float(v) for v in row] for row in A], [float(v) for v in B], p=1.0)
    assert pv_solve(prob) == pytest.approx([4 / 37, 13 / 74])
    _, v = objectives(prob, pv_solve(prob))
    assert v == pytest.approx(361 / 74)


def test_singular_modified_system_reports_kernel():
    prob = overdetermined_problem([[1], [1], [1]], [1, 2, 3], p=1)
    with pytest.raises(SingularModifiedSystem) as info:
        pv_solve(prob)
    assert info.value.free_directions == [[1]]
    assert ls_solve(prob) == [2]


@pytest.mark.parametrize(
    "a, b, z, p",
    [
        ([[1, 0], [0, 1]], [1, 2], None, 1),
        ([[1, 0], [0, 1], [1, 1]], [1, 2], None, 1),
        ([[1, 0], [0, 1, 2], [1, 1]], [1, 2, 3], None, 1),
        (A, B, [0, 0, 0, 0], 1),
        (A, B, [1, 1], 1),
        (A, B, None, F(5, 4)),
        ([], [], None, 1),
    ],
)
def test_problem_validation(a, b, z, p):
    with pytest.raises(ConstraintViolation):
        overdetermined_problem(a, b, z, p)


def test_dependent_columns():
    with pytest.raises(RankDeficient):
        overdetermined_problem([[1, 2], [2, 4], [3, 6]], [1, 2, 3])


def test_objectives_checks_length(ex13):
    with pytest.raises(ConstraintViolation):
        objectives(ex13, [1, 2, 3])


small = st.integers(-4, 4)


@given(
    a=st.lists(st.lists(small, min_size=2, max_size=2), min_size=4, max_size=4),
    b=st.lists(small, min_size=4, max_size=4),
    z=st.lists(st.integers(1, 3), min_size=4, max_size=4),
    p=st.fractions(min_value=0, max_value=F(7, 8), max_denominator=8),
)
@settings(max_examples=100, deadline=None)
def test_objective_chain(a, b, z, p):
    """V(pv) <= V(ls) <= E(ls) for every full-rank system."""
    assume(rank(a) == 2)
    prob = overdetermined_problem(a, b, z, p)
    _, v_pv = objectives(prob, pv_solve(prob))
    e_ls, v_ls = objectives(prob, ls_solve(prob))
    assert v_pv <= v_ls <= e_ls
