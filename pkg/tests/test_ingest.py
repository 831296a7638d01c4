import math
from fractions import Fraction as F

import pytest

from conftest import DATASETS
from elements import Tabulated, constant, monomial, poly, power_term
from errors import DuplicateX, ParseError
from ingest import SampleSet, ingest_csv, parse_expression, read_matrix_csv, read_vector_csv, tokenize
from scalar import FLOAT, RATIONAL


# ---------------------------------------------------------------------
# Sample files
# ---------------------------------------------------------------------
def test_regression_sample():
    samples = ingest_csv(DATASETS / "regression_sample.csv")
    assert isinstance(samples, SampleSet)
    assert len(samples) == 5
    assert samples.backend == RATIONAL
    assert samples.space.points == (0, F(1, 4), F(1, 2), F(3, 4), 1)
    assert samples.space.masses == (1, 2, 1, 2, 1)
    assert samples.target == Tabulated([1, F(7, 8), F(3, 4), F(1, 2), 0])
    assert samples.z is None


def test_z_column_and_default_masses(write_csv):
    path = write_csv("s.csv", "x,y,z\n0,1,1\n1/2,2,1/2\n1,3,1\n")
    samples = ingest_csv(path)
    assert samples.space.masses == (1, 1, 1)
    assert samples.z == Tabulated([1, F(1, 2), 1])


def test_header_is_case_and_space_tolerant(write_csv):
    path = write_csv("s.csv", "X, Y\n0, 1\n1, 2\n")
    assert len(ingest_csv(path)) == 2


def test_inexact_cell_switches_to_floats(write_csv):
    path = write_csv("s.csv", "x,y\n0,0.12345678901234567\n1,2\n")
    samples = ingest_csv(path)
    assert samples.backend == FLOAT
    assert all(isinstance(v, float) for v in samples.space.points)


def test_forced_float_backend():
    samples = ingest_csv(DATASETS / "regression_sample.csv", backend=FLOAT)
    assert samples.target.values == (1.0, 0.875, 0.75, 0.5, 0.0)


@pytest.mark.parametrize(
    "text, line",
    [
        ("y,x\n0,1\n", 1),
        ("x,y,w\n0,1,1\n", 1),
        ("x,y\n", 2),
        ("x,y\n0,1\n1,\n", 3),
        ("x,y\n0,abc\n", 2),
        ("x,y,j\n0,1,1\n1,2,0\n", 3),
        ("x,y,j\n0,1,-1\n", 2),
    ],
)
def test_malformed_sample_files(write_csv, text, line):
    with pytest.raises(ParseError) as info:
        ingest_csv(write_csv("bad.csv", text))
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_duplicate_x(write_csv):
    with pytest.raises(DuplicateX) as info:
        ingest_csv(write_csv("dup.csv", "x,y\n1/2,1\n0,2\n0.5,3\n"))
    assert info.value.line == 4


def test_empty_file(write_csv):
    with pytest.raises(ParseError):
        ingest_csv(write_csv("empty.csv", ""))


# ---------------------------------------------------------------------
# Matrices and vectors
# ---------------------------------------------------------------------
def test_matrix_and_rhs():
    assert read_matrix_csv(DATASETS / "ex13_matrix.csv") == [[-1, 1], [2, -1], [1, -2], [-1, 2]]
    assert read_vector_csv(DATASETS / "ex13_rhs.csv") == [1, 2, 3, 4]


def test_row_vector(write_csv):
    assert read_vector_csv(write_csv("v.csv", "1/2,1,3\n")) == [F(1, 2), 1, 3]


def test_matrix_float_backend(write_csv):
    rows = read_matrix_csv(write_csv("m.csv", "1,2\n3,4\n"), backend=FLOAT)
    assert rows == [[1.0, 2.0], [3.0, 4.0]]
    assert isinstance(rows[0][0], float)


def test_not_a_vector(write_csv):
    with pytest.raises(ParseError):
        read_vector_csv(write_csv("m.csv", "1,2\n3,4\n"))


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_matrix_csv(tmp_path / "nope.csv")


# ---------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------
def test_tokenize():
    assert tokenize("2*x**3") == [("num", "2"), ("op", "*"), ("name", "x"), ("op", "^"), ("num", "3")]


@pytest.mark.parametrize(
    "text, expected",
    [
        ("sqrt(1-x)", power_term(0, F(1, 2))),
        ("(1-x)^(1/2)", power_term(0, F(1, 2))),
        ("x^(1/2)", power_term(F(1, 2))),
        ("x^0.5", power_term(F(1, 2))),
        ("2*x^2 - 3*x + 1", poly([1, -3, 2])),
        ("x^3/4", poly([0, 0, 0, F(1, 4)])),
        ("-x", poly([0, -1])),
        ("1", constant(F(1))),
        ("x", monomial(1)),
        ("(4*x^2)^(1/2)", power_term(1, 0, 2)),
    ],
)
def test_parse_exact_expressions(text, expected):
    assert parse_expression(text) == expected


def test_parse_functions():
    assert parse_expression("exp(2*x)").at(0.5) == pytest.approx(math.e)
    assert parse_expression("sin(pi)").at(0) == pytest.approx(0.0, abs=1e-12)
    assert parse_expression("cos(x)").describe() == "cos(x)"


@pytest.mark.parametrize("text", ["x/x", "x^x", "", "   ", "foo(x)", "(1-x", "x $ 1", "(-x)^(1/2)", "1/0", "sin(x^2)"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_expression(text)
