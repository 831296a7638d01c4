"""Shared fixtures; puts src/ on the import path like the scripts do."""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "src"))

from elements import constant, monomial  # noqa: E402
from expectation import uniform  # noqa: E402
from pcov import pcov_op  # noqa: E402

F = Fraction
DATASETS = ROOT / "datasets"


def small_fractions(lo=-3, hi=3, denom=6):
    return st.fractions(min_value=lo, max_value=hi, max_denominator=denom)


def unit_p():
    """p in [0, 1] with small denominators."""
    return st.fractions(min_value=0, max_value=1, max_denominator=8)


@pytest.fixture
def unit():
    return uniform()


@pytest.fixture
def ordinary(unit):
    """Ordinary covariance on [0, 1]: Z = 1, p = 1."""
    return pcov_op(unit, constant(F(1)), 1)


@pytest.fixture
def half_x(unit):
    """p = 1/2 relative to Z = x on [0, 1]."""
    return pcov_op(unit, monomial(1), F(1, 2))


@pytest.fixture
def write_csv(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write
