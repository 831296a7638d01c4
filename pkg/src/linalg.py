"""
linalg.py
---------
Dense linear algebra over either backend.

Matrices are plain lists of rows. When every entry is exact the work is done
with sympy (fraction-free Bareiss determinants, Gauss-Jordan with free
parameters); otherwise numpy / scipy.linalg is used with pivoting and a
relative rank threshold from the settings.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, NamedTuple, Sequence

import numpy as np
import scipy.linalg
import sympy

from errors import InconsistentSystem, RankDeficient
from scalar import is_exact
from settings import get_settings

Matrix = List[List]


class SingularSolution(NamedTuple):
    particular: List          # solution with every free parameter set to 0
    nullspace: List[List]     # basis of the kernel, one vector per free column
    free: List[int]           # indices of the free columns


def _exact(rows: Sequence[Sequence], *more) -> bool:
    return all(is_exact(v) for row in rows for v in row) and all(is_exact(v) for vec in more for v in vec)


def _to_sympy(rows) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in map(Fraction, row)] for row in rows])


def _from_sympy(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def transpose(rows: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*rows)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> List:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def det(rows: Sequence[Sequence]):
    """Determinant: Bareiss for exact entries, partial-pivot LU for floats."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if _exact(rows):
        return _from_sympy(_to_sympy(rows).det(method="bareiss"))
    lu, piv = scipy.linalg.lu_factor(np.array(rows, dtype=float))
    sign = (-1) ** int(np.sum(piv != np.arange(n)))
    return float(sign * np.prod(np.diag(lu)))


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    if _exact(rows):
        return _to_sympy(rows).rank()
    a = np.array(rows, dtype=float)
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > get_settings().degeneracy_rel * s[0]))


def solve(rows: Sequence[Sequence], rhs: Sequence) -> List:
    """Solve a nonsingular square system; RankDeficient otherwise."""
    result = solve_singular(rows, rhs)
    if result.free:
        raise RankDeficient(f"matrix is singular; free columns {result.free}")
    return result.particular


def solve_singular(rows: Sequence[Sequence], rhs: Sequence) -> SingularSolution:
    """
    Solve A c = b allowing singular A.

    Free columns are reported with the kernel; the particular solution sets
    their parameters to zero. InconsistentSystem when b is outside range(A).
    """
    n = len(rows[0]) if rows else 0
    if _exact(rows, rhs):
        a = _to_sympy(rows)
        b = _to_sympy([[v] for v in rhs])
        try:
            sol, params = a.gauss_jordan_solve(b)
        except ValueError as exc:
            raise InconsistentSystem("linear system is singular and inconsistent") from exc
        zero = {p: 0 for p in params}
        particular = [_from_sympy(v) for v in sol.subs(zero)]
        _, pivots = a.rref()
        free = [j for j in range(n) if j not in pivots]
        kernel = [[_from_sympy(v) for v in vec] for vec in a.nullspace()]
        return SingularSolution(particular, kernel, free)

    a = np.array(rows, dtype=float)
    b = np.array([float(v) for v in rhs])
    tol = get_settings().degeneracy_rel
    q, r, perm = scipy.linalg.qr(a, pivoting=True)
    diag = np.abs(np.diag(r))
    scale = diag[0] if diag.size else 0.0
    k = int(np.sum(diag > tol * scale)) if scale > 0 else 0
    free = sorted(int(j) for j in perm[k:])
    if k == a.shape[1]:
        return SingularSolution([float(v) for v in scipy.linalg.solve(a, b)], [], [])

    kept = sorted(int(j) for j in perm[:k])
    sol = np.zeros(a.shape[1])
    if k:
        sol_k, *_ = np.linalg.lstsq(a[:, kept], b, rcond=None)
        sol[kept] = sol_k
    residual = np.linalg.norm(a @ sol - b)
    if residual > get_settings().tolerance * max(np.linalg.norm(b), scale, 1.0) * 1e2:
        raise InconsistentSystem(f"linear system is singular and inconsistent (residual {residual:.3e})")
    kernel = scipy.linalg.null_space(a, rcond=tol)
    return SingularSolution([float(v) for v in sol], [[float(v) for v in col] for col in kernel.T], free)
