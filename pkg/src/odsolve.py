"""
odsolve.py
----------
Approximate solutions of an overdetermined system A x = b (n equations,
m < n unknowns).

ls_solve minimises E(x) = ||Ax - b||^2 through the normal equations.
pv_solve minimises

    V(x) = E(x) - (p / Z^T Z) (Z^T (Ax - b))^2

which only differs from E by the p-weighted share of the residual along a
fixed vector Z; V <= E always, so V(pv_solve) <= V(ls_solve) <= E(ls_solve).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from errors import ConstraintViolation, InconsistentSystem, RankDeficient, SingularModifiedSystem
from linalg import dot, matvec, rank, solve, solve_singular, transpose
from log_setup import get_logger
from scalar import as_scalar, is_exact, is_zero

logger = get_logger("odsolve")


def _scalar(value):
    return value if isinstance(value, float) else as_scalar(value)


@dataclass(frozen=True)
class OverdeterminedProblem:
    a: Tuple[Tuple, ...]
    b: Tuple
    z: Tuple = field(default=())
    p: object = Fraction(1)

    def __post_init__(self):
        n = len(self.a)
        if n == 0:
            raise ConstraintViolation("the system has no equations")
        m = len(self.a[0])
        if any(len(row) != m for row in self.a):
            raise ConstraintViolation("matrix rows differ in length")
        if len(self.b) != n:
            raise ConstraintViolation(f"right-hand side has {len(self.b)} entries, matrix has {n} rows")
        if not n > m:
            raise ConstraintViolation(f"system is not overdetermined: {n} equations, {m} unknowns")
        if len(self.z) != n:
            raise ConstraintViolation(f"fixed vector has {len(self.z)} entries, expected {n}")
        if not dot(self.z, self.z) > 0:
            raise ConstraintViolation("fixed vector must be nonzero")
        if not 0 <= self.p <= 1:
            raise ConstraintViolation(f"p must lie in [0, 1], got {self.p}")
        if rank([list(r) for r in self.a]) < m:
            raise RankDeficient("columns of A are linearly dependent")

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.a), len(self.a[0])


def overdetermined_problem(
    a: Sequence[Sequence], b: Sequence, z: Optional[Sequence] = None, p=1
) -> OverdeterminedProblem:
    """Build a problem; z defaults to the all-ones vector."""
    rows = tuple(tuple(_scalar(v) for v in row) for row in a)
    rhs = tuple(_scalar(v) for v in b)
    zvec = tuple(Fraction(1) for _ in rhs) if z is None else tuple(_scalar(v) for v in z)
    return OverdeterminedProblem(rows, rhs, zvec, _scalar(p))


def _normal_equations(prob: OverdeterminedProblem):
    at = transpose(prob.a)
    return [[dot(u, v) for v in at] for u in at], matvec(at, prob.b)


def ls_solve(prob: OverdeterminedProblem) -> List:
    """(A^T A)^{-1} A^T b."""
    gram, rhs = _normal_equations(prob)
    return solve(gram, rhs)


def pv_solve(prob: OverdeterminedProblem) -> List:
    """
    (A^T A - (p/Z^T Z) A^T Z Z^T A)^{-1} (A^T b - (p/Z^T Z) A^T Z Z^T b)

    The modified matrix is only positive semidefinite; when it is singular
    the free directions are reported, never repaired.
    """
    gram, rhs = _normal_equations(prob)
    if prob.p == 0:
        return solve(gram, rhs)
    at = transpose(prob.a)
    zz = dot(prob.z, prob.z)
    az = [dot(col, prob.z) for col in at]
    zb = dot(prob.z, prob.b)
    k = prob.p / zz
    matrix = [[gram[i][j] - k * az[i] * az[j] for j in range(len(az))] for i in range(len(az))]
    vector = [rhs[i] - k * az[i] * zb for i in range(len(az))]
    try:
        sol = solve_singular(matrix, vector)
    except InconsistentSystem as exc:
        raise SingularModifiedSystem(str(exc), free_directions=[]) from exc
    if sol.free:
        logger.debug(f"modified normal matrix is singular; kernel {sol.nullspace}")
        raise SingularModifiedSystem(
            f"modified normal matrix is singular at p = {prob.p}; free columns {sol.free}",
            free_directions=sol.nullspace,
        )
    return sol.particular


def objectives(prob: OverdeterminedProblem, x: Sequence) -> Tuple:
    """(E, V) at x."""
    if len(x) != prob.shape[1]:
        raise ConstraintViolation(f"candidate has {len(x)} entries, expected {prob.shape[1]}")
    r = [u - v for u, v in zip(matvec(prob.a, x), prob.b)]
    e = dot(r, r)
    v = e - prob.p / dot(prob.z, prob.z) * dot(prob.z, r) ** 2
    if not is_exact(v) and v < 0 and is_zero(v, scale=e):
        v = 0.0
    return e, v
