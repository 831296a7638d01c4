"""
approx.py
---------
Least p-variance fitting.

Minimising var_p(Y - sum c_k X_k; Z) over c leads to the p-covariances
system  sum_j cov_p(X_i, X_j) c_j = cov_p(X_i, Y).  At p = 1 the system is
singular whenever some combination of the basis is a multiple of Z; the
free directions are then fixed by additionally minimising E(R^2), which for
Z = const and X_0 = 1 is the usual c_0 = E(Y) - sum_{k>=1} c_k E(X_k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Sequence, Tuple

from elements import Element, TermSum, combine, monomial
from errors import ConstraintViolation, DegenerateVariance
from expectation import DiscreteSpace, expect, expect_product
from linalg import solve_singular
from log_setup import get_logger
from pcov import PCovOp, cov_matrix, cov_p, var_p
from scalar import fmt, is_zero
from uncorrelate import UncorrelatedBasis

logger = get_logger("approx")


@dataclass(frozen=True)
class FitResult:
    coefficients: Tuple
    residual_var_p: object
    residual_ls: object
    basis_used: str
    degenerate_free_params: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "coefficients": [fmt(c) for c in self.coefficients],
            "residual_var_p": fmt(self.residual_var_p),
            "residual_ls": fmt(self.residual_ls),
            "basis_used": self.basis_used,
            "degenerate_free_params": list(self.degenerate_free_params),
        }


class ResidualCheck(NamedTuple):
    lhs: object
    rhs: object
    rho_sq_sum: object


def approximant(coefficients: Sequence, basis: Sequence[Element]) -> Element:
    return combine(list(zip(coefficients, basis)))


def residual(coefficients: Sequence, basis: Sequence[Element], target: Element) -> Element:
    return combine([(Fraction(1), target)] + [(-c, x) for c, x in zip(coefficients, basis)])


def _result(op: PCovOp, coefficients, basis, target, used: str, free=()) -> FitResult:
    r = residual(coefficients, basis, target)
    return FitResult(
        tuple(coefficients), var_p(op, r), expect_product(op.space, r, r), used, tuple(free)
    )


def assemble_system(op: PCovOp, basis: Sequence[Element], target: Element) -> Tuple[List[List], List]:
    """Matrix cov_p(X_i, X_j) and right-hand side cov_p(X_i, Y)."""
    if not basis:
        raise ConstraintViolation("fit needs at least one basis element")
    return cov_matrix(op, basis), [cov_p(op, x, target) for x in basis]


def _least_squares_tie_break(op: PCovOp, basis, target, coefficients: List, kernel: List[List]) -> List:
    """Move along the kernel so that E(R^2) is minimal among all minimisers."""
    directions = [approximant(vec, basis) for vec in kernel]
    r0 = residual(coefficients, basis, target)
    gram = [[expect_product(op.space, a, b) for b in directions] for a in directions]
    rhs = [expect_product(op.space, r0, a) for a in directions]
    shift = solve_singular(gram, rhs).particular
    out = list(coefficients)
    for t, vec in zip(shift, kernel):
        out = [c + t * v for c, v in zip(out, vec)]
    return out


def fit(op: PCovOp, basis: Sequence[Element], target: Element) -> FitResult:
    """Least p-variance fit of target on the raw basis."""
    matrix, rhs = assemble_system(op, basis, target)
    sol = solve_singular(matrix, rhs)
    coefficients = list(sol.particular)
    if sol.free:
        logger.debug(f"p-covariance system is singular; free columns {sol.free}")
        coefficients = _least_squares_tie_break(op, basis, target, coefficients, sol.nullspace)
    return _result(op, coefficients, basis, target, "raw", sol.free)


def expand(op: PCovOp, basis: UncorrelatedBasis, target: Element, n: int | None = None) -> FitResult:
    """c_k = cov_p(X_k, Y) / var_p(X_k), k = 0..n."""
    n = len(basis) - 1 if n is None else n
    if n >= len(basis):
        raise ConstraintViolation(f"basis has {len(basis)} elements, cannot expand to index {n}")
    coefficients = []
    for k in range(n + 1):
        v = basis.variances[k]
        if v == 0 or is_zero(v):
            raise DegenerateVariance(f"var_p(X_{k}) vanishes")
        coefficients.append(cov_p(op, basis[k], target) / v)
    return _result(op, coefficients, basis.elements[: n + 1], target, "uncorrelated")


def residual_identity_check(op: PCovOp, basis: UncorrelatedBasis, target: Element, n: int) -> ResidualCheck:
    """
    var_p(Y - sum c_k X_k) against var_p(Y) (1 - sum rho_p(X_k, Y)^2), and
    the Bessel-type sum of squared p-correlations.
    """
    expansion = expand(op, basis, target, n)
    var_y = var_p(op, target)
    if var_y == 0 or is_zero(var_y):
        raise DegenerateVariance("var_p(Y) vanishes")
    rho_sq = sum(
        (cov_p(op, basis[k], target) ** 2 / (basis.variances[k] * var_y) for k in range(n + 1)),
        Fraction(0),
    )
    return ResidualCheck(expansion.residual_var_p, var_y * (1 - rho_sq), rho_sq)


def recurrence_coeffs(op: PCovOp, pups: UncorrelatedBasis, n: int) -> List:
    """
    Coefficients of x * P_n in P_0..P_{n+1}:
        x P_n = sum_k cov_p(x P_n, P_k) / var_p(P_k) * P_k
    """
    if len(pups) < n + 2:
        raise ConstraintViolation(f"need P_0..P_{n + 1}, basis has {len(pups)} elements")
    pn = pups[n]
    if not isinstance(pn, TermSum):
        raise ConstraintViolation("recurrence coefficients need polynomial basis elements")
    xp = pn.mul_x()
    out = []
    for k in range(n + 2):
        v = pups.variances[k]
        if v == 0 or is_zero(v):
            raise DegenerateVariance(f"var_p(P_{k}) vanishes")
        out.append(cov_p(op, xp, pups[k]) / v)
    return out


def regression_closed_form(space: DiscreteSpace, y: Element) -> Tuple:
    """Intercept and slope of the weighted least-squares line through the samples."""
    x = monomial(1)
    ex, ey = expect(space, x), expect(space, y)
    sxx = expect_product(space, x, x) - ex * ex
    if sxx == 0 or is_zero(sxx):
        raise DegenerateVariance("all sample abscissae coincide")
    slope = (expect_product(space, x, y) - ex * ey) / sxx
    return ey - slope * ex, slope


def lambda_half_solution(p) -> List[float]:
    """
    Closed-form least p-variance quadratic for sqrt(1-x) on [0, 1] with
    Z = x^(1/2), as ascending coefficients.
    """
    p = float(p)
    pi = math.pi
    den = 1224 * p - 1225
    c2 = -(7.0 / 3.0) * ((75 * pi + 64) * p - 300) / den
    c1 = 20 * ((21 * pi - 80) * p + 14) / den
    c0 = 0.5 * ((105 * pi + 2048) * p - 2380) / den
    return [c0, c1, c2]
