"""
uncorrelate.py
--------------
p-uncorrelated bases.

gram_schmidt_p is the production path:

    X_0 = V_0
    X_k = V_k - sum_{j<k} cov_p(X_j, V_k) / var_p(X_j) * X_j

element_by_determinant builds the same X_n from the bordered Gram
determinant and is kept as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from elements import Element, FunctionElement, combine, constant
from errors import DegenerateBasis
from expectation import expect_product, uniform
from linalg import det
from log_setup import get_logger
from pcov import PCovOp, cov_matrix, cov_p, pcov_op, proj_onto, shrink_factor, var_p
from scalar import fmt, is_exact, is_zero
from settings import get_settings

logger = get_logger("uncorrelate")


@dataclass(frozen=True)
class UncorrelatedBasis:
    op: PCovOp
    elements: Tuple[Element, ...]
    variances: Tuple
    sources: Tuple[Element, ...]
    monic: bool = True

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, k):
        return self.elements[k]


def _vanishes(op: PCovOp, source: Element, variance) -> bool:
    if is_exact(variance):
        return variance == 0
    return is_zero(variance, scale=abs(float(expect_product(op.space, source, source))))


def gram_schmidt_p(op: PCovOp, v: Sequence[Element], strict: bool = True) -> UncorrelatedBasis:
    """
    Generalized Gram-Schmidt process.

    Args:
        op: the p-covariance operator.
        v: linearly independent sources V_0..V_n.
        strict: raise DegenerateBasis as soon as some var_p(X_k) vanishes.
            With strict=False a vanishing variance is only fatal when a later
            element needs to divide by it, so the last element may be
            degenerate (vector case at p = 1).

    Returns:
        UncorrelatedBasis with X_k and var_p(X_k).
    """
    xs: List[Element] = []
    variances: List = []
    for k, vk in enumerate(v):
        terms = [(Fraction(1), vk)]
        for j in range(k):
            if _vanishes(op, v[j], variances[j]):
                raise DegenerateBasis(f"var_p(X_{j}) vanishes; X_{k} cannot be formed", index=j)
            terms.append((-cov_p(op, xs[j], vk) / variances[j], xs[j]))
        xk = combine(terms)
        vk_var = var_p(op, xk)
        if _vanishes(op, vk, vk_var):
            if strict:
                raise DegenerateBasis(
                    f"var_p(X_{k}) vanishes: the sources are dependent modulo the fixed variable", index=k
                )
            logger.debug(f"X_{k} has zero p-variance")
        xs.append(xk)
        variances.append(vk_var)
    return UncorrelatedBasis(op, tuple(xs), tuple(variances), tuple(v), True)


def basis_from_elements(op: PCovOp, elements: Sequence[Element]) -> UncorrelatedBasis:
    """Wrap an externally supplied family; nothing is orthogonalised."""
    return UncorrelatedBasis(op, tuple(elements), tuple(var_p(op, e) for e in elements), tuple(elements), False)


def gram_det(op: PCovOp, v: Sequence[Element], n: int):
    """Delta_n: determinant of the p-covariance matrix of V_0..V_n (Delta_{-1} = 1)."""
    if n < 0:
        return Fraction(1)
    return det(cov_matrix(op, v[: n + 1]))


def element_by_determinant(op: PCovOp, v: Sequence[Element], n: int, monic: bool = False) -> Element:
    """
    X_n from the bordered determinant

        | cov_p(V_0,V_0)     ...  cov_p(V_0,V_n)     |
        |       ...                    ...           |
        | cov_p(V_{n-1},V_0) ...  cov_p(V_{n-1},V_n) |
        | V_0                ...  V_n                |

    expanded along its last row. The cofactor of V_n is Delta_{n-1}, so
    monic=True divides by it and reproduces gram_schmidt_p.
    """
    if n == 0:
        return v[0]
    top = cov_matrix(op, v[: n + 1])[:n]
    delta_prev = det([row[:n] for row in top])
    if delta_prev == 0 or is_zero(delta_prev, scale=float(np.prod([float(top[i][i]) for i in range(n)]))):
        raise DegenerateBasis(f"Delta_{n - 1} vanishes", index=n - 1)
    terms = []
    for j in range(n + 1):
        minor = [row[:j] + row[j + 1:] for row in top]
        terms.append(((-1) ** (n + j) * det(minor), v[j]))
    x = combine(terms)
    if monic:
        return x.scaled(Fraction(1) / delta_prev if is_exact(delta_prev) else 1.0 / delta_prev)
    return x


def orthogonal_companion(op: PCovOp, basis: UncorrelatedBasis) -> List[Element]:
    """G_j = X_j - (1 - sqrt(1 - p)) proj_Z X_j; E(G_i G_j) = var_p(X_j) delta_ij."""
    shrink = shrink_factor(op.p)
    return [combine([(1, x), (-shrink, proj_onto(op, x))]) for x in basis.elements]


def verify_basis(op: PCovOp, basis: UncorrelatedBasis) -> Dict:
    """Recompute every pairwise cov_p and report the worst off-diagonal entry."""
    n = len(basis)
    matrix = cov_matrix(op, list(basis.elements))
    worst = 0.0
    worst_rel = 0.0
    exact = True
    for i in range(n):
        for j in range(i + 1, n):
            c = matrix[i][j]
            exact = exact and is_exact(c)
            worst = max(worst, abs(float(c)))
            scale = math.sqrt(
                abs(float(expect_product(op.space, basis[i], basis[i])))
                * abs(float(expect_product(op.space, basis[j], basis[j])))
            )
            worst_rel = max(worst_rel, abs(float(c)) / scale if scale else abs(float(c)))

    tol = get_settings().tolerance
    if exact:
        passed = all(matrix[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    else:
        passed = worst_rel <= tol
    variance_drift = max(
        (abs(float(matrix[k][k]) - float(basis.variances[k])) for k in range(n)), default=0.0
    )
    return {
        "status": "pass" if passed else "fail",
        "size": n,
        "exact": exact,
        "max_offdiag": worst,
        "max_relative_offdiag": worst_rel,
        "variance_drift": variance_drift,
        "tolerance": 0 if exact else tol,
    }


# ---------------------------------------------------------------------
# Trigonometric families
# ---------------------------------------------------------------------
def _sine(k: int) -> FunctionElement:
    return FunctionElement(lambda t, k=k: np.sin(k * t), f"sin({k}x)")


def sine_basis(n: int) -> UncorrelatedBasis:
    """
    Ordinary-covariance (p = 1, Z = 1) Gram-Schmidt of sin(x), ..., sin(nx)
    under the uniform weight on [0, pi].
    """
    op = pcov_op(uniform(0, math.pi), constant(Fraction(1)), 1)
    return gram_schmidt_p(op, [_sine(k) for k in range(1, n + 1)])


def exp_sine_family(n: int, c1=1.0, lam_star=0.0) -> Tuple[PCovOp, List[Element]]:
    """
    Phi_k(x) = c1 (sin kx + k cos kx) + lam_star e^x, k = 1..n, on [0, pi]
    with w = 1, Z = e^x and p = 1.
    """
    exp_z = FunctionElement(np.exp, "exp(x)")
    op = pcov_op(uniform(0, math.pi), exp_z, 1)
    family = [
        combine(
            [
                (c1, FunctionElement(lambda t, k=k: np.sin(k * t) + k * np.cos(k * t), f"sin({k}x)+{k}cos({k}x)")),
                (lam_star, exp_z),
            ]
        )
        for k in range(1, n + 1)
    ]
    return op, family


def describe_basis(basis: UncorrelatedBasis) -> List[Dict]:
    return [
        {"index": k, "element": x.describe(), "var_p": fmt(v)}
        for k, (x, v) in enumerate(zip(basis.elements, basis.variances))
    ]
