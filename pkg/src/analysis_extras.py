"""
analysis_extras.py
------------------
Applications built on the p-covariance operator:

* quadrature rules  var_p(f) ~ sum w_k f(x_k);
* Gruss-type bounds for cov_1 when m Z <= X <= M Z;
* the improved Bessel inequality and the p-Parseval identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from elements import Element, combine, monomial, poly
from errors import ConstraintViolation, DuplicateNodes, InvalidBounds, NotOrthogonal
from expectation import ContinuousSpace, DiscreteSpace, VectorSpace, expect_product
from linalg import solve
from log_setup import get_logger
from pcov import PCovOp, cov_p, var_p
from polyalg import from_roots
from scalar import as_scalar, is_exact, is_zero
from settings import get_settings
from uncorrelate import UncorrelatedBasis

logger = get_logger("analysis_extras")


# ---------------------------------------------------------------------
# Quadrature for p-variances
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class PVQuadrature:
    nodes: Tuple
    weights: Tuple
    op: PCovOp

    def apply(self, f: Element):
        """sum_k w_k f(x_k)."""
        return sum((w * f.at(x) for w, x in zip(self.weights, self.nodes)), Fraction(0))


def _check_nodes(nodes: Sequence) -> List:
    nodes = [n if isinstance(n, float) else as_scalar(n) for n in nodes]
    if not nodes:
        raise ConstraintViolation("a quadrature rule needs at least one node")
    if len(set(nodes)) != len(nodes):
        raise DuplicateNodes(f"quadrature nodes must be pairwise distinct, got {nodes}")
    return nodes


def pv_quad_weights(op: PCovOp, nodes: Sequence) -> PVQuadrature:
    """
    Undetermined coefficients: sum_k w_k x_k^j = var_p(x^j) for j < n.
    """
    nodes = _check_nodes(nodes)
    n = len(nodes)
    vandermonde = [[x ** j for x in nodes] for j in range(n)]
    rhs = [var_p(op, monomial(j)) for j in range(n)]
    return PVQuadrature(tuple(nodes), tuple(solve(vandermonde, rhs)), op)


def lagrange_basis(nodes: Sequence) -> List[Element]:
    """L(x; x_k) = N_n(x) / (N_n'(x_k) (x - x_k))."""
    out = []
    for k, xk in enumerate(nodes):
        others = [x for j, x in enumerate(nodes) if j != k]
        denom = math.prod((xk - x for x in others), start=Fraction(1))
        out.append(poly(from_roots(others, Fraction(1) / denom if is_exact(denom) else 1.0 / denom)))
    return out


def lagrange_weights(op: PCovOp, nodes: Sequence, f: Element) -> PVQuadrature:
    """
    w_k = cov_p(f, L(x; x_k)). The rule depends on f and reproduces
    var_p(f) whenever f is a polynomial of degree below the node count.
    """
    nodes = _check_nodes(nodes)
    return PVQuadrature(tuple(nodes), tuple(cov_p(op, f, lk) for lk in lagrange_basis(nodes)), op)


def two_point_weights(op: PCovOp, x1, x2) -> PVQuadrature:
    x1, x2 = _check_nodes([x1, x2])
    v0, v1 = var_p(op, monomial(0)), var_p(op, monomial(1))
    w1 = (x2 * v0 - v1) / (x2 - x1)
    w2 = -(x1 * v0 - v1) / (x2 - x1)
    return PVQuadrature((x1, x2), (w1, w2), op)


def quadrature_error(rule: PVQuadrature, f: Element):
    """R_n[f] = var_p(f) - sum w_k f(x_k)."""
    return var_p(rule.op, f) - rule.apply(f)


# ---------------------------------------------------------------------
# Gruss-type bounds
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class BoundInputs:
    m_x: object
    M_x: object
    m_y: object
    M_y: object

    def __post_init__(self):
        if self.m_x > self.M_x or self.m_y > self.M_y:
            raise InvalidBounds("lower envelope constants must not exceed the upper ones")


class GrussResult(NamedTuple):
    cov1: object
    bound: object
    product_bound: object


def _grid(space) -> Tuple[np.ndarray, bool]:
    """Sample points for envelope checks; second value marks exact sampling."""
    if isinstance(space, DiscreteSpace):
        return np.array(space.points, dtype=object), True
    if isinstance(space, VectorSpace):
        return np.arange(space.dimension), True
    if not isinstance(space, ContinuousSpace):
        raise ConstraintViolation(f"cannot sample {space!r}")
    n = get_settings().grid_points
    lo, hi = float(space.support[0]), float(space.support[1])
    u = (np.arange(n) + 0.5) / n
    if math.isinf(hi):
        return np.concatenate([[lo], lo - np.log(u)]), False
    return np.concatenate([[lo], lo + (hi - lo) * u, [hi]]), False


def _samples(space, e: Element, grid, exact: bool):
    if isinstance(space, VectorSpace):
        return e.values_on(None, space.dimension)
    if exact:
        return e.values_on(list(grid), len(grid))
    return e.at_float(grid)


def check_envelope(op: PCovOp, x: Element, m, M) -> None:
    """m Z <= X <= M Z on the verification grid, or InvalidBounds."""
    z = op.z.members[0]
    grid, exact = _grid(op.space)
    xs = _samples(op.space, x, grid, exact)
    zs = _samples(op.space, z, grid, exact)
    tol = get_settings().tolerance
    for t, xv, zv in zip(grid, xs, zs):
        if not exact and not (math.isfinite(float(xv)) and math.isfinite(float(zv))):
            continue
        slack = 0 if exact else tol * max(1.0, abs(float(xv)), abs(float(zv)))
        if m * zv - xv > slack or xv - M * zv > slack:
            raise InvalidBounds(f"envelope {m}*Z <= X <= {M}*Z fails at {t}")


def _envelope_product(op: PCovOp, x: Element, m, M):
    ez2 = op.z.norms[0]
    exz = expect_product(op.space, x, op.z.members[0])
    return (M * ez2 - exz) * (exz - m * ez2) / ez2


def gruss_bound(op: PCovOp, x: Element, y: Element, bounds: BoundInputs) -> GrussResult:
    """
    |cov_1(X, Y; Z)| <= (E(Z^2) / 4) (M_X - m_X) (M_Y - m_Y), together with
    the sharper cov_1^2 <= P_X P_Y where
        P_X = (M_X E(Z^2) - E(XZ)) (E(XZ) - m_X E(Z^2)) / E(Z^2).
    """
    if len(op.z) != 1:
        raise ConstraintViolation("Gruss bounds need a single fixed variable")
    check_envelope(op, x, bounds.m_x, bounds.M_x)
    check_envelope(op, y, bounds.m_y, bounds.M_y)
    one = op.with_p(1)
    cov1 = cov_p(one, x, y)
    bound = op.z.norms[0] / 4 * (bounds.M_x - bounds.m_x) * (bounds.M_y - bounds.m_y)
    product_bound = _envelope_product(one, x, bounds.m_x, bounds.M_x) * _envelope_product(
        one, y, bounds.m_y, bounds.M_y
    )
    return GrussResult(cov1, bound, product_bound)


def gruss_product_bound(op: PCovOp, x: Element, y: Element, bounds: BoundInputs):
    return gruss_bound(op, x, y, bounds).product_bound


# ---------------------------------------------------------------------
# Bessel and Parseval
# ---------------------------------------------------------------------
class BesselResult(NamedTuple):
    s_n: object
    v_n: object
    r_sq: object
    holds: bool


def _check_orthogonal(space, family: Sequence[Element], norms: Sequence) -> None:
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            inner = expect_product(space, family[i], family[j])
            scale = math.sqrt(abs(float(norms[i])) * abs(float(norms[j])))
            if not is_zero(inner, scale=scale, tol=max(get_settings().tolerance, 1e-9)):
                raise NotOrthogonal(f"family members {i} and {j} are not orthogonal (inner product {inner})")


def bessel_improved(op: PCovOp, family: Sequence[Element], f: Element) -> BesselResult:
    """
    S_n = E((sum a_k Phi_k - f)^2) with a_k = E(f Phi_k) / E(Phi_k^2),
    R_n^2 = p E(z (sum a_k Phi_k - f))^2 / E(z^2) and V_n = S_n - R_n^2.

    holds reports the rearranged inequality
        E(z^2) E(f^2) - p E(fz)^2
            >= E(z^2) sum E(f Phi_k)^2 / E(Phi_k^2) + p T^2 - 2 p E(fz) T,
    T = sum E(f Phi_k) E(z Phi_k) / E(Phi_k^2).
    """
    if len(op.z) != 1:
        raise ConstraintViolation("the improved Bessel inequality uses a single fixed variable")
    space = op.space
    z, ez2 = op.z.members[0], op.z.norms[0]
    norms = [expect_product(space, phi, phi) for phi in family]
    _check_orthogonal(space, family, norms)

    fphi = [expect_product(space, f, phi) for phi in family]
    zphi = [expect_product(space, z, phi) for phi in family]
    coeffs = [a / nrm for a, nrm in zip(fphi, norms)]
    err = combine([(c, phi) for c, phi in zip(coeffs, family)] + [(-1, f)])

    s_n = expect_product(space, err, err)
    r_sq = op.p * expect_product(space, z, err) ** 2 / ez2
    v_n = s_n - r_sq

    efz = expect_product(space, f, z)
    t = sum((a * b / nrm for a, b, nrm in zip(fphi, zphi, norms)), Fraction(0))
    lhs = ez2 * expect_product(space, f, f) - op.p * efz ** 2
    rhs = ez2 * sum((a * a / nrm for a, nrm in zip(fphi, norms)), Fraction(0)) + op.p * t * t - 2 * op.p * efz * t
    slack = 0 if is_exact(lhs - rhs) else get_settings().tolerance * max(1.0, abs(float(lhs)))
    holds = lhs - rhs >= -slack
    if not is_exact(v_n) and -slack <= v_n < 0:
        v_n = 0.0
    return BesselResult(s_n, v_n, r_sq, bool(holds))


def parseval_p(op: PCovOp, basis: UncorrelatedBasis, f: Element, g: Element) -> Tuple:
    """cov_p(f, g) against sum_k cov_p(Phi_k, f) cov_p(Phi_k, g) / var_p(Phi_k)."""
    lhs = cov_p(op, f, g)
    rhs = Fraction(0)
    for phi, v in zip(basis.elements, basis.variances):
        if v == 0 or is_zero(v):
            raise ConstraintViolation("basis member with zero p-variance")
        rhs = rhs + cov_p(op, phi, f) * cov_p(op, phi, g) / v
    return lhs, rhs
