"""
pcov.py
-------
p-covariances relative to a fixed variable (or a family of mutually
orthogonal fixed variables):

    cov_p(X, Y; Z) = E(XY) - p * sum_k E(X Z_k) E(Y Z_k) / E(Z_k^2)

p = 0 gives the plain inner product, p = 1 removes the Z-projection
completely (ordinary covariance when Z is constant).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from elements import Element, combine
from errors import ConstraintViolation, DegenerateVariance, NegativeVariance
from expectation import ProbSpace, expect_product
from log_setup import get_logger
from scalar import as_scalar, is_exact, is_zero, sqrt
from settings import get_settings

logger = get_logger("pcov")


@dataclass(frozen=True)
class FixedVar:
    space: ProbSpace
    members: Tuple[Element, ...]
    norms: Tuple  # E(Z_k^2)

    def __len__(self):
        return len(self.members)


def fixed_var(space: ProbSpace, members: Union[Element, Sequence[Element]]) -> FixedVar:
    """Validate Z (or an orthogonal family Z_1..Z_m) against the space."""
    if isinstance(members, Element):
        members = [members]
    members = tuple(members)
    if not members:
        raise ConstraintViolation("the fixed variable needs at least one member")
    norms = tuple(expect_product(space, z, z) for z in members)
    for k, n in enumerate(norms):
        if n <= 0 or is_zero(n):
            raise ConstraintViolation(f"E(Z_{k}^2) must be positive, got {n}")
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            inner = expect_product(space, members[i], members[j])
            scale = float(sqrt(norms[i] * norms[j])) if not is_exact(norms[i] * norms[j]) else 1
            if not is_zero(inner, scale=scale):
                raise ConstraintViolation(f"fixed variables Z_{i} and Z_{j} are not orthogonal (E = {inner})")
    return FixedVar(space, members, norms)


@dataclass(frozen=True)
class PCovOp:
    space: ProbSpace
    z: FixedVar
    p: object

    def __post_init__(self):
        if not (0 <= self.p <= 1):
            raise ConstraintViolation(f"p must lie in [0, 1], got {self.p}")
        if self.z.space is not self.space:
            raise ConstraintViolation("fixed variable was built on a different space")

    def with_p(self, p) -> "PCovOp":
        return PCovOp(self.space, self.z, as_scalar(p) if not isinstance(p, float) else p)


def pcov_op(space: ProbSpace, z: Union[Element, Sequence[Element]], p) -> PCovOp:
    p = p if isinstance(p, float) else as_scalar(p)
    return PCovOp(space, fixed_var(space, z), p)


def z_moments(op: PCovOp, x: Element) -> List:
    """E(X Z_k) for every fixed member."""
    return [expect_product(op.space, x, z) for z in op.z.members]


def cov_p(op: PCovOp, x: Element, y: Element):
    exy = expect_product(op.space, x, y)
    if op.p == 0:
        return exy
    xs = z_moments(op, x)
    ys = xs if y is x else z_moments(op, y)
    correction = sum((a * b / n for a, b, n in zip(xs, ys, op.z.norms)), Fraction(0))
    return exy - op.p * correction


def var_p(op: PCovOp, x: Element):
    value = cov_p(op, x, x)
    if value >= 0:
        return value
    if is_exact(value):
        raise NegativeVariance(f"exact p-variance is negative ({value})")
    clamp = get_settings().var_clamp * max(1.0, abs(float(expect_product(op.space, x, x))))
    if value >= -clamp:
        logger.warning(f"clamping p-variance {value:.3e} to 0")
        return 0.0
    raise NegativeVariance(f"p-variance {value:.3e} is below the clamp threshold")


def _require_positive(op: PCovOp, x: Element, value, what: str = "X"):
    if value == 0 or is_zero(value, scale=abs(float(expect_product(op.space, x, x)))):
        raise DegenerateVariance(f"var_p({what}) vanishes")


def rho_p(op: PCovOp, x: Element, y: Element):
    vx, vy = var_p(op, x), var_p(op, y)
    _require_positive(op, x, vx, "X")
    _require_positive(op, y, vy, "Y")
    return cov_p(op, x, y) / sqrt(vx * vy)


def proj_onto(op: PCovOp, x: Element) -> Element:
    """sum_k (E(X Z_k) / E(Z_k^2)) Z_k."""
    return combine([(m / n, z) for m, n, z in zip(z_moments(op, x), op.z.norms, op.z.members)])


def shrink_factor(p):
    """1 - sqrt(1 - p), the share of the projection removed by N_p and G_j."""
    return 1 - sqrt(1 - p)


def normalize_p(op: PCovOp, x: Element) -> Element:
    """
    p-normal standard variable N_p(X; Z) = (X - (1 - sqrt(1 - p)) proj_Z X) / sqrt(var_p X).

    The scaling gives E(N_p^2) = 1. Only at p = 0 and p = 1 does that coincide
    with var_p(N_p) = 1; in between var_p(N_p) is smaller.
    """
    v = var_p(op, x)
    _require_positive(op, x, v)
    centred = combine([(1, x), (-shrink_factor(op.p), proj_onto(op, x))])
    s = sqrt(v)
    return centred.scaled(Fraction(1) / s if is_exact(s) else 1.0 / s)


def is_p_uncorrelated(op: PCovOp, x: Element, y: Element) -> bool:
    c = cov_p(op, x, y)
    if is_exact(c):
        return c == 0
    scale = sqrt(abs(float(expect_product(op.space, x, x))) * abs(float(expect_product(op.space, y, y))))
    return is_zero(c, scale=scale)


def cov_matrix(op: PCovOp, elements: Sequence[Element]) -> List[List]:
    """Symmetric matrix of cov_p(X_i, X_j)."""
    n = len(elements)
    exy = [[None] * n for _ in range(n)]
    zm = [z_moments(op, e) for e in elements]
    for i in range(n):
        for j in range(i, n):
            value = expect_product(op.space, elements[i], elements[j])
            if op.p != 0:
                value = value - op.p * sum(
                    (a * b / nz for a, b, nz in zip(zm[i], zm[j], op.z.norms)), Fraction(0)
                )
            exy[i][j] = exy[j][i] = value
    return exy


def var1_envelope_identity(op: PCovOp, x: Element, m_x, M_x) -> Tuple:
    """
    Both sides of

        var_1(X) = (M E(Z^2) - E(XZ)) (E(XZ) - m E(Z^2)) / E(Z^2)
                   - E((M Z - X)(X - m Z))

    for a single fixed variable Z.
    """
    if len(op.z) != 1:
        raise ConstraintViolation("the envelope identity needs a single fixed variable")
    z = op.z.members[0]
    ez2 = op.z.norms[0]
    exz = expect_product(op.space, x, z)
    lhs = var_p(op.with_p(1), x)
    upper = combine([(M_x, z), (-1, x)])
    lower = combine([(1, x), (-m_x, z)])
    rhs = (M_x * ez2 - exz) * (exz - m_x * ez2) / ez2 - expect_product(op.space, upper, lower)
    return lhs, rhs

