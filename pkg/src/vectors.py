"""
vectors.py
----------
The Euclidean instantiation: p-uncorrelated vectors in R^m relative to a
fixed vector Z, their orthogonal companions, and the p = 1 collapse check
for square systems.
"""

from __future__ import annotations

from typing import List, NamedTuple, Sequence

from elements import Vector
from errors import ConstraintViolation
from expectation import vectors
from linalg import det, transpose
from pcov import pcov_op
from scalar import as_scalar, is_exact, is_zero
from uncorrelate import UncorrelatedBasis, gram_schmidt_p, orthogonal_companion


class ConjectureCheck(NamedTuple):
    observed: Vector
    predicted: Vector
    parallel: bool


def vector_basis(vs: Sequence[Sequence], z: Sequence, p, strict: bool = True) -> UncorrelatedBasis:
    z = [as_scalar(c) for c in z]
    space = vectors(len(z))
    op = pcov_op(space, Vector(z), p)
    sources = [Vector(as_scalar(c) for c in v) for v in vs]
    return gram_schmidt_p(op, sources, strict=strict)


def vector_companions(basis: UncorrelatedBasis) -> List[Vector]:
    return orthogonal_companion(basis.op, basis)


def vector_conjecture_check(vs: Sequence[Sequence], z: Sequence) -> ConjectureCheck:
    """
    For m = n + 1 sources in R^m, compare X_n at p = 1 with

        det(V_0..V_n) / det(V_0..V_{n-1}, Z) * Z
    """
    m = len(z)
    if len(vs) != m:
        raise ConstraintViolation(f"need exactly {m} sources in R^{m}, got {len(vs)}")
    basis = vector_basis(vs, z, 1, strict=False)
    observed = basis.elements[-1]

    cols = [[as_scalar(c) for c in v] for v in vs]
    z = [as_scalar(c) for c in z]
    num = det(transpose(cols))
    den = det(transpose(cols[:-1] + [z]))
    if den == 0 or is_zero(den):
        raise ConstraintViolation("Z lies in the span of V_0..V_{n-1}")
    ratio = num / den
    predicted = Vector(ratio * c for c in z)

    diff = [a - b for a, b in zip(observed.values, predicted.values)]
    if all(is_exact(d) for d in diff):
        parallel = all(d == 0 for d in diff)
    else:
        scale = max(max(abs(float(c)) for c in predicted.values), 1.0)
        parallel = all(is_zero(d, scale=scale) for d in diff)
    return ConjectureCheck(observed, predicted, parallel)
