"""
polyalg.py
----------
Dense polynomial arithmetic on ascending coefficient lists.

Coefficients may be Fractions or floats. When every input is exact the work
is done by `sympy.Poly` over QQ and Fractions come back; as soon as a float
is involved the `numpy.polynomial.polynomial` routines take over and Python
floats come back. Every routine returns a trimmed list (no trailing zeros,
the zero polynomial is []).
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np
import sympy
from numpy.polynomial import polynomial as P

from scalar import all_exact, is_exact

Coeffs = List

_X = sympy.Symbol("x")


def _rational(value) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _to_poly(coeffs: Sequence) -> sympy.Poly:
    return sympy.Poly.from_list([_rational(c) for c in reversed(list(coeffs))] or [0], _X, domain=sympy.QQ)


def _from_poly(p: sympy.Poly) -> Coeffs:
    return trim([_fraction(c) for c in reversed(p.all_coeffs())])


def _to_array(coeffs: Sequence) -> np.ndarray:
    return np.array([float(c) for c in coeffs] or [0.0])


def _from_array(arr) -> Coeffs:
    return trim([float(c) for c in np.atleast_1d(arr)])


def _exact(*seqs) -> bool:
    return all(all_exact(s) for s in seqs)


def trim(coeffs: Sequence) -> Coeffs:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(coeffs: Sequence) -> int:
    return len(trim(coeffs)) - 1


def add(a: Sequence, b: Sequence) -> Coeffs:
    if _exact(a, b):
        return _from_poly(_to_poly(a) + _to_poly(b))
    return _from_array(P.polyadd(_to_array(a), _to_array(b)))


def scale(a: Sequence, s) -> Coeffs:
    if _exact(a) and is_exact(s):
        return _from_poly(_to_poly(a).mul_ground(_rational(s)))
    return _from_array(_to_array(a) * float(s))


def sub(a: Sequence, b: Sequence) -> Coeffs:
    if _exact(a, b):
        return _from_poly(_to_poly(a) - _to_poly(b))
    return _from_array(P.polysub(_to_array(a), _to_array(b)))


def mul(a: Sequence, b: Sequence) -> Coeffs:
    if not a or not b:
        return []
    if _exact(a, b):
        return _from_poly(_to_poly(a) * _to_poly(b))
    return _from_array(P.polymul(_to_array(a), _to_array(b)))


def mul_x(a: Sequence) -> Coeffs:
    if not a:
        return []
    if _exact(a):
        return _from_poly(_to_poly(a) * sympy.Poly(_X, _X, domain=sympy.QQ))
    return _from_array(P.polymulx(_to_array(a)))


def horner(coeffs: Sequence, x):
    if _exact(coeffs) and is_exact(x):
        return _fraction(_to_poly(coeffs).eval(_rational(x)))
    return float(P.polyval(float(x), _to_array(coeffs)))


def deriv(coeffs: Sequence) -> Coeffs:
    if _exact(coeffs):
        return _from_poly(_to_poly(coeffs).diff(_X))
    return _from_array(P.polyder(_to_array(coeffs)))


def from_roots(roots: Sequence, leading=1) -> Coeffs:
    if _exact(roots) and is_exact(leading):
        out = sympy.Poly(_rational(leading), _X, domain=sympy.QQ)
        for r in roots:
            out = out * _to_poly([-r, 1])
        return _from_poly(out)
    return _from_array(P.polyfromroots([float(r) for r in roots]) * float(leading))


def affine_compose(coeffs: Sequence, shift, slope) -> Coeffs:
    """Coefficients of c(shift + slope*x)."""
    if _exact(coeffs) and is_exact(shift) and is_exact(slope):
        return _from_poly(_to_poly(coeffs).compose(_to_poly([shift, slope])))
    out = np.zeros(1)
    for c in reversed(list(coeffs)):
        out = P.polyadd(P.polymul(out, [float(shift), float(slope)]), [float(c)])
    return _from_array(out)


def synthetic_division(coeffs: Sequence, lam) -> Tuple[Coeffs, object]:
    """Divide by (x - lam); returns (quotient, remainder = c(lam))."""
    coeffs = trim(coeffs)
    if not coeffs:
        return [], Fraction(0) if is_exact(lam) else 0.0
    if _exact(coeffs) and is_exact(lam):
        quotient, remainder = _to_poly(coeffs).div(_to_poly([-lam, 1]))
        return _from_poly(quotient), _fraction(remainder.as_expr())
    quotient, remainder = P.polydiv(_to_array(coeffs), np.array([-float(lam), 1.0]))
    return _from_array(quotient), float(remainder[0])


def leading(coeffs: Sequence):
    coeffs = trim(coeffs)
    if not coeffs:
        return Fraction(0)
    if _exact(coeffs):
        return _fraction(_to_poly(coeffs).LC())
    return coeffs[-1]
