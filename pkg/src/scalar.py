"""
scalar.py
---------
Scalar plumbing for the two backends.

Rational values are `fractions.Fraction`, float values are Python floats.
Arithmetic between the two demotes to float, which is how irrational
constants (pi, square roots of non-squares) enter an otherwise exact
computation.
"""

from __future__ import annotations

import dataclasses
import math
import re
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
import sympy
from scipy import special

from errors import ConstraintViolation, DivergentMoment, PoleInLowerParams
from settings import get_settings

Scalar = Union[Fraction, float]

RATIONAL = "rational"
FLOAT = "float"

_RATIO = re.compile(r"^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$")
_DECIMAL = re.compile(r"^\s*[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*$")


def is_exact(value) -> bool:
    return isinstance(value, (Fraction, int)) and not isinstance(value, bool)


def all_exact(values: Iterable) -> bool:
    return all(is_exact(v) for v in values)


def check_finite(value: float) -> float:
    if not math.isfinite(value):
        raise ConstraintViolation(f"non-finite scalar: {value}")
    return value


def as_scalar(value, backend: str = RATIONAL) -> Scalar:
    """Coerce ints, floats, Fractions and strings ('3/7', '0.25') to a Scalar."""
    if isinstance(value, str):
        value = parse_number(value)
    if isinstance(value, bool):
        raise ConstraintViolation("booleans are not scalars")
    if backend == FLOAT:
        return check_finite(float(value))
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, (float, np.floating)):
        return check_finite(float(value))
    raise ConstraintViolation(f"cannot interpret {value!r} as a scalar")


def parse_number(text: str) -> Scalar:
    """
    Parse a numeric cell. 'p/q' and decimals with at most 15 significant
    digits become Fractions; anything else becomes a float.
    """
    m = _RATIO.match(text)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ConstraintViolation(f"zero denominator in '{text}'")
        return Fraction(int(m.group(1)), den)
    if _DECIMAL.match(text):
        mantissa = text.strip().lstrip("+-").split("e")[0].split("E")[0]
        digits = mantissa.replace(".", "").lstrip("0")
        if len(digits) <= 15:
            return Fraction(text.strip())
    try:
        return check_finite(float(text))
    except ValueError as exc:
        raise ConstraintViolation(f"not a number: '{text}'") from exc


def to_backend(value, backend: str) -> Scalar:
    if backend == FLOAT:
        return float(value)
    return value


def to_float(value) -> float:
    return float(value)


def fmt(value) -> str:
    """Canonical text form used in tables and JSON reports."""
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def value_types(value) -> Tuple:
    """
    Types of every scalar inside `value` (dataclass fields and tuples are
    walked). Fraction(1, 2) and 0.5 compare and hash equal, so caches keyed on
    values also key on this to keep the two backends apart.
    """
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return tuple(value_types(getattr(value, f.name)) for f in dataclasses.fields(value) if f.compare)
    if isinstance(value, (tuple, list)):
        return tuple(value_types(v) for v in value)
    return (type(value),)


def is_integer(value) -> bool:
    if isinstance(value, Fraction):
        return value.denominator == 1
    if isinstance(value, int):
        return True
    return float(value).is_integer()


def is_zero(value, scale=1, tol: float | None = None) -> bool:
    """Exact test for Fractions; relative test against `scale` for floats."""
    if is_exact(value):
        return value == 0
    if tol is None:
        tol = get_settings().tolerance
    return abs(float(value)) <= tol * max(abs(float(scale)), 1e-300)


def close(a, b, tol: float | None = None) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return is_zero(a - b, scale=max(abs(float(a)), abs(float(b)), 1.0), tol=tol)


# ---------------------------------------------------------------------
# Exact-when-possible elementary functions
# ---------------------------------------------------------------------
def _isqrt_exact(n: int):
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def sqrt(value) -> Scalar:
    """Square root; exact for squares of rationals, float otherwise."""
    if is_exact(value):
        value = Fraction(value)
        if value < 0:
            raise ConstraintViolation(f"square root of negative value {value}")
        num = _isqrt_exact(value.numerator)
        den = _isqrt_exact(value.denominator)
        if num is not None and den is not None:
            return Fraction(num, den)
    if float(value) < 0:
        raise ConstraintViolation(f"square root of negative value {value}")
    return math.sqrt(float(value))


def power(base, exponent) -> Scalar:
    """base**exponent, exact for rational base and integer exponent."""
    if is_exact(base) and is_exact(exponent) and is_integer(exponent):
        k = int(exponent)
        if base == 0 and k < 0:
            raise DivergentMoment("zero raised to a negative power")
        return Fraction(base) ** k
    if is_exact(base) and is_exact(exponent):
        exponent = Fraction(exponent)
        root = _exact_root(Fraction(base), exponent.denominator)
        if root is not None:
            return power(root, exponent.numerator)
    b = float(base)
    if b == 0.0 and float(exponent) < 0:
        raise DivergentMoment("zero raised to a negative power")
    return b ** float(exponent)


def _exact_root(value: Fraction, q: int):
    if value < 0:
        return None
    num, num_ok = sympy.integer_nthroot(value.numerator, q)
    den, den_ok = sympy.integer_nthroot(value.denominator, q)
    return Fraction(int(num), int(den)) if num_ok and den_ok else None


def pochhammer(a, k: int) -> Scalar:
    """(a)_k for any integer k; negative k uses (a)_{-k} = 1/((a-k)_k)."""
    if k >= 0:
        if is_exact(a):
            a = Fraction(a)
            value = sympy.rf(sympy.Rational(a.numerator, a.denominator), k)
            return Fraction(int(value.p), int(value.q))
        return float(special.poch(float(a), k))
    denom = pochhammer(a + k, -k)
    if denom == 0:
        raise PoleInLowerParams(f"({a})_{k} has a pole")
    return (Fraction(1) if is_exact(a) else 1.0) / denom


def factorial(n: int) -> Fraction:
    return Fraction(math.factorial(n))


def binomial(n: int, k: int) -> Fraction:
    return Fraction(math.comb(n, k))


def gamma_ratio(numer: Sequence, denom: Sequence) -> Scalar:
    """
    Prod Gamma(numer) / Prod Gamma(denom).

    Arguments whose differences are integers are paired into Pochhammer
    symbols, so the ratio stays exact whenever every gamma can be paired.
    The rest is evaluated with log-gamma and sign.
    """
    numer = list(numer)
    denom = list(denom)
    exact = Fraction(1)
    unpaired_num: List = []
    for u in numer:
        match = None
        if is_exact(u):
            for idx, d in enumerate(denom):
                if is_exact(d) and is_integer(u - d):
                    match = idx
                    break
        if match is None:
            unpaired_num.append(u)
            continue
        d = denom.pop(match)
        # Gamma(u)/Gamma(d) = (d)_{u-d}
        exact *= pochhammer(Fraction(d), int(u - d))

    for v in unpaired_num:
        if float(v) <= 0 and is_integer(v):
            raise DivergentMoment(f"gamma pole at {v}")
    if not unpaired_num and not denom:
        return exact
    if any(float(d) <= 0 and is_integer(d) for d in denom):
        return Fraction(0) if not unpaired_num else 0.0

    log_mag = sum(special.gammaln(float(u)) for u in unpaired_num) - sum(
        special.gammaln(float(d)) for d in denom
    )
    sign = np.prod([special.gammasgn(float(u)) for u in unpaired_num]) * np.prod(
        [special.gammasgn(float(d)) for d in denom]
    )
    return float(exact) * float(sign) * math.exp(log_mag)


def beta(a, b) -> Scalar:
    return gamma_ratio([a, b], [a + b])
