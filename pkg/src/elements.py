"""
elements.py
-----------
Random elements: the things expectations, covariances and bases are built from.

    TermSum          finite sum of c * x^lam * (1-x)^mu, covers polynomials,
                     powers x^lam and products x^lam (1-x)^mu; closed under *
    Tabulated        values aligned with the points of a discrete space
    Vector           components of an element of R^m
    FunctionElement  numeric callable (numpy-vectorised)
    Combination      linear combination of elements of mixed kinds
    Product          pointwise product that has no closed representation

All elements are immutable. `combine` and `product` collapse results to the
simplest representation available.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

import polyalg
from errors import IncompatibleRepr
from scalar import as_scalar, fmt, is_exact, is_integer, power


class Element:
    kind = "element"

    # ----- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Element):
            return combine([(1, self), (1, other)])
        return combine([(1, self), (1, constant(other))])

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Element):
            return combine([(1, self), (-1, other)])
        return combine([(1, self), (-1, constant(other))])

    def __rsub__(self, other):
        return combine([(1, constant(other)), (-1, self)])

    def __neg__(self):
        return self.scaled(-1)

    def __mul__(self, other):
        if isinstance(other, Element):
            return product(self, other)
        return self.scaled(other)

    def __rmul__(self, other):
        return self.scaled(other)

    def __truediv__(self, other):
        return self.scaled(1 / other if not is_exact(other) else Fraction(1) / other)

    # ----- interface -----------------------------------------------------
    def scaled(self, s) -> "Element":
        raise NotImplementedError

    def at(self, x):
        """Point value, exact when the element and x allow it."""
        raise IncompatibleRepr(f"{self.kind} has no pointwise form")

    def at_float(self, xs: np.ndarray) -> np.ndarray:
        raise IncompatibleRepr(f"{self.kind} cannot be integrated over an interval")

    def values_on(self, points: Optional[Sequence], size: int) -> List:
        """Values at the sample points of a discrete (or vector) space."""
        if points is None:
            raise IncompatibleRepr(f"{self.kind} is not a vector")
        return [self.at(x) for x in points]

    def describe(self) -> str:
        return self.kind


# ---------------------------------------------------------------------
# TermSum
# ---------------------------------------------------------------------
def _key(value):
    return Fraction(value) if is_exact(value) else float(value)


class TermSum(Element):
    kind = "termsum"

    def __init__(self, terms: Iterable[Tuple[Tuple, object]] = ()):
        merged: Dict[Tuple, object] = {}
        for (lam, mu), c in terms:
            k = (_key(lam), _key(mu))
            merged[k] = merged.get(k, 0) + c
        self.terms: Tuple = tuple(
            sorted(((k, c) for k, c in merged.items() if c != 0), key=lambda t: (float(t[0][1]), float(t[0][0])))
        )

    def __eq__(self, other):
        return isinstance(other, TermSum) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"TermSum({self.describe()})"

    def scaled(self, s) -> "TermSum":
        return TermSum(((k, c * s) for k, c in self.terms))

    def plus(self, other: "TermSum") -> "TermSum":
        return TermSum(self.terms + other.terms)

    def times(self, other: "TermSum") -> "TermSum":
        return TermSum(
            ((l1 + l2, m1 + m2), c1 * c2) for (l1, m1), c1 in self.terms for (l2, m2), c2 in other.terms
        )

    def mul_x(self) -> "TermSum":
        return TermSum(((lam + 1, mu), c) for (lam, mu), c in self.terms)

    @property
    def is_polynomial(self) -> bool:
        return all(mu == 0 and is_integer(lam) and lam >= 0 for (lam, mu), _ in self.terms)

    @property
    def is_constant(self) -> bool:
        return all(lam == 0 and mu == 0 for (lam, mu), _ in self.terms)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) and is_exact(lam) and is_exact(mu) for (lam, mu), c in self.terms)

    def coeffs(self) -> List:
        """Ascending monomial coefficients; only defined for polynomials."""
        if not self.is_polynomial:
            raise IncompatibleRepr(f"{self.describe()} is not a polynomial")
        if not self.terms:
            return []
        out = [Fraction(0)] * (int(max(lam for (lam, _), _ in self.terms)) + 1)
        for (lam, _), c in self.terms:
            out[int(lam)] = c
        return polyalg.trim(out)

    @property
    def degree(self) -> int:
        return polyalg.degree(self.coeffs())

    def coefficient(self, lam, mu=0):
        return dict(self.terms).get((_key(lam), _key(mu)), Fraction(0))

    def at(self, x):
        total = Fraction(0)
        for (lam, mu), c in self.terms:
            value = c
            if lam != 0:
                value = value * power(x, lam)
            if mu != 0:
                value = value * power(1 - x, mu)
            total = total + value
        return total

    def at_float(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        out = np.zeros_like(xs)
        with np.errstate(divide="ignore", invalid="ignore"):
            for (lam, mu), c in self.terms:
                term = np.full_like(xs, float(c))
                if lam != 0:
                    term = term * np.power(xs, float(lam))
                if mu != 0:
                    term = term * np.power(1.0 - xs, float(mu))
                out = out + term
        return out

    def values_on(self, points, size):
        if points is None:
            if not self.is_constant:
                raise IncompatibleRepr(f"{self.describe()} is not a vector")
            return [self.at(0)] * size
        return [self.at(x) for x in points]

    def describe(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (lam, mu), c in self.terms:
            factors = [] if (c == 1 and (lam != 0 or mu != 0)) else [fmt(c)]
            if lam != 0:
                factors.append("x" if lam == 1 else f"x^({fmt(lam)})")
            if mu != 0:
                factors.append("(1-x)" if mu == 1 else f"(1-x)^({fmt(mu)})")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def to_json(self) -> List[List[str]]:
        return [[fmt(lam), fmt(mu), fmt(c)] for (lam, mu), c in self.terms]

    @classmethod
    def from_json(cls, rows: Sequence[Sequence[str]]) -> "TermSum":
        return cls(((as_scalar(lam), as_scalar(mu)), as_scalar(c)) for lam, mu, c in rows)


def poly(coeffs: Sequence) -> TermSum:
    """Polynomial from ascending monomial coefficients."""
    return TermSum(((k, 0), c) for k, c in enumerate(coeffs))


def monomial(k: int) -> TermSum:
    return TermSum([((k, 0), Fraction(1))])


def power_term(lam, mu=0, coeff=Fraction(1)) -> TermSum:
    """coeff * x^lam * (1-x)^mu."""
    return TermSum([((lam, mu), coeff)])


def constant(c) -> TermSum:
    return TermSum([((0, 0), c if not isinstance(c, int) else Fraction(c))])


def monomials(n: int) -> List[TermSum]:
    return [monomial(k) for k in range(n + 1)]


# ---------------------------------------------------------------------
# Sampled elements
# ---------------------------------------------------------------------
class _Sampled(Element):
    def __init__(self, values: Sequence):
        self.values = tuple(values)

    def __eq__(self, other):
        return type(self) is type(other) and self.values == other.values

    def __hash__(self):
        return hash((self.kind, self.values))

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(fmt(v) for v in self.values)})"

    def scaled(self, s):
        return type(self)(v * s for v in self.values)

    def plus(self, other):
        if len(other) != len(self):
            raise IncompatibleRepr(f"{self.kind} lengths differ: {len(self)} vs {len(other)}")
        return type(self)(a + b for a, b in zip(self.values, other.values))

    def times(self, other):
        if len(other) != len(self):
            raise IncompatibleRepr(f"{self.kind} lengths differ: {len(self)} vs {len(other)}")
        return type(self)(a * b for a, b in zip(self.values, other.values))

    def values_on(self, points, size):
        if len(self.values) != size:
            raise IncompatibleRepr(f"{self.kind} has {len(self.values)} values, space has {size}")
        return list(self.values)

    def describe(self) -> str:
        return "(" + ", ".join(fmt(v) for v in self.values) + ")"


class Tabulated(_Sampled):
    kind = "tabulated"


class Vector(_Sampled):
    kind = "vector"

    def values_on(self, points, size):
        if points is not None:
            raise IncompatibleRepr("vectors live in a Euclidean space, not on sample points")
        return super().values_on(points, size)


# ---------------------------------------------------------------------
# Numeric callables and unevaluated combinations
# ---------------------------------------------------------------------
class FunctionElement(Element):
    kind = "function"

    def __init__(self, fn: Callable, label: str = "f(x)"):
        self.fn = fn
        self.label = label

    def __repr__(self):
        return f"FunctionElement({self.label})"

    def scaled(self, s):
        return combine([(s, self)])

    def at(self, x):
        return float(self.fn(float(x)))

    def at_float(self, xs):
        xs = np.asarray(xs, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.broadcast_to(np.asarray(self.fn(xs), dtype=float), xs.shape)

    def describe(self) -> str:
        return self.label


class Combination(Element):
    kind = "combination"

    def __init__(self, parts: Sequence[Tuple[object, Element]]):
        self.parts = tuple(parts)

    def __repr__(self):
        return f"Combination({self.describe()})"

    def scaled(self, s):
        return combine([(c * s, e) for c, e in self.parts])

    def at(self, x):
        return sum((c * e.at(x) for c, e in self.parts), Fraction(0))

    def at_float(self, xs):
        return sum(float(c) * e.at_float(xs) for c, e in self.parts)

    def values_on(self, points, size):
        out = [Fraction(0)] * size
        for c, e in self.parts:
            out = [o + c * v for o, v in zip(out, e.values_on(points, size))]
        return out

    def describe(self) -> str:
        return " + ".join(f"{fmt(c)}*[{e.describe()}]" for c, e in self.parts)


class Product(Element):
    kind = "product"

    def __init__(self, left: Element, right: Element):
        self.left = left
        self.right = right

    def __repr__(self):
        return f"Product({self.describe()})"

    def scaled(self, s):
        return combine([(s, self)])

    def at(self, x):
        return self.left.at(x) * self.right.at(x)

    def at_float(self, xs):
        return self.left.at_float(xs) * self.right.at_float(xs)

    def values_on(self, points, size):
        return [a * b for a, b in zip(self.left.values_on(points, size), self.right.values_on(points, size))]

    def describe(self) -> str:
        return f"[{self.left.describe()}]*[{self.right.describe()}]"


# ---------------------------------------------------------------------
# Collapsing helpers
# ---------------------------------------------------------------------
def combine(pairs: Iterable[Tuple[object, Element]]) -> Element:
    """Linear combination, merged by representation where possible."""
    flat: List[Tuple[object, Element]] = []
    for c, e in pairs:
        if isinstance(e, Combination):
            flat.extend((c * c2, e2) for c2, e2 in e.parts)
        else:
            flat.append((c, e))

    merged: Dict[type, Element] = {}
    others: List[Tuple[object, Element]] = []
    for c, e in flat:
        if isinstance(e, (TermSum, Tabulated, Vector)):
            scaled = e.scaled(c)
            merged[type(e)] = merged[type(e)].plus(scaled) if type(e) in merged else scaled
        elif c != 0:
            others.append((c, e))

    parts = [(Fraction(1), e) for e in merged.values()] + others
    if len(parts) == 1 and parts[0][0] == 1:
        return parts[0][1]
    if not parts:
        return TermSum()
    return Combination(parts)


def product(left: Element, right: Element) -> Element:
    if isinstance(left, Combination):
        return combine([(c, product(e, right)) for c, e in left.parts])
    if isinstance(right, Combination):
        return combine([(c, product(left, e)) for c, e in right.parts])
    if type(left) is type(right) and isinstance(left, (TermSum, Tabulated, Vector)):
        return left.times(right)
    if isinstance(left, Vector) or isinstance(right, Vector):
        if isinstance(left, TermSum) and left.is_constant:
            return right.scaled(left.at(0))
        if isinstance(right, TermSum) and right.is_constant:
            return left.scaled(right.at(0))
        raise IncompatibleRepr(f"cannot multiply {left.kind} by {right.kind}")
    return Product(left, right)
