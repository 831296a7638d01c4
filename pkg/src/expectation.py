"""
expectation.py
--------------
Probability spaces and the normalized expectation operator.

Three kinds of space:

    ContinuousSpace   weight w on an interval (optionally times a factor q);
                      E[f] = int(q w f) / int(q w)
    DiscreteSpace     points x_k with positive masses j_k;
                      E[f] = sum(j f) / sum(j)
    VectorSpace       R^m with E[f] = (1/m) sum of components

Closed-form moments are used whenever the weight family provides them; the
rest falls back to Gauss-Jacobi / Gauss-Laguerre node doubling or adaptive
Gauss-Legendre.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from elements import Element, TermSum, combine, monomial, product
from errors import ConstraintViolation, DivergentMoment, IncompatibleRepr, InvalidBounds
from log_setup import get_logger
from scalar import as_scalar, binomial, gamma_ratio, is_integer, power, value_types
from settings import get_settings

logger = get_logger("expectation")


# ---------------------------------------------------------------------
# Weight families
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class Weight:
    lo: object
    hi: object

    has_gauss = False

    def moment(self, lam, mu):
        """Normalized E_w[x^lam (1-x)^mu], or None when no closed form exists."""
        return None

    def density(self, xs: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def gauss_rule(self, n: int):
        """(nodes, weights) of an n-point Gauss rule for this weight, or None."""
        return None

    def _expand_integer_mu(self, lam, mu, base):
        # (1-x)^mu = sum_j C(mu, j) (-1)^j x^j for integer mu >= 0
        total = Fraction(0)
        for j in range(int(mu) + 1):
            total = total + binomial(int(mu), j) * (-1) ** j * base(lam + j)
        return total


@dataclass(frozen=True)
class PowerBeta(Weight):
    """w(x) = x^a (1-x)^b on [0, 1]; a = b = 0 is the uniform weight."""

    has_gauss = True

    a: object = Fraction(0)
    b: object = Fraction(0)

    def moment(self, lam, mu):
        a, b = self.a, self.b
        if a + lam <= -1 or b + mu <= -1:
            raise DivergentMoment(
                f"E[x^{lam}(1-x)^{mu}] diverges under x^{a}(1-x)^{b}"
            )
        return gamma_ratio([a + lam + 1, b + mu + 1, a + b + 2], [a + 1, b + 1, a + b + lam + mu + 2])

    def density(self, xs):
        return np.power(xs, float(self.a)) * np.power(1.0 - xs, float(self.b))

    def gauss_rule(self, n):
        t, w = special.roots_jacobi(n, float(self.b), float(self.a))
        return (t + 1.0) / 2.0, w


@dataclass(frozen=True)
class Uniform(Weight):
    """w(x) = 1 on a finite interval [lo, hi] other than [0, 1]."""

    def moment(self, lam, mu):
        if not (is_integer(lam) and lam >= 0 and is_integer(mu) and mu >= 0):
            return None
        lo, hi = self.lo, self.hi

        def raw(k):
            k = int(k)
            return (power(hi, k + 1) - power(lo, k + 1)) / ((k + 1) * (hi - lo))

        return self._expand_integer_mu(lam, mu, raw)

    def density(self, xs):
        return np.ones_like(xs)


@dataclass(frozen=True)
class Jacobi(Weight):
    """w(x) = (1-x)^alpha (1+x)^beta on [-1, 1]."""

    has_gauss = True

    alpha: object = Fraction(0)
    beta: object = Fraction(0)

    def _one_minus_x(self, t):
        al, be = self.alpha, self.beta
        if al + t <= -1:
            raise DivergentMoment(f"E[(1-x)^{t}] diverges under Jacobi({al}, {be})")
        return power(2, t) * gamma_ratio([al + t + 1, al + be + 2], [al + 1, al + be + t + 2])

    def moment(self, lam, mu):
        if not (is_integer(lam) and lam >= 0):
            raise IncompatibleRepr(f"x^{lam} is not real on [-1, 1]")
        # x^k = sum_j C(k, j) (-1)^j (1-x)^j
        k = int(lam)
        total = Fraction(0)
        for j in range(k + 1):
            total = total + binomial(k, j) * (-1) ** j * self._one_minus_x(j + mu)
        return total

    def density(self, xs):
        return np.power(1.0 - xs, float(self.alpha)) * np.power(1.0 + xs, float(self.beta))

    def gauss_rule(self, n):
        return special.roots_jacobi(n, float(self.alpha), float(self.beta))


@dataclass(frozen=True)
class PowerGamma(Weight):
    """w(x) = x^a exp(-rate x) on [0, inf)."""

    has_gauss = True

    a: object = Fraction(0)
    rate: object = Fraction(1)

    def moment(self, lam, mu):
        if not (is_integer(mu) and mu >= 0):
            raise IncompatibleRepr(f"(1-x)^{mu} is not real on [0, inf)")

        def raw(k):
            if self.a + k <= -1:
                raise DivergentMoment(f"E[x^{k}] diverges under x^{self.a} exp(-{self.rate} x)")
            return gamma_ratio([self.a + k + 1], [self.a + 1]) / power(self.rate, k)

        return self._expand_integer_mu(lam, mu, raw)

    def density(self, xs):
        return np.power(xs, float(self.a)) * np.exp(-float(self.rate) * xs)

    def gauss_rule(self, n):
        t, w = special.roots_genlaguerre(n, float(self.a))
        return t / float(self.rate), w


@dataclass(frozen=True)
class Custom(Weight):
    fn: Callable = field(default=None, compare=False)
    label: str = "w(x)"

    def density(self, xs):
        return np.asarray(self.fn(xs), dtype=float)


@lru_cache(maxsize=65536)
def _typed_moment(weight: Weight, lam, mu, types: Tuple):
    return weight.moment(lam, mu)


def _cached_moment(weight: Weight, lam, mu):
    return _typed_moment(weight, lam, mu, value_types((weight, lam, mu)))


# ---------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------
def adaptive_gauss_legendre(g: Callable, lo: float, hi: float) -> float:
    """Adaptive Gauss-Legendre on a finite interval by panel bisection."""
    q = get_settings().quadrature
    nodes, weights = special.roots_legendre(q.order)

    def panel(a, b):
        half = (b - a) / 2.0
        return half * float(np.dot(weights, g(half * nodes + (a + b) / 2.0)))

    def panel_abs(a, b):
        half = (b - a) / 2.0
        return half * float(np.dot(weights, np.abs(g(half * nodes + (a + b) / 2.0))))

    scale = max(panel_abs(lo, hi), 1e-300)
    stack = [(lo, hi, panel(lo, hi))]
    total = 0.0
    panels = 1
    while stack:
        a, b, whole = stack.pop()
        mid = (a + b) / 2.0
        left, right = panel(a, mid), panel(mid, b)
        panels += 1
        if abs(left + right - whole) <= q.rel_tol * scale or panels >= q.max_panels:
            total += left + right
        else:
            stack.append((a, mid, left))
            stack.append((mid, b, right))
    if panels >= q.max_panels:
        logger.warning(f"adaptive quadrature hit the panel cap ({q.max_panels}) on [{lo}, {hi}]")
    return total


def _integrate(g: Callable, lo: float, hi: float) -> float:
    if math.isinf(hi):
        # x = lo - log(u), u in (0, 1]
        return adaptive_gauss_legendre(lambda u: g(lo - np.log(u)) / u, 0.0, 1.0)
    return adaptive_gauss_legendre(g, lo, hi)


def _gauss_doubling(weight: Weight, f: Callable):
    q = get_settings().quadrature
    n = q.order
    previous = None
    while n <= q.gauss_max_nodes:
        nodes, weights = weight.gauss_rule(n)
        estimate = float(np.dot(weights, f(nodes)) / np.sum(weights))
        if previous is not None and abs(estimate - previous) <= q.rel_tol * max(abs(estimate), 1e-300):
            return estimate
        previous = estimate
        n *= 2
    return None


def _is_uniform01(weight: Weight) -> bool:
    return isinstance(weight, PowerBeta) and weight.a == 0 and weight.b == 0


def numeric_expect(weight: Weight, f: Callable) -> float:
    """Normalized E_w[f] for a float-vectorised f."""
    if weight.has_gauss and not _is_uniform01(weight):
        estimate = _gauss_doubling(weight, f)
        if estimate is not None:
            return estimate
        logger.debug(f"Gauss rule for {weight} did not settle; switching to adaptive panels")
    lo, hi = float(weight.lo), float(weight.hi)
    num = _integrate(lambda xs: weight.density(xs) * f(xs), lo, hi)
    if isinstance(weight, Uniform) or _is_uniform01(weight):
        return num / (hi - lo)
    return num / _integrate(weight.density, lo, hi)


# ---------------------------------------------------------------------
# Spaces
# ---------------------------------------------------------------------
class ProbSpace:
    kind = "space"

    def expect(self, f: Element):
        raise NotImplementedError


class ContinuousSpace(ProbSpace):
    kind = "continuous"

    def __init__(self, weight: Weight, factor: Optional[TermSum] = None):
        self.weight = weight
        self.factor = factor
        self._mass = None
        if factor is not None:
            mass = self._base_expect(factor)
            if mass <= 0:
                raise ConstraintViolation(f"weight factor {factor.describe()} has non-positive mass")
            self._mass = mass

    def __repr__(self):
        extra = f" * [{self.factor.describe()}]" if self.factor is not None else ""
        return f"ContinuousSpace({self.weight}{extra})"

    @property
    def support(self) -> Tuple:
        return self.weight.lo, self.weight.hi

    def _base_expect(self, f: Element):
        if isinstance(f, TermSum):
            total = Fraction(0)
            leftover = []
            for (lam, mu), c in f.terms:
                m = _cached_moment(self.weight, lam, mu)
                if m is None:
                    leftover.append(((lam, mu), c))
                else:
                    total = total + c * m
            if leftover:
                rest = TermSum(leftover)
                logger.debug(f"no closed-form moment for {rest.describe()}; integrating numerically")
                total = total + numeric_expect(self.weight, rest.at_float)
            return total
        if f.kind == "combination":
            return sum((c * self._base_expect(e) for c, e in f.parts), Fraction(0))
        if f.kind in ("tabulated", "vector"):
            raise IncompatibleRepr(f"{f.kind} element used on a continuous space")
        return numeric_expect(self.weight, f.at_float)

    def expect(self, f: Element):
        if self.factor is None:
            return self._base_expect(f)
        return self._base_expect(product(self.factor, f)) / self._mass


class DiscreteSpace(ProbSpace):
    kind = "discrete"

    def __init__(self, points: Sequence, masses: Optional[Sequence] = None):
        self.points = tuple(points)
        self.masses = tuple(masses) if masses is not None else tuple(Fraction(1) for _ in self.points)
        if not self.points:
            raise ConstraintViolation("a discrete space needs at least one point")
        if len(self.masses) != len(self.points):
            raise ConstraintViolation("points and masses differ in length")
        if any(m <= 0 for m in self.masses):
            raise ConstraintViolation("masses must be positive")
        if len(set(self.points)) != len(self.points):
            raise ConstraintViolation("sample points must be pairwise distinct")
        self._total = sum(self.masses, Fraction(0))

    def __repr__(self):
        return f"DiscreteSpace(n={len(self.points)})"

    @property
    def support(self) -> Tuple:
        return min(self.points), max(self.points)

    def __len__(self):
        return len(self.points)

    def expect(self, f: Element):
        values = f.values_on(self.points, len(self.points))
        return sum((m * v for m, v in zip(self.masses, values)), Fraction(0)) / self._total


class VectorSpace(ProbSpace):
    kind = "vectors"

    def __init__(self, dimension: int):
        if dimension < 1:
            raise ConstraintViolation("vector dimension must be positive")
        self.dimension = dimension

    def __repr__(self):
        return f"VectorSpace(m={self.dimension})"

    def expect(self, f: Element):
        values = f.values_on(None, self.dimension)
        return sum(values, Fraction(0)) / self.dimension


# ---------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------
def _check_factor(factor):
    if factor is not None and not isinstance(factor, TermSum):
        raise ConstraintViolation("weight factors must be TermSum elements")
    return factor


def uniform(lo=0, hi=1, factor: Optional[TermSum] = None) -> ContinuousSpace:
    lo, hi = as_scalar(lo), as_scalar(hi)
    if not lo < hi or math.isinf(float(hi)) or math.isinf(float(lo)):
        raise InvalidBounds(f"uniform weight needs a finite interval with lo < hi, got [{lo}, {hi}]")
    if lo == 0 and hi == 1:
        return ContinuousSpace(PowerBeta(Fraction(0), Fraction(1), Fraction(0), Fraction(0)), _check_factor(factor))
    return ContinuousSpace(Uniform(lo, hi), _check_factor(factor))


def power_beta(a, b=0, factor: Optional[TermSum] = None) -> ContinuousSpace:
    a, b = as_scalar(a), as_scalar(b)
    if a <= -1 or b <= -1:
        raise ConstraintViolation(f"power-beta exponents must exceed -1, got ({a}, {b})")
    return ContinuousSpace(PowerBeta(Fraction(0), Fraction(1), a, b), _check_factor(factor))


def power_gamma(a, rate=1, factor: Optional[TermSum] = None) -> ContinuousSpace:
    a, rate = as_scalar(a), as_scalar(rate)
    if a <= -1 or rate <= 0:
        raise ConstraintViolation(f"power-gamma needs a > -1 and rate > 0, got ({a}, {rate})")
    return ContinuousSpace(PowerGamma(Fraction(0), math.inf, a, rate), _check_factor(factor))


def jacobi(alpha, beta, factor: Optional[TermSum] = None) -> ContinuousSpace:
    alpha, beta = as_scalar(alpha), as_scalar(beta)
    if alpha <= -1 or beta <= -1:
        raise ConstraintViolation(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")
    return ContinuousSpace(Jacobi(Fraction(-1), Fraction(1), alpha, beta), _check_factor(factor))


CHEBYSHEV_PARAMS = {
    1: (Fraction(-1, 2), Fraction(-1, 2)),
    2: (Fraction(1, 2), Fraction(1, 2)),
    3: (Fraction(-1, 2), Fraction(1, 2)),
    4: (Fraction(1, 2), Fraction(-1, 2)),
}


def chebyshev(kind: int, factor: Optional[TermSum] = None) -> ContinuousSpace:
    if kind not in CHEBYSHEV_PARAMS:
        raise ConstraintViolation(f"Chebyshev kind must be 1..4, got {kind}")
    return jacobi(*CHEBYSHEV_PARAMS[kind], factor=factor)


def custom(fn: Callable, lo, hi, label: str = "w(x)", factor: Optional[TermSum] = None) -> ContinuousSpace:
    lo, hi = as_scalar(lo), as_scalar(hi)
    if not lo < hi:
        raise InvalidBounds(f"custom weight needs lo < hi, got [{lo}, {hi}]")
    return ContinuousSpace(Custom(lo, hi, fn, label), _check_factor(factor))


def discrete(points: Sequence, masses: Optional[Sequence] = None) -> DiscreteSpace:
    return DiscreteSpace([as_scalar(p) for p in points], None if masses is None else [as_scalar(m) for m in masses])


def vectors(dimension: int) -> VectorSpace:
    return VectorSpace(dimension)


# ---------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------
def expect(space: ProbSpace, f: Element):
    """Normalized expectation E[f]."""
    return space.expect(f)


def expect_product(space: ProbSpace, f: Element, g: Element):
    return space.expect(product(f, g))


def moment_kz(space: ProbSpace, k: int, z: Element):
    """E[x^k z(x)]."""
    if k < 0:
        raise ConstraintViolation(f"moment index must be non-negative, got {k}")
    return space.expect(product(monomial(k), z))


def linear_expect(space: ProbSpace, pairs: Sequence[Tuple[object, Element]]):
    return space.expect(combine(pairs))
