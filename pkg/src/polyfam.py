"""
polyfam.py
----------
Closed-form p-uncorrelated polynomial families at p = 1.

Every family is produced from one of two sources:

* a terminating hypergeometric series (the beta families), evaluated
  coefficient by coefficient with HypTerminating;
* a classical monic orthogonal family P_n with three-term recurrence
  P_{n+1} = (x - b_n) P_n - c_n P_{n-1}, divided at a point lam:

      Q_n(x; lam) = (P_{n+1}(x) - P_{n+1}(lam)) / (x - lam)

  which is uncorrelated under w(x) (x - lam)^2 with Z = 1 / (x - lam).

family_space() returns the p-covariance operator a family is uncorrelated
under, so any member can be cross-checked against gram_schmidt_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from elements import FunctionElement, TermSum, constant, poly, power_term
from errors import ConstraintViolation, PoleInLowerParams
from expectation import CHEBYSHEV_PARAMS, jacobi, power_beta, power_gamma, uniform
from log_setup import get_logger
from pcov import PCovOp, cov_matrix, pcov_op
from polyalg import add, affine_compose, deriv, horner, mul_x, scale, sub, synthetic_division, trim
from scalar import (
    as_scalar,
    close,
    factorial,
    fmt,
    gamma_ratio,
    is_exact,
    is_integer,
    pochhammer,
    power,
    value_types,
)

logger = get_logger("polyfam")


def _num(value):
    return value if isinstance(value, float) else as_scalar(value)


def _one(like):
    return Fraction(1) if is_exact(like) else 1.0


# ---------------------------------------------------------------------
# Terminating hypergeometric series
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class HypTerminating:
    """
    pFq(upper; lower | x) with at least one non-positive integer upper
    parameter, so the series is a polynomial of degree `degree`.
    """

    upper: Tuple
    lower: Tuple

    def __post_init__(self):
        stops = [-int(a) for a in self.upper if is_integer(a) and a <= 0]
        if self.upper and not stops:
            raise ConstraintViolation("series does not terminate: no non-positive integer upper parameter")

    @property
    def degree(self) -> int:
        return min((-int(a) for a in self.upper if is_integer(a) and a <= 0), default=0)


def hyp(upper: Sequence, lower: Sequence) -> HypTerminating:
    return HypTerminating(tuple(_num(a) for a in upper), tuple(_num(b) for b in lower))


def hyp_coeffs(h: HypTerminating) -> List:
    """Ascending coefficients u_k = prod (a)_k / (prod (b)_k k!)."""
    u = Fraction(1) if all(is_exact(v) for v in h.upper + h.lower) else 1.0
    out = [u]
    for k in range(h.degree):
        den = math.prod(b + k for b in h.lower) if h.lower else 1
        if den == 0:
            raise PoleInLowerParams(f"lower parameter vanishes at term {k + 1} of a degree-{h.degree} series")
        u = u * math.prod(a + k for a in h.upper) / (den * (k + 1))
        out.append(u)
    return out


def hyp_eval(h: HypTerminating, x):
    return horner(hyp_coeffs(h), x)


# ---------------------------------------------------------------------
# Family descriptors
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class FamilyDescriptor:
    family: str
    params: Tuple[Tuple[str, object], ...]

    def __getitem__(self, name):
        return dict(self.params)[name]

    def describe(self) -> str:
        inner = ", ".join(f"{k}={fmt(v)}" for k, v in self.params)
        return f"{self.family}({inner})"


def beta_unified(a, c) -> FamilyDescriptor:
    """Uncorrelated under w = x^a on [0, 1] with Z = x^(c-a)."""
    a, c = _num(a), _num(c)
    if a <= -1 or c <= -1:
        raise ConstraintViolation(f"beta_unified needs a, c > -1, got ({fmt(a)}, {fmt(c)})")
    if a == c:
        raise ConstraintViolation("beta_unified needs a != c (Z would be constant)")
    if 2 * c - a + 1 <= 0:
        raise ConstraintViolation(f"beta_unified needs 2c - a + 1 > 0, got {fmt(2 * c - a + 1)}")
    return FamilyDescriptor("beta_unified", (("a", a), ("c", c)))


def beta_power(r) -> FamilyDescriptor:
    """Uniform weight on [0, 1], Z = x^r."""
    r = _num(r)
    if r <= Fraction(-1, 2) or r == 0:
        raise ConstraintViolation(f"beta_power needs r > -1/2 and r != 0, got {fmt(r)}")
    return FamilyDescriptor("beta_power", (("r", r),))


def beta_ordinary(r) -> FamilyDescriptor:
    """x^r Q_n(x): ordinary covariances (Z = 1) under the uniform weight."""
    r = _num(r)
    if r <= Fraction(-1, 2) or r == 0:
        raise ConstraintViolation(f"beta_ordinary needs r > -1/2 and r != 0, got {fmt(r)}")
    return FamilyDescriptor("beta_ordinary", (("r", r),))


def jacobi_divided(alpha, beta, endpoint=1) -> FamilyDescriptor:
    alpha, beta = _num(alpha), _num(beta)
    if alpha <= -1 or beta <= -1:
        raise ConstraintViolation(f"jacobi_divided needs alpha, beta > -1, got ({fmt(alpha)}, {fmt(beta)})")
    if endpoint not in (1, -1):
        raise ConstraintViolation(f"jacobi_divided divides at +1 or -1, got {endpoint}")
    return FamilyDescriptor("jacobi_divided", (("alpha", alpha), ("beta", beta), ("endpoint", endpoint)))


def chebyshev_divided(kind: int, endpoint=1) -> FamilyDescriptor:
    if kind not in CHEBYSHEV_PARAMS:
        raise ConstraintViolation(f"Chebyshev kind must be 1..4, got {kind}")
    if endpoint not in (1, -1):
        raise ConstraintViolation(f"chebyshev_divided divides at +1 or -1, got {endpoint}")
    return FamilyDescriptor("chebyshev_divided", (("kind", kind), ("endpoint", endpoint)))


def laguerre_divided(alpha) -> FamilyDescriptor:
    alpha = _num(alpha)
    if alpha <= -1:
        raise ConstraintViolation(f"laguerre_divided needs alpha > -1, got {fmt(alpha)}")
    return FamilyDescriptor("laguerre_divided", (("alpha", alpha),))


def chebyshev_shift(lam) -> FamilyDescriptor:
    """(T_{n+1}(x) - T_{n+1}(lam)) / (x - lam), lam in [-1, 1]."""
    lam = _num(lam)
    if not -1 <= lam <= 1:
        raise ConstraintViolation(f"chebyshev_shift needs lam in [-1, 1], got {fmt(lam)}")
    return FamilyDescriptor("chebyshev_shift", (("lam", lam),))


FAMILIES = {
    "beta_unified": beta_unified,
    "beta_power": beta_power,
    "beta_ordinary": beta_ordinary,
    "jacobi_divided": jacobi_divided,
    "chebyshev_divided": chebyshev_divided,
    "laguerre_divided": laguerre_divided,
    "chebyshev_shift": chebyshev_shift,
}


# ---------------------------------------------------------------------
# Classical monic families and their divided differences
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class ClassicalBase:
    """Monic Jacobi (on [-1, 1]) or Laguerre (on [0, inf)) polynomials."""

    name: str
    alpha: object
    beta: object = Fraction(0)

    def b(self, n: int):
        al, be = self.alpha, self.beta
        if self.name == "laguerre":
            return 2 * n + al + 1
        if n == 0:
            return (be - al) / (al + be + 2)
        s = 2 * n + al + be
        return (be * be - al * al) / (s * (s + 2))

    def c(self, n: int):
        al, be = self.alpha, self.beta
        if n <= 0:
            return Fraction(0)
        if self.name == "laguerre":
            return n * (n + al)
        if n == 1:
            return 4 * (1 + al) * (1 + be) / ((al + be + 2) ** 2 * (al + be + 3))
        s = 2 * n + al + be
        return 4 * n * (n + al) * (n + be) * (n + al + be) / (s * s * (s + 1) * (s - 1))

    def monic(self, n: int) -> List:
        return list(_monic_table(self, n, value_types(self))[n])

    def norm_product(self, n: int):
        """prod_{j=1}^{n} c_j, the normalized squared norm of P_n."""
        return math.prod((self.c(j) for j in range(1, n + 1)), start=_one(self.alpha))


@lru_cache(maxsize=256)
def _monic_table(base: ClassicalBase, n: int, types: Tuple) -> Tuple[Tuple, ...]:
    rows = [[Fraction(1)], sub(mul_x([Fraction(1)]), [base.b(0)])]
    for k in range(1, n):
        nxt = sub(sub(mul_x(rows[k]), scale(rows[k], base.b(k))), scale(rows[k - 1], base.c(k)))
        rows.append(trim(nxt))
    return tuple(tuple(r) for r in rows[: n + 1])


def jacobi_base(alpha, beta) -> ClassicalBase:
    return ClassicalBase("jacobi", _num(alpha), _num(beta))


def laguerre_base(alpha) -> ClassicalBase:
    return ClassicalBase("laguerre", _num(alpha))


@dataclass(frozen=True)
class DividedFamily:
    base: ClassicalBase
    lam: object

    def poly(self, n: int) -> List:
        """Q_n by synthetic division of P_{n+1} by (x - lam)."""
        quotient, _ = synthetic_division(self.base.monic(n + 1), self.lam)
        return quotient

    def anchor(self, n: int):
        """P_n(lam)."""
        return horner(self.base.monic(n), self.lam)

    def by_recurrence(self, n: int) -> List[List]:
        """
        Q_0..Q_n from
            Q_{k+1} = (x - b_{k+1}) Q_k - c_{k+1} Q_{k-1} + P_{k+1}(lam)
        """
        rows = [[Fraction(1)]]
        if n >= 1:
            rows.append(self.poly(1))
        for k in range(1, n):
            nxt = sub(mul_x(rows[k]), scale(rows[k], self.base.b(k + 1)))
            nxt = sub(nxt, scale(rows[k - 1], self.base.c(k + 1)))
            rows.append(trim(add(nxt, [self.anchor(k + 1)])))
        return rows


def divided_difference_family(base: ClassicalBase, lam) -> DividedFamily:
    return DividedFamily(base, _num(lam))


def _divided_of(d: FamilyDescriptor) -> DividedFamily:
    if d.family == "laguerre_divided":
        return divided_difference_family(laguerre_base(d["alpha"]), 0)
    if d.family == "chebyshev_divided":
        al, be = CHEBYSHEV_PARAMS[d["kind"]]
        return divided_difference_family(jacobi_base(al, be), d["endpoint"])
    if d.family == "jacobi_divided":
        return divided_difference_family(jacobi_base(d["alpha"], d["beta"]), d["endpoint"])
    raise ConstraintViolation(f"{d.family} is not a divided-difference family")


# ---------------------------------------------------------------------
# Chebyshev polynomials of the first kind and their shifted quotients
# ---------------------------------------------------------------------
@lru_cache(maxsize=64)
def _chebyshev_t(n: int) -> Tuple:
    rows = [[Fraction(1)], [Fraction(0), Fraction(1)]]
    for k in range(1, n):
        rows.append(trim(sub(scale(mul_x(rows[k]), 2), rows[k - 1])))
    return tuple(rows[n])


def chebyshev_t(n: int) -> List:
    """Non-monic T_n, ascending coefficients."""
    return list(_chebyshev_t(n))


def chebyshev_shift_recurrence(lam, n: int) -> List[List]:
    """
    T_0(x; lam) .. T_n(x; lam) from
        T_{k+1}(x; lam) = 2x T_k(x; lam) - T_{k-1}(x; lam) + 2 T_{k+1}(lam)
    with T_0 = 1 and T_1 = 2(x + lam).
    """
    lam = _num(lam)
    rows = [[Fraction(1)], [2 * lam, Fraction(2)]]
    for k in range(1, n):
        nxt = sub(scale(mul_x(rows[k]), 2), rows[k - 1])
        rows.append(trim(add(nxt, [2 * horner(chebyshev_t(k + 1), lam)])))
    return rows[: n + 1]


# ---------------------------------------------------------------------
# Members, norms and spaces
# ---------------------------------------------------------------------
def _unified_coeffs(a, c, n: int) -> List:
    return hyp_coeffs(hyp([-n, n + a + 1, a - c, c + 2], [a + 1, a - c + 1, c + 1]))


def _check_finite_family(d: FamilyDescriptor, n: int):
    # for integer r the lower parameter 1 - r (or a - c + 1) reaches zero
    if d.family in ("beta_power",) and is_integer(d["r"]) and d["r"] > 0 and n >= d["r"]:
        raise PoleInLowerParams(f"beta_power(r={fmt(d['r'])}) has only members 0..{int(d['r']) - 1}")


def family_poly(d: FamilyDescriptor, n: int) -> TermSum:
    """The n-th member of the family."""
    return _family_poly(d, n, value_types(d))


@lru_cache(maxsize=1024)
def _family_poly(d: FamilyDescriptor, n: int, types: Tuple) -> TermSum:
    if n < 0:
        raise ConstraintViolation(f"family index must be non-negative, got {n}")
    if d.family == "beta_unified":
        return poly(_unified_coeffs(d["a"], d["c"], n))
    if d.family == "beta_power":
        _check_finite_family(d, n)
        return poly(_unified_coeffs(Fraction(0), d["r"], n))
    if d.family == "beta_ordinary":
        r = d["r"]
        q = _unified_coeffs(2 * r, r, n)
        return TermSum(((r + k, 0), c) for k, c in enumerate(q))
    if d.family == "chebyshev_shift":
        quotient, _ = synthetic_division(chebyshev_t(n + 1), d["lam"])
        return poly(quotient)
    return poly(_divided_of(d).poly(n))


def _endpoint_mass(base: ClassicalBase, endpoint):
    """E_w[(x - lam)^2] under the normalized Jacobi weight."""
    al, be = base.alpha, base.beta
    near = al if endpoint == 1 else be
    return 4 * (near + 1) * (near + 2) / ((al + be + 2) * (al + be + 3))


def family_norm(d: FamilyDescriptor, n: int, normalized: bool = True):
    """var_1 of the n-th member; normalized=False scales by the weight's mass."""
    if d.family in ("beta_unified", "beta_power"):
        a, c = (d["a"], d["c"]) if d.family == "beta_unified" else (Fraction(0), d["r"])
        _check_finite_family(d, n)
        raw = ((a - c) * factorial(n) / ((c + 1) * pochhammer(a + 1, n))) ** 2 / (2 * n + a + 1)
        return (a + 1) * raw if normalized else raw
    if d.family == "beta_ordinary":
        r = d["r"]
        return (r * factorial(n) / ((r + 1) * pochhammer(2 * r + 1, n))) ** 2 / (2 * n + 2 * r + 1)
    if d.family == "chebyshev_shift":
        lam = d["lam"]
        return 1 / (1 + 2 * lam * lam) if normalized else math.pi / 2

    fam = _divided_of(d)
    base = fam.base
    prod = base.norm_product(n + 1)
    if base.name == "laguerre":
        al = base.alpha
        if normalized:
            return prod / ((al + 1) * (al + 2))
        return prod * gamma_ratio([al + 1], [])
    if normalized:
        return prod / _endpoint_mass(base, fam.lam)
    al, be = base.alpha, base.beta
    return prod * power(2, al + be + 1) * gamma_ratio([al + 1, be + 1], [al + be + 2])


def family_space(d: FamilyDescriptor) -> PCovOp:
    """The operator (p = 1) under which the family is uncorrelated."""
    if d.family == "beta_unified":
        a, c = d["a"], d["c"]
        return pcov_op(power_beta(a, 0), power_term(c - a), 1)
    if d.family == "beta_power":
        return pcov_op(uniform(), power_term(d["r"]), 1)
    if d.family == "beta_ordinary":
        return pcov_op(uniform(), constant(Fraction(1)), 1)
    if d.family == "chebyshev_shift":
        lam = d["lam"]
        al, be = CHEBYSHEV_PARAMS[1]
        space = jacobi(al, be, factor=poly([lam * lam, -2 * lam, Fraction(1)]))
        if lam == 0:
            return pcov_op(space, power_term(-1), 1)
        return pcov_op(space, FunctionElement(lambda x, s=float(lam): 1.0 / (x - s), f"1/(x-{fmt(lam)})"), 1)

    fam = _divided_of(d)
    base = fam.base
    if base.name == "laguerre":
        return pcov_op(power_gamma(base.alpha, 1, factor=poly([0, 0, Fraction(1)])), power_term(-1), 1)
    if fam.lam == 1:
        return pcov_op(jacobi(base.alpha, base.beta, factor=power_term(0, 2)), power_term(0, -1), 1)
    return pcov_op(
        jacobi(base.alpha, base.beta, factor=poly([Fraction(1), Fraction(2), Fraction(1)])),
        FunctionElement(lambda x: 1.0 / (1.0 + x), "1/(1+x)"),
        1,
    )


def companion_family(a, c, n: int) -> TermSum:
    """
    Orthogonal companion of the n-th beta_unified member:
        G_n = P_n - (2c - a + 1)/(c + 1) n! (c+1)_n / ((a+1)_n (a+1-c)_n) x^(c-a)
    """
    a, c = _num(a), _num(c)
    coef = (
        (2 * c - a + 1)
        / (c + 1)
        * factorial(n)
        * pochhammer(c + 1, n)
        / (pochhammer(a + 1, n) * pochhammer(a + 1 - c, n))
    )
    return poly(_unified_coeffs(a, c, n)).plus(power_term(c - a, 0, -coef))


# ---------------------------------------------------------------------
# Hypergeometric representations of the divided families
# ---------------------------------------------------------------------
def jacobi_divided_hyp(alpha, beta, n: int) -> List:
    """
    Q_n(x; 1) = (n+1) 2^n (alpha+2)_n / (n+alpha+beta+3)_n
                * 3F2(-n, n+alpha+beta+3, 1; alpha+2, 2 | (1-x)/2)
    """
    al, be = _num(alpha), _num(beta)
    h = hyp([-n, n + al + be + 3, 1], [al + 2, 2])
    lead = (n + 1) * power(2, n) * pochhammer(al + 2, n) / pochhammer(n + al + be + 3, n)
    return scale(affine_compose(hyp_coeffs(h), Fraction(1, 2), Fraction(-1, 2)), lead)


def jacobi_divided_reflected(alpha, beta, n: int) -> List:
    """Q_n^{(alpha,beta)}(x; -1) = (-1)^n Q_n^{(beta,alpha)}(-x; 1)."""
    q = divided_difference_family(jacobi_base(beta, alpha), 1).poly(n)
    return scale(affine_compose(q, 0, -1), (-1) ** n)


def laguerre_divided_hyp(alpha, n: int) -> List:
    """Q_n(x; 0) = (-1)^n (n+1) (alpha+2)_n 2F2(-n, 1; alpha+2, 2 | x)."""
    al = _num(alpha)
    lead = (-1) ** n * (n + 1) * pochhammer(al + 2, n)
    return scale(hyp_coeffs(hyp([-n, 1], [al + 2, 2])), lead)


# ---------------------------------------------------------------------
# Roots
# ---------------------------------------------------------------------
def chebyshev_divided_roots(kind: int, n: int) -> List[float]:
    """Zeros of the n-th Chebyshev family divided at x = 1 (kinds 1 and 3)."""
    if kind == 1:
        return sorted(math.cos(2 * k * math.pi / (n + 1)) for k in range(1, n + 1))
    if kind == 3:
        first = [math.cos(2 * k * math.pi / (n + 2)) for k in range(1, n + 2) if 2 * k < n + 2]
        second = [math.cos(2 * k * math.pi / (n + 1)) for k in range(1, n + 1) if 2 * k < n + 1]
        return sorted(first + second)
    raise ConstraintViolation(f"closed-form zeros are available for kinds 1 and 3, got {kind}")


def chebyshev_shift_roots(lam, n: int) -> List[float]:
    """Zeros lam cos(t_k) - sqrt(1 - lam^2) sin(t_k), t_k = 2k pi / (n + 1)."""
    lam = float(lam)
    s = math.sqrt(1.0 - lam * lam)
    return sorted(
        lam * math.cos(t) - s * math.sin(t) for t in (2 * k * math.pi / (n + 1) for k in range(1, n + 1))
    )


# ---------------------------------------------------------------------
# Christoffel-Darboux and biorthogonality
# ---------------------------------------------------------------------
def christoffel_darboux_check(fam: DividedFamily, m: int, x, t) -> Tuple:
    """
    Both sides of

      sum_{n=0}^m [Q_n(x) Q_n(t) - P_{n+1}(lam) (Q_n(x) - Q_n(t)) / (x - t)] / h_{n+1}
          = (Q_{m+1}(x) Q_m(t) - Q_{m+1}(t) Q_m(x)) / ((x - t) h_{m+1})

    with h_k = c_1 ... c_k. Divided differences become derivatives at x = t.
    """
    x, t = _num(x), _num(t)
    rows = fam.by_recurrence(m + 1)
    same = x == t

    def dd(q):
        if same:
            return horner(deriv(q), x)
        return (horner(q, x) - horner(q, t)) / (x - t)

    lhs = 0
    for n in range(m + 1):
        q = rows[n]
        lhs = lhs + (horner(q, x) * horner(q, t) - fam.anchor(n + 1) * dd(q)) / fam.base.norm_product(n + 1)

    hm = fam.base.norm_product(m + 1)
    qa, qb = rows[m + 1], rows[m]
    if same:
        rhs = (horner(deriv(qa), x) * horner(qb, x) - horner(qa, x) * horner(deriv(qb), x)) / hm
    else:
        rhs = (horner(qa, x) * horner(qb, t) - horner(qa, t) * horner(qb, x)) / ((x - t) * hm)
    return lhs, rhs


def biorthogonality_entry(fam: DividedFamily, n: int, m: int) -> Tuple:
    """
    E_w[(x - lam) Q_n P_m] and ||P_{n+1}||^2 delta_{n+1,m} under the
    normalized classical weight. The two agree for m >= 1; for m = 0 the
    left side also carries -P_{n+1}(lam).
    """
    base = fam.base
    if base.name != "jacobi":
        raise ConstraintViolation("biorthogonality is checked on the Jacobi weight")
    space = jacobi(base.alpha, base.beta)
    integrand = poly(fam.poly(n)).times(poly([-fam.lam, Fraction(1)])).times(poly(base.monic(m)))
    value = space.expect(integrand)
    expected = base.norm_product(n + 1) if m == n + 1 else Fraction(0)
    return value, expected


# ---------------------------------------------------------------------
# Covariance entries of the unified beta and gamma families
# ---------------------------------------------------------------------
def unified_beta_cov_entry(a, b, c, d, i: int, j: int):
    """
    Normalized cov_1(x^i, x^j) under w = x^a (1-x)^b on [0, 1] with
    Z = x^(c-a) (1-x)^(d-b):

        [B(a+i+j+1, b+1) - B(c+i+1, d+1) B(c+j+1, d+1) / B(2c-a+1, 2d-b+1)] / B(a+1, b+1)
    """
    a, b, c, d = (_num(v) for v in (a, b, c, d))
    if a <= -1 or b <= -1 or 2 * c - a + 1 <= 0 or 2 * d - b + 1 <= 0:
        raise ConstraintViolation("unified beta entry needs a, b > -1, 2c-a+1 > 0 and 2d-b+1 > 0")
    first = gamma_ratio([a + i + j + 1, a + b + 2], [a + 1, a + b + i + j + 2])
    second = gamma_ratio(
        [c + i + 1, d + 1, c + j + 1, d + 1, 2 * c - a + 2 * d - b + 2, a + b + 2],
        [c + d + i + 2, c + d + j + 2, 2 * c - a + 1, 2 * d - b + 1, a + 1, b + 1],
    )
    return first - second


def unified_gamma_cov_entry(a, b, c, d, i: int, j: int):
    """
    Normalized cov_1(x^i, x^j) under w = x^a e^(-bx) on [0, inf) with
    Z = x^(c-a) e^(-(d-b)x).
    """
    a, b, c, d = (_num(v) for v in (a, b, c, d))
    if a <= -1 or b <= 0 or d <= 0 or 2 * c - a + 1 <= 0 or 2 * d - b <= 0:
        raise ConstraintViolation("unified gamma entry needs a > -1, b, d > 0, 2c-a+1 > 0 and 2d-b > 0")
    first = gamma_ratio([a + i + j + 1], [a + 1]) / power(b, i + j)
    second = (
        gamma_ratio([c + i + 1, c + j + 1], [2 * c - a + 1, a + 1])
        * power(2 * d - b, 2 * c - a + 1)
        * power(b, a + 1)
        / power(d, 2 * c + i + j + 2)
    )
    return first - second


def unified_gamma_z(a, b, c, d) -> FunctionElement:
    ca, db = float(c - a), float(d - b)
    return FunctionElement(lambda x: np.power(x, ca) * np.exp(-db * x), f"x^{fmt(c - a)} exp(-{fmt(d - b)}x)")


# ---------------------------------------------------------------------
# Identity suite
# ---------------------------------------------------------------------
def ordinary_sum_identity(n: int, m: int, r) -> Tuple:
    """
    sum_{k=m}^{n} (n+2r+1)_k (-n)_k / (m+2r+2)_k * (-k)_m / k!
    against n! (n+2r+1) / (2n+2r+1) delta_{nm}.
    """
    r = _num(r)
    total = Fraction(0) if is_exact(r) else 0.0
    for k in range(m, n + 1):
        total = total + (
            pochhammer(n + 2 * r + 1, k) * pochhammer(-n, k) / pochhammer(m + 2 * r + 2, k)
            * pochhammer(-k, m) / factorial(k)
        )
    expected = factorial(n) * (n + 2 * r + 1) / (2 * n + 2 * r + 1) if n == m else 0 * r
    return total, expected


def five_f_four_unified(m: int, a, c, k: int):
    a, c = _num(a), _num(c)
    return factorial(m) / ((c + 1) * (c + 1 + k) * pochhammer(a + 1, m)) * (
        (2 * c - a + 1) * (a + 1 + k) * pochhammer(c + 1, m) / pochhammer(a + 1 - c, m)
        + (a - c) * (a - c + k) * pochhammer(-k, m) / pochhammer(a + 2 + k, m)
    )


def five_f_four_power(m: int, r, k: int):
    """Valid for k >= 1 and non-integer r."""
    r = _num(r)
    return -(k + 1) / ((k + r + 1) * (r + 1)) * (
        (2 * r + 1) * (m + r) * pochhammer(r, m) / ((m - r) * pochhammer(-r, m))
        + r * k * (k - r) * pochhammer(-k, m) / ((k + m + 1) * (k + m) * pochhammer(k, m))
    )


def five_f_four_ordinary(m: int, r, k: int):
    r = _num(r)
    return (
        1 / ((r + 1) * (r + 1 + k)) * factorial(m) / pochhammer(2 * r + 1, m)
        * (2 * r + 1 + k + r * (r + k) * pochhammer(-k, m) / pochhammer(2 * r + 2 + k, m))
    )


def five_f_four_series(d: FamilyDescriptor, m: int, k: int):
    """The 5F4 at x = 1 summed term by term."""
    if d.family == "beta_unified":
        a, c = d["a"], d["c"]
        h = hyp([-m, m + a + 1, a - c, c + 2, a + 1 + k], [a + 1, a - c + 1, c + 1, a + 2 + k])
    elif d.family == "beta_power":
        r = d["r"]
        h = hyp([-m, m + 1, -r, r + 2, k + 1], [1, 1 - r, r + 1, k + 2])
    elif d.family == "beta_ordinary":
        r = d["r"]
        h = hyp([-m, m + 2 * r + 1, r, r + 2, 2 * r + 1 + k], [2 * r + 1, r + 1, r + 1, 2 * r + 2 + k])
    else:
        raise ConstraintViolation(f"{d.family} has no 5F4 closed form")
    return hyp_eval(h, Fraction(1))


def five_f_four_closed(d: FamilyDescriptor, m: int, k: int):
    if d.family == "beta_unified":
        return five_f_four_unified(m, d["a"], d["c"], k)
    if d.family == "beta_power":
        return five_f_four_power(m, d["r"], k)
    if d.family == "beta_ordinary":
        return five_f_four_ordinary(m, d["r"], k)
    raise ConstraintViolation(f"{d.family} has no 5F4 closed form")


def _section(cases: int, failures: List[Dict]) -> Dict:
    return {"status": "pass" if not failures else "fail", "cases": cases, "failures": failures}


def _offdiag_failures(d: FamilyDescriptor, n_max: int) -> Tuple[int, List[Dict]]:
    op = family_space(d)
    members = [family_poly(d, n) for n in range(n_max + 1)]
    matrix = cov_matrix(op, members)
    failures = []
    cases = 0
    for i in range(n_max + 1):
        for j in range(n_max + 1):
            cases += 1
            expected = family_norm(d, i) if i == j else 0
            if not close(matrix[i][j], expected):
                failures.append({"i": i, "j": j, "value": fmt(matrix[i][j]), "expected": fmt(expected)})
    return cases, failures


def identity_suite(d: FamilyDescriptor, n_max: int, m_max: int | None = None) -> Dict:
    """
    Check a family's defining identities:

    * uncorrelatedness and norms of members 0..n_max under family_space;
    * the 5F4 closed form against term-by-term summation (beta families);
    * the orthogonality sum of the beta_ordinary coefficients.
    """
    m_max = n_max if m_max is None else m_max
    if d.family == "beta_power" and is_integer(d["r"]) and d["r"] > 0:
        n_max = min(n_max, int(d["r"]) - 1)
    checks: Dict[str, Dict] = {}
    checks["uncorrelated"] = _section(*_offdiag_failures(d, n_max))

    if d.family in ("beta_unified", "beta_power", "beta_ordinary"):
        failures = []
        cases = 0
        integer_r = d.family == "beta_power" and is_integer(d["r"])
        for m in range(m_max + 1):
            for k in range(1 if d.family == "beta_power" else 0, n_max + 1):
                if integer_r:
                    continue
                cases += 1
                closed, series = five_f_four_closed(d, m, k), five_f_four_series(d, m, k)
                if not close(closed, series):
                    failures.append({"m": m, "k": k, "closed": fmt(closed), "series": fmt(series)})
        checks["five_f_four"] = _section(cases, failures)

    if d.family == "beta_ordinary":
        failures = []
        cases = 0
        for n in range(n_max + 1):
            for m in range(m_max + 1):
                cases += 1
                value, expected = ordinary_sum_identity(n, m, d["r"])
                if not close(value, expected):
                    failures.append({"n": n, "m": m, "value": fmt(value), "expected": fmt(expected)})
        checks["coefficient_sum"] = _section(cases, failures)

    if d.family in ("jacobi_divided", "chebyshev_divided", "laguerre_divided"):
        fam = _divided_of(d)
        rec = fam.by_recurrence(n_max)
        failures = [
            {"n": n} for n in range(n_max + 1) if any(not close(u, v) for u, v in _zip_pad(rec[n], fam.poly(n)))
        ]
        checks["recurrence"] = _section(n_max + 1, failures)

    if d.family == "chebyshev_shift":
        rec = chebyshev_shift_recurrence(d["lam"], n_max)
        failures = [
            {"n": n}
            for n in range(n_max + 1)
            if any(not close(u, v) for u, v in _zip_pad(rec[n], family_poly(d, n).coeffs()))
        ]
        checks["recurrence"] = _section(n_max + 1, failures)

    status = "pass" if all(c["status"] == "pass" for c in checks.values()) else "fail"
    logger.info(f"identity suite for {d.describe()}: {status}")
    return {"family": d.describe(), "status": status, "checks": checks}


def _zip_pad(u: Sequence, v: Sequence):
    size = max(len(u), len(v))
    zero = Fraction(0)
    return zip(list(u) + [zero] * (size - len(u)), list(v) + [zero] * (size - len(v)))
