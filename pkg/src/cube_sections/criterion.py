"""Criterion polynomials and local extremality classification.

Builds the quadratic vertex-layer weights, assembles the two alternating
piecewise-polynomial criteria S1 and S2 as exact functions of z, converts
between the distance parameter t and z = n/2 - t*sqrt(n), and classifies
local extremality of the section volume at diagonals (n = d) and order-n
sub-diagonals (n < d) from the signs of S1 and S2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

from .errors import DomainError
from .exactpoly import PiecewisePolynomial, Polynomial, binomial, _sign

RationalLike = Union[Fraction, int]

#: Width below which a value interval straddling zero is declared a zero
#: (the theorems are silent exactly at zeros of S1/S2).
INCONCLUSIVE_WIDTH = Fraction(1, 10**30)


def p_poly(i: int, n: int) -> Polynomial:
    """Quadratic weight of vertex layer i in the order-n criterion:

        i(n-i)/(n-1) - (n/2 - i)(z-i)/(n-2) + 2n(z-i)^2/((n-1)(n-2))
    """
    if n < 4:
        raise DomainError(f"p_poly requires n >= 4, got n = {n}")
    if not 0 <= i <= n:
        raise DomainError(f"layer index i = {i} outside [0, {n}]")
    w = Polynomial.linear_root(i)  # z - i
    const = Fraction(i * (n - i), n - 1)
    lin = -Fraction(n - 2 * i, 2) / (n - 2)
    quad = Fraction(2 * n, (n - 1) * (n - 2))
    return Polynomial.constant(const) + lin * w + quad * (w * w)


def _shifted_power(r: int, m: int) -> Polynomial:
    """(z - r)^m expanded, exact integer coefficients."""
    return Polynomial([binomial(m, j) * Fraction((-r) ** (m - j)) for j in range(m + 1)])


@lru_cache(maxsize=None)
def build_S1(n: int) -> PiecewisePolynomial:
    """Weighted criterion: piece k is sum_{i<=k} (-1)^i C(n,i) (z-i)^{n-3} p_{i,n}(z)."""
    if n < 4:
        raise DomainError(f"S1 requires n >= 4, got n = {n}")
    pieces = []
    acc = Polynomial.zero()
    for k in range(math.ceil(Fraction(n, 2))):
        sign = -1 if k % 2 else 1
        acc = acc + sign * binomial(n, k) * _shifted_power(k, n - 3) * p_poly(k, n)
        pieces.append(acc)
    return PiecewisePolynomial(0, pieces, Fraction(n, 2))


@lru_cache(maxsize=None)
def build_S2(n: int) -> PiecewisePolynomial:
    """Unweighted criterion: piece k is sum_{i<=k} (-1)^i C(n,i) (z-i)^{n-3}."""
    if n < 4:
        raise DomainError(f"S2 requires n >= 4, got n = {n}")
    pieces = []
    acc = Polynomial.zero()
    for k in range(math.ceil(Fraction(n, 2))):
        sign = -1 if k % 2 else 1
        acc = acc + sign * binomial(n, k) * _shifted_power(k, n - 3)
        pieces.append(acc)
    return PiecewisePolynomial(0, pieces, Fraction(n, 2))


def z_of_t(n: int, t: float) -> float:
    """z = n/2 - t*sqrt(n) for 0 <= t < sqrt(n)/2."""
    _check_t(n, t)
    return n / 2 - t * math.sqrt(n)


def t_of_z(n: int, z: float) -> float:
    """Inverse change of variables, t = (n/2 - z)/sqrt(n) for 0 < z <= n/2."""
    if not 0 < z <= n / 2:
        raise DomainError(f"z = {z} outside (0, {n / 2}]")
    return (n / 2 - z) / math.sqrt(n)


def _check_t(n: int, t) -> Fraction:
    """Validate 0 <= t < sqrt(n)/2 exactly (via 4t^2 < n) and return t exact."""
    tf = Fraction(t)
    if tf < 0 or 4 * tf * tf >= n:
        raise DomainError(f"t = {t} outside [0, sqrt({n})/2)")
    return tf


def threshold_z(n: int) -> float:
    """Diagnostic bound min{(n-1)/4, n^(1/(n-3)) / (n^(1/(n-3)) - 1)}: below it
    S1 < 0 and S2 > 0 are guaranteed. Never used in sign decisions."""
    if n < 4:
        raise DomainError(f"threshold_z requires n >= 4, got n = {n}")
    root = n ** (1.0 / (n - 3))
    return min((n - 1) / 4, root / (root - 1))


class ExtremalityKind(Enum):
    STRICT_LOCAL_MAX = "StrictLocalMax"
    STRICT_LOCAL_MIN = "StrictLocalMin"
    NOT_EXTREMAL = "NotExtremal"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SubdiagonalSpec:
    """Order-n sub-diagonal of the d-cube; n = d is the main diagonal."""

    n: int
    d: int

    def __post_init__(self):
        if self.n < 4:
            raise DomainError(f"sub-diagonal order must be >= 4, got {self.n}")
        if self.d < self.n:
            raise DomainError(f"ambient dimension {self.d} below order {self.n}")

    @property
    def is_diagonal(self) -> bool:
        return self.n == self.d


@dataclass(frozen=True)
class Extremality:
    """Classification outcome at a given distance; s2_sign is None in the
    diagonal case where only S1 decides."""

    kind: ExtremalityKind
    s1_sign: int
    s2_sign: Optional[int]
    z: Fraction
    t: float
    z_exact: bool = True


def _kind_from_signs(s1: int, s2: Optional[int], diagonal: bool) -> ExtremalityKind:
    if diagonal:
        if s1 < 0:
            return ExtremalityKind.STRICT_LOCAL_MAX
        if s1 > 0:
            return ExtremalityKind.STRICT_LOCAL_MIN
        return ExtremalityKind.INCONCLUSIVE
    if s1 == 0 or s2 == 0:
        return ExtremalityKind.INCONCLUSIVE
    if s1 < 0 and s2 < 0:
        return ExtremalityKind.STRICT_LOCAL_MAX
    if s1 > 0 and s2 > 0:
        return ExtremalityKind.STRICT_LOCAL_MIN
    return ExtremalityKind.NOT_EXTREMAL


def classify_at_z(spec: SubdiagonalSpec, z: RationalLike) -> Extremality:
    """Classify from an exact rational z in (0, n/2]."""
    z = Fraction(z)
    n = spec.n
    if not 0 < z <= Fraction(n, 2):
        raise DomainError(f"z = {z} outside (0, {Fraction(n, 2)}]")
    s1 = _sign(build_S1(n).eval(z))
    s2 = None if spec.is_diagonal else _sign(build_S2(n).eval(z))
    return Extremality(
        kind=_kind_from_signs(s1, s2, spec.is_diagonal),
        s1_sign=s1,
        s2_sign=s2,
        z=z,
        t=t_of_z(n, float(z)) if float(z) > 0 else float(math.sqrt(n)) / 2,
    )


def _sqrt_bounds(n: int, digits: int):
    """Rational lo <= sqrt(n) < hi with hi - lo = 10^-digits."""
    scale = 10**digits
    s = math.isqrt(n * scale * scale)
    return Fraction(s, scale), Fraction(s + 1, scale)


def _interval_sign(pw: PiecewisePolynomial, zlo: Fraction, zhi: Fraction):
    """(sign, width) of the exact value hull over [zlo, zhi]; sign 0 means
    the hull straddles zero."""
    vlo, vhi = pw.eval_interval(zlo, zhi)
    if vlo > 0:
        return 1, vhi - vlo
    if vhi < 0:
        return -1, vhi - vlo
    return 0, vhi - vlo


def classify(spec: SubdiagonalSpec, t, eps: RationalLike = INCONCLUSIVE_WIDTH) -> Extremality:
    """Classify local extremality at distance parameter t in [0, sqrt(n)/2).

    t is taken exactly (floats are exact rationals). When sqrt(n) is rational
    the criterion signs are evaluated exactly; otherwise z is bracketed with
    adaptive-precision rational bounds on sqrt(n) and the signs certified by
    exact interval evaluation. A value interval still straddling zero at
    width below eps yields Inconclusive.
    """
    n = spec.n
    tf = _check_t(n, t)
    eps = Fraction(eps)
    root = math.isqrt(n)
    if tf == 0 or root * root == n:
        return classify_at_z(spec, Fraction(n, 2) - tf * root)

    s1 = s2 = 0
    zlo = zhi = None
    for digits in (30, 60, 120, 240, 480):
        rlo, rhi = _sqrt_bounds(n, digits)
        zlo = Fraction(n, 2) - tf * rhi
        zhi = Fraction(n, 2) - tf * rlo
        if zlo <= 0:
            continue  # true z > 0 is guaranteed; tighten until the bound shows it
        s1, w1 = _interval_sign(build_S1(n), zlo, zhi)
        need_s2 = not spec.is_diagonal
        if need_s2:
            s2, w2 = _interval_sign(build_S2(n), zlo, zhi)
        done = s1 != 0 and (not need_s2 or s2 != 0)
        if done:
            break
        stuck1 = s1 == 0 and w1 < eps
        stuck2 = (not need_s2) or (s2 != 0) or w2 < eps
        if stuck1 and stuck2:
            break
        if s1 != 0 and need_s2 and s2 == 0 and w2 < eps:
            break
    zmid = (zlo + zhi) / 2
    return Extremality(
        kind=_kind_from_signs(s1, None if spec.is_diagonal else s2, spec.is_diagonal),
        s1_sign=s1,
        s2_sign=None if spec.is_diagonal else s2,
        z=zmid,
        t=float(tf),
        z_exact=False,
    )


def alt_sum_sign(l: int, n: int, z: RationalLike,
                 weights: Sequence[RationalLike]) -> Optional[int]:
    """Guaranteed sign of sum_{i=l}^{floor(z)} (-1)^i C(n,i) (z-i)^{n-3} f_i,
    or None when the sufficient condition

        z < l + 1 / (1 - ((l+1)/(n-l) * f_l/f_{l+1})^(1/(n-3)))

    does not apply. The weights cover indices l..floor(z) and must be
    positive with f_i/f_{i+1} monotonically increasing (caller asserts).
    """
    if n < 4:
        raise DomainError(f"alt_sum_sign requires n >= 4, got n = {n}")
    z = Fraction(z)
    if not 0 <= l < z:
        raise DomainError(f"need 0 <= l < z, got l = {l}, z = {z}")
    top = math.floor(z)
    ws = [Fraction(w) for w in weights]
    if len(ws) != top - l + 1:
        raise DomainError(f"expected {top - l + 1} weights for indices {l}..{top}")
    if any(w <= 0 for w in ws):
        raise DomainError("weights must be positive")
    sign = -1 if l % 2 else 1
    if l == top:
        return sign  # single term, sign immediate
    ratio = Fraction(l + 1, n - l) * ws[0] / ws[1]
    if ratio >= 1:
        return sign  # bound is vacuous: condition holds for every z
    bound = l + 1 / (1 - float(ratio) ** (1 / (n - 3)))
    if float(z) < bound:
        return sign
    return None
