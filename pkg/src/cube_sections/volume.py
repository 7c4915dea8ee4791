"""Section volume of the unit hypercube and its directional derivatives.

Two independent routes to the same quantities serve as mutual oracles:

* an alternating sum over the cube vertices on one side of the hyperplane
  (exact rational arithmetic whenever the inputs are rational, which floats
  are; a compensated float path for larger vertex counts), and
* the oscillatory improper integral with a sinc-product integrand,
  evaluated by fixed-order Gauss panels up to a truncation point whose
  tail is controlled.

The Hessian combinations that drive the extremality criteria are exposed
both as exact alternating sums (through S1/S2) and as the corresponding
improper integrals q1/q2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
from scipy.special import sici

from .criterion import build_S1, build_S2
from .errors import AccuracyError, DegenerateSectionError, DomainError

Number = Union[int, float, Fraction]

# Above this active-coordinate count the exact vertex sum switches to the
# compensated float path (2^n terms with wide rational denominators).
_EXACT_VERTEX_LIMIT = 14


@dataclass(frozen=True)
class Direction:
    """Non-negative, nonzero direction vector; zeros embed a lower cube."""

    a: tuple

    def __init__(self, a: Sequence[Number]):
        coords = tuple(Fraction(x) for x in a)
        if not coords:
            raise DomainError("direction must have at least one coordinate")
        if any(x < 0 for x in coords):
            raise DomainError("direction coordinates must be non-negative")
        if all(x == 0 for x in coords):
            raise DomainError("direction must be nonzero")
        object.__setattr__(self, "a", coords)

    @property
    def dim(self) -> int:
        return len(self.a)

    @property
    def active(self) -> int:
        return sum(1 for x in self.a if x != 0)

    def active_coords(self) -> list:
        return [x for x in self.a if x != 0]

    def coord_sum(self) -> Fraction:
        return sum(self.a, Fraction(0))

    def norm_sq(self) -> Fraction:
        return sum((x * x for x in self.a), Fraction(0))

    def norm(self) -> float:
        return math.sqrt(float(self.norm_sq()))


def subdiagonal_direction(n: int, d: int) -> Direction:
    """Unit vector along an order-n sub-diagonal of the d-cube."""
    if not 1 <= n <= d:
        raise DomainError(f"need 1 <= n <= d, got n = {n}, d = {d}")
    c = 1.0 / math.sqrt(n)
    return Direction([c] * n + [0] * (d - n))


@dataclass(frozen=True)
class SectionQuery:
    """Hyperplane a.x = b with b = sigma(a)/2 - t; t scales with ||a||."""

    direction: Direction
    t: Fraction

    def __init__(self, direction: Direction, t: Number):
        tf = Fraction(t)
        if tf < 0:
            raise DomainError(f"t = {t} must be non-negative")
        # distance from the center is t/||a||, valid below the circumradius
        if float(tf) >= direction.norm() * math.sqrt(direction.dim) / 2:
            raise DomainError(
                f"t = {t} must be < ||a|| * sqrt(d)/2 "
                f"= {direction.norm() * math.sqrt(direction.dim) / 2}")
        object.__setattr__(self, "direction", direction)
        object.__setattr__(self, "t", tf)

    @property
    def b(self) -> Fraction:
        return self.direction.coord_sum() / 2 - self.t


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-8
    max_truncation: float = 5e7
    panel_rule: int = 16
    panel_width: Optional[float] = None


_DEFAULT_CFG = QuadratureConfig()


def normalized_vertex_sum(q: SectionQuery, exact: Optional[bool] = None):
    """V/||a|| as the alternating vertex sum over [0,1]^active.

    Exact Fraction on the rational path (the default for active <= 14),
    compensated float otherwise.
    """
    act = q.direction.active_coords()
    n = len(act)
    if n < 2:
        raise DegenerateSectionError(
            "vertex sum needs at least two nonzero coordinates")
    if exact is None:
        exact = n <= _EXACT_VERTEX_LIMIT
    b = q.b
    if exact:
        return _vertex_sum_exact(act, b, n)
    return _vertex_sum_float([float(x) for x in act], float(b), n)


def _vertex_sum_exact(act, b: Fraction, n: int) -> Fraction:
    dots = [Fraction(0)] * (1 << n)
    for mask in range(1, 1 << n):
        lsb = mask & -mask
        dots[mask] = dots[mask ^ lsb] + act[lsb.bit_length() - 1]
    total = Fraction(0)
    for mask in range(1 << n):
        diff = b - dots[mask]
        if diff >= 0:
            term = diff ** (n - 1)
            total += -term if mask.bit_count() % 2 else term
    denom = math.factorial(n - 1) * math.prod(x for x in act)
    return total / denom


def _vertex_sum_float(act, b: float, n: int) -> float:
    masks = np.arange(1 << n, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.float64)
    dots = bits @ np.asarray(act)
    parity = (bits.sum(axis=1).astype(np.int64)) & 1
    inside = dots <= b
    signs = np.where(parity == 0, 1.0, -1.0)
    terms = signs[inside] * (b - dots[inside]) ** (n - 1)
    total = math.fsum(terms.tolist())
    return total / (math.factorial(n - 1) * math.prod(act))


def vertex_sum_volume(q: SectionQuery, exact: Optional[bool] = None) -> float:
    """Section volume V by the vertex sum (single final rounding by ||a||)."""
    return float(normalized_vertex_sum(q, exact=exact)) * q.direction.norm()


def _gauss_rule(order: int):
    return np.polynomial.legendre.leggauss(order)


def _panel_integrate(f, upper: float, width: float, order: int,
                     chunk: int = 8192) -> float:
    """Sum of Gauss panels covering [0, upper], reduced deterministically
    (fixed panel order, exactly rounded accumulation)."""
    nodes, wts = _gauss_rule(order)
    npanels = max(1, math.ceil(upper / width))
    width = upper / npanels
    half = width / 2
    partials = []
    for start in range(0, npanels, chunk):
        stop = min(start + chunk, npanels)
        centers = (np.arange(start, stop) + 0.5) * width
        u = centers[:, None] + half * nodes[None, :]
        vals = f(u)
        partials.extend((vals @ wts * half).tolist())
    return math.fsum(partials)


def polya_volume(q: SectionQuery, cfg: QuadratureConfig = _DEFAULT_CFG) -> float:
    """Section volume V as (||a||/pi) * integral of prod sinc(a_i u) cos(2tu).

    Even integrand: 2x the [0, U] integral on Gauss panels of width tied to
    the fastest oscillation, with U chosen so the envelope tail bound
    prod 1/(a_i u) integrated beyond U stays under abs_tol/4. Directions
    with only two nonzero coordinates decay as u^-2 and may exhaust
    max_truncation, which raises AccuracyError.
    """
    act = [float(x) for x in q.direction.active_coords()]
    m = len(act)
    if m < 2:
        raise DegenerateSectionError(
            "the integral form needs at least two nonzero coordinates")
    t = float(q.t)
    norm = q.direction.norm()
    pref = 2 * norm / math.pi
    inv_prod = math.prod(1.0 / x for x in act)
    tail_cap = cfg.abs_tol / 4
    upper = (pref * inv_prod / ((m - 1) * tail_cap)) ** (1.0 / (m - 1))
    if upper > cfg.max_truncation:
        raise AccuracyError(
            f"tail bound needs truncation at {upper:.3g} > max_truncation "
            f"{cfg.max_truncation:.3g} (active = {m}; the u^-{m} envelope "
            "decays too slowly for abs_tol)")
    width = cfg.panel_width
    if width is None:
        width = (math.pi / 4) / max(max(act), (2 * t) if t > 0 else 0.0, 1e-9)
    arr = np.asarray(act)

    def integrand(u):
        prod = np.ones_like(u)
        for ai in arr:
            prod = prod * np.sinc(ai * u / np.pi)
        return prod * np.cos(2 * t * u)

    bulk = _panel_integrate(integrand, upper, width, cfg.panel_rule)
    return pref * bulk


def grad_sum(q: SectionQuery, j: int):
    """Partial derivative of V/||a|| with respect to coordinate j (1-based).

    Vertex-sum form on the active block; exactly 0 for inactive coordinates.
    Exact Fraction on the rational path. Requires at least 3 active
    coordinates.
    """
    a = q.direction.a
    if not 1 <= j <= len(a):
        raise DomainError(f"coordinate index {j} outside 1..{len(a)}")
    act = q.direction.active_coords()
    n = len(act)
    if n < 3:
        raise DomainError("gradient needs at least three nonzero coordinates")
    if a[j - 1] == 0:
        return Fraction(0)
    pos = sum(1 for x in a[:j] if x != 0) - 1  # index within the active block
    b = q.b
    aj = act[pos]
    dots = [Fraction(0)] * (1 << n)
    for mask in range(1, 1 << n):
        lsb = mask & -mask
        dots[mask] = dots[mask ^ lsb] + act[lsb.bit_length() - 1]
    total = Fraction(0)
    half = Fraction(1, 2)
    for mask in range(1 << n):
        diff = b - dots[mask]
        if diff < 0:
            continue
        vj = (mask >> pos) & 1
        term = diff ** (n - 2) * ((n - 1) * (half - vj) - diff / aj)
        total += -term if mask.bit_count() % 2 else term
    denom = math.factorial(n - 1) * math.prod(x for x in act)
    return total / denom


def _sqrt_scaled(coef: Fraction, n: int):
    """coef * sqrt(n): exact Fraction when representable, float otherwise."""
    if coef == 0:
        return Fraction(0)
    r = math.isqrt(n)
    if r * r == n:
        return coef * r
    return float(coef) * math.sqrt(n)


def _check_nz(n: int, z) -> Fraction:
    if n < 4:
        raise DomainError(f"requires n >= 4, got n = {n}")
    z = Fraction(z)
    if not 0 < z <= Fraction(n, 2):
        raise DomainError(f"z = {z} outside (0, {Fraction(n, 2)}]")
    return z


def hessian_combo_coef(n: int, z) -> Fraction:
    """Exact rational cofactor of sqrt(n) in the diagonal Hessian
    combination: S1(z) / (n-3)!."""
    z = _check_nz(n, z)
    return build_S1(n).eval(z) / math.factorial(n - 3)


def hessian_combo_sum(n: int, z):
    """The combination d2/da1^2 - sqrt(n) d/da1 - d2/da1da2 of V/||a|| at
    the symmetric point, as the exact alternating sum sqrt(n)/(n-3)! S1(z).

    Exact Fraction when sqrt(n) is an integer or the value vanishes, float
    otherwise (the value is then an irrational multiple of sqrt(n)).
    """
    return _sqrt_scaled(hessian_combo_coef(n, z), n)


def hessian_outside_coef(n: int, z) -> Fraction:
    """Exact rational cofactor of sqrt(n) in d2/da_d^2 of V/||a||:
    n S2(z) / (12 (n-3)!)."""
    z = _check_nz(n, z)
    return Fraction(n) * build_S2(n).eval(z) / (12 * math.factorial(n - 3))


def hessian_outside_sum(n: int, z):
    """Pure second derivative of V/||a|| along an inactive coordinate at
    the symmetric point: n sqrt(n) / (12 (n-3)!) * S2(z), exact when
    possible."""
    return _sqrt_scaled(hessian_outside_coef(n, z), n)


def hessian_kernel(s):
    """2 sinc(s)^2 - cos(s) sinc(s) - 1: the dimension-free bracket of the
    q1 integrand. Negative for every s > 0.

    The direct form cancels to O(s^4) near 0, so small arguments switch to
    the series -(2 s^4/45)(1 - s^2/7) to keep the sign trustworthy."""
    s = np.asarray(s, dtype=float)
    sc = np.sinc(s / np.pi)
    direct = 2 * sc * sc - np.cos(s) * sc - 1
    s2 = s * s
    series = -2 * s2 * s2 / 45 * (1 - s2 / 7)
    return np.where(np.abs(s) < 0.05, series, direct)


# --- harmonic expansion machinery for the exact tails of q1/q2 ------------

def _sin_power_harmonics(j: int):
    """sin(x)^j as a list of (coef, kind, m) meaning coef * kind(m*x), with
    kind in {"cos", "sin"}; m = 0 only occurs as the "cos" constant."""
    out = []
    if j % 2 == 0:
        h = j // 2
        out.append((Fraction(math.comb(j, h), 2**j), "cos", 0))
        for r in range(h):
            c = Fraction(2 * math.comb(j, r), 2**j)
            if (h - r) % 2:
                c = -c
            out.append((c, "cos", j - 2 * r))
    else:
        h = (j - 1) // 2
        for r in range(h + 1):
            c = Fraction(2 * math.comb(j, r), 2**j)
            if (h - r) % 2:
                c = -c
            out.append((c, "sin", j - 2 * r))
    return out


def _mul_cos(harmonics):
    """Multiply a harmonic list by cos(x)."""
    acc = {}

    def add(coef, kind, m):
        if m < 0:
            m = -m
            if kind == "sin":
                coef = -coef
        if kind == "sin" and m == 0:
            return
        key = (kind, m)
        acc[key] = acc.get(key, Fraction(0)) + coef

    for coef, kind, m in harmonics:
        add(coef / 2, kind, m + 1)
        add(coef / 2, kind, m - 1)
    return [(c, kind, m) for (kind, m), c in acc.items() if c != 0]


def _trig_tail(kind: str, nu: float, k: int, upper: float) -> float:
    """Tail integral of trig(nu*u)/u^k over [upper, inf): Si/Ci closed form
    for k = 1, lifted to higher k by the integration-by-parts recursion."""
    if nu == 0:
        if kind == "sin":
            return 0.0
        if k < 2:
            raise DomainError("divergent tail: constant / u")
        return upper ** (1 - k) / (k - 1)
    si, ci = sici(nu * upper)
    c_prev = -ci                     # integral of cos(nu u)/u
    s_prev = math.pi / 2 - si        # integral of sin(nu u)/u
    for kk in range(2, k + 1):
        base = upper ** (1 - kk) / (kk - 1)
        c_cur = math.cos(nu * upper) * base - nu / (kk - 1) * s_prev
        s_cur = math.sin(nu * upper) * base + nu / (kk - 1) * c_prev
        c_prev, s_prev = c_cur, s_cur
    return c_prev if kind == "cos" else s_prev


def _harmonic_tail(terms, n: int, w: float, upper: float) -> float:
    """Tail over [upper, inf) of sum coef * trig(m*x)/x^xpow * u^(xpow-k)
    * cos(w*u) with x = u/sqrt(n), i.e. with a net power u^-k left after
    converting x to u. Each term splits against cos(w*u) into sum and
    difference frequencies whose tails are classical Si/Ci integrals."""
    rn = math.sqrt(n)
    total = 0.0
    for coef, kind, m, xpow, k in terms:
        scale = float(coef) * rn**xpow
        mu = m / rn
        for nu_signed in (mu - w, mu + w):
            nu = abs(nu_signed)
            if kind == "sin":
                if nu_signed == 0:
                    continue
                sgn = 1.0 if nu_signed > 0 else -1.0
                total += scale / 2 * sgn * _trig_tail("sin", nu, k, upper)
            else:
                total += scale / 2 * _trig_tail("cos", nu, k, upper)
    return total


def _q_quadrature(n: int, t: float, cfg: QuadratureConfig, which: int) -> float:
    """Shared bulk-plus-exact-tail evaluation for q1 (which=1), q2 (which=2)."""
    if n < 4:
        raise DomainError(f"requires n >= 4, got n = {n}")
    if not 0 <= t < math.sqrt(n) / 2:
        raise DomainError(f"t = {t} outside [0, sqrt({n})/2)")
    rn = math.sqrt(n)
    w = 2 * t
    upper = max(200.0, 64 * math.pi) * rn
    if upper > cfg.max_truncation:
        raise AccuracyError("truncation limit too small for the q integrals")
    width = cfg.panel_width or (math.pi / 4) / (rn + w + 0.5)

    if which == 1:
        def integrand(u):
            x = u / rn
            sc = np.sinc(x / np.pi)
            return hessian_kernel(x) * sc ** (n - 2) * np.cos(w * u)

        terms = [(2 * c, kind, m, n, n) for c, kind, m in _sin_power_harmonics(n)]
        terms += [(-c, kind, m, n - 1, n - 1)
                  for c, kind, m in _mul_cos(_sin_power_harmonics(n - 1))]
        terms += [(-c, kind, m, n - 2, n - 2)
                  for c, kind, m in _sin_power_harmonics(n - 2)]
        pref = 2 * n / math.pi
    else:
        def integrand(u):
            x = u / rn
            return u * u * np.sinc(x / np.pi) ** n * np.cos(w * u)

        # u^2 sin^n(x)/x^n = n^(n/2) sin^n(x) / u^(n-2)
        terms = [(c, kind, m, n, n - 2) for c, kind, m in _sin_power_harmonics(n)]
        pref = -2 / (3 * math.pi)

    bulk = _panel_integrate(integrand, upper, width, cfg.panel_rule)
    tail = _harmonic_tail(terms, n, w, upper)
    return pref * (bulk + tail)


def q1_integral(n: int, t: float, cfg: QuadratureConfig = _DEFAULT_CFG) -> float:
    """Improper-integral form of the diagonal Hessian combination:

        (n/pi) * integral over R of [2 sinc^2(x) - cos(x) sinc(x) - 1]
                 * sinc(x)^(n-2) * cos(2tu) du,   x = u/sqrt(n).

    Gauss panels on [0, U] plus the exact harmonic tail beyond U.
    """
    return _q_quadrature(n, t, cfg, which=1)


def q2_integral(n: int, t: float, cfg: QuadratureConfig = _DEFAULT_CFG) -> float:
    """Improper-integral form of the inactive-coordinate second derivative:

        -(1/(3 pi)) * integral over R of u^2 sinc(u/sqrt(n))^n cos(2tu) du.
    """
    return _q_quadrature(n, t, cfg, which=2)
