"""Exact rational polynomials, piecewise polynomials on integer breakpoints,
and Sturm-sequence real-root isolation with certified bisection refinement.

Coefficients are `fractions.Fraction` throughout; everything in this module
is exact. Sturm chains are carried internally as primitive integer
polynomials (each chain element is a positive rational multiple of the
textbook one, which leaves all sign variations unchanged) so that the
remainder sequence does not drown in rational normalization. Big-integer
work inside the chains uses gmpy2 when available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DegeneratePieceError, DomainError

try:
    from gmpy2 import gcd as _gcd, mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is normally present
    _gcd = math.gcd
    _mpz = int

Rational = Fraction

RationalLike = Union[Fraction, int]


def _sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def binomial(n: int, i: int) -> Fraction:
    """Exact binomial coefficient C(n, i). Returns 0 when i > n."""
    if n < 0 or i < 0:
        raise DomainError(f"binomial({n}, {i}): arguments must be non-negative")
    if i > n:
        return Fraction(0)
    return Fraction(math.comb(n, i))


class Polynomial:
    """Dense univariate polynomial with Fraction coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[RationalLike]):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls([])

    @classmethod
    def constant(cls, c: RationalLike) -> "Polynomial":
        return cls([c])

    @classmethod
    def identity(cls) -> "Polynomial":
        """The polynomial z."""
        return cls([0, 1])

    @classmethod
    def linear_root(cls, r: RationalLike) -> "Polynomial":
        """The monic polynomial z - r."""
        return cls([-Fraction(r), 1])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if self.is_zero:
            return "Polynomial(0)"
        terms = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if j == 0:
                terms.append(str(c))
            elif j == 1:
                terms.append(f"{c}*z")
            else:
                terms.append(f"{c}*z^{j}")
        return "Polynomial(" + " + ".join(terms) + ")"

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for j, c in enumerate(b):
            out[j] += c
        return Polynomial(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            return Polynomial([c * a for a in self.coeffs])
        if self.is_zero or other.is_zero:
            return Polynomial.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise DomainError("negative polynomial power")
        result = Polynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, z):
        """Horner evaluation; exact for Fraction/int input, float for float."""
        if isinstance(z, float):
            acc = 0.0
            for c in reversed(self.coeffs):
                acc = acc * z + float(c)
            return acc
        z = Fraction(z)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([j * c for j, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "Polynomial"):
        """Exact (quotient, remainder) over the rationals."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        den = other.coeffs
        dq = len(rem) - len(den)
        if dq < 0:
            return Polynomial.zero(), self
        quo = [Fraction(0)] * (dq + 1)
        for k in range(dq, -1, -1):
            if len(rem) < len(den) + k:
                continue
            c = rem[len(den) + k - 1] / den[-1]
            quo[k] = c
            if c != 0:
                for j, b in enumerate(den):
                    rem[k + j] -= c * b
            rem.pop()
        return Polynomial(quo), Polynomial(rem)

    def deflate_root(self, r: RationalLike) -> "Polynomial":
        """Exact division by (z - r); r must be a root."""
        quo, rem = self.divmod(Polynomial.linear_root(r))
        if not rem.is_zero:
            raise DomainError(f"{r} is not an exact root")
        return quo

    def taylor_shift(self, c: RationalLike) -> "Polynomial":
        """Return p(z + c) by repeated synthetic division."""
        c = Fraction(c)
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                cs[j] += c * cs[j + 1]
        return Polynomial(cs)

    def square_free(self) -> "Polynomial":
        """The square-free part p / gcd(p, p'), same leading sign."""
        if self.is_zero:
            raise DomainError("zero polynomial has no square-free part")
        if self.degree <= 1:
            return self
        g = _poly_gcd(self, self.derivative())
        if g.degree == 0:
            return self
        quo, rem = self.divmod(g)
        assert rem.is_zero
        return quo


def _poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over the rationals via the primitive integer PRS."""
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    fa = _int_coeffs(a)
    fb = _int_coeffs(b)
    if len(fa) < len(fb):
        fa, fb = fb, fa
    while fb:
        fa, fb = fb, _int_prem(fa, fb)
        if fb:
            fb = _int_primitive(fb)
    lead = fa[-1]
    return Polynomial([Fraction(int(c), int(lead)) for c in fa])


def _int_coeffs(p: Polynomial) -> list:
    """Primitive integer coefficients: a positive multiple of p."""
    if p.is_zero:
        return []
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [_mpz(c.numerator * (den // c.denominator)) for c in p.coeffs]
    return _int_primitive(ints)


def _int_primitive(coeffs: list) -> list:
    g = _mpz(0)
    for c in coeffs:
        g = _gcd(g, c)
        if g == 1:
            return list(coeffs)
    return [c // g for c in coeffs]


def _int_prem(a: list, b: list) -> list:
    """Pseudo-remainder of integer polys, scaled to a positive multiple of
    the exact remainder so sign information survives."""
    rem = list(a)
    db = len(b) - 1
    lb = b[-1]
    flips = 0
    while rem and len(rem) - 1 >= db:
        lr = rem[-1]
        if lb < 0:
            flips += 1
        k = len(rem) - 1 - db
        rem = [lb * c for c in rem]
        for j, bc in enumerate(b):
            rem[k + j] -= lr * bc
        while rem and rem[-1] == 0:
            rem.pop()
    if flips % 2:
        rem = [-c for c in rem]
    return rem


def _int_derivative(coeffs: list) -> list:
    return [j * c for j, c in enumerate(coeffs)][1:]


def _int_eval(coeffs: list, r: Fraction):
    """Integer value den^deg * P(num/den) at the rational point r."""
    num, den = _mpz(r.numerator), _mpz(r.denominator)
    d = len(coeffs) - 1
    if d < 0:
        return _mpz(0)
    acc = coeffs[d]
    if den == 1:
        for j in range(d - 1, -1, -1):
            acc = acc * num + coeffs[j]
        return acc
    dpow = den
    for j in range(d - 1, -1, -1):
        acc = acc * num + coeffs[j] * dpow
        dpow *= den
    return acc


def _int_eval_sign(coeffs: list, r: Fraction) -> int:
    return _sign(_int_eval(coeffs, r))


def _int_taylor_shift(coeffs: list, c) -> list:
    """p(x + c) for integer coefficient lists and integer c."""
    cs = list(coeffs)
    n = len(cs)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            cs[j] += c * cs[j + 1]
    return cs


def _count_variations(signs) -> int:
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def descartes_root_bound(p: Polynomial, lo: RationalLike, hi: RationalLike) -> int:
    """Descartes upper bound on the number of roots of p in the open
    interval (lo, hi), via the Moebius map onto (0, inf). Zero certifies
    the interval root-free; the bound is exact when it is 0 or 1 and the
    count has the same parity."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise DomainError("descartes_root_bound needs lo < hi")
    f = _int_coeffs(p)
    d = len(f) - 1
    if d <= 0:
        return 0
    # roots in (lo, hi) of p  <->  roots in (0, 1) of p(lo + (hi-lo) x)
    width = hi - lo
    if lo.denominator == 1:
        g = _int_taylor_shift(f, _mpz(lo.numerator))
    else:
        # clear the denominator first: q(x) = p(x / s) has integer shift s*lo
        s = lo.denominator
        f2 = [c * _mpz(s) ** (d - j) for j, c in enumerate(f)]
        g = _int_taylor_shift(f2, _mpz(lo.numerator))
        width = width * s
    cn, cd = _mpz(width.numerator), _mpz(width.denominator)
    g = [c * cn**j * cd ** (d - j) for j, c in enumerate(g)]
    # roots in (0, 1)  <->  roots in (0, inf) of (1+w)^d g(1/(1+w))
    h = _int_taylor_shift(list(reversed(g)), _mpz(1))
    return _count_variations([_sign(c) for c in h])


class SturmChain:
    """Sturm chain as primitive integer polynomials.

    Built from (p, p'); the final element is an associate of gcd(p, p'),
    so a chain whose last element has positive degree signals a non
    square-free input (use `squarefree_part` and rebuild).
    """

    __slots__ = ("polys",)

    def __init__(self, p: Polynomial):
        self.polys = self._build(_int_coeffs(p))

    @staticmethod
    def _build(f0: list) -> list:
        f1 = _int_primitive(_int_derivative(f0))
        chain = [f0, f1]
        while chain[-1]:
            nxt = [-c for c in _int_prem(chain[-2], chain[-1])]
            if not nxt:
                break
            chain.append(_int_primitive(nxt))
        return chain

    @property
    def is_squarefree(self) -> bool:
        return len(self.polys[-1]) == 1

    def squarefree_part(self, p: Polynomial) -> Polynomial:
        """p divided by the gcd found at the end of this chain."""
        last = self.polys[-1]
        g = Polynomial([Fraction(int(c), int(last[-1])) for c in last])
        quo, rem = p.divmod(g)
        assert rem.is_zero
        return quo

    def variations_at(self, r: Fraction) -> int:
        return _count_variations([_int_eval_sign(f, r) for f in self.polys])

    def count_roots(self, lo: Fraction, hi: Fraction) -> int:
        """Distinct roots in the open interval (lo, hi); the endpoints must
        not be roots of the underlying polynomial."""
        return self.variations_at(lo) - self.variations_at(hi)


@dataclass(frozen=True)
class IsolatingInterval:
    """Open rational interval certified to contain exactly one root of `poly`
    (a square-free polynomial); the endpoint signs are opposite."""

    lo: Fraction
    hi: Fraction
    poly: Polynomial
    sign_left: int
    sign_right: int

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


def isolate_roots(p: Polynomial, lo: RationalLike, hi: RationalLike) -> list:
    """Disjoint isolating intervals for the distinct real roots of the
    square-free part of p inside the open interval (lo, hi), via Sturm
    sequences. Multiple roots are reported once."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise DomainError(f"isolate_roots: need lo < hi, got [{lo}, {hi}]")
    if p.is_zero:
        raise DomainError("cannot isolate roots of the zero polynomial")
    q = p
    while not q.is_zero and q(lo) == 0:
        q = q.deflate_root(lo)
    while not q.is_zero and q(hi) == 0:
        q = q.deflate_root(hi)
    if q.degree <= 0:
        return []
    chain = SturmChain(q)
    if not chain.is_squarefree:
        q = chain.squarefree_part(q)
        if q.degree <= 0:
            return []
        chain = SturmChain(q)
    fq = _int_coeffs(q)
    out = []
    _isolate_rec(q, fq, chain, lo, hi,
                 chain.variations_at(lo), chain.variations_at(hi), out)
    out.sort(key=lambda iv: iv.lo)
    return out


def _isolate_rec(q, fq, chain, lo, hi, vlo, vhi, out):
    count = vlo - vhi
    if count == 0:
        return
    if count == 1:
        sl, sr = _int_eval_sign(fq, lo), _int_eval_sign(fq, hi)
        assert sl * sr == -1
        out.append(IsolatingInterval(lo, hi, q, sl, sr))
        return
    mid = (lo + hi) / 2
    if _int_eval_sign(fq, mid) == 0:
        delta = (hi - lo) / 4
        while True:
            a, b = mid - delta, mid + delta
            if _int_eval_sign(fq, a) != 0 and _int_eval_sign(fq, b) != 0:
                va, vb = chain.variations_at(a), chain.variations_at(b)
                if va - vb == 1:
                    break
            delta /= 2
        out.append(IsolatingInterval(a, b, q,
                                     _int_eval_sign(fq, a), _int_eval_sign(fq, b)))
        _isolate_rec(q, fq, chain, lo, a, vlo, va, out)
        _isolate_rec(q, fq, chain, b, hi, vb, vhi, out)
        return
    vmid = chain.variations_at(mid)
    _isolate_rec(q, fq, chain, lo, mid, vlo, vmid, out)
    _isolate_rec(q, fq, chain, mid, hi, vmid, vhi, out)


def refine_interval(iv: IsolatingInterval, eps: RationalLike) -> IsolatingInterval:
    """Shrink an isolating interval below width eps by exact-sign bisection."""
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    lo, hi = iv.lo, iv.hi
    sl, sr = iv.sign_left, iv.sign_right
    q = iv.poly
    fq = _int_coeffs(q)
    while hi - lo >= eps:
        mid = (lo + hi) / 2
        sm = _int_eval_sign(fq, mid)
        if sm == 0:
            # the root is exactly the rational midpoint: collapse around it
            delta = min(eps / 4, (hi - lo) / 4)
            lo, hi = mid - delta, mid + delta
            sl, sr = _int_eval_sign(fq, lo), _int_eval_sign(fq, hi)
            break
        if sm == sl:
            lo = mid
        else:
            hi, sr = mid, sm
    return IsolatingInterval(lo, hi, q, sl, sr)


def refine_root(iv: IsolatingInterval, eps: RationalLike) -> Fraction:
    """Midpoint of the interval bisected below width eps (exact arithmetic)."""
    return refine_interval(iv, eps).midpoint


class PiecewisePolynomial:
    """Polynomial pieces on consecutive unit intervals [lower+k, lower+k+1),
    with a closed right end at domain_end (reached inside the last piece)."""

    __slots__ = ("lower", "pieces", "domain_end")

    def __init__(self, lower: int, pieces: Sequence[Polynomial], domain_end: RationalLike):
        if not pieces:
            raise DomainError("piecewise polynomial needs at least one piece")
        self.lower = int(lower)
        self.pieces = tuple(pieces)
        self.domain_end = Fraction(domain_end)
        if not self.lower < self.domain_end <= self.lower + len(self.pieces):
            raise DomainError("domain_end inconsistent with the number of pieces")

    @property
    def domain_start(self) -> Fraction:
        return Fraction(self.lower)

    def breakpoints(self) -> list:
        """Interior integer breakpoints, strictly inside the domain."""
        return [k for k in range(self.lower + 1, math.ceil(self.domain_end))
                if Fraction(k) < self.domain_end]

    def piece_index(self, z: Fraction) -> int:
        if not self.domain_start <= z <= self.domain_end:
            raise DomainError(f"z = {z} outside domain [{self.lower}, {self.domain_end}]")
        if z == self.domain_end:
            return len(self.pieces) - 1
        return min(int(math.floor(z)) - self.lower, len(self.pieces) - 1)

    def eval(self, z: RationalLike) -> Fraction:
        """Exact value; at integer breakpoints the left-closed piece applies,
        except z = domain_end which uses the last piece."""
        z = Fraction(z)
        return self.pieces[self.piece_index(z)](z)

    def __call__(self, z):
        if isinstance(z, float):
            return self.eval_float(z)
        return self.eval(z)

    def eval_float(self, z: float) -> float:
        zf = Fraction(z).limit_denominator(10**15)
        k = self.piece_index(min(max(zf, self.domain_start), self.domain_end))
        return self.pieces[k](float(z))

    def eval_interval(self, zlo: Fraction, zhi: Fraction):
        """Exact rational bounds for the value over [zlo, zhi] (hull over all
        pieces the window touches)."""
        zlo, zhi = Fraction(zlo), Fraction(zhi)
        if zlo > zhi:
            zlo, zhi = zhi, zlo
        klo = self.piece_index(zlo)
        khi = self.piece_index(zhi)
        vlo = vhi = None
        for k in range(klo, khi + 1):
            a = max(zlo, Fraction(self.lower + k))
            b = min(zhi, Fraction(self.lower + k + 1), self.domain_end)
            lo_k, hi_k = _interval_horner(self.pieces[k], a, b)
            vlo = lo_k if vlo is None else min(vlo, lo_k)
            vhi = hi_k if vhi is None else max(vhi, hi_k)
        return vlo, vhi


def _interval_horner(p: Polynomial, lo: Fraction, hi: Fraction):
    """Exact interval Horner evaluation of p over [lo, hi]."""
    if p.is_zero:
        return Fraction(0), Fraction(0)
    acc_lo = acc_hi = p.coeffs[-1]
    for c in reversed(p.coeffs[:-1]):
        cands = (acc_lo * lo, acc_lo * hi, acc_hi * lo, acc_hi * hi)
        acc_lo = min(cands) + c
        acc_hi = max(cands) + c
    return acc_lo, acc_hi


@dataclass(frozen=True)
class Endpoint:
    """Segment endpoint: an exact rational, or a certified irrational root
    carried as a refined isolating interval with `value` its midpoint."""

    value: Fraction
    exact: bool
    interval: Optional[IsolatingInterval] = None

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class SignSegment:
    lo: Endpoint
    hi: Endpoint
    sign: int


# Denominator bound for the exact rational root scan that runs before Sturm
# isolation. Covers every exact critical root the low orders produce (3/4,
# 4/3 and the integer ones); larger denominators end up certified by
# isolating intervals.
_RATIONAL_ROOT_MAX_DEN = 12

_SIGN_EPS = Fraction(1, 10**12)


def _rational_roots_in(p: Polynomial, lo: Fraction, hi: Fraction) -> list:
    """Exact roots with small denominator in the open interval (lo, hi)."""
    f = _int_coeffs(p)
    roots = []
    for den in range(1, _RATIONAL_ROOT_MAX_DEN + 1):
        first = math.floor(lo * den) + 1
        last = math.ceil(hi * den) - 1
        for num in range(first, last + 1):
            r = Fraction(num, den)
            if r.denominator != den or not lo < r < hi:
                continue
            if _int_eval_sign(f, r) == 0:
                roots.append(r)
    return sorted(set(roots))


def piecewise_roots(pw: PiecewisePolynomial, include_end: bool = False,
                    eps: RationalLike = _SIGN_EPS) -> list:
    """All distinct roots of pw on (domain_start, domain_end), sorted.

    Exact rational roots (breakpoints and small-denominator rationals) are
    returned as exact Endpoints; the rest as refined isolating intervals.
    With include_end, a root exactly at domain_end is reported too.
    """
    eps = Fraction(eps)
    roots = []
    for k in pw.breakpoints():
        if pw.eval(k) == 0:
            roots.append(Endpoint(Fraction(k), True))
    if include_end and pw.eval(pw.domain_end) == 0:
        roots.append(Endpoint(pw.domain_end, True))
    for k, piece in enumerate(pw.pieces):
        a = Fraction(pw.lower + k)
        b = min(Fraction(pw.lower + k + 1), pw.domain_end)
        if b <= a:
            continue
        if piece.is_zero:
            raise DegeneratePieceError(
                f"piece on [{a}, {a + 1}) is identically zero")
        if descartes_root_bound(piece, a, b) == 0:
            continue
        exact = _rational_roots_in(piece, a, b)
        roots.extend(Endpoint(r, True) for r in exact)
        deflated = piece
        for r in exact:
            while deflated(r) == 0:
                deflated = deflated.deflate_root(r)
        for iv in isolate_roots(deflated, a, b):
            refined = refine_interval(iv, eps)
            roots.append(Endpoint(refined.midpoint, False, refined))
    roots.sort(key=lambda e: e.value)
    return roots


def sign_pattern(pw: PiecewisePolynomial, eps: RationalLike = _SIGN_EPS) -> list:
    """Maximal open subintervals of constant sign on (domain_start, domain_end].

    Consecutive segments meet at the roots of pw; those endpoints are exact
    rationals or certified irrationals. Raises DegeneratePieceError if any
    piece is identically zero.
    """
    eps = Fraction(eps)
    roots = piecewise_roots(pw, include_end=True, eps=eps)
    bounds = ([Endpoint(pw.domain_start, True)] + roots
              + [Endpoint(pw.domain_end, True)])
    # dedupe a root sitting exactly at domain_end
    if len(bounds) >= 2 and bounds[-1].value == bounds[-2].value:
        bounds.pop()
    segments = []
    for left, right in zip(bounds, bounds[1:]):
        sample = _point_between(left, right)
        s = _sign(pw.eval(sample))
        assert s != 0, "sample between consecutive roots cannot be a root"
        segments.append(SignSegment(left, right, s))
    return segments


def _point_between(left: Endpoint, right: Endpoint) -> Fraction:
    """A rational strictly between two consecutive root endpoints."""
    a = left.value if left.exact else left.interval.hi
    b = right.value if right.exact else right.interval.lo
    if not a < b:
        # refined intervals touching the gap; fall back to raw midpoints
        a, b = left.value, right.value
    return (a + b) / 2
