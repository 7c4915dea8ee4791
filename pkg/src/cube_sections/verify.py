"""Runnable invariant suites behind the `verify` CLI subcommand.

Each check prints one ok/FAIL line; run_suite aggregates the counts. The
same properties are exercised (mostly at larger scale) by the test suite.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import quad

from .criterion import (
    ExtremalityKind,
    SubdiagonalSpec,
    _kind_from_signs,
    build_S1,
    build_S2,
    classify,
    classify_at_z,
    threshold_z,
    z_of_t,
)
from .errors import PatternViolation
from .exactpoly import _sign
from .rho import REFERENCE_VALUES, closed_form_checks, solve_rho, table
from .volume import (
    Direction,
    QuadratureConfig,
    SectionQuery,
    grad_sum,
    hessian_combo_sum,
    hessian_kernel,
    hessian_outside_sum,
    normalized_vertex_sum,
    polya_volume,
    q1_integral,
    q2_integral,
    subdiagonal_direction,
    vertex_sum_volume,
)

_SEED = 20270831


@dataclass
class SuiteOutcome:
    suite: str
    passed: int = 0
    failed: int = 0
    pattern_violation: bool = False
    failures: list = field(default_factory=list)

    def record(self, name: str, ok: bool, detail: str = ""):
        if ok:
            self.passed += 1
            print(f"ok   {name}")
        else:
            self.failed += 1
            self.failures.append(name)
            print(f"FAIL {name}{': ' + detail if detail else ''}")


def _random_direction(rng: random.Random, active_lo=3, active_hi=8) -> Direction:
    m = rng.randint(active_lo, active_hi)
    coords = [Fraction(rng.randint(30, 140), 100) for _ in range(m)]
    return Direction(coords)


def _random_query(rng: random.Random, **kw) -> SectionQuery:
    direction = _random_direction(rng, **kw)
    n = direction.active
    tmax = direction.norm() * math.sqrt(n) / 2
    return SectionQuery(direction, Fraction(rng.randint(0, 899), 1000) * Fraction(tmax).limit_denominator(1000))


def _brute_criteria(n: int, z: Fraction):
    """Independent S1/S2 oracle: enumerate the 2^n cube vertices grouped by
    coordinate sum, with the layer weight written out inline."""
    s1 = Fraction(0)
    s2 = Fraction(0)
    zf = math.floor(z)
    for mask in range(1 << n):
        i = mask.bit_count()
        if i > zf:
            continue
        base = (z - i) ** (n - 3)
        weight = (Fraction(i * (n - i), n - 1)
                  - (Fraction(n, 2) - i) * (z - i) / (n - 2)
                  + 2 * n * (z - i) ** 2 / ((n - 1) * (n - 2)))
        if i % 2:
            s1 -= base * weight
            s2 -= base
        else:
            s1 += base * weight
            s2 += base
    return s1, s2


# --------------------------------------------------------------- formulas

def _suite_formulas(out: SuiteOutcome, dmax: int):
    rng = random.Random(_SEED)

    v2 = vertex_sum_volume(SectionQuery(subdiagonal_direction(2, 2), 0))
    out.record("vertex volume, square diagonal", abs(v2 - math.sqrt(2)) < 1e-9)
    v3 = vertex_sum_volume(SectionQuery(subdiagonal_direction(3, 3), 0))
    out.record("vertex volume, cube center section",
               abs(v3 - 3 * math.sqrt(3) / 4) < 1e-9)
    p3 = polya_volume(SectionQuery(subdiagonal_direction(3, 3), 0))
    out.record("integral volume, cube center section", abs(p3 - v3) < 1e-7)

    worst = 0.0
    cfg = QuadratureConfig(abs_tol=1e-7)
    for _ in range(12):
        q = _random_query(rng)
        worst = max(worst, abs(vertex_sum_volume(q) - polya_volume(q, cfg)))
    out.record("vertex sum vs integral on random sections", worst < 1e-6,
               f"worst {worst:.2e}")

    q = _random_query(rng)
    c = Fraction(7, 3)
    scaled = SectionQuery(Direction([c * x for x in q.direction.a]), c * q.t)
    lhs = c * normalized_vertex_sum(scaled)
    rhs = normalized_vertex_sum(SectionQuery(q.direction, q.t))
    out.record("scaling covariance (exact)", lhs == rhs)

    perm = list(q.direction.a)
    rng.shuffle(perm)
    out.record("permutation invariance (exact)",
               normalized_vertex_sum(SectionQuery(Direction(perm), q.t))
               == normalized_vertex_sum(q))

    ok = True
    for _ in range(5):
        q = _random_query(rng, active_lo=4, active_hi=6)
        h = 1e-5
        j = rng.randint(1, q.direction.dim)
        base = [float(x) for x in q.direction.a]
        up = list(base)
        dn = list(base)
        up[j - 1] += h
        dn[j - 1] -= h
        fd = (float(normalized_vertex_sum(SectionQuery(Direction(up), q.t)))
              - float(normalized_vertex_sum(SectionQuery(Direction(dn), q.t)))) / (2 * h)
        g = float(grad_sum(q, j))
        ref = max(abs(g), 1e-9)
        if abs(fd - g) / ref > 1e-5:
            ok = False
    out.record("gradient matches finite differences", ok)

    worst1 = worst2 = 0.0
    for n in range(4, 9):
        for t in (0.1, 0.5, 0.9):
            if t >= math.sqrt(n) / 2:
                continue
            z = Fraction(z_of_t(n, t))
            worst1 = max(worst1, abs(float(hessian_combo_sum(n, z)) - q1_integral(n, t)))
            worst2 = max(worst2, abs(float(hessian_outside_sum(n, z)) - q2_integral(n, t)))
    out.record("Hessian combination: sum vs integral", worst1 < 1e-6,
               f"worst {worst1:.2e}")
    out.record("outside second derivative: sum vs integral", worst2 < 1e-6,
               f"worst {worst2:.2e}")

    for n, d in ((5, 5), (4, 7)):
        direction = subdiagonal_direction(n, d)
        total = _fubini_integral(direction, n)
        out.record(f"Fubini normalization (n={n}, d={d})", abs(total - 1) < 1e-6,
                   f"got {total!r}")

    direction = subdiagonal_direction(6, 6)
    grid = [math.sqrt(6) / 2 * i / 100 for i in range(100)]
    vals = [vertex_sum_volume(SectionQuery(direction, t)) for t in grid]
    mono = all(vals[i + 1] <= vals[i] + 1e-10 for i in range(len(vals) - 1))
    out.record("Brunn unimodality on the diagonal", mono)

    bound = math.sqrt(2) + 1e-9
    ok = True
    for _ in range(200):
        d = rng.randint(2, 10)
        coords = [rng.random() for _ in range(d)]
        norm = math.sqrt(sum(x * x for x in coords))
        direction = Direction([x / norm for x in coords])
        if direction.active < 2:
            continue
        if vertex_sum_volume(SectionQuery(direction, 0)) > bound:
            ok = False
            break
    out.record("central sections stay below sqrt(2)", ok)


def _fubini_integral(direction: Direction, n: int) -> float:
    """Integral of V over t in [-sqrt(n)/2, sqrt(n)/2] by per-piece Gauss
    panels aligned with the breakpoints of z."""
    nodes, wts = np.polynomial.legendre.leggauss(24)
    rn = math.sqrt(n)
    total = 0.0
    cuts = sorted({0.0} | {(n / 2 - k) / rn for k in range(n // 2 + 1)} | {rn / 2})
    for lo, hi in zip(cuts, cuts[1:]):
        half = (hi - lo) / 2
        mid = (hi + lo) / 2
        for x, w in zip(nodes, wts):
            t = mid + half * x
            total += w * half * vertex_sum_volume(SectionQuery(direction, t))
    return 2 * total


# --------------------------------------------------------------- criteria

def _suite_criteria(out: SuiteOutcome, dmax: int):
    rng = random.Random(_SEED + 1)

    ok = True
    for n in range(4, 11):
        for _ in range(4):
            z = Fraction(rng.randint(1, 2 * n - 1), rng.choice((2, 3, 4, 7)))
            if not 0 < z <= Fraction(n, 2):
                continue
            b1, b2 = _brute_criteria(n, z)
            if build_S1(n).eval(z) != b1 or build_S2(n).eval(z) != b2:
                ok = False
    out.record("S1/S2 match vertex enumeration (exact)", ok)

    ok = True
    for n in range(4, 41):
        thr = Fraction(threshold_z(n)).limit_denominator(10**6)
        for j in range(1, 6):
            z = thr * j / 6
            if not (build_S1(n).eval(z) < 0 and build_S2(n).eval(z) > 0):
                ok = False
    out.record("criterion signs inside the guaranteed window", ok)

    kinds = {(s1, s2): _kind_from_signs(s1, s2, False)
             for s1 in (-1, 0, 1) for s2 in (-1, 0, 1)}
    total_ok = len(kinds) == 9 and all(isinstance(k, ExtremalityKind)
                                       for k in kinds.values())
    diag = {s1: _kind_from_signs(s1, None, True) for s1 in (-1, 0, 1)}
    total_ok = total_ok and len(diag) == 3
    out.record("decision table total", total_ok)

    spec = SubdiagonalSpec(6, 11)
    t1 = Fraction(3, 10)
    t2 = Fraction(6, 20)
    out.record("classify invariant under rational representation",
               classify(spec, t1) == classify(spec, t2))

    ok = True
    for _ in range(25):
        n = rng.randint(4, 12)
        z = Fraction(rng.randint(1, 10**6), 10**6) * Fraction(n, 2)
        if z == 0 or build_S1(n).eval(z) == 0:
            continue
        res = classify_at_z(SubdiagonalSpec(n, n), z)
        if res.kind is ExtremalityKind.INCONCLUSIVE:
            ok = False
    out.record("diagonal classification decisive off the zero set", ok)

    ok = True
    for n in range(50, min(dmax, 300) + 1, 25):
        ratio = threshold_z(n) * math.log(n) / (n - 3)
        if not 0.8 <= ratio <= 1.25:
            ok = False
    out.record("guaranteed window tracks (n-3)/log n", ok)


# -------------------------------------------------------------------- rho

def _suite_rho(out: SuiteOutcome, dmax: int):
    try:
        closed_form_checks()
        out.record("closed-form roots", True)
    except Exception as exc:  # noqa: BLE001 - report and continue
        out.record("closed-form roots", False, str(exc))

    rows = table(8, min(dmax, 35))
    ok = True
    for row in rows:
        ref = REFERENCE_VALUES.get(row.d)
        if ref is None:
            continue
        for got, want in zip((row.rho_minus, row.rho_circ, row.rho_plus), ref):
            if got is None or abs(got - want) > 5e-6 * abs(want):
                ok = False
    out.record("table matches the reference values", ok)

    try:
        all_ok = True
        for n in range(4, dmax + 1):
            triple = solve_rho(n, Fraction(1, 10**8))
            if not triple.pattern_ok:
                all_ok = False
        out.record(f"sign pattern certified up to n = {dmax}", all_ok)
    except PatternViolation as exc:
        out.pattern_violation = True
        out.record("sign pattern certified", False, str(exc))

    ok = True
    off = Fraction(1, 1000)
    for n in (4, 5, 6, 9):
        triple = solve_rho(n)
        plus, circ, minus = (triple.rho_plus.value, triple.rho_circ.value,
                             triple.rho_minus.value)
        diag = SubdiagonalSpec(n, n)
        sub = SubdiagonalSpec(n, n + 3)
        checks = [
            (diag, plus - off, ExtremalityKind.STRICT_LOCAL_MAX),
            (diag, minus + off, ExtremalityKind.STRICT_LOCAL_MAX),
            (diag, (plus + minus) / 2, ExtremalityKind.STRICT_LOCAL_MIN),
            (sub, (plus + circ) / 2, ExtremalityKind.STRICT_LOCAL_MIN),
            (sub, (circ + minus) / 2, ExtremalityKind.NOT_EXTREMAL),
            (sub, plus - off, ExtremalityKind.NOT_EXTREMAL),
            (sub, minus + off, ExtremalityKind.STRICT_LOCAL_MAX),
        ]
        for spec, z, want in checks:
            if classify_at_z(spec, z).kind is not want:
                ok = False
    out.record("classification consistent with the root intervals", ok)

    ok = True
    for n in (6, 8, 11):
        triple = solve_rho(n)
        s1, s2 = build_S1(n), build_S2(n)
        for root, pw in ((triple.rho_plus, s1), (triple.rho_minus, s1),
                         (triple.rho_circ, s2)):
            if root.exact:
                if pw.eval(root.value) != 0:
                    ok = False
            else:
                iv = root.interval
                if _sign(pw.eval(iv.lo)) * _sign(pw.eval(iv.hi)) != -1:
                    ok = False
    out.record("certified roots bracket a sign change (exact)", ok)


# ------------------------------------------------------------------ props

def _suite_props(out: SuiteOutcome, dmax: int):
    grid = np.linspace(1e-3, 100.0, 4000)
    out.record("oscillation kernel negative for s > 0",
               bool(np.all(hessian_kernel(grid) < 0)))

    ok = True
    for n, s_lo in ((5, 4.0), (6, 1e-2), (7, 1e-2), (8, 1e-2)):
        s = np.linspace(s_lo + 1e-9, 100.0, 3000)
        vals = hessian_kernel(s) / s ** (n - 2)
        if not np.all(np.diff(vals) > 0):
            ok = False
    out.record("scaled kernel strictly increasing", ok)

    val, err = quad(lambda s: float(hessian_kernel(s)) * np.sinc(s / np.pi) ** 3,
                    0.0, 2 * math.pi, epsabs=1e-10, limit=200)
    out.record("kernel-weighted hump integral negative",
               val < 0 and err < 1e-8, f"value {val:.6e}")


_SUITES = {
    "formulas": _suite_formulas,
    "criteria": _suite_criteria,
    "rho": _suite_rho,
    "props": _suite_props,
}


def run_suite(suite: str, dmax: int = 35) -> SuiteOutcome:
    if suite != "all" and suite not in _SUITES:
        raise ValueError(f"unknown suite {suite}")
    outcome = SuiteOutcome(suite=suite)
    names = list(_SUITES) if suite == "all" else [suite]
    for name in names:
        _SUITES[name](outcome, dmax)
    return outcome
