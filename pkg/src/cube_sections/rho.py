"""Certified critical roots of the criterion polynomials.

For each order n the weighted criterion S1 changes sign exactly twice on
(0, n/2), at rho_plus and rho_minus, and the unweighted criterion S2
exactly once, at rho_circ, ordered rho_plus < rho_circ < rho_minus. This
module certifies that pattern with exact arithmetic, refines the three
roots, verifies the known closed forms, and produces the dimension table.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .criterion import build_S1, build_S2
from .errors import ClosedFormMismatch, PatternViolation
from .exactpoly import Endpoint, Polynomial, sign_pattern

RationalLike = Union[Fraction, int]

#: A certified root: exact rational value, or the midpoint of a refined
#: isolating interval (see exactpoly.Endpoint).
CertifiedRoot = Endpoint

DEFAULT_EPS = Fraction(1, 10**12)
TABLE_EPS = Fraction(1, 10**8)

THREADS_ENV = "CUBE_SECTIONS_THREADS"

#: Reference values (rho_minus, rho_circ, rho_plus) to 6 significant digits
#: for 8 <= d <= 35, used as the regression baseline by the verify suite
#: and the acceptance tests.
REFERENCE_VALUES = {
    8: (3.38859, 3.14086, 2.13730),
    9: (3.85428, 3.59394, 2.52065),
    10: (4.31894, 4.04931, 2.90984),
    11: (4.78630, 4.50661, 3.30377),
    12: (5.25481, 4.96566, 3.70286),
    13: (5.72466, 5.42625, 4.10615),
    14: (6.19563, 5.88821, 4.51316),
    15: (6.66760, 6.35143, 4.92352),
    16: (7.14049, 6.81577, 5.33689),
    17: (7.61421, 7.28115, 5.75298),
    18: (8.08869, 7.74749, 6.17156),
    19: (8.56386, 8.21469, 6.59241),
    20: (9.03967, 8.68271, 7.01536),
    21: (9.51608, 9.15149, 7.44025),
    22: (9.99303, 9.62096, 7.86693),
    23: (10.4705, 10.0911, 8.29529),
    24: (10.9485, 10.5619, 8.72522),
    25: (11.4269, 11.0332, 9.15661),
    26: (11.9057, 11.5051, 9.58938),
    27: (12.3849, 11.9775, 10.0234),
    28: (12.8646, 12.4504, 10.4587),
    29: (13.3445, 12.9237, 10.8952),
    30: (13.8249, 13.3975, 11.3328),
    31: (14.3055, 13.8717, 11.7714),
    32: (14.7864, 14.3464, 12.2110),
    33: (15.2677, 14.8214, 12.6515),
    34: (15.7492, 15.2967, 13.0930),
    35: (16.2310, 15.7725, 13.5353),
}


@dataclass(frozen=True)
class RhoTriple:
    """The three critical roots for order n, with pattern verification."""

    n: int
    rho_minus: CertifiedRoot
    rho_circ: CertifiedRoot
    rho_plus: CertifiedRoot
    pattern_ok: bool


@dataclass(frozen=True)
class TableRow:
    """One row of the dimension table (full-precision values; callers round
    to 6 significant digits for display)."""

    d: int
    rho_minus: Optional[float]
    rho_circ: Optional[float]
    rho_plus: Optional[float]
    exact_minus: bool = False
    exact_circ: bool = False
    exact_plus: bool = False
    note: Optional[str] = None


def solve_rho(n: int, eps: RationalLike = DEFAULT_EPS) -> RhoTriple:
    """Isolate and refine the critical roots for order n.

    Certifies by exact sign analysis that S1 has the two-crossing pattern
    (negative, positive, negative) on (0, n/2] and S2 the single crossing
    (positive, negative); raises PatternViolation otherwise, carrying both
    observed patterns. pattern_ok additionally records the strict ordering
    rho_plus < rho_circ < rho_minus.
    """
    eps = Fraction(eps)
    s1, s2 = build_S1(n), build_S2(n)
    segs1 = sign_pattern(s1, eps=eps)
    segs2 = sign_pattern(s2, eps=eps)
    pat1 = [seg.sign for seg in segs1]
    pat2 = [seg.sign for seg in segs2]
    if pat1 != [-1, 1, -1] or pat2 != [1, -1]:
        raise PatternViolation(
            f"unexpected sign-change pattern at n = {n}: "
            f"S1 {pat1}, S2 {pat2}",
            n=n, s1_pattern=segs1, s2_pattern=segs2)
    if s1.eval(s1.domain_end) == 0 or s2.eval(s2.domain_end) == 0:
        raise PatternViolation(
            f"criterion vanishes at the domain end z = n/2 for n = {n}",
            n=n, s1_pattern=segs1, s2_pattern=segs2)
    rho_plus = segs1[0].hi
    rho_minus = segs1[1].hi
    rho_circ = segs2[0].hi
    ordering = rho_plus.value < rho_circ.value < rho_minus.value
    return RhoTriple(n=n, rho_minus=rho_minus, rho_circ=rho_circ,
                     rho_plus=rho_plus, pattern_ok=bool(ordering))


def _table_row(d: int, eps: Fraction) -> TableRow:
    try:
        triple = solve_rho(d, eps)
    except PatternViolation as exc:
        return TableRow(d=d, rho_minus=None, rho_circ=None, rho_plus=None,
                        note=str(exc))
    note = None if triple.pattern_ok else "ordering violated"
    return TableRow(
        d=d,
        rho_minus=float(triple.rho_minus.value),
        rho_circ=float(triple.rho_circ.value),
        rho_plus=float(triple.rho_plus.value),
        exact_minus=triple.rho_minus.exact,
        exact_circ=triple.rho_circ.exact,
        exact_plus=triple.rho_plus.exact,
        note=note,
    )


def table(d_min: int, d_max: int, eps: RationalLike = TABLE_EPS) -> list:
    """Rows (d, rho_minus, rho_circ, rho_plus) for d in [d_min, d_max].

    Rows are independent; CUBE_SECTIONS_THREADS > 1 enables a process pool.
    Pattern violations are recorded per row without aborting the sweep.
    Output order is deterministic.
    """
    if not 4 <= d_min <= d_max:
        raise ValueError(f"need 4 <= d_min <= d_max, got [{d_min}, {d_max}]")
    eps = Fraction(eps)
    dims = list(range(d_min, d_max + 1))
    workers = 1
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        workers = max(1, min(int(raw), len(dims)))
    if workers == 1:
        return [_table_row(d, eps) for d in dims]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_table_row, dims, [eps] * len(dims)))


@dataclass(frozen=True)
class ClosedFormCheck:
    name: str
    reference: float
    computed: float
    tolerance: float
    ok: bool


def _rho4_minus_closed_form() -> float:
    """Real root of the second S1 piece in dimension 4, in radicals."""
    return (17 + (17 - 12 * math.sqrt(2)) ** (1 / 3)
            + (17 + 12 * math.sqrt(2)) ** (1 / 3)) / 12


def _rho6_circ_closed_form() -> float:
    """Trigonometric form of the S2 crossing in order 6."""
    theta = math.atan(5 * math.sqrt(11) / 7) / 3
    return 12 / 5 - (3 / 5) * math.cos(theta) + (3 * math.sqrt(3) / 5) * math.sin(theta)


def closed_form_checks(eps: RationalLike = DEFAULT_EPS) -> list:
    """Compare solver output against the known closed forms.

    Exact expectations (3/4, 4/3, 1, 2) must match exactly; the radical and
    trigonometric forms must agree within eps. Any mismatch raises
    ClosedFormMismatch, since it would indicate a construction bug.
    """
    eps = Fraction(eps)
    tol = float(eps)
    r4 = solve_rho(4, eps)
    r5 = solve_rho(5, eps)
    r6 = solve_rho(6, eps)
    checks = []

    def exact(name, root: CertifiedRoot, value: Fraction):
        ok = root.exact and root.value == value
        checks.append(ClosedFormCheck(name, float(value), float(root.value), 0.0, ok))

    def close(name, root: CertifiedRoot, value: float):
        ok = abs(float(root.value) - value) <= tol
        checks.append(ClosedFormCheck(name, value, float(root.value), tol, ok))

    exact("rho4_plus", r4.rho_plus, Fraction(3, 4))
    exact("rho4_circ", r4.rho_circ, Fraction(4, 3))
    exact("rho5_plus", r5.rho_plus, Fraction(1))
    exact("rho5_minus", r5.rho_minus, Fraction(2))
    close("rho4_minus", r4.rho_minus, _rho4_minus_closed_form())
    close("rho5_circ", r5.rho_circ, (5 + math.sqrt(5)) / 4)
    close("rho6_circ", r6.rho_circ, _rho6_circ_closed_form())

    # algebraic counterpart for order 5: the crossing piece is exactly
    # -(4z^2 - 10z + 5), whose positive root is (5 + sqrt(5))/4
    piece = build_S2(5).pieces[1]
    alg_ok = piece == Polynomial([-5, 10, -4])
    checks.append(ClosedFormCheck("rho5_circ_minpoly", 0.0, 0.0, 0.0, alg_ok))

    bad = [c.name for c in checks if not c.ok]
    if bad:
        raise ClosedFormMismatch(
            f"closed-form disagreement for {', '.join(bad)} "
            "(polynomial construction bug?)")
    return checks
