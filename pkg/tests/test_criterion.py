"""Criterion polynomials, the t/z map, and the extremality classifier."""

import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cube_sections.criterion import (
    Extremality,
    ExtremalityKind,
    SubdiagonalSpec,
    _kind_from_signs,
    alt_sum_sign,
    build_S1,
    build_S2,
    classify,
    classify_at_z,
    p_poly,
    t_of_z,
    threshold_z,
    z_of_t,
)
from cube_sections.errors import DomainError
from cube_sections.exactpoly import Polynomial


def test_p_poly_known_forms():
    assert p_poly(0, 4) == Polynomial([0, -1, F(4, 3)])  # (4/3)z(z - 3/4)
    assert p_poly(1, 5)(F(2)) == F(4, 3)
    for i, n in ((0, 4), (1, 5), (2, 7), (3, 8), (8, 8)):
        assert p_poly(i, n)(F(i)) == F(i * (n - i), n - 1)
    with pytest.raises(DomainError):
        p_poly(0, 3)
    with pytest.raises(DomainError):
        p_poly(9, 8)


def test_s1_explicit_pieces():
    assert build_S1(4).pieces[1] == Polynomial([F(34, 3), -24, 17, -4])
    expected = (F(-5, 6) * Polynomial([7, -10, 4])
                * Polynomial([-1, 1]) * Polynomial([-2, 1]))
    assert build_S1(5).pieces[1] == expected
    assert build_S1(6).pieces[1] == Polynomial(
        [F(63, 5), -48, 72, -54, F(81, 4), -3])


def test_s2_explicit_pieces():
    assert build_S2(4).pieces[1] == Polynomial([4, -3])  # -3(z - 4/3)
    assert build_S2(5).pieces[1] == Polynomial([-5, 10, -4])
    assert build_S2(6).pieces[2] == Polynomial([-114, 162, -72, 10])


def test_first_piece_is_plain_power():
    for n in (4, 5, 7, 10):
        assert build_S2(n).pieces[0] == Polynomial([0] * (n - 3) + [1])


def test_criteria_reject_small_n():
    for n in (1, 2, 3):
        with pytest.raises(DomainError):
            build_S1(n)
        with pytest.raises(DomainError):
            build_S2(n)


@pytest.mark.parametrize("n", range(4, 26))
def test_breakpoint_continuity(n):
    for pw in (build_S1(n), build_S2(n)):
        for k in pw.breakpoints():
            assert pw.pieces[k - 1](F(k)) == pw.pieces[k](F(k))


def brute_criteria(n, z):
    """Vertex-enumeration oracle for the two alternating sums."""
    s1 = F(0)
    s2 = F(0)
    for mask in range(1 << n):
        i = mask.bit_count()
        if i > math.floor(z):
            continue
        base = (z - i) ** (n - 3)
        w = (F(i * (n - i), n - 1) - (F(n, 2) - i) * (z - i) / (n - 2)
             + 2 * n * (z - i) ** 2 / ((n - 1) * (n - 2)))
        s1 += -base * w if i % 2 else base * w
        s2 += -base if i % 2 else base
    return s1, s2


@pytest.mark.parametrize("n", range(4, 13))
def test_sums_match_vertex_enumeration(n):
    rng = random.Random(1000 + n)
    for _ in range(4):
        z = F(rng.randint(1, 4 * n), 8)
        if not 0 < z <= F(n, 2):
            continue
        b1, b2 = brute_criteria(n, z)
        assert build_S1(n).eval(z) == b1
        assert build_S2(n).eval(z) == b2


def test_z_t_conversion():
    assert z_of_t(4, 0) == 2.0
    assert t_of_z(4, 0.75) == pytest.approx(0.625, abs=1e-15)
    assert z_of_t(9, math.sqrt(9) / 2 - 1e-9) == pytest.approx(3e-9, abs=1e-12)
    with pytest.raises(DomainError):
        z_of_t(4, 1.0)
    with pytest.raises(DomainError):
        t_of_z(4, 0.0)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(4, 30), frac=st.floats(0.01, 0.99))
def test_z_t_roundtrip(n, frac):
    z = frac * n / 2
    assert z_of_t(n, t_of_z(n, z)) == pytest.approx(z, rel=1e-12)


def test_threshold_values():
    assert threshold_z(4) == pytest.approx(0.75, abs=1e-15)
    assert threshold_z(5) == pytest.approx(1.0, abs=1e-15)
    for n in range(50, 301, 10):
        ratio = threshold_z(n) * math.log(n) / (n - 3)
        assert 0.8 <= ratio <= 1.25


def test_window_signs():
    for n in range(4, 41):
        thr = F(threshold_z(n)).limit_denominator(10**9)
        for j in (1, 3, 5):
            z = thr * j / 6
            assert build_S1(n).eval(z) < 0
            assert build_S2(n).eval(z) > 0


def test_classify_examples():
    res = classify(SubdiagonalSpec(4, 4), 0)
    assert res.kind is ExtremalityKind.STRICT_LOCAL_MAX
    assert res.z == 2 and res.s1_sign == -1 and res.s2_sign is None

    res = classify_at_z(SubdiagonalSpec(5, 5), F(3, 2))
    assert res.kind is ExtremalityKind.STRICT_LOCAL_MIN

    res = classify_at_z(SubdiagonalSpec(4, 10), F(7, 4))
    assert res.kind is ExtremalityKind.STRICT_LOCAL_MAX
    assert res.s1_sign == -1 and res.s2_sign == -1

    res = classify_at_z(SubdiagonalSpec(4, 10), F(3, 2))
    assert res.kind is ExtremalityKind.NOT_EXTREMAL
    assert res.s1_sign == 1 and res.s2_sign == -1


def test_classify_zero_values_inconclusive():
    # z = 3/4 is an exact zero of S1 in order 4
    res = classify_at_z(SubdiagonalSpec(4, 4), F(3, 4))
    assert res.kind is ExtremalityKind.INCONCLUSIVE and res.s1_sign == 0
    # z = 4/3 is the exact zero of S2; one zero sign is enough
    res = classify_at_z(SubdiagonalSpec(4, 9), F(4, 3))
    assert res.kind is ExtremalityKind.INCONCLUSIVE and res.s2_sign == 0


def test_classify_adaptive_irrational_path():
    res = classify(SubdiagonalSpec(5, 9), 0.3)  # z = 2.5 - 0.3 sqrt5 > rho_circ
    assert res.kind is ExtremalityKind.NOT_EXTREMAL
    assert not res.z_exact
    assert float(res.z) == pytest.approx(2.5 - 0.3 * math.sqrt(5), abs=1e-12)


def test_classify_perfect_square_path_is_exact():
    res = classify(SubdiagonalSpec(9, 9), 0.25)
    assert res.z_exact and res.z == F(9, 2) - F(1, 4) * 3


def test_classify_domain_errors():
    with pytest.raises(DomainError):
        classify(SubdiagonalSpec(4, 4), 1.0)
    with pytest.raises(DomainError):
        classify(SubdiagonalSpec(4, 4), -0.1)
    with pytest.raises(DomainError):
        classify_at_z(SubdiagonalSpec(4, 4), F(5, 2))
    with pytest.raises(DomainError):
        SubdiagonalSpec(3, 5)
    with pytest.raises(DomainError):
        SubdiagonalSpec(6, 5)


def test_classify_rational_representation_invariance():
    spec = SubdiagonalSpec(6, 11)
    assert classify(spec, F(3, 10)) == classify(spec, F(6, 20))
    assert classify(spec, 0.25) == classify(spec, F(1, 4))


def test_decision_table_total():
    seen = set()
    for s1 in (-1, 0, 1):
        for s2 in (-1, 0, 1):
            kind = _kind_from_signs(s1, s2, diagonal=False)
            assert isinstance(kind, ExtremalityKind)
            seen.add((s1, s2, kind))
    assert len(seen) == 9
    assert _kind_from_signs(-1, None, True) is ExtremalityKind.STRICT_LOCAL_MAX
    assert _kind_from_signs(1, None, True) is ExtremalityKind.STRICT_LOCAL_MIN
    assert _kind_from_signs(0, None, True) is ExtremalityKind.INCONCLUSIVE


def test_diagonal_classification_decisive_off_zero_set():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(4, 14)
        z = F(rng.randint(1, 10**6), 10**6) * F(n, 2)
        if z == 0 or build_S1(n).eval(z) == 0:
            continue
        res = classify_at_z(SubdiagonalSpec(n, n), z)
        assert res.kind is not ExtremalityKind.INCONCLUSIVE


def test_alt_sum_sign():
    # single-term case: sign is immediate
    assert alt_sum_sign(1, 6, F(19, 10), [F(1)]) == -1
    assert alt_sum_sign(2, 6, F(5, 2), [F(2)]) == 1
    # n = 6, l = 0, f = 1: bound is 1/(1 - (1/6)^(1/3)) ~ 2.19
    assert alt_sum_sign(0, 6, F(6, 5), [F(1), F(1)]) == 1
    # and the conclusion agrees with the exact sum
    assert build_S2(6).eval(F(6, 5)) > 0
    # n = 5, z = 1.9: bound ~1.809 < z, the condition fails
    assert alt_sum_sign(0, 5, F(19, 10), [F(1), F(1)]) is None
    with pytest.raises(DomainError):
        alt_sum_sign(0, 5, F(3, 2), [F(1), F(-1)])
    with pytest.raises(DomainError):
        alt_sum_sign(2, 5, F(3, 2), [F(1)])


def test_alt_sum_sign_vacuous_ratio_branch():
    # ratio (l+1)/(n-l) * f_l/f_{l+1} >= 1 makes the bound vacuous
    assert alt_sum_sign(1, 4, F(5, 2), [F(10), F(1)]) == -1


def test_extremality_is_value_object():
    a = classify_at_z(SubdiagonalSpec(5, 5), F(3, 2))
    b = classify_at_z(SubdiagonalSpec(5, 5), F(3, 2))
    assert a == b and isinstance(a, Extremality)
