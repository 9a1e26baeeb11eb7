import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import oracle
from levyint import (
    BudgetExceeded,
    DomainError,
    EJParams,
    Method,
    PrecisionCtx,
    ToleranceNotMet,
    ej_direct,
    ej_inversion,
    waring_count,
    waring_genfun_check,
)

CTX = PrecisionCtx(digits=30)
REF = oracle(45)


def ref_sum(alpha, a):
    alpha = REF.mpf(Fraction(alpha).numerator) / Fraction(alpha).denominator
    return REF.nsum(lambda n: REF.exp(-REF.mpf(a) * n**alpha), [0, REF.inf])


def test_direct_examples():
    mp = CTX.mp
    r = ej_direct(EJParams(1, 1), CTX)
    assert r.method is Method.DIRECT
    assert abs(r.value - 1 / (1 - mp.exp(-1))) <= CTX.tol
    r = ej_direct(EJParams(2, 10), CTX)
    assert abs(r.value - (1 + mp.exp(-10) + mp.exp(-40) + mp.exp(-90))) <= CTX.tol


def test_direct_theta_relation():
    a = REF.mpf("0.1")
    theta = REF.jtheta(3, 0, REF.exp(-a))
    assert abs(2 * ej_direct(EJParams(2, "0.1"), CTX).value - 1 - theta) <= 10 * CTX.tol * theta


@pytest.mark.parametrize("alpha, a", [("1/2", 3), ("3/2", "0.2"), (3, "0.05"), (5, 1)])
def test_direct_against_mpmath(alpha, a):
    r = ej_direct(EJParams(alpha, CTX.mp.mpf(a)), CTX)
    want = ref_sum(alpha, a)
    assert abs(r.value - want) <= r.err_estimate + 10 * CTX.tol * want


def test_direct_budget():
    with pytest.raises(ToleranceNotMet) as info:
        ej_direct(EJParams(1, "1e-6"), PrecisionCtx(digits=30, max_terms=1000))
    assert info.value.value > 0 and info.value.err_estimate > 0


def test_params_validation():
    with pytest.raises(DomainError):
        EJParams(2, 0)
    with pytest.raises(DomainError):
        EJParams(2, -1)


@pytest.mark.parametrize("alpha", ["2", "3", "4", "3/2"])
@pytest.mark.parametrize("a", ["0.05", "0.1", "0.5", "1", "5"])
def test_inversion_identity(alpha, a):
    p = EJParams(alpha, CTX.mp.mpf(a))
    d = ej_direct(p, CTX)
    i = ej_inversion(p, CTX)
    assert i.method is Method.INVERSION
    assert abs(d.value - i.value) <= 3 * (d.err_estimate + i.err_estimate)


def test_inversion_theta_to_25_digits():
    p = EJParams(2, PrecisionCtx(digits=50).mp.mpf("0.1"))
    ctx = PrecisionCtx(digits=50)
    assert abs(ej_direct(p, ctx).value - ej_inversion(p, ctx).value) <= 1e-25


def test_inversion_needs_alpha_above_one():
    with pytest.raises(DomainError):
        ej_inversion(EJParams(1, 1), CTX)


@pytest.mark.parametrize("alpha", ["1", "3/2"])
def test_small_a_leading_term_within_one_percent(alpha):
    al = Fraction(alpha)
    inv = 1 / al
    mp = CTX.mp
    a = mp.mpf("1e-3")
    lead = mp.gamma(mp.mpf(inv.numerator) / inv.denominator + 1)
    ratio = a ** (mp.mpf(inv.numerator) / inv.denominator) * ej_direct(EJParams(alpha, a), CTX).value / lead
    assert abs(ratio - 1) < 0.01


@pytest.mark.parametrize("alpha", ["2", "3"])
def test_small_a_ratio_converges(alpha):
    # the 1/2 correction is a^{1/alpha}/2 relative, so the ratio approaches 1 monotonically
    al = Fraction(alpha)
    mp = CTX.mp
    inv = mp.mpf(al.denominator) / al.numerator
    lead = mp.gamma(inv + 1)
    gaps = []
    for a in ("1e-1", "1e-2", "1e-3"):
        a = mp.mpf(a)
        gaps.append(abs(a**inv * ej_direct(EJParams(alpha, a), CTX).value / lead - 1))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 0.1


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["3/2", "2", "3"]), st.floats(min_value=0.05, max_value=5), st.floats(min_value=1.01, max_value=3))
def test_direct_decreasing_in_a(alpha, a, factor):
    s1 = ej_direct(EJParams(alpha, a), CTX).value
    s2 = ej_direct(EJParams(alpha, a * factor), CTX).value
    assert s2 < s1


def brute_waring(k, s, n):
    top = int(round(n ** (1 / k))) + 1
    rng = range(-top, top + 1)
    return sum(1 for t in itertools.product(rng, repeat=s) if sum(x**k for x in t) == n)


def test_waring_examples():
    assert waring_count(2, 2, 0) == 1
    assert waring_count(2, 1, 4) == 2
    assert waring_count(2, 2, 5) == 8
    assert waring_count(2, 2, 25) == 12


@pytest.mark.parametrize("k, s", [(2, 1), (2, 2), (2, 3), (4, 2), (4, 3), (6, 2)])
def test_waring_against_brute_force(k, s):
    for n in range(0, 60):
        assert waring_count(k, s, n) == brute_waring(k, s, n)


def test_waring_sum_of_two_squares_formula():
    # r_2(n) = 4 (d_1(n) - d_3(n))
    for n in range(1, 300):
        d1 = sum(1 for d in range(1, n + 1) if n % d == 0 and d % 4 == 1)
        d3 = sum(1 for d in range(1, n + 1) if n % d == 0 and d % 4 == 3)
        assert waring_count(2, 2, n) == 4 * (d1 - d3)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 4]), st.integers(min_value=1, max_value=3), st.integers(min_value=0, max_value=300))
def test_waring_sign_symmetry(k, s, n):
    # every solution with a nonzero coordinate has its negated partner, so the
    # count minus the solutions using zeros only in some slots is even
    c = waring_count(k, s, n)
    assert c == waring_count(k, s, n)
    zero_first = waring_count(k, s - 1, n) if s > 1 else int(n == 0)
    assert (c - zero_first) % 2 == 0


def test_waring_rejections():
    with pytest.raises(DomainError):
        waring_count(3, 2, 10)
    with pytest.raises(DomainError):
        waring_count(2, 0, 10)
    with pytest.raises(BudgetExceeded):
        waring_count(2, 2, 600_000)


def test_genfun_s1_is_definition():
    chk = waring_genfun_check(2, 1, 1, 100, PrecisionCtx(digits=50))
    assert chk.residual <= 1e-40
    assert chk.passed


@pytest.mark.parametrize("k, s", [(2, 2), (2, 3), (4, 2), (4, 3)])
def test_genfun_identity(k, s):
    chk = waring_genfun_check(k, s, 1, 200, CTX)
    assert chk.passed
    assert chk.residual <= chk.tail_bound + chk.evaluator_err


def test_genfun_detects_a_wrong_count(monkeypatch):
    from levyint import eulerjacobi

    real = eulerjacobi.waring_count
    monkeypatch.setattr(eulerjacobi, "waring_count", lambda k, s, n: real(k, s, n) + (n == 7))
    assert not waring_genfun_check(2, 2, 1, 50, CTX).passed
