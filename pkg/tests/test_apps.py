import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import oracle
from levyint import (
    CancellationError,
    DomainError,
    MethodPolicy,
    PrecisionCtx,
    bh_kernel,
    levy_quad,
    pearcey_relation_check,
    phi_hat,
    psi_series,
    real_zeros,
)
from levyint.apps import bh_numerator, stability_convolution_check

CTX = PrecisionCtx(digits=30)
REF = oracle(60)


def ref_psi(x, order=0):
    x = REF.mpf(x)

    def psi(t):
        return -REF.nsum(
            lambda n: (-1) ** n * t ** (4 * n + 1) * REF.factorial(2 * n) / (REF.factorial(n) * REF.factorial(4 * n + 1)),
            [0, REF.inf],
        ) / REF.sqrt(REF.pi)

    return psi(x) if order == 0 else REF.diff(psi, x, order)


def test_pearcey_relation_examples():
    assert pearcey_relation_check(0, CTX) <= 1e-10
    assert pearcey_relation_check(1, CTX) <= 1e-6
    assert pearcey_relation_check(2, CTX) <= 1e-6
    with pytest.raises(DomainError):
        pearcey_relation_check(9, CTX)


def test_phi_hat_at_origin():
    want = REF.sqrt(2) / REF.pi * REF.gamma(REF.mpf(5) / 4)
    assert abs(phi_hat(0, CTX) - want) <= 10 * CTX.tol


def test_phi_hat_at_one_is_scaled_levy():
    mp = CTX.mp
    want = mp.sqrt(2) / mp.pi * levy_quad(4, mp.sqrt(2), CTX).value
    assert abs(phi_hat(1, CTX) - want) <= 10 * CTX.tol


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=0, max_value=12))
def test_phi_hat_even(x):
    assert abs(phi_hat(x, CTX) - phi_hat(-x, CTX)) <= 10 * CTX.tol


@pytest.mark.parametrize("x", [0.3, 1.7, 3.2, 5])
def test_phi_hat_quadrature_vs_taylor(x):
    q = phi_hat(x, CTX, policy=MethodPolicy("quad"))
    t = phi_hat(x, CTX, policy=MethodPolicy("taylor"))
    assert abs(q - t) <= 10 * CTX.tol


def test_phi_hat_derivatives_chain_rule():
    mp = CTX.mp
    h = mp.mpf(10) ** -8
    for x in (0.4, 2.1):
        fd1 = (phi_hat(x + h, CTX) - phi_hat(x - h, CTX)) / (2 * h)
        assert abs(phi_hat(x, CTX, 1) - fd1) <= 1e-14
    with pytest.raises(DomainError):
        phi_hat(1, CTX, 3)


def test_psi_examples():
    assert psi_series(0, 0, CTX) == 0
    assert abs(psi_series(0, 1, CTX) + 1 / REF.sqrt(REF.pi)) <= CTX.tol
    assert abs(psi_series(1, 0, CTX) - ref_psi(1)) <= 10 * CTX.tol


@pytest.mark.parametrize("x", [0.5, 2.5, 6, 11])
@pytest.mark.parametrize("order", [0, 1, 2])
def test_psi_against_independent_sum(x, order):
    want = ref_psi(x, order)
    assert abs(psi_series(x, order, CTX) - want) <= 10 * CTX.tol * max(1, abs(want))


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0, max_value=30))
def test_psi_parity(x):
    assert psi_series(-x, 0, CTX) == -psi_series(x, 0, CTX)
    assert psi_series(-x, 1, CTX) == psi_series(x, 1, CTX)
    assert psi_series(-x, 2, CTX) == -psi_series(x, 2, CTX)


def test_psi_guard():
    with pytest.raises(CancellationError):
        psi_series(31, 0, CTX)
    with pytest.raises(DomainError):
        psi_series(1, 3, CTX)


def test_kernel_literal_formula():
    rng = random.Random(11)
    mp = CTX.mp
    for _ in range(50):
        x = rng.uniform(-3, 3)
        y = rng.uniform(-3, 3)
        if abs(x - y) < 1e-3:
            continue
        k = bh_kernel(x, y, CTX)
        num = (
            phi_hat(x, CTX, 1) * psi_series(y, 1, CTX)
            - phi_hat(x, CTX, 2) * psi_series(y, 0, CTX)
            - phi_hat(x, CTX, 0) * psi_series(y, 2, CTX)
        )
        assert abs((mp.mpf(x) - mp.mpf(y)) * k.value - num) <= 10 * CTX.tol * max(1, abs(num))


def test_kernel_finite_and_stable_under_precision():
    lo = bh_kernel(1, -1, CTX).value
    hi = bh_kernel(1, -1, PrecisionCtx(digits=50)).value
    assert abs(lo - hi) <= 10 * CTX.tol * max(1, abs(hi))


@pytest.mark.parametrize("x", [0, 0.25])
def test_kernel_continuous_across_diagonal(x):
    near = bh_kernel(x, x + 1e-7, CTX).value
    far = bh_kernel(x, x + 1e-3, CTX).value
    assert abs(near - far) <= 1e-4


@pytest.mark.parametrize("x", [-1, 1, 2])
def test_kernel_diagonal_gap_shrinks_linearly(x):
    # the one-sided difference is first order in the offset
    d = bh_kernel(x, x, CTX).value
    g1 = abs(bh_kernel(x, x + 1e-3, CTX).value - d)
    g2 = abs(bh_kernel(x, x + 1e-4, CTX).value - d)
    assert g2 < g1 / 5


def test_kernel_numerator_vanishes_on_diagonal_limit():
    mp = CTX.mp
    for x in (0.3, 1.2):
        k = bh_kernel(x, x, CTX).value
        for d in (mp.mpf(10) ** -3, mp.mpf(10) ** -5):
            assert abs(bh_numerator(x, x + d, CTX) + d * k) <= 10 * d * d


def test_real_zeros_counts():
    z4 = real_zeros(4, 12, CTX)
    assert len(z4) >= 3
    assert z4 == sorted(z4) and all(z > 0 for z in z4)
    for z in z4:
        assert abs(levy_quad(4, z, CTX).value) <= 1e-11
    assert len(real_zeros(3, 20, CTX)) >= 1
    assert real_zeros(2, 20, CTX) == []
    with pytest.raises(DomainError):
        real_zeros(4, 41, CTX)


def test_stability_small_grid():
    chk = stability_convolution_check(half_width=20, step=0.02)
    assert chk.max_deviation <= 1e-3
