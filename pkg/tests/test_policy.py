import pytest

from levyint import DomainError, Method, MethodPolicy, PrecisionCtx, evaluate, levy_quad
from levyint.policy import AUTO, Mode, z_switch

CTX = PrecisionCtx(digits=30)


def test_mode_coercion():
    assert MethodPolicy("Quad").mode is Mode.QUAD
    assert MethodPolicy(Mode.ASYM).mode is Mode.ASYM
    with pytest.raises(ValueError):
        MethodPolicy("simpson")


@pytest.mark.parametrize("mode, method", [("quad", Method.QUAD), ("taylor", Method.TAYLOR), ("hyper", Method.HYPER)])
def test_explicit_modes(mode, method):
    assert evaluate(3, 2, CTX, MethodPolicy(mode)).method is method


def test_inversion_mode_is_not_for_f():
    with pytest.raises(DomainError):
        evaluate(3, 2, CTX, MethodPolicy("inversion"))


def test_z_switch_cached_and_monotone_in_digits():
    a = z_switch(4, CTX)
    assert a == z_switch(4, CTX) > 0
    assert z_switch(4, PrecisionCtx(digits=60)) >= a
    assert z_switch("1/2", CTX) == 0


@pytest.mark.parametrize(
    "alpha, z, expected",
    [(4, 1, Method.TAYLOR), ("3/2", 2, Method.TAYLOR), ("1/2", 3, Method.QUAD), (4, 30, Method.ASYM),
     (3, 40, Method.ASYM), ("5/2", 40, Method.QUAD)],
)
def test_auto_selection(alpha, z, expected):
    assert evaluate(alpha, z, CTX).method is expected


def test_auto_agrees_with_quadrature_everywhere():
    for alpha in ("3/2", "3", "4", "6"):
        for z in (0, 0.7, 3, 8.5, 14, 26, 37):
            r = evaluate(alpha, z, CTX, AUTO)
            q = levy_quad(alpha, z, CTX)
            assert abs(r.value - q.value) <= 3 * (r.err_estimate + q.err_estimate) + CTX.tol


def test_override_switch():
    assert evaluate(4, 1, CTX, MethodPolicy(z_switch_override=0.5)).method is Method.QUAD
    # past the switch Asym is used only if its estimate meets the tolerance
    assert evaluate(4, 9, CTX, MethodPolicy(z_switch_override=0.5)).method is Method.QUAD
    assert evaluate(4, 25, CTX, MethodPolicy(z_switch_override=0.5)).method is Method.ASYM
    assert evaluate(4, 25, CTX, MethodPolicy(z_switch_override=26)).method is not Method.ASYM


def test_near_zero_of_f_falls_back_to_quadrature():
    # F_4 vanishes close to z = 5.5161; the relative cancellation guard trips there
    r = evaluate(4, "5.51610188", CTX)
    q = levy_quad(4, "5.51610188", CTX)
    assert abs(r.value - q.value) <= 3 * (r.err_estimate + q.err_estimate)
