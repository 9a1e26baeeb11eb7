"""Direct numerical evaluation of the Lévy integral and its relatives.

Every routine here integrates a defining integral representation, which
makes this module the ground truth the series and asymptotic evaluators
are checked against.

The oscillatory integrals are split at the zeros of the trigonometric (or
Bessel) factor; each panel is integrated with 32-point Gauss-Legendre and
bisected until two successive refinements agree.  For ``alpha = p/q`` with
``q > 1`` the first panel is mapped through ``t = u**q`` so the integrand is
smooth at the origin.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from functools import lru_cache

from .errors import DivergentMoment, DomainError, ToleranceNotMet
from .numkernel import DEFAULT_CTX, AlphaParam, PrecisionCtx, bessel_j, gamma, get_mp, to_mpf

GL_ORDER = 32
ACCEL_HALF_PERIODS = 200
SMALL_Z = 1e-8
_ACCEL_LEVELS = 40


class Method(str, enum.Enum):
    QUAD = "Quad"
    TAYLOR = "Taylor"
    HYPER = "Hyper"
    ASYM = "Asym"
    INVERSION = "Inversion"
    DIRECT = "Direct"


@dataclass(frozen=True)
class EvalResult:
    value: object
    err_estimate: object
    method: Method
    terms_used: int = 0

    def __post_init__(self):
        if self.err_estimate < 0:
            raise ValueError("err_estimate must be non-negative")


_gl_lock = threading.Lock()


@lru_cache(maxsize=None)
def _gl_table(order: int, dps: int):
    mp = get_mp(dps)
    nodes, weights = [], []
    tol = mp.mpf(10) ** (-dps + 2)
    for i in range(1, order // 2 + 1):
        x = mp.cos(mp.pi * (i - mp.mpf(1) / 4) / (order + mp.mpf(1) / 2))
        for _ in range(100):
            p0, p1 = mp.mpf(1), x
            for k in range(2, order + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = order * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < tol:
                break
        p0, p1 = mp.mpf(1), x
        for k in range(2, order + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = order * (x * p1 - p0) / (x * x - 1)
        w = 2 / ((1 - x * x) * dp * dp)
        nodes += [x, -x]
        weights += [w, w]
    return tuple(nodes), tuple(weights)


def gauss_legendre(order: int, ctx: PrecisionCtx):
    """Nodes and weights on [-1, 1] at the working precision of ``ctx``."""
    with _gl_lock:
        return _gl_table(order, ctx.work_dps)


class _PanelIntegrator:
    """Adaptive Gauss-Legendre over a sequence of panels."""

    def __init__(self, f, ctx: PrecisionCtx):
        self.f = f
        self.ctx = ctx
        self.mp = ctx.mp
        self.nodes, self.weights = gauss_legendre(GL_ORDER, ctx)
        self.panels = 0

    def _rule(self, a, b):
        half = (b - a) / 2
        mid = (a + b) / 2
        f = self.f
        total = 0
        for x, w in zip(self.nodes, self.weights):
            total += w * f(mid + half * x)
        return total * half

    def integrate(self, a, b, tol):
        """Integrate over [a, b]; returns (value, error estimate)."""
        pending = [(a, b, self._rule(a, b), tol)]
        value = 0
        err = self.mp.mpf(0)
        while pending:
            lo, hi, coarse, ptol = pending.pop()
            mid = (lo + hi) / 2
            left = self._rule(lo, mid)
            right = self._rule(mid, hi)
            fine = left + right
            diff = abs(fine - coarse)
            self.panels += 1
            if diff <= ptol or hi - lo < self.mp.mpf(10) ** (-self.mp.dps // 2):
                value += fine
                err += diff
            else:
                pending.append((mid, hi, right, ptol / 2))
                pending.append((lo, mid, left, ptol / 2))
            if self.panels > self.ctx.max_terms:
                raise ToleranceNotMet(
                    "panel budget exhausted", value=value, err_estimate=err + diff
                )
        return value, err


def _tail_cutoff(alpha: float, power: float, target: float) -> float:
    """Smallest T with int_T^inf t**power exp(-t**alpha) dt below ``target``.

    Uses Gamma(s, X) <= X**(s-1) exp(-X) / (1 - (s-1)/X) with
    s = (power+1)/alpha and X = T**alpha, valid for X > 2(s-1).
    """
    s = (power + 1) / alpha
    log_target = math.log(target)

    def log_bound(x):
        factor = 1.0 if s <= 1 else 1.0 / (1.0 - (s - 1) / x)
        return (s - 1) * math.log(x) - x + math.log(factor / alpha)

    x = max(1.0, 2 * (s - 1) + 1)
    while log_bound(x) > log_target:
        x *= 1.25
    lo, hi = x / 1.25, x
    if lo > max(1.0, 2 * (s - 1) + 1):
        for _ in range(60):
            mid = (lo + hi) / 2
            if log_bound(mid) > log_target:
                lo = mid
            else:
                hi = mid
        x = hi
    return x ** (1.0 / alpha)


def _tail_bound(mp, alpha: float, power: float, T: float):
    s = (power + 1) / alpha
    x = T**alpha
    factor = 1.0 if s <= 1 else 1.0 / (1.0 - (s - 1) / x)
    return mp.mpf(x) ** (s - 1) * mp.exp(-mp.mpf(x)) * factor / alpha


def _powers(alpha: AlphaParam, mp):
    """Return t -> t**alpha, using an integer power when q == 1."""
    p = alpha.p
    if alpha.q == 1:
        return lambda t: t**p
    a = alpha.to_mpf(mp)
    return lambda t: t**a


def _first_panel(integ_factory, alpha, mp, a, b, tol, ctx):
    """Integrate panel [0, b] mapping t = u**q when alpha has q > 1."""
    q, p = alpha.q, alpha.p
    if q == 1:
        integ = integ_factory(lambda t: t**p)
        return integ.integrate(a, b, tol) + (integ.panels,)

    def sub(u):
        return u**q, u**p

    integ = integ_factory(None, substitution=sub, q=q)
    ub = b ** (mp.mpf(1) / q)
    return integ.integrate(mp.mpf(0), ub, tol) + (integ.panels,)


def _fourier_integral(alpha: AlphaParam, z, power: int, trig: str, ctx: PrecisionCtx):
    """int_0^inf t**power exp(-t**alpha) trig(z t) dt for z >= 0.

    Returns (value, err, panels).
    """
    mp = ctx.mp
    a_f = float(alpha.value())
    tol = ctx.tol
    cos_kind = trig == "cos"
    T = _tail_cutoff(a_f, power, float(tol) * 1e-2)
    tail = _tail_bound(mp, a_f, power, T)
    T = mp.mpf(T)
    tpow = _powers(alpha, mp)

    def make(ta_fn, substitution=None, q=1):
        if substitution is None:
            def f(t):
                g = mp.exp(-ta_fn(t)) * (mp.cos(z * t) if cos_kind else mp.sin(z * t))
                return g * t**power if power else g
        else:
            def f(u):
                t, ta = substitution(u)
                g = mp.exp(-ta) * (mp.cos(z * t) if cos_kind else mp.sin(z * t))
                g *= q * u ** (q - 1)
                return g * t**power if power else g
        return _PanelIntegrator(f, ctx)

    if z < SMALL_Z:
        value, err, panels = _first_panel(make, alpha, mp, 0, T, tol * 1e-2, ctx)
        return value, err + tail, panels

    offset = mp.mpf(1) / 2 if cos_kind else mp.mpf(1)
    half = mp.pi / z
    first = offset * half
    n_half = float(T * z / mp.pi)
    if first >= T:
        value, err, panels = _first_panel(make, alpha, mp, 0, T, tol * 1e-2, ctx)
        return value, err + tail, panels

    if a_f < 1 and n_half > ACCEL_HALF_PERIODS:
        return _accelerated(alpha, z, power, trig, ctx, make, first, half)

    n_panels = int(n_half) + 2
    ptol = tol * mp.mpf(0.1) / n_panels
    value, err, panels = _first_panel(make, alpha, mp, 0, first, ptol, ctx)
    integ = make(tpow)
    lo = first
    k = 1
    while lo < T:
        hi = min(offset * half + k * half, T)
        v, e = integ.integrate(lo, hi, ptol)
        value += v
        err += e
        lo = hi
        k += 1
        if integ.panels + panels > ctx.max_terms:
            raise ToleranceNotMet("panel budget exhausted", value=value, err_estimate=err)
    return value, err + tail, panels + integ.panels


def _euler_average(partials, levels):
    row = list(partials[-(levels + 1):])
    while len(row) > 1:
        row = [(row[i] + row[i + 1]) / 2 for i in range(len(row) - 1)]
    return row[0]


def _accelerated(alpha, z, power, trig, ctx, make, first, half):
    """Sum half-period panels as an alternating series with Euler averaging."""
    mp = ctx.mp
    tol = ctx.tol
    ptol = tol * mp.mpf(1e-3)
    offset = first / half
    value, err, panels = _first_panel(make, alpha, mp, 0, first, ptol, ctx)
    integ = make(_powers(alpha, mp))
    partials = [value]
    lo = first
    k = 1
    prev_est = None
    stable = 0
    while True:
        hi = (offset + k) * half
        v, e = integ.integrate(lo, hi, ptol)
        err += e
        partials.append(partials[-1] + v)
        lo = hi
        k += 1
        if k > 2 * _ACCEL_LEVELS and k % 4 == 0:
            est = _euler_average(partials, _ACCEL_LEVELS)
            if prev_est is not None:
                delta = abs(est - prev_est)
                stable = stable + 1 if delta < tol * mp.mpf(0.1) else 0
                if stable >= 2:
                    shallow = _euler_average(partials, _ACCEL_LEVELS - 8)
                    spread = max(delta, abs(est - shallow))
                    return est, err + spread, panels + integ.panels
            prev_est = est
        if k > ctx.max_terms or integ.panels > ctx.max_terms:
            raise ToleranceNotMet(
                "accelerated panel sum did not settle",
                value=partials[-1],
                err_estimate=err,
            )


def levy_quad(alpha, z, ctx: PrecisionCtx = DEFAULT_CTX) -> EvalResult:
    """F_alpha(z) = int_0^inf exp(-t**alpha) cos(z t) dt by quadrature."""
    alpha = AlphaParam.of(alpha)
    mp = ctx.mp
    z = abs(to_mpf(mp, z))
    value, err, panels = _fourier_integral(alpha, z, 0, "cos", ctx)
    return _checked(value, err, panels, ctx)


def _checked(value, err, panels, ctx, method=Method.QUAD):
    mp = ctx.mp
    bound = ctx.tol * max(1, abs(value))
    if err > bound:
        raise ToleranceNotMet(
            f"error estimate {mp.nstr(err, 3)} above target {mp.nstr(bound, 3)}",
            value=value,
            err_estimate=err,
        )
    return EvalResult(value, err, method, panels)


def levy_deriv_quad(alpha, z, order: int, ctx: PrecisionCtx = DEFAULT_CTX) -> EvalResult:
    """d^order/dz^order F_alpha(z) by differentiating under the integral."""
    if order not in (0, 1, 2):
        raise DomainError("derivative order must be 0, 1 or 2")
    if order == 0:
        return levy_quad(alpha, z, ctx)
    alpha = AlphaParam.of(alpha)
    mp = ctx.mp
    z = to_mpf(mp, z)
    sign = -1
    if order == 1:
        if z < 0:
            sign = 1
        value, err, panels = _fourier_integral(alpha, abs(z), 1, "sin", ctx)
    else:
        value, err, panels = _fourier_integral(alpha, abs(z), 2, "cos", ctx)
    return _checked(sign * value, err, panels, ctx)


def levy_density_d(alpha, d: int, r, ctx: PrecisionCtx = DEFAULT_CTX) -> EvalResult:
    """Isotropic d-dimensional stable density from its Bessel representation."""
    alpha = AlphaParam.of(alpha)
    if not 1 <= d <= 10:
        raise DomainError("dimension must be between 1 and 10")
    mp = ctx.mp
    r = to_mpf(mp, r)
    if r < 0:
        raise DomainError("radius must be non-negative")
    a_f = float(alpha.value())
    nu = mp.mpf(d) / 2 - 1
    tol = ctx.tol

    if r == 0:
        # J_nu(qr) ~ (qr/2)**nu / Gamma(nu+1): only the radial moment survives.
        T = _tail_cutoff(a_f, d - 1, float(tol) * 1e-2)
        tail = _tail_bound(mp, a_f, d - 1, T)

        def make(ta_fn, substitution=None, q=1):
            if substitution is None:
                return _PanelIntegrator(lambda t: t ** (d - 1) * mp.exp(-ta_fn(t)), ctx)

            def f(u):
                t, ta = substitution(u)
                return q * u ** (q - 1) * t ** (d - 1) * mp.exp(-ta)

            return _PanelIntegrator(f, ctx)

        value, err, panels = _first_panel(make, alpha, mp, 0, mp.mpf(T), tol * 1e-2, ctx)
        norm = (2 * mp.pi) ** (mp.mpf(d) / 2) * 2 ** (nu) * gamma(mp.mpf(d) / 2, ctx)
        return _checked(value / norm, (err + tail) / norm, panels, ctx)

    prefactor = r / (2 * mp.pi * r) ** (mp.mpf(d) / 2)
    half_power = mp.mpf(d) / 2
    # |J_nu| <= 1 for nu >= 0; for d = 1, |q**(1/2) J_{-1/2}(qr)| <= sqrt(2/(pi r)).
    if d == 1:
        T = _tail_cutoff(a_f, 0, float(tol / max(1, prefactor * mp.sqrt(2 / (mp.pi * r)))) * 1e-2)
        tail = _tail_bound(mp, a_f, 0, T) * mp.sqrt(2 / (mp.pi * r))
    else:
        T = _tail_cutoff(a_f, float(half_power), float(tol / max(1, prefactor)) * 1e-2)
        tail = _tail_bound(mp, a_f, float(half_power), T)
    T = mp.mpf(T)
    tpow = _powers(alpha, mp)

    def make(ta_fn, substitution=None, q=1):
        if substitution is None:
            def f(t):
                return bessel_j(nu, t * r, ctx) * t**half_power * mp.exp(-ta_fn(t))
        else:
            def f(u):
                t, ta = substitution(u)
                return q * u ** (q - 1) * bessel_j(nu, t * r, ctx) * t**half_power * mp.exp(-ta)
        return _PanelIntegrator(f, ctx)

    # McMahon: j_{nu,k} ~ (k + nu/2 - 1/4) pi.
    def zero(k):
        return (k + nu / 2 - mp.mpf(1) / 4) * mp.pi / r

    first = zero(1)
    if first >= T:
        value, err, panels = _first_panel(make, alpha, mp, 0, T, tol * 1e-2, ctx)
    else:
        n_panels = int(T * r / mp.pi) + 2
        ptol = tol * mp.mpf(0.1) / n_panels / max(1, prefactor)
        value, err, panels = _first_panel(make, alpha, mp, 0, first, ptol, ctx)
        integ = make(tpow)
        lo = first
        k = 2
        while lo < T:
            hi = min(zero(k), T)
            v, e = integ.integrate(lo, hi, ptol)
            value += v
            err += e
            lo = hi
            k += 1
            if integ.panels + panels > ctx.max_terms:
                raise ToleranceNotMet("panel budget exhausted", value=value, err_estimate=err)
        panels += integ.panels
    return _checked(prefactor * value, prefactor * (err + tail), panels, ctx)


def predicted_moment(alpha, m: int):
    """Closed-form value of the 2m-th moment of F_alpha / pi.

    Returns an int for finite cases, ``math.inf`` or ``-math.inf`` for the
    divergent ones.
    """
    alpha = AlphaParam.of(alpha)
    if m == 0:
        return 1
    if alpha.is_even_integer:
        if (2 * m) % alpha.p == 0:
            j = 2 * m // alpha.p
            return (-1) ** (m + j) * math.factorial(2 * m) // math.factorial(j)
        return 0
    if alpha.value() < 2 * m:
        band = int(alpha.value() // 2)
        return math.inf if band % 2 == 0 else -math.inf
    return 0


def _moment_kernel(mp, n, Z, t):
    """int_0^Z z**n cos(z t) dz."""
    x = Z * t
    if x <= 12:
        total = 0
        term = Z ** (n + 1)
        k = 0
        t2 = t * t
        z2 = Z * Z
        cutoff = mp.mpf(10) ** (-mp.dps - 3)
        while True:
            contrib = term / (n + 2 * k + 1)
            total += contrib
            if k > x and abs(contrib) <= cutoff * abs(total):
                break
            k += 1
            term *= -t2 * z2 / ((2 * k - 1) * (2 * k))
        return total
    it = mp.mpc(0, t)
    e = mp.expjpi(x / mp.pi)
    acc = (e - 1) / it
    zp = mp.mpf(1)
    for j in range(1, n + 1):
        zp *= Z
        acc = zp * e / it - j * acc / it
    return acc.real


def _envelope_log(alpha: float, z: float) -> float:
    """log of the dominant exponential envelope of |F_alpha(z)| for alpha >= 2."""
    if alpha == 2:
        return math.log(math.sqrt(math.pi) / 2) - z * z / 4
    w = (z / alpha) ** (alpha / (alpha - 1))
    rate = (alpha - 1) * math.sin(math.pi / (2 * (alpha - 1)))
    pre = 2 * math.sqrt(math.pi / (2 * (alpha - 1))) / (alpha * z ** (alpha - 2)) ** (
        1 / (2 * (alpha - 1))
    )
    return math.log(pre) - rate * w


def _algebraic_moment_tail(alpha: AlphaParam, m: int, Z, ctx):
    """int_Z^inf z**(2m) F_alpha(z) dz from the large-z algebraic series.

    Returns (value, smallest omitted term).
    """
    mp = ctx.mp
    a = alpha.to_mpf(mp)
    total = mp.mpf(0)
    prev = None
    for j in range(1, 400):
        s = mp.sinpi(j * a / 2)
        coeff = (-1) ** (j + 1) * gamma(j * a + 1, ctx) / mp.factorial(j) * s
        term = coeff * Z ** (2 * m - j * a) / (j * a - 2 * m)
        mag = abs(term)
        if mag == 0:
            continue
        if prev is not None and mag > prev:
            return total, mag
        total += term
        if mag < ctx.tol * mp.mpf(10) ** -15:
            return total, mag
        prev = mag
    return total, prev


def moment_quad(alpha, m: int, ctx: PrecisionCtx = DEFAULT_CTX) -> EvalResult:
    """int z**(2m) F_alpha(z) / pi over the real line.

    The finite-range part int_0^Z z**(2m) F(z) dz is computed with the order
    of integration swapped, so only one oscillatory quadrature in t is
    needed; the range beyond Z is bounded by the exponential envelope (even
    alpha) or summed from the algebraic series.
    """
    alpha = AlphaParam.of(alpha)
    if m < 0:
        raise DomainError("moment order must be non-negative")
    predicted = predicted_moment(alpha, m)
    if not alpha.is_even_integer and 2 * m >= alpha.value() and m > 0:
        raise DivergentMoment(
            f"moment {2 * m} diverges for alpha = {alpha}",
            sign=1 if predicted == math.inf else -1,
        )
    a_f = float(alpha.value())
    tol = ctx.tol
    log_tol = math.log(float(tol)) - math.log(100)
    n = 2 * m
    Z = _moment_cutoff(alpha, a_f, n, log_tol)
    # The swapped kernel is of size Z**(n+1); carry that many extra digits.
    out_ctx = ctx
    ctx = ctx.boosted(int((n + 1) * math.log10(Z)) + 5)
    mp = ctx.mp

    tail_value = mp.mpf(0)
    tail_err = mp.exp(_envelope_log(a_f, Z) + (n + 1) * math.log(Z)) if a_f >= 2 else mp.mpf(0)
    Z = mp.mpf(Z)
    if not alpha.is_even_integer:
        tail_value, omitted = _algebraic_moment_tail(alpha, m, Z, out_ctx)
        tail_value = mp.mpf(tail_value)
        tail_err += omitted

    scale = Z ** (n + 1) / (n + 1)
    T = _tail_cutoff(a_f, 0, float(tol / scale) * 1e-2)
    t_tail = _tail_bound(mp, a_f, 0, T) * scale
    T = mp.mpf(T)
    tpow = _powers(alpha, mp)

    def make(ta_fn, substitution=None, q=1):
        if substitution is None:
            return _PanelIntegrator(lambda t: mp.exp(-ta_fn(t)) * _moment_kernel(mp, n, Z, t), ctx)

        def f(u):
            t, ta = substitution(u)
            return q * u ** (q - 1) * mp.exp(-ta) * _moment_kernel(mp, n, Z, t)

        return _PanelIntegrator(f, ctx)

    half = mp.pi / Z
    n_panels = int(T / half) + 2
    ptol = tol * mp.mpf(0.01) / n_panels
    first = min(half, T)
    value, err, panels = _first_panel(make, alpha, mp, 0, first, ptol, ctx)
    integ = make(tpow)
    lo = first
    k = 2
    while lo < T:
        hi = min(k * half, T)
        v, e = integ.integrate(lo, hi, ptol)
        value += v
        err += e
        lo = hi
        k += 1
    panels += integ.panels
    roundoff = scale * mp.mpf(10) ** (-ctx.work_dps) * n_panels
    total = 2 * (value + tail_value) / mp.pi
    total_err = 2 * (err + t_tail + tail_err + roundoff) / mp.pi
    out = out_ctx.mp
    return _checked(out.mpf(total), out.mpf(total_err), panels, out_ctx)


def _moment_cutoff(alpha, a_f, n, log_tol):
    """Upper limit Z beyond which the moment integrand is handled analytically."""
    if alpha.is_even_integer:
        Z = 4.0
        while _envelope_log(a_f, Z) + (n + 1) * math.log(Z) > log_tol:
            Z *= 1.1
        return Z
    mp = get_mp(30)
    Z = 4.0
    probe = PrecisionCtx(digits=20, eps=math.exp(log_tol))
    while Z < 1e4:
        ok = a_f <= 2 or _envelope_log(a_f, Z) + (n + 1) * math.log(Z) < log_tol
        if ok:
            _, omitted = _algebraic_moment_tail(alpha, n // 2, mp.mpf(Z), probe)
            if omitted is not None and math.log(float(omitted)) < log_tol - 5:
                return Z
        Z *= 1.5
    raise ToleranceNotMet("no cutoff found for the moment tail")


def pearcey_direct(y, ctx: PrecisionCtx = DEFAULT_CTX, *, canonical: bool = False) -> EvalResult:
    """Pearcey integral P(0, Y) = int exp(i(u**4 + Y u)) du along rotated rays.

    The half-lines are turned onto u = s e^{i pi/8} and u = -s e^{i pi/8},
    where i u**4 = -s**4, and the literal integrand is evaluated there.

    By default ``Y = y e^{-i pi/8}``: this is the coordinate in which the
    analytically continued form 2 e^{i pi/8} int exp(-t**4) cos(y t) dt
    holds, so the result can be compared with F_4(y).  ``canonical=True``
    uses the real second argument ``Y = y`` instead.
    """
    mp = ctx.mp
    y = to_mpf(mp, y)
    if abs(y) > 8:
        raise DomainError("pearcey_direct supports |y| <= 8")
    rot = mp.expjpi(mp.mpf(1) / 8)
    Y = y if canonical else y / rot
    tol = ctx.tol
    # |exp(i Y u)| on either ray is at most exp(|Y| s sin(pi/8)) for real Y
    # and exactly 1-bounded-oscillatory for the rotated coordinate.
    growth = float(abs(y)) * math.sin(math.pi / 8) if canonical else 0.0
    target = math.log(float(tol)) - math.log(100)
    S = 1.0
    while -(S**4) + growth * S > target:
        S *= 1.1
    S = mp.mpf(S)
    tail = mp.exp(-(S**4) + growth * S)
    j = mp.mpc(0, 1)

    def f(s):
        right = s * rot
        left = -s * rot
        return (
            mp.exp(j * (right**4 + Y * right)) + mp.exp(j * (left**4 + Y * left))
        ) * rot

    integ = _PanelIntegrator(f, ctx)
    value, err = integ.integrate(mp.mpf(0), S, tol * 1e-2)
    return EvalResult(value, 2 * (err + tail), Method.QUAD, integ.panels)
