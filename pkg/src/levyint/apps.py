"""Applications of F_alpha: the Pearcey integral, a random-matrix kernel,
real zeros, and the stability of the alpha = 3/2 density under convolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asympt import phase_rate
from .errors import CancellationError, DomainError
from .hyper import taylor_levy
from .numkernel import DEFAULT_CTX, AlphaParam, PrecisionCtx, to_mpf
from .policy import AUTO, MethodPolicy, evaluate
from .quadrature import levy_deriv_quad, levy_quad, pearcey_direct


def pearcey_relation_check(y, ctx: PrecisionCtx = DEFAULT_CTX):
    """|P(0, y) - 2 e^{i pi/8} F_4(y)| with both sides computed by quadrature."""
    if abs(y) > 8:
        raise DomainError("pearcey_relation_check is limited to |y| <= 8")
    mp = ctx.mp
    lhs = pearcey_direct(y, ctx).value
    rhs = 2 * mp.expjpi(mp.mpf(1) / 8) * levy_quad(4, y, ctx).value
    return abs(lhs - rhs)


def phi_hat(x, ctx: PrecisionCtx = DEFAULT_CTX, order: int = 0, policy: MethodPolicy = AUTO):
    """(sqrt 2 / pi) F_4(sqrt 2 x) and its first two derivatives in x."""
    mp = ctx.mp
    r2 = mp.sqrt(2)
    z = r2 * to_mpf(mp, x)
    if order == 0:
        f = evaluate(4, z, ctx, policy).value
    elif order in (1, 2):
        f = levy_deriv_quad(4, z, order, ctx).value
    else:
        raise DomainError("phi_hat supports orders 0, 1 and 2")
    return r2 / mp.pi * r2**order * f


PSI_GUARD = 30


def psi_series(x, order: int = 0, ctx: PrecisionCtx = DEFAULT_CTX):
    """psi(x) = -(1/sqrt pi) sum_n (-1)^n x^(4n+1) (2n)! / (n! (4n+1)!), or a derivative."""
    if order not in (0, 1, 2):
        raise DomainError("psi_series supports orders 0, 1 and 2")
    mp0 = ctx.mp
    x = to_mpf(mp0, x)
    if abs(x) > PSI_GUARD:
        raise CancellationError(f"psi_series is guarded to |x| <= {PSI_GUARD}")
    ax = abs(x)
    # The alternating terms peak near n ~ x**2 / 2.
    peak = 0.0
    if ax > 0:
        lx = math.log(float(ax))
        n = 0
        while True:
            v = (4 * n + 1) * lx + math.lgamma(2 * n + 1) - math.lgamma(n + 1) - math.lgamma(4 * n + 2)
            peak = max(peak, v)
            if n > 4 and v < peak - 40:
                break
            n += 1
    hi = ctx.boosted(int(peak / math.log(10)) + 3)
    mp = hi.mp
    xh = mp.mpf(ax)
    total = mp.mpf(0)
    coeff = mp.mpf(1)  # (2n)! / (n! (4n+1)!)
    n = 0
    cutoff = mp.mpf(10) ** (-hi.work_dps)
    while True:
        power = 4 * n + 1
        if power >= order:
            falling = mp.mpf(1)
            for j in range(order):
                falling *= power - j
            term = coeff * falling * xh ** (power - order)
            total += -term if n % 2 else term
        else:
            term = mp.mpf(0)
        if n > 2 and abs(term) <= cutoff * max(abs(total), 1):
            break
        n += 1
        coeff *= mp.mpf((2 * n - 1) * (2 * n)) / (n * (4 * n - 2) * (4 * n - 1) * (4 * n) * (4 * n + 1))
    value = -total / mp.sqrt(mp.pi)
    if x < 0 and order != 1:
        value = -value
    return mp0.mpf(value)


@dataclass(frozen=True)
class KernelPoint:
    x: float
    y: float
    value: object


def bh_numerator(x, y, ctx: PrecisionCtx = DEFAULT_CTX):
    """phi'(x) psi'(y) - phi''(x) psi(y) - phi(x) psi''(y)."""
    return (
        phi_hat(x, ctx, 1) * psi_series(y, 1, ctx)
        - phi_hat(x, ctx, 2) * psi_series(y, 0, ctx)
        - phi_hat(x, ctx, 0) * psi_series(y, 2, ctx)
    )


DIAGONAL = 1e-6
DIAGONAL_STEP = 1e-4


def _off_diagonal(x, y, ctx):
    return bh_numerator(x, y, ctx) / (x - y)


def bh_kernel(x, y, ctx: PrecisionCtx = DEFAULT_CTX) -> KernelPoint:
    """The scaled kernel, with the removable diagonal handled by symmetric offsets."""
    mp = ctx.mp
    xm = to_mpf(mp, x)
    ym = to_mpf(mp, y)
    if abs(xm - ym) >= DIAGONAL:
        return KernelPoint(float(xm), float(ym), _off_diagonal(xm, ym, ctx))

    def symmetric(h):
        return (_off_diagonal(xm + h, ym - h, ctx) + _off_diagonal(xm - h, ym + h, ctx)) / 2

    h = mp.mpf(DIAGONAL_STEP)
    value = (4 * symmetric(h / 2) - symmetric(h)) / 3
    return KernelPoint(float(xm), float(ym), value)


ZERO_TOL = 1e-12
SCAN_STEP = 0.05


def _scan_step(alpha: AlphaParam, z_max: float) -> float:
    if not (alpha.is_integer and alpha.p >= 3):
        return SCAN_STEP
    a = alpha.p
    mp = DEFAULT_CTX.mp
    # Phase (a-1) cos(.) (z/a)^(a/(a-1)) advances by 2 pi over one local period.
    rate = float(phase_rate(a, 0, mp)) / (a - 1) * (z_max / a) ** (1 / (a - 1))
    return min(SCAN_STEP, 2 * math.pi / rate / 4)


def real_zeros(alpha, z_max: float, ctx: PrecisionCtx = DEFAULT_CTX) -> list:
    """Positive real zeros of F_alpha below z_max, in ascending order.

    Sign changes are found on a uniform grid with the automatically chosen
    evaluator and each bracket is refined by bisection on quadrature.
    """
    alpha = AlphaParam.of(alpha)
    if z_max > 40:
        raise DomainError("real_zeros scans at most up to z = 40")
    step = _scan_step(alpha, z_max)
    count = int(math.floor(z_max / step))
    grid = [step * i for i in range(count + 1)]
    signs = [_sign(evaluate(alpha, z, ctx)) for z in grid]
    # Only the sign matters during refinement.
    fine = ctx.with_digits(min(ctx.digits, 25))
    zeros = []
    # Points whose sign is swamped by the error estimate are skipped, so
    # noise around a tiny |F| cannot fake a sign change.
    known = [i for i, sg in enumerate(signs) if sg]
    for i, j in zip(known, known[1:]):
        if signs[i] == signs[j]:
            continue
        lo, hi = grid[i], grid[j]
        lo_sign = signs[i]
        while hi - lo > ZERO_TOL:
            mid = (lo + hi) / 2
            sg = _sign(levy_quad(alpha, mid, fine)) or _sign(levy_quad(alpha, mid, ctx))
            if sg == 0:
                break
            if sg == lo_sign:
                lo = mid
            else:
                hi = mid
        zeros.append((lo + hi) / 2)
    return zeros


def _sign(res) -> int:
    if abs(res.value) <= res.err_estimate:
        return 0
    return 1 if res.value > 0 else -1


STABILITY_SPLIT = 6.0


def _stable_density_samples(xs: np.ndarray, ctx: PrecisionCtx) -> np.ndarray:
    """(1/pi) F_{3/2}(x) at the given points, in double precision.

    Small |x| uses the Taylor series; beyond SPLIT the large-z algebraic
    series, whose remainder there is far below double precision.
    """
    mp = ctx.mp
    a = 1.5
    coeffs = []
    for j in range(1, 80):
        s = 0.0 if j % 4 == 0 else math.sin(j * math.pi * a / 2)
        coeffs.append((-1) ** (j + 1) * a * math.exp(math.lgamma(j * a) - math.lgamma(j)) * s)
    out = np.empty_like(xs)
    cache = {}
    for i, x in enumerate(np.abs(xs)):
        key = round(float(x), 12)
        if key in cache:
            out[i] = cache[key]
            continue
        if key < STABILITY_SPLIT:
            v = float(taylor_levy("3/2", mp.mpf(key), ctx).value)
        else:
            total = 0.0
            prev = math.inf
            for j, c in enumerate(coeffs, start=1):
                term = c * key ** (-1 - j * a)
                if abs(term) > prev:
                    break
                total += term
                prev = abs(term) if term != 0 else prev
            v = total
        cache[key] = v / math.pi
        out[i] = v / math.pi
    return out


@dataclass(frozen=True)
class StabilityCheck:
    max_deviation: float
    grid_step: float
    half_width: float


def stability_convolution_check(half_width: float = 40.0, step: float = 0.01,
                                ctx: PrecisionCtx | None = None) -> StabilityCheck:
    """Self-convolve the alpha = 3/2 density on a grid and compare with its rescaling.

    The sum of two independent copies has density 2^(-2/3) g(2^(-2/3) x).
    """
    ctx = ctx or PrecisionCtx(digits=30)
    n = int(round(half_width / step))
    xs = step * np.arange(-n, n + 1)
    g = _stable_density_samples(xs, ctx)
    conv = np.convolve(g, g)[n : 3 * n + 1] * step
    scale = 2.0 ** (-2.0 / 3.0)
    target = scale * _stable_density_samples(scale * xs, ctx)
    return StabilityCheck(float(np.max(np.abs(conv - target))), step, half_width)
