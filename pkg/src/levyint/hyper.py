"""Convergent-series evaluation of F_alpha for alpha > 1.

Two routes are provided: the Taylor series at the origin,

    F_alpha(z) = (1/alpha) sum_m (-1)**m Gamma((2m+1)/alpha) z**(2m) / (2m)!,

and its regrouping, for rational alpha = p/q with p > q, into p generalised
hypergeometric functions qF_{p-1} with argument proportional to z**p.
Both series alternate in sign, so the working precision is raised by the
number of digits the largest term carries before summation.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CancellationError,
    DivergenceError,
    DomainError,
    MaxTermsExceeded,
    PrefactorCalibrationError,
    ToleranceNotMet,
)
from .numkernel import DEFAULT_CTX, AlphaParam, PrecisionCtx, gamma, i_pow, pochhammer, to_mpf
from .quadrature import EvalResult, Method, levy_quad


@dataclass(frozen=True)
class PfqSpec:
    """Parameters and argument of a generalised hypergeometric series.

    Entire series (``len(top) <= len(bottom)``) are accepted for any
    argument; one extra numerator parameter is allowed when ``|arg| < 1``.
    """

    top: tuple
    bottom: tuple
    arg: object

    def __post_init__(self):
        object.__setattr__(self, "top", tuple(self.top))
        object.__setattr__(self, "bottom", tuple(self.bottom))
        for b in self.bottom:
            if b <= 0 and b == math.floor(b):
                raise DomainError(f"denominator parameter {b} is a non-positive integer")
        if len(self.top) > len(self.bottom) + 1 or (
            len(self.top) == len(self.bottom) + 1 and not abs(self.arg) < 1
        ):
            raise DivergenceError(
                f"{len(self.top)}F{len(self.bottom)} diverges at |arg| = {abs(self.arg)}"
            )

    def reduced(self) -> "PfqSpec":
        """Cancel numerator/denominator parameters that coincide exactly."""
        top = list(self.top)
        bottom = list(self.bottom)
        for a in list(top):
            if a in bottom:
                top.remove(a)
                bottom.remove(a)
        return PfqSpec(tuple(top), tuple(bottom), self.arg)


def _pfq_sum(spec: PfqSpec, ctx: PrecisionCtx):
    """Sum the series; returns (value, last term, number of terms)."""
    mp = ctx.mp
    spec = spec.reduced()
    top = [to_mpf(mp, a) for a in spec.top]
    bottom = [to_mpf(mp, b) for b in spec.bottom]
    x = mp.mpmathify(spec.arg)
    term = mp.mpf(1)
    total = term
    prev_mag = mp.mpf(1)
    decreasing = False
    quiet = 0
    m = 0
    while True:
        ratio = x / (m + 1)
        for a in top:
            ratio *= a + m
        for b in bottom:
            ratio /= b + m
        term = term * ratio
        total += term
        m += 1
        mag = abs(term)
        if term == 0:
            return total, term, m
        if mag < prev_mag:
            decreasing = True
        if decreasing and mag < ctx.tol * abs(total) * mp.mpf(10) ** -2:
            quiet += 1
            if quiet >= 3:
                return total, term, m
        else:
            quiet = 0
        prev_mag = mag
        if m > ctx.max_terms:
            raise MaxTermsExceeded(f"pFq did not converge in {ctx.max_terms} terms")


def pfq(spec: PfqSpec, ctx: PrecisionCtx = DEFAULT_CTX):
    """Generalised hypergeometric series by direct summation."""
    value, _, _ = _pfq_sum(spec, ctx)
    return value


def _log10_max_term(alpha: AlphaParam, z: float) -> float:
    """log10 of the largest Taylor term magnitude, in double precision."""
    a = float(alpha.value())
    if z == 0:
        return math.lgamma(1 / a) / math.log(10)
    lz = math.log(abs(z))
    best = -math.inf
    m = 0
    while True:
        v = math.lgamma((2 * m + 1) / a) + 2 * m * lz - math.lgamma(2 * m + 1)
        if v > best:
            best = v
        elif m > 10 and v < best - 50:
            break
        m += 1
    return (best - math.log(a)) / math.log(10)


def _boost_for(alpha, z, ctx):
    log_max = _log10_max_term(alpha, float(z))
    return max(0, math.ceil(log_max)) + 2, log_max


def _check_cancellation(log_max, value, ctx, mp):
    if value == 0:
        raise CancellationError("series summed to zero; result carries no digits")
    loss = log_max - float(mp.log10(abs(value)))
    if loss > ctx.digits - 10:
        raise CancellationError(
            f"largest term exceeds the result by 10^{loss:.1f} (limit 10^{ctx.digits - 10})"
        )


def taylor_levy(alpha, z, ctx: PrecisionCtx = DEFAULT_CTX) -> EvalResult:
    """F_alpha(z) from its Taylor series at the origin; needs alpha > 1."""
    alpha = AlphaParam.of(alpha)
    if alpha.value() <= 1:
        raise DivergenceError("the Taylor series of F_alpha diverges for alpha <= 1")
    mp0 = ctx.mp
    z = abs(to_mpf(mp0, z))
    extra, log_max = _boost_for(alpha, z, ctx)
    hi = ctx.boosted(extra)
    mp = hi.mp
    zz = mp.mpf(z)
    p, q = alpha.p, alpha.q
    a = alpha.to_mpf(mp)
    # Gamma((2m+1) q / p) advances by a Pochhammer factor of length 2q every p steps.
    seeds = [gamma(Fraction((2 * m + 1) * q, p), hi) for m in range(p)]
    z2 = zz * zz
    power = mp.mpf(1)
    fact = mp.mpf(1)
    total = mp.mpf(0)
    floor = mp.mpf(10) ** (log_max - hi.work_dps)
    m = 0
    past_peak = False
    prev = None
    while True:
        g = seeds[m % p]
        term = g * power / fact
        mag = abs(term)
        total += -term if m % 2 else term
        if prev is not None and mag < prev:
            past_peak = True
        if past_peak and (mag < ctx.tol * abs(total) * mp.mpf(10) ** -2 or mag < floor):
            break
        prev = mag
        x = Fraction((2 * m + 1) * q, p)
        seeds[m % p] = g * pochhammer(mp.mpf(x.numerator) / x.denominator, 2 * q)
        m += 1
        power *= z2
        fact *= (2 * m - 1) * (2 * m)
        if m > ctx.max_terms:
            raise MaxTermsExceeded("Taylor series did not converge")
    value = total / a
    err = mag / a + mp.mpf(10) ** (log_max - hi.work_dps) * m
    _check_cancellation(log_max, value, ctx, mp)
    return EvalResult(mp0.mpf(value), mp0.mpf(err), Method.TAYLOR, m + 1)


@dataclass(frozen=True)
class HyperTerm:
    """One l-summand: coefficient * z**(2l) * sum over the pFq series.

    ``symmetric`` marks the f(X) + f(-X) combination; otherwise the series
    is summed once at ``sign * X``.
    """

    l: int
    top: tuple
    bottom: tuple
    gamma_top: tuple
    gamma_bottom: tuple
    symmetric: bool


def hyper_terms(alpha) -> list[HyperTerm]:
    """Parameter lists of the pFq representation of F_{p/q}, p > q.

    For odd p every l in 0..p-1 contributes f(X) + f(-X).  For even p only
    the even-indexed terms survive that combination, and pairing l with
    l + p/2 gives one full series per l in 0..p/2-1; in that form the
    numerator parameter 1 always cancels against a denominator parameter.
    """
    alpha = AlphaParam.of(alpha)
    p, q = alpha.p, alpha.q
    if p <= q:
        raise DomainError("the hypergeometric route needs p > q")
    even = p % 2 == 0
    terms = []
    for l in range(p // 2 if even else p):
        base = Fraction(2 * l + 1, p)
        gtop = tuple(base + Fraction(h, q) for h in range(1, q))
        gbottom = tuple(base + Fraction(h, p) for h in range(1, p))
        spec = PfqSpec((Fraction(1),) + gtop, gbottom, 0).reduced()
        terms.append(HyperTerm(l, spec.top, spec.bottom, gtop, gbottom, not even))
    return terms


def _hyper_constant(alpha: AlphaParam, mp):
    p, q = alpha.p, alpha.q
    return (
        mp.pi
        * mp.mpf(q) ** (mp.mpf(q) / p + mp.mpf(1) / 2)
        / mp.mpf(p) ** (mp.mpf(3) / 2)
        * (2 * mp.pi) ** (mp.mpf(p - q - 2) / 2)
    )


_calibrated: dict[tuple[int, int], object] = {}
_calibration_lock = threading.Lock()
CALIBRATION_TOL = 1e-12


def calibrate_prefactor(alpha) -> float:
    """Compare the assembled series with quadrature at z = 1, once per alpha.

    Raises PrefactorCalibrationError with the measured ratio when the two
    differ; the ratio is cached on success.
    """
    alpha = AlphaParam.of(alpha)
    key = (alpha.p, alpha.q)
    with _calibration_lock:
        if key in _calibrated:
            return _calibrated[key]
    probe = PrecisionCtx(digits=25)
    series = _levy_hyper(alpha, 1, probe)
    oracle = levy_quad(alpha, 1, probe)
    ratio = series.value / oracle.value
    if abs(ratio - 1) > CALIBRATION_TOL:
        raise PrefactorCalibrationError(
            f"hypergeometric assembly for alpha = {alpha} is off by a factor "
            f"{probe.mp.nstr(ratio, 15)}",
            ratio=float(ratio),
        )
    with _calibration_lock:
        _calibrated[key] = ratio
    return ratio


def levy_hyper(alpha, z, ctx: PrecisionCtx = DEFAULT_CTX, *, calibrate: bool = True) -> EvalResult:
    """F_{p/q}(z) as a sum of generalised hypergeometric functions, p > q."""
    alpha = AlphaParam.of(alpha)
    if alpha.p <= alpha.q:
        raise DomainError("levy_hyper needs p > q")
    if calibrate:
        calibrate_prefactor(alpha)
    return _levy_hyper(alpha, z, ctx)


def _levy_hyper(alpha: AlphaParam, z, ctx: PrecisionCtx) -> EvalResult:
    mp0 = ctx.mp
    z = abs(to_mpf(mp0, z))
    extra, log_max = _boost_for(alpha, z, ctx)
    hi = ctx.boosted(extra)
    mp = hi.mp
    zz = mp.mpf(z)
    p, q = alpha.p, alpha.q
    base_arg = mp.mpf(q) ** q * zz**p / mp.mpf(p) ** p
    re, im = i_pow(p)
    const = _hyper_constant(alpha, mp)
    total = mp.mpc(0)
    err = mp.mpf(0)
    n_terms = 0
    for term in hyper_terms(alpha):
        coeff = const * (-1) ** term.l * (mp.mpf(q) ** q / mp.mpf(p) ** p) ** (
            mp.mpf(2 * term.l) / p
        ) * zz ** (2 * term.l)
        for g in term.gamma_top:
            coeff *= gamma(g, hi)
        for g in term.gamma_bottom:
            coeff /= gamma(g, hi)
        if term.symmetric:
            x = mp.mpc(re, im) * base_arg
            plus, last_p, n_p = _pfq_sum(PfqSpec(term.top, term.bottom, x), hi)
            minus, last_m, n_m = _pfq_sum(PfqSpec(term.top, term.bottom, -x), hi)
            value = plus + minus
            err += abs(coeff) * (abs(last_p) + abs(last_m))
            n_terms += n_p + n_m
        else:
            # Even p: i**p = (-1)**(p/2) and the two-sided sum doubles one series.
            x = re * base_arg
            value, last, n = _pfq_sum(PfqSpec(term.top, term.bottom, x), hi)
            value *= 2
            err += 2 * abs(coeff) * abs(last)
            n_terms += n
        total += coeff * value
    err += mp.mpf(10) ** (log_max - hi.work_dps) * max(n_terms, 1)
    if abs(total.imag) > 10 * ctx.tol * abs(total):
        raise ToleranceNotMet(
            f"imaginary residual {mp.nstr(total.imag, 3)} in the pFq sum", value=total.real
        )
    value = total.real
    _check_cancellation(log_max, value, ctx, mp)
    return EvalResult(mp0.mpf(value), mp0.mpf(err), Method.HYPER, n_terms)
