"""Euler-Jacobi sums S_alpha(a) = sum_{n>=0} exp(-a n**alpha) and Waring counts.

S_alpha is computed both by direct summation and through its transformation
into a sum of F_alpha values at z = 2 pi n / a**(1/alpha), which is rapidly
convergent for small a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .asympt import decay_rate, envelope_prefactor
from .errors import BudgetExceeded, DomainError, ToleranceNotMet
from .numkernel import DEFAULT_CTX, AlphaParam, PrecisionCtx, gamma, to_mpf
from .policy import AUTO, MethodPolicy, evaluate
from .quadrature import EvalResult, Method

WARING_BUDGET = 10**6


@dataclass(frozen=True)
class EJParams:
    alpha: AlphaParam
    a: object

    def __post_init__(self):
        object.__setattr__(self, "alpha", AlphaParam.of(self.alpha))
        if isinstance(self.a, str):
            object.__setattr__(self, "a", Fraction(self.a))
        if not self.a > 0:
            raise DomainError("the Euler-Jacobi parameter a must be positive")


def _tail_integral(mp, alpha, a, N):
    """Upper bound on int_N^inf exp(-a x**alpha) dx."""
    if alpha >= 1:
        return mp.exp(-a * N**alpha) * max(1, N ** (1 - alpha) / (a * alpha))
    return mp.gammainc(1 / alpha, a * N**alpha) / (alpha * a ** (1 / alpha))


def ej_direct(params: EJParams, ctx: PrecisionCtx = DEFAULT_CTX) -> EvalResult:
    """Direct partial sum with an integral-comparison tail bound."""
    mp = ctx.mp
    alpha = params.alpha.to_mpf(mp)
    a = to_mpf(mp, params.a)
    total = mp.mpf(0)
    n = 0
    while True:
        total += mp.exp(-a * mp.mpf(n) ** alpha)
        n += 1
        if n > 1 and (n - 1) ** float(alpha) * float(a) > 2:
            tail = _tail_integral(mp, alpha, a, mp.mpf(n - 1))
            if tail <= ctx.tol * total * mp.mpf(10) ** -2:
                return EvalResult(total, tail, Method.DIRECT, n)
        if n > ctx.max_terms:
            tail = _tail_integral(mp, alpha, a, mp.mpf(n - 1))
            raise ToleranceNotMet(
                f"direct Euler-Jacobi sum needs more than {ctx.max_terms} terms",
                value=total,
                err_estimate=tail,
            )


def _algebraic_coeffs(alpha: AlphaParam, J: int, ctx):
    """c_j with F_alpha(z) ~ sum_j c_j z**(-1 - j alpha), exact zeros included."""
    mp = ctx.mp
    a = alpha.to_mpf(mp)
    coeffs = []
    for j in range(1, J + 1):
        half = Fraction(j) * alpha.value() / 2
        if half.denominator == 1:
            coeffs.append(mp.mpf(0))
            continue
        s = mp.sinpi(mp.mpf(half.numerator) / half.denominator)
        c = (-1) ** (j + 1) * a * gamma(j * alpha.value(), ctx) / gamma(j, ctx) * s
        coeffs.append(c)
    return coeffs


def _truncated(coeffs, alpha_f, z, floor):
    """Number of terms to keep at z and the size of the first one dropped."""
    best, best_mag = None, None
    for i, c in enumerate(coeffs):
        mag = abs(c) * z ** (-1 - (i + 1) * alpha_f)
        if mag == 0:
            continue
        if mag < floor:
            return i, mag
        if best is None or mag < best_mag:
            best, best_mag = i, mag
    return best, best_mag


def ej_inversion(params: EJParams, ctx: PrecisionCtx = DEFAULT_CTX, policy: MethodPolicy = AUTO) -> EvalResult:
    """S_alpha(a) from its transformation into a sum of F_alpha values; alpha > 1.

    For even alpha F decays exponentially and the n-sum is cut by the
    exponential envelope.  Otherwise F is summed explicitly until the
    large-z algebraic series reproduces it, and the rest of the n-sum is
    done in closed form: each algebraic term contributes c_j times a
    Hurwitz zeta value.
    """
    alpha = params.alpha
    if alpha.value() <= 1:
        raise DomainError("the inversion formula needs alpha > 1")
    mp = ctx.mp
    a = to_mpf(mp, params.a)
    af = alpha.to_mpf(mp)
    inv = 1 / af
    scale = a**inv
    c = 2 * mp.pi / scale
    lead = gamma(Fraction(alpha.q, alpha.p) + 1, ctx) / scale + mp.mpf(1) / 2
    target = ctx.tol * lead * mp.mpf(10) ** -2 * scale

    total = mp.mpf(0)
    err = mp.mpf(0)
    terms = 0
    if alpha.is_even_integer:
        n = 1
        while True:
            res = evaluate(alpha, c * n, ctx, policy)
            total += res.value
            err += res.err_estimate
            terms += res.terms_used
            z_next = c * (n + 1)
            if alpha.p == 2:
                bound = mp.sqrt(mp.pi) / 2 * mp.exp(-z_next**2 / 4)
            else:
                w = (z_next / alpha.p) ** (af / (af - 1))
                bound = envelope_prefactor(alpha.p, z_next, mp) * mp.exp(-decay_rate(alpha.p, 0, mp) * w)
            # Successive terms shrink at least geometrically from here on.
            bound *= 2
            if bound < target:
                err += bound
                break
            n += 1
            if n > ctx.max_terms:
                raise ToleranceNotMet("inversion sum did not converge", value=total, err_estimate=bound)
    else:
        coeffs = _algebraic_coeffs(alpha, 60, ctx)
        n = 1
        while True:
            z = c * n
            res = evaluate(alpha, z, ctx, policy)
            total += res.value
            err += res.err_estimate
            terms += res.terms_used
            size = abs(coeffs[0]) * z ** (-1 - af)
            keep, dropped = _truncated(coeffs, af, z, ctx.tol * size * mp.mpf(10) ** -3)
            if keep:
                series = sum(coeffs[j] * z ** (-1 - (j + 1) * af) for j in range(keep))
                gap = abs(series - res.value)
                # F itself is only known to res.err_estimate, so agreement is judged against that.
                if gap <= 3 * res.err_estimate + ctx.tol * size / 10 and dropped <= ctx.tol * size:
                    break
            n += 1
            if n > ctx.max_terms:
                raise ToleranceNotMet("inversion sum did not reach the algebraic regime", value=total)
        tail = mp.mpf(0)
        for j in range(keep):
            s = 1 + (j + 1) * af
            tail += coeffs[j] * c ** (-s) * mp.zeta(s, n + 1)
        # Beyond n the neglected parts shrink at least as fast as at n itself.
        err += (gap + res.err_estimate + dropped) * mp.zeta(1 + af, n + 1) * mp.mpf(n) ** (1 + af)
        total += tail
        terms += keep
    value = lead + 2 * total / scale
    return EvalResult(value, 2 * err / scale, Method.INVERSION, terms)


def _check_k(k: int):
    if k < 2 or k % 2:
        raise DomainError("Waring counts are defined here for even k >= 2 only")


@lru_cache(maxsize=None)
def _count(k: int, s: int, n: int) -> int:
    if s == 0:
        return 1 if n == 0 else 0
    total = 0
    x = 0
    while True:
        v = x**k
        if v > n:
            break
        total += (1 if x == 0 else 2) * _count(k, s - 1, n - v)
        x += 1
    return total


def waring_count(k: int, s: int, n: int) -> int:
    """Ordered representations of n as a sum of s k-th powers of integers.

    Signs and order both count: (1, 2), (2, 1) and (-1, 2) are distinct.
    """
    _check_k(k)
    if s < 1 or n < 0:
        raise DomainError("need s >= 1 and n >= 0")
    if n * s > WARING_BUDGET:
        raise BudgetExceeded(f"n = {n} exceeds the enumeration budget {WARING_BUDGET // s} for s = {s}")
    return _count(k, s, n)


@dataclass(frozen=True)
class WaringCheck:
    residual: object
    tail_bound: object
    evaluator_err: object

    @property
    def passed(self) -> bool:
        return self.residual <= self.tail_bound + self.evaluator_err


def waring_genfun_check(k: int, s: int, a, N: int, ctx: PrecisionCtx = DEFAULT_CTX) -> WaringCheck:
    """Compare sum_{n<=N} r_{k,s}(n) e^{-an} with (2 S_k(a) - 1)**s."""
    _check_k(k)
    mp = ctx.mp
    a = to_mpf(mp, a)
    lhs = mp.mpf(0)
    for n in range(N + 1):
        lhs += waring_count(k, s, n) * mp.exp(-a * n)
    direct = ej_direct(EJParams(AlphaParam(k), a), ctx)
    base = 2 * direct.value - 1
    rhs = base**s
    evaluator_err = s * abs(base) ** (s - 1) * 2 * direct.err_estimate + 10 * ctx.tol * abs(rhs)
    tail = mp.mpf(0)
    n = N + 1
    while True:
        term = (2 * mp.mpf(n) ** (mp.mpf(1) / k) + 1) ** s * mp.exp(-a * n)
        tail += term
        if term < tail * mp.mpf(10) ** -(ctx.digits + 5) and n > N + 10:
            break
        n += 1
    return WaringCheck(abs(lhs - rhs), tail, evaluator_err)
