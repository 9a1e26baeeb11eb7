"""Configurable-precision arithmetic and the elementary special functions.

Real and complex numbers are mpmath ``mpf``/``mpc`` values bound to a
per-precision :class:`mpmath.ctx_mp.MPContext`.  Contexts are never mutated
after creation, so evaluations at different precisions can run side by side
without touching mpmath's global ``mp.dps``.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath.ctx_mp import MPContext

from .errors import DomainError, PoleError

GUARD_DIGITS = 10

_contexts: dict[int, MPContext] = {}
_contexts_lock = threading.Lock()


def get_mp(dps: int) -> MPContext:
    """Return the shared, read-only mpmath context for ``dps`` digits."""
    ctx = _contexts.get(dps)
    if ctx is None:
        with _contexts_lock:
            ctx = _contexts.get(dps)
            if ctx is None:
                ctx = MPContext()
                ctx.dps = dps
                _contexts[dps] = ctx
    return ctx


def default_digits() -> int:
    raw = os.environ.get("LEVYINT_DIGITS")
    return int(raw) if raw else 50


@dataclass(frozen=True)
class PrecisionCtx:
    """Working precision, target tolerance and term budget.

    ``eps`` defaults to ``10**(5 - digits)``; all arithmetic is carried out
    with :data:`GUARD_DIGITS` extra digits.
    """

    digits: int = 50
    eps: float | None = None
    max_terms: int = 100_000
    _eps_mpf: object = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if int(self.digits) != self.digits or self.digits < 15:
            raise DomainError(f"digits must be an integer >= 15, got {self.digits}")
        if self.max_terms < 1:
            raise DomainError("max_terms must be positive")
        mp = get_mp(self.digits + GUARD_DIGITS)
        eps = mp.mpf(10) ** (5 - self.digits) if self.eps is None else mp.mpf(self.eps)
        if eps <= 0:
            raise DomainError("eps must be positive")
        object.__setattr__(self, "_eps_mpf", eps)

    @property
    def work_dps(self) -> int:
        return self.digits + GUARD_DIGITS

    @property
    def mp(self) -> MPContext:
        return get_mp(self.work_dps)

    @property
    def tol(self):
        """Target relative tolerance as an ``mpf``."""
        return self._eps_mpf

    def with_digits(self, digits: int) -> "PrecisionCtx":
        eps = None if self.eps is None else self.eps
        return PrecisionCtx(digits=digits, eps=eps, max_terms=self.max_terms)

    def boosted(self, extra: int) -> "PrecisionCtx":
        """Same target tolerance, ``extra`` more working digits."""
        return PrecisionCtx(
            digits=self.digits + max(0, int(extra)),
            eps=self.tol,
            max_terms=self.max_terms,
        )


DEFAULT_CTX = PrecisionCtx()


@dataclass(frozen=True, order=True)
class AlphaParam:
    """The exponent as a reduced positive rational ``p/q``."""

    p: int
    q: int = 1

    def __post_init__(self):
        if int(self.p) != self.p or int(self.q) != self.q:
            raise DomainError("alpha numerator and denominator must be integers")
        if self.p < 1 or self.q < 1:
            raise DomainError(f"alpha must be positive, got {self.p}/{self.q}")
        if math.gcd(self.p, self.q) != 1:
            raise DomainError(f"alpha {self.p}/{self.q} is not in lowest terms")

    @classmethod
    def of(cls, value) -> "AlphaParam":
        """Coerce an int, Fraction, "p/q" string or float to an AlphaParam.

        Floats and decimal strings snap to the nearest rational with
        denominator at most 64.
        """
        if isinstance(value, AlphaParam):
            return value
        if isinstance(value, str):
            text = value.strip()
            if "/" in text:
                num, den = text.split("/", 1)
                if int(den) == 0:
                    raise DomainError(f"alpha {text} has a zero denominator")
                frac = Fraction(int(num), int(den))
            else:
                frac = Fraction(text).limit_denominator(64)
        elif isinstance(value, (int, Fraction)):
            frac = Fraction(value)
        else:
            frac = Fraction(float(value)).limit_denominator(64)
        if frac <= 0:
            raise DomainError(f"alpha must be positive, got {value}")
        return cls(frac.numerator, frac.denominator)

    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def is_integer(self) -> bool:
        return self.q == 1

    @property
    def is_even_integer(self) -> bool:
        return self.q == 1 and self.p % 2 == 0

    def to_mpf(self, mp):
        return mp.mpf(self.p) / self.q

    def __float__(self):
        return self.p / self.q

    def __str__(self):
        return str(self.p) if self.q == 1 else f"{self.p}/{self.q}"


def to_mpf(mp, x):
    """Convert ints, Fractions, floats, strings and mpf values exactly."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    if isinstance(x, AlphaParam):
        return x.to_mpf(mp)
    return mp.mpf(x)


def i_pow(n: int) -> tuple[int, int]:
    """``i**n`` as an exact (real, imag) integer pair."""
    return [(1, 0), (0, 1), (-1, 0), (0, -1)][n % 4]


@lru_cache(maxsize=None)
def _stirling_coefficient(k: int) -> Fraction:
    num, den = mpmath.bernfrac(2 * k)
    return Fraction(int(num), int(den)) / (2 * k * (2 * k - 1))


def _is_nonpositive_integer(mp, x) -> bool:
    return x <= 0 and x == mp.floor(x)


def gamma(x, ctx: PrecisionCtx = DEFAULT_CTX):
    """Gamma function by a shifted Stirling series, reflected below 1/2."""
    mp = ctx.mp
    x = to_mpf(mp, x)
    if _is_nonpositive_integer(mp, x):
        raise PoleError(f"gamma has a pole at {mp.nstr(x, 10)}")
    if x < 0.5:
        return mp.pi / (mp.sinpi(x) * gamma(1 - x, ctx))
    if x == mp.floor(x) and x < 1000:
        return mp.mpf(math.factorial(int(x) - 1))
    return mp.exp(_lgamma_shifted(mp, x, ctx.digits))


def log_gamma(x, ctx: PrecisionCtx = DEFAULT_CTX):
    """log Gamma(x) for x > 0."""
    mp = ctx.mp
    x = to_mpf(mp, x)
    if x <= 0:
        raise DomainError("log_gamma needs a positive argument")
    return _lgamma_shifted(mp, x, ctx.digits)


def _lgamma_shifted(mp, x, digits):
    threshold = max(10, 0.8 * digits)
    shift = 0
    product = mp.mpf(1)
    while x + shift < threshold:
        product *= x + shift
        shift += 1
    y = x + shift
    total = (y - 0.5) * mp.log(y) - y + mp.log(2 * mp.pi) / 2
    cutoff = mp.mpf(10) ** (-mp.dps - 2)
    y2 = y * y
    power = y
    k = 1
    while True:
        c = _stirling_coefficient(k)
        term = mp.mpf(c.numerator) / c.denominator / power
        total += term
        if abs(term) < cutoff or k > 4 * digits:
            break
        power *= y2
        k += 1
    return total - mp.log(product) if shift else total


def pochhammer(x, n: int):
    """Rising factorial ``x (x+1) ... (x+n-1)`` by direct product."""
    if n < 0:
        raise DomainError("pochhammer length must be non-negative")
    result = 1
    for j in range(n):
        result = result * (x + j)
    return result


def _bessel_switch(ctx: PrecisionCtx) -> float:
    # Hankel remainder at optimal truncation is ~exp(-2x).
    return max(20.0, float(ctx.digits), 1.16 * ctx.work_dps)


def bessel_j(nu, x, ctx: PrecisionCtx = DEFAULT_CTX):
    """Bessel function of the first kind for ``nu >= -1/2`` and ``x >= 0``."""
    mp = ctx.mp
    nu = to_mpf(mp, nu)
    x = to_mpf(mp, x)
    if x < 0:
        raise DomainError("bessel_j needs x >= 0")
    if nu < -0.5:
        raise DomainError("bessel_j supports nu >= -1/2 only")
    if x == 0:
        if nu == 0:
            return mp.mpf(1)
        if nu > 0:
            return mp.mpf(0)
        raise DomainError("J_{-1/2} is singular at the origin")
    if x <= _bessel_switch(ctx):
        return _bessel_ascending(nu, x, ctx)
    return _bessel_hankel(nu, x, ctx)


def _bessel_ascending(nu, x, ctx):
    # Terms peak near exp(x); carry enough digits to absorb the cancellation.
    extra = int(float(x) / math.log(10)) + 3
    hi = ctx.boosted(extra)
    mp = hi.mp
    xh = mp.mpf(x)
    nuh = mp.mpf(nu)
    half = xh / 2
    q = -half * half
    term = half**nuh / gamma(nuh + 1, hi)
    total = term
    cutoff = mp.mpf(10) ** (-ctx.work_dps - 2)
    k = 1
    while True:
        term *= q / (k * (k + nuh))
        total += term
        if k > half and abs(term) <= cutoff * abs(total):
            break
        k += 1
        if k > ctx.max_terms:
            break
    return ctx.mp.mpf(total)


def _bessel_hankel(nu, x, ctx):
    mp = ctx.mp
    mu = 4 * nu * nu
    cutoff = mp.mpf(10) ** (-ctx.work_dps - 2)
    p_sum = mp.mpf(0)
    q_sum = mp.mpf(0)
    a = mp.mpf(1)
    prev = None
    k = 0
    while True:
        term = a / x**k
        mag = abs(term)
        if prev is not None and mag > prev:
            break
        if k % 2 == 0:
            p_sum += term if (k // 2) % 2 == 0 else -term
        else:
            q_sum += term if ((k - 1) // 2) % 2 == 0 else -term
        if mag <= cutoff:
            break
        prev = mag
        k += 1
        a = a * (mu - (2 * k - 1) ** 2) / (k * 8)
        if a == 0:
            break
    chi = x - (nu / 2 + mp.mpf(1) / 4) * mp.pi
    return mp.sqrt(2 / (mp.pi * x)) * (p_sum * mp.cos(chi) - q_sum * mp.sin(chi))
