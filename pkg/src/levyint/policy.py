"""Method selection for F_alpha(z).

The Taylor series is cheap but loses digits to cancellation as z grows; the
large-z expansion only exists for integer alpha >= 3 and is accurate only
far out; quadrature works everywhere at higher cost.  ``evaluate`` picks
among them and falls back to quadrature whenever the faster route cannot
deliver the requested tolerance.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum

from .asympt import asym_breakdown, decay_rate, envelope_prefactor, levy_asym, z_min
from .errors import CancellationError, DomainError, OutsideAsymptoticRegime
from .hyper import _log10_max_term, levy_hyper, taylor_levy
from .numkernel import DEFAULT_CTX, AlphaParam, PrecisionCtx, get_mp, to_mpf
from .quadrature import EvalResult, Method, levy_quad


class Mode(str, Enum):
    AUTO = "auto"
    QUAD = "quad"
    TAYLOR = "taylor"
    HYPER = "hyper"
    ASYM = "asym"
    INVERSION = "inversion"


@dataclass(frozen=True)
class MethodPolicy:
    mode: Mode = Mode.AUTO
    z_switch_override: float | None = None

    def __post_init__(self):
        if not isinstance(self.mode, Mode):
            object.__setattr__(self, "mode", Mode(str(self.mode).lower()))


AUTO = MethodPolicy()


def _log10_size(alpha: AlphaParam, z: float) -> float:
    """Rough log10 |F_alpha(z)| for large z, used only to place the switch."""
    a = float(alpha)
    if alpha.is_integer and alpha.p == 2:
        return (math.log(math.sqrt(math.pi) / 2) - z * z / 4) / math.log(10)
    if alpha.is_even_integer:
        mp = get_mp(20)
        pre = envelope_prefactor(alpha.p, z, mp)
        w = (z / a) ** (a / (a - 1))
        return float(mp.log10(pre) - decay_rate(alpha.p, 0, mp) * w / mp.log(10))
    lead = a * math.gamma(a) * abs(math.sin(math.pi * a / 2))
    return math.log10(lead) - (1 + a) * math.log10(z)


_switch_cache: dict[tuple[int, int, int], float] = {}
_switch_lock = threading.Lock()


def z_switch(alpha, ctx: PrecisionCtx = DEFAULT_CTX) -> float:
    """Largest grid z at which the Taylor series still keeps its guard digits.

    Probed once per (alpha, digits) on a grid of step 1/2 and cached.
    Returns 0 when the Taylor series is unavailable (alpha <= 1).
    """
    alpha = AlphaParam.of(alpha)
    key = (alpha.p, alpha.q, ctx.digits)
    with _switch_lock:
        if key in _switch_cache:
            return _switch_cache[key]
    if alpha.value() <= 1:
        result = 0.0
    else:
        budget = ctx.digits - 12
        result = 0.0
        z = 0.5
        while z <= 400:
            if _log10_max_term(alpha, z) - _log10_size(alpha, z) > budget:
                break
            result = z
            z += 0.5
    with _switch_lock:
        _switch_cache[key] = result
    return result


def _meets(res: EvalResult, ctx: PrecisionCtx) -> bool:
    return res.err_estimate <= ctx.tol * max(abs(res.value), ctx.mp.mpf(10) ** -ctx.work_dps)


def evaluate(alpha, z, ctx: PrecisionCtx = DEFAULT_CTX, policy: MethodPolicy = AUTO) -> EvalResult:
    """F_alpha(z) by the method the policy names, or the best available."""
    alpha = AlphaParam.of(alpha)
    mode = policy.mode
    if mode is Mode.QUAD:
        return levy_quad(alpha, z, ctx)
    if mode is Mode.TAYLOR:
        return taylor_levy(alpha, z, ctx)
    if mode is Mode.HYPER:
        return levy_hyper(alpha, z, ctx)
    if mode is Mode.ASYM:
        return levy_asym(alpha, z, ctx)
    if mode is Mode.INVERSION:
        raise DomainError("the inversion method applies to Euler-Jacobi sums, not to F_alpha")

    za = abs(to_mpf(ctx.mp, z))
    if alpha.value() <= 1:
        return levy_quad(alpha, za, ctx)
    switch = policy.z_switch_override if policy.z_switch_override is not None else z_switch(alpha, ctx)
    if za < switch:
        try:
            return taylor_levy(alpha, za, ctx)
        except CancellationError:
            # Close to a zero of F the relative guard trips; quadrature has no such limit.
            return levy_quad(alpha, za, ctx)
    if alpha.is_integer and alpha.p >= 3 and za >= z_min(alpha.p):
        try:
            b = asym_breakdown(alpha.p, za, ctx)
        except OutsideAsymptoticRegime:
            b = None
        if b is not None:
            res = EvalResult(b.total(), b.err_estimate, Method.ASYM, len(b.algebraic) + b.m_star_exp)
            if _meets(res, ctx):
                return res
    return levy_quad(alpha, za, ctx)
