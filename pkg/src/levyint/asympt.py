"""Large-z expansion of F_alpha for integer alpha >= 3.

F_alpha(z) splits into an algebraic power series in z**(-alpha), which
vanishes identically for even alpha, plus exponentially small oscillatory
series, one per k in 0..[alpha/2]-[alpha/4]-1, and (for alpha = 2 mod 4) a
non-oscillating decaying series.  Every series is cut just before its
smallest term.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

from .errors import DomainError, OutsideAsymptoticRegime
from .numkernel import DEFAULT_CTX, AlphaParam, PrecisionCtx, pochhammer, to_mpf
from .quadrature import EvalResult, Method

MAX_ORDER = 50
Z_MIN_FACTOR = 2


def _integer_alpha(alpha) -> int:
    a = AlphaParam.of(alpha)
    if not a.is_integer or a.p < 3:
        raise DomainError(f"the large-z expansion needs an integer alpha >= 3, got {a}")
    return a.p


def z_min(alpha, factor: float = Z_MIN_FACTOR) -> float:
    """Smallest z accepted by :func:`levy_asym` (``factor * alpha``)."""
    return factor * _integer_alpha(alpha)


@dataclass(frozen=True)
class NkTable:
    alpha: int
    coeffs: tuple

    def __getitem__(self, k: int):
        if k < 0:
            return 0
        return self.coeffs[k]


def _nk_entry(a: int, k: int, table, mp):
    """One step of the N_k recursion from the already known N_0..N_{k-1}."""
    n = 2 * (a - 1)
    c = mp.mpf(a) / n
    up = mp.mpf(a) / (4 * (a - 1))
    down = mp.mpf(a - 2) / (4 * (a - 1))
    scale = mp.mpf(a) ** (2 * a - 1) * k
    total = mp.mpf(0)
    for s in range(1, n + 1):
        if k - s < 0:
            break
        prev = table[k - s]
        if prev == 0:
            continue
        for r in range(0, n - s + 1):
            x = c * (r + s - k) - (a - 1)
            term = pochhammer(x + up, a - 1) * pochhammer(x - down, a)
            term *= mp.mpf(n) ** (2 * a - s - 2)
            term /= math.factorial(r) * math.factorial(n - s - r)
            total += -term * prev if (s + r) % 2 else term * prev
    return total / scale


_nk_cache: dict[tuple[int, int], list] = {}
_nk_lock = threading.Lock()


def nk_table(alpha, M: int, ctx: PrecisionCtx = DEFAULT_CTX) -> NkTable:
    """N_0..N_M for the exponential series, N_0 = 1."""
    a = _integer_alpha(alpha)
    if M < 0 or M > MAX_ORDER:
        raise DomainError(f"M must lie in 0..{MAX_ORDER}")
    mp = ctx.mp
    key = (a, ctx.work_dps)
    with _nk_lock:
        coeffs = _nk_cache.setdefault(key, [mp.mpf(1)])
        while len(coeffs) <= M:
            coeffs.append(_nk_entry(a, len(coeffs), NkTable(a, tuple(coeffs)), mp))
        return NkTable(a, tuple(coeffs[: M + 1]))


def nk_recompute(table: NkTable, k: int, ctx: PrecisionCtx = DEFAULT_CTX):
    """Re-evaluate N_k from the lower entries of ``table``."""
    if k == 0:
        return ctx.mp.mpf(1)
    return _nk_entry(table.alpha, k, table, ctx.mp)


def _sin_half_pi(n: int) -> int:
    """sin(n pi / 2) for integer n, exactly."""
    return (0, 1, 0, -1)[n % 4]


def algebraic_series(alpha, z, M: int, ctx: PrecisionCtx = DEFAULT_CTX) -> list:
    """Terms m = 1..M of the power series; exact zeros for even alpha."""
    a = _integer_alpha(alpha)
    mp = ctx.mp
    z = to_mpf(mp, z)
    if z <= 0:
        raise DomainError("algebraic_series needs z > 0")
    terms = []
    for m in range(1, M + 1):
        sign = _sin_half_pi(m * a)
        if sign == 0:
            terms.append(mp.mpf(0))
            continue
        if (m + 1) % 2:
            sign = -sign
        ratio = math.factorial(m * a - 1) // math.factorial(m - 1)
        terms.append(sign * ratio * (a / z) * z ** (-a * m))
    return terms


@dataclass(frozen=True)
class OscComponent:
    k: int
    decay_rate: object
    phase_rate: object
    partial: object


@dataclass(frozen=True)
class AsymBreakdown:
    """The expansion at one z, split into its constituent series.

    ``m_star`` is the number of algebraic terms kept and ``m_star_exp`` the
    number of exponential-series terms kept.
    """

    alpha: int
    z: object
    algebraic: list = field(default_factory=list)
    oscillatory: list = field(default_factory=list)
    puredecay: object = None
    m_star: int = 0
    m_star_exp: int = 0
    err_estimate: object = 0
    prefactor: object = 0

    def total(self, *, exponential: bool = True, puredecay: bool = True):
        value = sum(self.algebraic, 0)
        if exponential:
            value += sum((c.partial for c in self.oscillatory), 0)
            if puredecay and self.puredecay is not None:
                value += self.puredecay
        return value

    def envelope(self, mp):
        """Size of the leading exponential contribution, prefactor * exp(-decay_0 w)."""
        a = self.alpha
        w = (self.z / a) ** (mp.mpf(a) / (a - 1))
        return self.prefactor * mp.exp(-self.oscillatory[0].decay_rate * w)


def oscillatory_count(alpha) -> int:
    a = _integer_alpha(alpha)
    return a // 2 - a // 4


def has_puredecay(alpha) -> bool:
    a = _integer_alpha(alpha)
    return a - 4 * (a // 4) == 2


def decay_rate(alpha, k: int, mp):
    a = _integer_alpha(alpha)
    return (a - 1) * mp.sin((4 * k + 1) * mp.pi / (2 * (a - 1)))


def phase_rate(alpha, k: int, mp):
    a = _integer_alpha(alpha)
    return (a - 1) * mp.cos((4 * k + 1) * mp.pi / (2 * (a - 1)))


def envelope_prefactor(alpha, z, mp):
    a = _integer_alpha(alpha)
    z = to_mpf(mp, z)
    return mp.sqrt(mp.pi / (2 * (a - 1))) * 2 / (a * z ** (a - 2)) ** (mp.mpf(1) / (2 * (a - 1)))


def _exp_weights(a, z, table, M, mp):
    x = (a / z) ** (mp.mpf(a) / (a - 1))
    return [2**m * table[m] * x**m for m in range(M + 1)]


def exp_series(alpha, z, table: NkTable, M: int, ctx: PrecisionCtx = DEFAULT_CTX) -> AsymBreakdown:
    """Oscillatory and pure-decay series, each summed over m = 0..M."""
    a = _integer_alpha(alpha)
    mp = ctx.mp
    z = to_mpf(mp, z)
    if z <= 0:
        raise DomainError("exp_series needs z > 0")
    if M > len(table.coeffs) - 1:
        raise DomainError("NkTable is shorter than the requested order")
    pre = envelope_prefactor(a, z, mp)
    w = (z / a) ** (mp.mpf(a) / (a - 1))
    weights = _exp_weights(a, z, table, M, mp)
    components = []
    for k in range(oscillatory_count(a)):
        rate = decay_rate(a, k, mp)
        freq = phase_rate(a, k, mp)
        shift = (4 * k + 2 - a) * mp.pi / (4 * (a - 1))
        step = (4 * k + a) * mp.pi / (2 * (a - 1))
        s = mp.mpf(0)
        for m, wm in enumerate(weights):
            s += wm * mp.cos(freq * w - step * m + shift)
        components.append(OscComponent(k, rate, freq, pre * mp.exp(-rate * w) * s))
    pd = None
    if has_puredecay(a):
        s = sum(wm if m % 2 == 0 else -wm for m, wm in enumerate(weights))
        pd = -pre / 2 * s * mp.exp(-(a - 1) * w)
    return AsymBreakdown(a, z, [], components, pd, 0, M + 1, mp.mpf(0), pre)


def _truncation_point(terms, floor, window: int = 1):
    """Where to cut a divergent series, and the size of what is cut off.

    The size of term i is taken as the largest magnitude among terms
    i..i+window-1, so that isolated near-zero terms do not pass for the
    smallest one.  Returns (index, size); a size below ``floor`` ends the
    search early.
    """
    best = None
    best_size = None
    for i in range(len(terms) - window + 1):
        size = max(abs(t) for t in terms[i : i + window])
        if size == 0:
            continue
        if size < floor:
            return i, size
        if best is None or size < best_size:
            best, best_size = i, size
    return best, best_size


def asym_breakdown(alpha, z, ctx: PrecisionCtx = DEFAULT_CTX, *, m_exp: int | None = None,
                   z_min_factor: float = Z_MIN_FACTOR) -> AsymBreakdown:
    """Optimally truncated expansion at z.

    ``m_exp`` fixes the number of exponential-series orders (m = 0..m_exp)
    instead of truncating at the smallest term.
    """
    a = _integer_alpha(alpha)
    mp = ctx.mp
    z = to_mpf(mp, z)
    if z < z_min(a, z_min_factor):
        raise OutsideAsymptoticRegime(
            f"z = {mp.nstr(z, 8)} is below the asymptotic gate {z_min(a, z_min_factor)} for alpha = {a}"
        )
    pre = envelope_prefactor(a, z, mp)
    w = (z / a) ** (mp.mpf(a) / (a - 1))
    envelope = pre * mp.exp(-decay_rate(a, 0, mp) * w)

    alg = algebraic_series(a, z, MAX_ORDER, ctx)
    alg_err = mp.mpf(0)
    m_star = 0
    if a % 2:
        lead = abs(alg[0])
        cut, alg_err = _truncation_point(alg, lead * ctx.tol * mp.mpf(10) ** -3)
        if cut == 0:
            raise OutsideAsymptoticRegime("algebraic series never decreases")
        m_star = cut
        alg = alg[:cut]
    else:
        alg = []

    table = nk_table(a, MAX_ORDER, ctx)
    weights = _exp_weights(a, z, table, MAX_ORDER, mp)
    if m_exp is None:
        # The N_m oscillate in sign with period about 2(alpha - 1).
        cut, size = _truncation_point(weights, ctx.tol * mp.mpf(10) ** -3, 2 * (a - 1))
        if cut == 0:
            raise OutsideAsymptoticRegime("exponential series never decreases")
        m_exp = cut - 1
    else:
        size = max(abs(t) for t in weights[m_exp + 1 : m_exp + 2 * a - 1]) if m_exp < MAX_ORDER else 0
    exp_err = size * envelope
    part = exp_series(a, z, table, m_exp, ctx)
    return AsymBreakdown(
        a, z, alg, part.oscillatory, part.puredecay, m_star, m_exp + 1, alg_err + exp_err, pre
    )


def levy_asym(alpha, z, ctx: PrecisionCtx = DEFAULT_CTX, *, z_min_factor: float = Z_MIN_FACTOR) -> EvalResult:
    """F_alpha(z) from the optimally truncated large-z expansion."""
    mp = ctx.mp
    z = abs(to_mpf(mp, z))
    b = asym_breakdown(alpha, z, ctx, z_min_factor=z_min_factor)
    return EvalResult(b.total(), b.err_estimate, Method.ASYM, len(b.algebraic) + b.m_star_exp)
