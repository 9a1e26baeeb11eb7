"""The acceptance suite: thirteen end-to-end checks with fixed tolerances.

Each check returns a :class:`CriterionResult`; ``run_all`` is what the
``selfcheck`` command and the acceptance tests execute.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

from . import asympt
from .apps import pearcey_relation_check, real_zeros, stability_convolution_check
from .errors import DivergentMoment
from .eulerjacobi import EJParams, ej_direct, ej_inversion, waring_count, waring_genfun_check
from .hyper import levy_hyper, taylor_levy
from .numkernel import PrecisionCtx
from .quadrature import levy_density_d, levy_quad, moment_quad


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} {self.number:2d} {self.title}: {self.detail} ({self.seconds:.1f}s)"


def _fmt(mp, x) -> str:
    return mp.nstr(x, 3)


def closed_forms(ctx: PrecisionCtx):
    mp = ctx.mp
    bound = mp.mpf(10) ** -30
    zs = [Fraction(k, 2) for k in range(21)]
    worst = mp.mpf(0)
    for z in zs:
        zm = mp.mpf(z.numerator) / z.denominator
        cauchy = 1 / (1 + zm**2)
        gauss = mp.sqrt(mp.pi) / 2 * mp.exp(-zm**2 / 4)
        worst = max(worst, abs(levy_quad(1, z, ctx).value - cauchy))
        for f in (levy_quad, taylor_levy, levy_hyper):
            worst = max(worst, abs(f(2, z, ctx).value - gauss))
    return worst <= bound, f"max deviation {_fmt(mp, worst)} (bound 1e-30)"


def cross_method(ctx: PrecisionCtx):
    mp = ctx.mp
    worst_ratio = 0.0
    worst_abs = mp.mpf(0)
    ok = True
    for alpha in ("3", "4", "5", "6", "3/2", "5/2"):
        for z in (Fraction(1, 2), 1, 2, 4):
            q = levy_quad(alpha, z, ctx)
            for f in (levy_hyper, taylor_levy):
                r = f(alpha, z, ctx)
                dev = abs(r.value - q.value)
                allowed = 3 * (r.err_estimate + q.err_estimate)
                worst_abs = max(worst_abs, dev)
                if allowed > 0:
                    worst_ratio = max(worst_ratio, float(dev / allowed))
                if dev > allowed or dev > mp.mpf(10) ** -15:
                    ok = False
    return ok, f"max |dev| {_fmt(mp, worst_abs)}, max dev/(3*err) {worst_ratio:.2g}"


def even_algebraic(ctx: PrecisionCtx):
    nonzero = 0
    for alpha in (4, 6, 8):
        for z in (1, 5, 12.5, 40):
            nonzero += sum(1 for t in asympt.algebraic_series(alpha, z, 30, ctx) if t != 0)
    return nonzero == 0, f"{nonzero} nonzero terms for alpha in 4, 6, 8"


def asymptotics_alpha4(ctx: PrecisionCtx):
    mp = ctx.mp
    low, opt = [], []
    for z in (8, 10, 12, 14):
        q = levy_quad(4, z, ctx).value
        b = asympt.asym_breakdown(4, z, ctx)
        env = b.envelope(mp)
        opt.append(abs(b.total() - q) / env)
        low.append(abs(asympt.asym_breakdown(4, z, ctx, m_exp=1).total() - q) / env)
    monotone = all(opt[i + 1] <= opt[i] for i in range(len(opt) - 1))
    ok = max(low) <= 1e-2 and max(opt) <= 1e-3 and monotone
    detail = (
        f"m<=1 max {_fmt(mp, max(low))}, optimal {[_fmt(mp, e) for e in opt]}, "
        f"non-increasing {monotone}"
    )
    return ok, detail


def nk_validation(ctx: PrecisionCtx):
    mp = ctx.mp
    ok = True
    parts = []
    for alpha in (3, 4, 5, 6):
        for z in (4 * alpha, 5 * alpha):
            q = levy_quad(alpha, z, ctx).value
            e0 = abs(asympt.asym_breakdown(alpha, z, ctx, m_exp=0).total() - q)
            e1 = abs(asympt.asym_breakdown(alpha, z, ctx, m_exp=1).total() - q)
            ok &= e1 < e0
            parts.append(f"{alpha}@{z}:{float(e0 / e1):.3g}x")
    return ok, "error reduction " + " ".join(parts)


def kronecker_structure(ctx: PrecisionCtx):
    mp = ctx.mp
    present = [a for a in range(3, 11) if asympt.has_puredecay(a)]
    structure = present == [6, 10]
    omega = asympt.phase_rate(6, 0, mp)
    shift = -mp.pi / 5

    def cos0(z):
        return mp.cos(omega * (z / 6) ** (mp.mpf(6) / 5) + shift)

    grid = [mp.mpf(11) + mp.mpf(k) / 200 for k in range(401)]
    z = min(grid, key=lambda x: abs(cos0(x)))
    q = levy_quad(6, z, ctx).value
    b = asympt.asym_breakdown(6, z, ctx)
    with_pd = abs(b.total() - q)
    without = abs(b.total(puredecay=False) - q)
    near = abs(cos0(z)) < 0.05
    ok = structure and near and without > with_pd
    return ok, (
        f"present for {present}; at z={mp.nstr(z, 6)} |cos|={_fmt(mp, abs(cos0(z)))} "
        f"error {_fmt(mp, with_pd)} with vs {_fmt(mp, without)} without"
    )


def inversion_identity(ctx: PrecisionCtx):
    mp = ctx.mp
    ok = True
    worst = 0.0
    theta_worst = mp.mpf(0)
    for alpha in ("2", "3", "4", "3/2"):
        for a in ("0.05", "0.1", "0.5", "1"):
            p = EJParams(alpha, mp.mpf(a))
            d = ej_direct(p, ctx)
            i = ej_inversion(p, ctx)
            dev = abs(d.value - i.value)
            allowed = 3 * (d.err_estimate + i.err_estimate)
            worst = max(worst, float(dev / allowed))
            ok &= dev <= allowed
            if alpha == "2":
                theta_worst = max(theta_worst, dev)
    ok &= theta_worst <= mp.mpf(10) ** -25
    return ok, f"max dev/(3*err) {worst:.2g}; theta case max dev {_fmt(mp, theta_worst)}"


def moments(ctx: PrecisionCtx):
    mp = ctx.mp
    m42 = moment_quad(4, 2, ctx).value
    m41 = moment_quad(4, 1, ctx).value
    m63 = moment_quad(6, 3, ctx).value
    try:
        moment_quad(3, 2, ctx)
        raised = False
    except DivergentMoment:
        raised = True
    ok = (
        abs(m42 + 24) <= 1e-8 and abs(m41) <= 1e-10 and abs(m63 - 720) <= 1e-6 and raised
    )
    return ok, (
        f"(4,2)={mp.nstr(m42, 12)} (4,1)={_fmt(mp, m41)} (6,3)={mp.nstr(m63, 12)} "
        f"(3,2) divergent={raised}"
    )


def pearcey(ctx: PrecisionCtx):
    mp = ctx.mp
    res = [pearcey_relation_check(y, ctx) for y in (0, 1, 2)]
    return max(res) <= 1e-6, "residuals " + ", ".join(_fmt(mp, r) for r in res)


def waring(ctx: PrecisionCtx):
    mp = ctx.mp
    checks = {ks: waring_genfun_check(*ks, 1, 200, ctx) for ks in ((2, 2), (2, 3), (4, 2))}
    c5 = waring_count(2, 2, 5)
    c25 = waring_count(2, 2, 25)
    ok = all(c.passed for c in checks.values()) and c5 == 8 and c25 == 12
    parts = [f"{k}:{_fmt(mp, c.residual)}" for k, c in checks.items()]
    return ok, "residuals " + " ".join(parts) + f"; r(5)={c5} r(25)={c25}"


def zeros(ctx: PrecisionCtx):
    z4 = real_zeros(4, 12, ctx)
    z3 = real_zeros(3, 20, ctx)
    z2 = real_zeros(2, 20, ctx)
    far = real_zeros(4, 30, ctx)

    def half_period(z):
        rate = 3 * math.sqrt(3) / 2 * (4 / 3) * (z / 4) ** (1 / 3) / 4
        return math.pi / rate

    worst = 0.0
    for lo, hi in zip(far[-4:], far[-3:]):
        worst = max(worst, abs((hi - lo) / half_period((lo + hi) / 2) - 1))
    ok = len(z4) >= 3 and len(z3) >= 1 and len(z2) == 0 and len(far) >= 4 and worst <= 0.05
    return ok, (
        f"counts alpha=4:{len(z4)} alpha=3:{len(z3)} alpha=2:{len(z2)}; "
        f"spacing mismatch {worst:.2e}"
    )


def stability(ctx: PrecisionCtx):
    check = stability_convolution_check()
    return check.max_deviation <= 1e-4, f"max deviation {check.max_deviation:.2e} (bound 1e-4)"


def densities(ctx: PrecisionCtx):
    mp = ctx.mp
    worst3 = mp.mpf(0)
    worst2 = mp.mpf(0)
    for r in (0, 1, 2):
        g = (4 * mp.pi) ** (-mp.mpf(3) / 2) * mp.exp(-mp.mpf(r) ** 2 / 4)
        c = 1 / (2 * mp.pi) * (1 + mp.mpf(r) ** 2) ** (-mp.mpf(3) / 2)
        worst3 = max(worst3, abs(levy_density_d(2, 3, r, ctx).value - g))
        worst2 = max(worst2, abs(levy_density_d(1, 2, r, ctx).value - c))
    ok = worst3 <= 1e-12 and worst2 <= 1e-10
    return ok, f"Gaussian 3-d {_fmt(mp, worst3)}, Cauchy 2-d {_fmt(mp, worst2)}"


CRITERIA = [
    (1, "closed forms", closed_forms),
    (2, "cross-method agreement", cross_method),
    (3, "even-alpha algebraic series vanish", even_algebraic),
    (4, "large-z expansion vs quadrature, alpha=4", asymptotics_alpha4),
    (5, "N_1 correction reduces error", nk_validation),
    (6, "pure-decay series structure", kronecker_structure),
    (7, "Euler-Jacobi inversion identity", inversion_identity),
    (8, "moments", moments),
    (9, "Pearcey relation", pearcey),
    (10, "Waring generating function", waring),
    (11, "real zeros", zeros),
    (12, "stability under convolution", stability),
    (13, "d-dimensional closed forms", densities),
]


def run_criterion(number: int, ctx: PrecisionCtx | None = None) -> CriterionResult:
    ctx = ctx or PrecisionCtx(digits=50)
    _, title, check = next(c for c in CRITERIA if c[0] == number)
    start = time.perf_counter()
    try:
        passed, detail = check(ctx)
    except Exception as exc:  # any evaluator failure is a failed criterion
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, title, bool(passed), detail, time.perf_counter() - start)


def run_all(ctx: PrecisionCtx | None = None):
    for number, _, _ in CRITERIA:
        yield run_criterion(number, ctx)
