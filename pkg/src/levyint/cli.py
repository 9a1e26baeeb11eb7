"""Command-line interface.

Every command prints one flat record per result, as JSON lines (default) or
CSV.  Exit status is 0 on success, 1 when a check fails and 2 on usage or
evaluator errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import asympt
from .acceptance import run_all
from .apps import bh_kernel, real_zeros
from .errors import DivergentMoment, LevyIntError
from .eulerjacobi import EJParams, ej_direct, ej_inversion, waring_count, waring_genfun_check
from .hyper import levy_hyper, taylor_levy
from .numkernel import AlphaParam, PrecisionCtx, default_digits
from .policy import MethodPolicy, Mode, evaluate
from .quadrature import levy_density_d, levy_quad, moment_quad, predicted_moment


class Number(str):
    """A decimal string emitted verbatim as a JSON number."""


class Emitter:
    def __init__(self, fmt: str, digits: int, out=None):
        self.fmt = fmt
        self.sig = max(1, digits - 5)
        self.out = out or sys.stdout
        self._header = None

    def num(self, mp, x):
        if x is None:
            return None
        if isinstance(x, int):
            return x
        if mp.isinf(x) or mp.isnan(x):
            return str(x)
        return Number(mp.nstr(x, self.sig, strip_zeros=False, min_fixed=-5, max_fixed=self.sig))

    def row(self, record: dict):
        if self.fmt == "csv":
            keys = list(record)
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            if self._header != keys:
                writer.writerow(keys)
                self._header = keys
            writer.writerow(["" if v is None else v for v in record.values()])
            self.out.write(buf.getvalue())
        else:
            parts = []
            for k, v in record.items():
                text = str(v) if isinstance(v, Number) else json.dumps(v)
                parts.append(f"{json.dumps(k)}: {text}")
            self.out.write("{" + ", ".join(parts) + "}\n")
        self.out.flush()


def _ctx(args) -> PrecisionCtx:
    return PrecisionCtx(digits=args.digits, eps=args.eps)


def _result_record(em, mp, alpha: AlphaParam, arg, res):
    return {
        "alpha_p": alpha.p,
        "alpha_q": alpha.q,
        "arg": em.num(mp, mp.mpf(arg)),
        "value": em.num(mp, res.value),
        "err": em.num(mp, res.err_estimate),
        "method": res.method.value,
        "terms": res.terms_used,
    }


def cmd_eval(args, em):
    ctx = _ctx(args)
    mp = ctx.mp
    alpha = AlphaParam.of(args.alpha)
    policy = MethodPolicy(args.method, args.z_switch)
    for z in args.z:
        res = evaluate(alpha, mp.mpf(z), ctx, policy)
        em.row(_result_record(em, mp, alpha, z, res))
    return 0


def _applicable(alpha: AlphaParam, z, mp):
    methods = [("Quad", levy_quad)]
    if alpha.value() > 1:
        methods.append(("Taylor", taylor_levy))
        if alpha.p > alpha.q:
            methods.append(("Hyper", levy_hyper))
    if alpha.is_integer and alpha.p >= 3 and z >= asympt.z_min(alpha.p):
        methods.append(("Asym", asympt.levy_asym))
    return methods


def cmd_compare(args, em):
    ctx = _ctx(args)
    mp = ctx.mp
    alpha = AlphaParam.of(args.alpha)
    status = 0
    for z in args.z:
        zm = mp.mpf(z)
        results = []
        for name, f in _applicable(alpha, zm, mp):
            try:
                results.append((name, f(alpha, zm, ctx)))
            except LevyIntError as exc:
                em.row({"alpha_p": alpha.p, "alpha_q": alpha.q, "arg": em.num(mp, zm),
                        "method": name, "error": f"{type(exc).__name__}: {exc}"})
        ref = results[0][1] if results else None
        for name, res in results:
            dev = abs(res.value - ref.value)
            ok = dev <= 3 * (res.err_estimate + ref.err_estimate)
            if not ok:
                status = 1
            rec = _result_record(em, mp, alpha, zm, res)
            rec["deviation"] = em.num(mp, dev)
            rec["agree"] = bool(ok)
            em.row(rec)
    return status


def cmd_density(args, em):
    ctx = _ctx(args)
    mp = ctx.mp
    alpha = AlphaParam.of(args.alpha)
    for r in args.r:
        res = levy_density_d(alpha, args.d, mp.mpf(r), ctx)
        rec = _result_record(em, mp, alpha, r, res)
        rec["d"] = args.d
        em.row(rec)
    return 0


def cmd_ej(args, em):
    ctx = _ctx(args)
    mp = ctx.mp
    alpha = AlphaParam.of(args.alpha)
    status = 0
    for a in args.a:
        params = EJParams(alpha, mp.mpf(a))
        direct = ej_direct(params, ctx)
        rows = [direct]
        if alpha.value() > 1:
            inv = ej_inversion(params, ctx)
            rows.append(inv)
        for res in rows:
            rec = _result_record(em, mp, alpha, a, res)
            if len(rows) == 2:
                dev = abs(rows[0].value - rows[1].value)
                ok = dev <= 3 * (rows[0].err_estimate + rows[1].err_estimate)
                rec["residual"] = em.num(mp, dev)
                rec["agree"] = bool(ok)
                status = status or (0 if ok else 1)
            em.row(rec)
    return status


def cmd_asym_table(args, em):
    ctx = _ctx(args)
    mp = ctx.mp
    a = AlphaParam.of(args.alpha)
    z = mp.mpf(args.z)
    b = asympt.asym_breakdown(a, z, ctx, m_exp=args.M)
    oracle = levy_quad(a, z, ctx).value
    base = {"alpha_p": a.p, "alpha_q": a.q, "arg": em.num(mp, z)}
    for m, t in enumerate(b.algebraic, start=1):
        em.row({**base, "series": "algebraic", "k": None, "m": m, "term": em.num(mp, t),
                "decay_rate": None, "phase_rate": None})
    for c in b.oscillatory:
        em.row({**base, "series": "oscillatory", "k": c.k, "m": b.m_star_exp - 1,
                "term": em.num(mp, c.partial), "decay_rate": em.num(mp, c.decay_rate),
                "phase_rate": em.num(mp, c.phase_rate)})
    if b.puredecay is not None:
        em.row({**base, "series": "puredecay", "k": None, "m": b.m_star_exp - 1,
                "term": em.num(mp, b.puredecay), "decay_rate": em.num(mp, mp.mpf(a.p - 1)),
                "phase_rate": None})
    em.row({**base, "series": "total", "k": None, "m": b.m_star, "term": em.num(mp, b.total()),
            "decay_rate": None, "phase_rate": None})
    em.row({**base, "series": "oracle_error", "k": None, "m": None,
            "term": em.num(mp, abs(b.total() - oracle)), "decay_rate": None, "phase_rate": None})
    em.row({**base, "series": "err_estimate", "k": None, "m": None,
            "term": em.num(mp, b.err_estimate), "decay_rate": None, "phase_rate": None})
    return 0


def cmd_moments(args, em):
    ctx = _ctx(args)
    mp = ctx.mp
    alpha = AlphaParam.of(args.alpha)
    for m in range(args.m_max + 1):
        pred = predicted_moment(alpha, m)
        rec = {"alpha_p": alpha.p, "alpha_q": alpha.q, "m": m,
               "predicted": pred if isinstance(pred, int) or math.isinf(pred) else em.num(mp, pred)}
        if isinstance(pred, float) and math.isinf(pred):
            rec["predicted"] = "inf" if pred > 0 else "-inf"
        try:
            res = moment_quad(alpha, m, ctx)
            rec.update(value=em.num(mp, res.value), err=em.num(mp, res.err_estimate), status="finite")
        except DivergentMoment as exc:
            rec.update(value=None, err=None, status="divergent+" if exc.sign > 0 else "divergent-")
        em.row(rec)
    return 0


def cmd_zeros(args, em):
    ctx = _ctx(args)
    mp = ctx.mp
    alpha = AlphaParam.of(args.alpha)
    found = real_zeros(alpha, args.z_max, ctx)
    for i, z in enumerate(found, start=1):
        em.row({"alpha_p": alpha.p, "alpha_q": alpha.q, "index": i, "zero": em.num(mp, mp.mpf(z))})
    floor = 2 * int(alpha.value() // 2)
    # Zeros come in +-z pairs; the floor counts both signs.
    em.row({"alpha_p": alpha.p, "alpha_q": alpha.q, "positive_zeros": len(found),
            "real_zeros": 2 * len(found), "floor": floor, "meets_floor": 2 * len(found) >= floor})
    return 0


def cmd_waring(args, em):
    ctx = _ctx(args)
    mp = ctx.mp
    if args.counts:
        for n in range(args.N + 1):
            em.row({"k": args.k, "s": args.s, "n": n, "count": waring_count(args.k, args.s, n)})
    check = waring_genfun_check(args.k, args.s, mp.mpf(args.a), args.N, ctx)
    em.row({"k": args.k, "s": args.s, "a": em.num(mp, mp.mpf(args.a)), "N": args.N,
            "residual": em.num(mp, check.residual), "tail_bound": em.num(mp, check.tail_bound),
            "evaluator_err": em.num(mp, check.evaluator_err), "pass": check.passed})
    return 0 if check.passed else 1


def _grid(spec):
    lo, hi, n = float(spec[0]), float(spec[1]), int(spec[2])
    if n < 1:
        raise argparse.ArgumentTypeError("grid needs at least one point")
    if n == 1:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def cmd_kernel(args, em):
    ctx = _ctx(args)
    mp = ctx.mp
    for x in _grid(args.x):
        for y in _grid(args.y):
            kp = bh_kernel(x, y, ctx)
            em.row({"x": kp.x, "y": kp.y, "value": em.num(mp, kp.value)})
    return 0


def cmd_selfcheck(args, em):
    ctx = _ctx(args)
    failed = 0
    total = 0
    for res in run_all(ctx):
        print(res.line(), flush=True)
        failed += not res.passed
        total += 1
    print(f"{total - failed}/{total} criteria passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=default_digits(),
                        help="working precision in decimal digits (default 50 or $LEVYINT_DIGITS)")
    common.add_argument("--eps", type=float, default=None,
                        help="target relative tolerance (default 10^(5-digits))")
    common.add_argument("--method", choices=[m.value for m in Mode], default="auto")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--z-switch", type=float, default=None, dest="z_switch",
                        help="override the Taylor/large-z switch point")

    parser = argparse.ArgumentParser(prog="levyint", description="Levy integral evaluator",
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("eval", cmd_eval, "evaluate F_alpha(z)")
    p.add_argument("--alpha", required=True, help="p/q or decimal")
    p.add_argument("--z", required=True, nargs="+")

    p = add("compare", cmd_compare, "all applicable methods side by side")
    p.add_argument("--alpha", required=True)
    p.add_argument("--z", required=True, nargs="+")

    p = add("density", cmd_density, "isotropic d-dimensional density")
    p.add_argument("--alpha", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", required=True, nargs="+")

    p = add("ej", cmd_ej, "Euler-Jacobi sum, direct and by inversion")
    p.add_argument("--alpha", required=True)
    p.add_argument("--a", required=True, nargs="+")

    p = add("asym-table", cmd_asym_table, "term-by-term large-z expansion")
    p.add_argument("--alpha", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--M", type=int, default=None, help="exponential-series order (default optimal)")

    p = add("moments", cmd_moments, "even moments, predicted and computed")
    p.add_argument("--alpha", required=True)
    p.add_argument("--m-max", type=int, default=3, dest="m_max")

    p = add("zeros", cmd_zeros, "positive real zeros of F_alpha")
    p.add_argument("--alpha", required=True)
    p.add_argument("--z-max", type=float, required=True, dest="z_max")

    p = add("waring", cmd_waring, "generating-function check for r_{k,s}(n)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--a", default="1")
    p.add_argument("--N", type=int, default=200)
    p.add_argument("--counts", action="store_true", help="also print r_{k,s}(0..N)")

    p = add("kernel", cmd_kernel, "scaled random-matrix kernel on a grid")
    p.add_argument("--x", nargs=3, required=True, metavar=("LO", "HI", "N"))
    p.add_argument("--y", nargs=3, required=True, metavar=("LO", "HI", "N"))

    add("selfcheck", cmd_selfcheck, "run the acceptance suite")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        em = Emitter(args.format, args.digits)
        return args.func(args, em)
    except (LevyIntError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
