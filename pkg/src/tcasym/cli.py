"""Command-line surface: eval, compare sweeps, region lookup, orthogonality,
self-test.

Output conventions: single JSON objects on stdout for ``eval``/``regions``/
``ortho``; CSV (fixed 12-column header) or JSON rows for ``compare``.
Extended-precision quantities (log-modulus, phase) are emitted as
full-digit decimal strings; everything in double range is emitted as a
float with 17 significant digits.  Values never leave the process in
plain form unless |log_mod| < 700 (guaranteed exp-representable), in
which case value_re/value_im floats are attached as a convenience.

Exit codes: 0 success, 1 configuration error, 2 domain error.  Errors
are reported as one machine-readable JSON object on stdout.

``--threads N`` parallelizes compare sweeps over worker processes (each
point is computed independently and merged in input order, so output
bytes do not depend on N; N=1 runs inline).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import mpmath
from mpmath import mp

from . import __version__, _accel, asym, exact, harness
from .asym import Params
from .mpnum import ConfigError, DomainError, LogComplex, bits_of, to_mpc, to_mpf, working

PREC_ENV = "TCASYM_PREC"
CSV_HEADER = ("n,alpha,z_re,z_im,region,log_exact_mod,log_exact_phase,"
              "log_asym_mod,log_asym_phase,rel_err,dropped_term_bound,flags")
VALUE_EXPORT_CAP = 700  # |log_mod| below this exports float value_re/value_im


def _default_prec() -> int:
    env = os.environ.get(PREC_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{PREC_ENV} must be an integer, got {env!r}")
    return 256


def _fmt_float(x) -> str:
    return repr(float(x))


def _fmt_full(x, bits) -> str:
    """Full-precision decimal string for an extended value."""
    dps = int(bits * 0.30103) + 3
    return mpmath.nstr(x, dps, strip_zeros=False)


def _logc_json(v: LogComplex, bits):
    out = {
        "log_mod": _fmt_full(v.log_mod, bits),
        "phase": _fmt_full(v.phase, bits),
    }
    with working(bits):
        if not v.is_zero() and abs(v.log_mod) < VALUE_EXPORT_CAP:
            w = v.to_complex(bits)
            out["value_re"] = float(w.real)
            out["value_im"] = float(w.imag)
        elif v.is_zero():
            out["value_re"] = 0.0
            out["value_im"] = 0.0
    return out


def _parse_z(s: str):
    try:
        re_s, im_s = s.split(",")
        return (re_s.strip(), im_s.strip())
    except ValueError:
        raise ConfigError(f"--z expects 're,im', got {s!r}")


def _parse_grid(s: str):
    """'re0:re1:nre,im0:im1:nim' -> list of (re, im) mpf pairs, inclusive
    linear spacing, re-major order."""
    try:
        re_part, im_part = s.split(",")
        r0, r1, nr = re_part.split(":")
        i0, i1, ni = im_part.split(":")
        nr, ni = int(nr), int(ni)
        if nr < 1 or ni < 1:
            raise ValueError
    except ValueError:
        raise ConfigError(f"--grid expects 're0:re1:nre,im0:im1:nim', got {s!r}")

    def axis(a, b, k):
        if k == 1:
            return [mpmath.mpf(a)]
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        return [a + (b - a) * j / (k - 1) for j in range(k)]

    with mp.workprec(64):
        res = axis(r0, r1, nr)
        ims = axis(i0, i1, ni)
        return [(re, im) for re in res for im in ims]


def _parse_z_list(s: str):
    out = []
    for item in s.split(";"):
        if item.strip():
            out.append(_parse_z(item))
    if not out:
        raise ConfigError("--z-list is empty")
    return out


class _CliParser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _CliParser(prog="tcasym", description="Dual-path Tricomi-Carlitz polynomial engine")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_n=True):
        if needs_n:
            sp.add_argument("--n", type=int, required=True, help="degree")
        sp.add_argument("--alpha", type=str, required=True, help="weight parameter (> 0)")
        sp.add_argument("--prec", type=int, default=None, help="mantissa bits (default 256 or $TCASYM_PREC)")
        sp.add_argument("--delta", type=float, default=0.25, help="strip height")
        sp.add_argument("--eps", type=float, default=0.15, help="disk radius")

    e = sub.add_parser("eval", help="evaluate one point by either path")
    e.add_argument("--mode", choices=("exact", "asym"), required=True)
    common(e)
    e.add_argument("--z", type=str, required=True, help="point as 're,im'")
    e.add_argument("--rescaled", type=str, default="true", choices=("true", "false"),
                   help="exact mode: monic at n^(-1/2) z (true) or plain f_n at z (false)")

    c = sub.add_parser("compare", help="exact-vs-asymptotic sweep, CSV/JSON rows")
    c.add_argument("--n-list", type=str, required=True, help="comma-separated degrees")
    common(c, needs_n=False)
    c.add_argument("--grid", type=str, default=None, help="'re0:re1:nre,im0:im1:nim'")
    c.add_argument("--z-list", type=str, default=None, help="semicolon-separated 're,im' points")
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    c.add_argument("--threads", type=int, default=1)

    r = sub.add_parser("regions", help="classify a point")
    common(r)
    r.add_argument("--z", type=str, required=True)

    o = sub.add_parser("ortho", help="orthogonality report")
    o.add_argument("--alpha", type=str, required=True)
    o.add_argument("--max-deg", type=int, required=True)
    o.add_argument("--kmax", type=int, required=True)
    o.add_argument("--prec", type=int, default=None)

    s = sub.add_parser("selftest", help="run the invariant suites")
    s.add_argument("--prec", type=int, default=None)

    return p


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def _cmd_eval(args) -> int:
    bits = bits_of(args.prec if args.prec else _default_prec())
    params = Params(delta=args.delta, eps=args.eps)
    zre, zim = _parse_z(args.z)
    z = to_mpc((zre, zim), bits)
    alpha = to_mpf(args.alpha, bits)
    if not alpha > 0:
        raise ConfigError("alpha must be > 0")
    out = {
        "mode": args.mode,
        "n": args.n,
        "alpha": float(alpha),
        "z_re": float(z.real),
        "z_im": float(z.imag),
    }
    if args.mode == "exact":
        if args.rescaled == "true":
            v = exact.eval_monic_rescaled(args.n, alpha, z, bits)
        else:
            v = exact.eval_f(args.n, alpha, z, bits)
        out.update(_logc_json(v, bits))
        out["dropped_term_bound"] = None
    else:
        res = asym.eval_asym(args.n, alpha, z, params, bits)
        out["region"] = res.region.tag
        out.update(_logc_json(res.value, bits))
        out["dropped_term_bound"] = _fmt_full(res.dropped_term_bound, bits)
        if res.flags:
            out["flags"] = ";".join(res.flags)
    print(json.dumps(out))
    return 0


def _record_row(rec: harness.EvalRecord, bits):
    def logc_cols(v):
        if v is None:
            return "", ""
        return _fmt_full(v.log_mod, bits), _fmt_full(v.phase, bits)

    em, ep = logc_cols(rec.log_exact)
    am, ap = logc_cols(rec.log_asym)
    flags = list(rec.flags)
    if rec.error:
        flags.append(f"error:{rec.error}")
    return [
        str(rec.n),
        _fmt_float(rec.alpha),
        _fmt_float(rec.z.real),
        _fmt_float(rec.z.imag),
        rec.region,
        em, ep, am, ap,
        "" if rec.rel_err is None else _fmt_float(rec.rel_err),
        "" if rec.dropped_term_bound is None else _fmt_float(rec.dropped_term_bound),
        ";".join(flags),
    ]


def _compare_task(task):
    # z coordinates travel as exact hex literals so worker processes see
    # the same bits the parent computed; alpha converts from the user's
    # string at full precision
    n, alpha_s, zre_hex, zim_hex, delta, eps, bits = task
    params = Params(delta=delta, eps=eps)
    alpha = to_mpf(alpha_s, bits)
    with mp.workprec(bits):
        z = mpmath.mpc(_accel.man_exp_to_mpf(*_split_hex(zre_hex)),
                       _accel.man_exp_to_mpf(*_split_hex(zim_hex)))
    rec = harness.compare_point(n, alpha, z, params, bits)
    return _record_row(rec, bits)


def _split_hex(h: str):
    if h == "0":
        return "0", 0
    neg = h.startswith("-")
    man, exp = (h[3:] if neg else h[2:]).split("p")  # strip sign and 0x
    return ("-" + man if neg else man), int(exp)


def _cmd_compare(args) -> int:
    bits = bits_of(args.prec if args.prec else _default_prec())
    if (args.grid is None) == (args.z_list is None):
        raise ConfigError("exactly one of --grid / --z-list is required")
    pts = _parse_grid(args.grid) if args.grid else _parse_z_list(args.z_list)
    try:
        n_list = [int(t) for t in args.n_list.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"--n-list expects integers, got {args.n_list!r}")
    if not n_list or any(n < 1 for n in n_list):
        raise ConfigError("--n-list must contain degrees >= 1")
    if args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    alpha = to_mpf(args.alpha, bits)
    if not alpha > 0:
        raise ConfigError("alpha must be > 0")
    Params(delta=args.delta, eps=args.eps)  # validate eps < delta up front

    with mp.workprec(bits):
        coords = [(_accel.mpf_to_hex(+mpmath.mpf(zre)), _accel.mpf_to_hex(+mpmath.mpf(zim)))
                  for (zre, zim) in pts]
    tasks = [(n, str(args.alpha), zre, zim, args.delta, args.eps, bits)
             for n in n_list for (zre, zim) in coords]
    if args.threads == 1:
        rows = [_compare_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(_compare_task, tasks, chunksize=4))

    sink = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.format == "csv":
            sink.write(CSV_HEADER + "\n")
            for row in rows:
                sink.write(",".join(row) + "\n")
        else:
            keys = CSV_HEADER.split(",")
            payload = [dict(zip(keys, row)) for row in rows]
            sink.write(json.dumps(payload, indent=1) + "\n")
    finally:
        if args.out:
            sink.close()
    return 0


def _cmd_regions(args) -> int:
    bits = bits_of(args.prec if args.prec else _default_prec())
    params = Params(delta=args.delta, eps=args.eps)
    zre, zim = _parse_z(args.z)
    z = to_mpc((zre, zim), bits)
    alpha = to_mpf(args.alpha, bits)
    res = asym.eval_asym(args.n, alpha, z, params, bits) if z != 0 else None
    if res is None:
        raise DomainError("z = 0 is excluded")
    out = {
        "n": args.n,
        "alpha": float(alpha),
        "z_re": float(z.real),
        "z_im": float(z.imag),
        "region": res.region.tag,
        "negated": res.region.negated,
        "conjugated": res.region.conjugated,
    }
    print(json.dumps(out))
    return 0


def _cmd_ortho(args) -> int:
    bits = bits_of(args.prec if args.prec else 128)
    alpha = to_mpf(args.alpha, bits)
    if not alpha > 0:
        raise ConfigError("alpha must be > 0")
    rep = harness.ortho_report(alpha, args.max_deg, args.kmax, bits)
    out = {
        "alpha": rep.alpha,
        "max_deg": rep.max_deg,
        "k_max": rep.k_max,
        "all_pass": rep.all_pass,
        "entries": [
            {
                "m": e.m, "n": e.n,
                "value": e.value,
                "tail_bound": e.tail_bound,
                "target": e.target,
                "within_bound": e.within_bound,
                "exact_zero": e.exact_zero,
            }
            for e in rep.entries
        ],
    }
    print(json.dumps(out))
    return 0 if rep.all_pass else 2


# ----------------------------------------------------------------------
# selftest
# ----------------------------------------------------------------------

def _selftest_checks(bits):
    import random

    params = Params()

    def check_constants():
        with working(bits):
            z = mpmath.mpf(10) ** 6
            from .auxfun import density_psi, phi_tilde
            l_val = 2 * (mpmath.log(z) + phi_tilde(z, bits))
            ok = abs(l_val - 1) < 1e-6
            with mp.workprec(bits):
                ok &= density_psi(3, bits) == mpmath.mpf(2) / 27
            ok &= abs(density_psi(mpmath.mpf(2), bits) - mpmath.mpf(1) / 4) < 1e-12
        return bool(ok), "normalization constant, density values"

    def check_identities():
        from .auxfun import d_triple, theta_gamma_pi
        from .specfun import airy_quartet
        rng = random.Random(101)
        worst = mpmath.mpf(0)
        with working(bits):
            for _ in range(10):
                z = mpmath.mpc(rng.uniform(-3, 3), rng.choice([1, -1]) * rng.uniform(0.1, 2))
                t = d_triple(50, 1, z, bits)
                th, _, _ = theta_gamma_pi(50, 1, z, bits)
                sgn = 1 if z.imag > 0 else -1
                d = t.d.to_complex(bits)
                dt = t.d_tilde.to_complex(bits)
                dh = t.d_hat.to_complex(bits)
                r1 = abs(dt - d * (1 - mpmath.exp(-sgn * 2j * th))) / abs(dt)
                r2 = abs(dh - d * (1 - mpmath.exp(sgn * 2j * th))) / abs(dh)
                worst = max(worst, r1, r2)
            q = airy_quartet(mpmath.mpc(1, 1), bits)
            w = mpmath.mpc(mpmath.cos(2 * mpmath.pi / 3), mpmath.sin(2 * mpmath.pi / 3))
            q1 = airy_quartet(w * mpmath.mpc(1, 1), bits)
            q2 = airy_quartet(w * w * mpmath.mpc(1, 1), bits)
            worst = max(worst, abs(q.ai + w * q1.ai + w * w * q2.ai))
            worst = max(worst, abs(q.ai * q.bi_d - q.ai_d * q.bi - 1 / mpmath.pi) * mpmath.pi)
        return worst < mpmath.mpf(10) ** -20, f"identity residual {mpmath.nstr(worst, 3)}"

    def check_symmetry():
        rng = random.Random(202)
        ok = True
        for _ in range(20):
            z = mpmath.mpc(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if abs(z) < 0.01:
                continue
            a1 = asym.eval_asym(60, 1, z, params, bits)
            a2 = asym.eval_asym(60, 1, -z, params, bits)
            a3 = asym.eval_asym(60, 1, mpmath.conj(z), params, bits)
            with mp.workprec(bits):
                pin = 60 * mpmath.pi
                ok &= a2.value.log_mod == a1.value.log_mod
                ok &= (a2.value.phase == a1.value.phase + pin or a2.value.phase == a1.value.phase - pin
                       or a1.value.phase == a2.value.phase + pin or a1.value.phase == a2.value.phase - pin)
                ok &= a3.value.log_mod == a1.value.log_mod
                ok &= a3.value.phase == a1.value.conjugate().phase
        return bool(ok), "parity/conjugation bit-for-bit"

    def check_regions():
        caps = {"A": 1e-3, "B": 5e-3, "C": 2e-2, "D": 1e-3, "origin": 5e-3}
        zs = {"A": (1, 2), "B": (1, 0.05), "C": (2.05, 0.02), "D": (4, 0.05), "origin": (0.05, 0.05)}
        bad = []
        for tag, z in zs.items():
            rec = harness.compare_point(200, 1, to_mpc(z, bits), params, bits)
            if rec.error or rec.region != tag or rec.rel_err is None or rec.rel_err > caps[tag]:
                bad.append((tag, rec.rel_err, rec.error))
        return not bad, f"per-region agreement at n=200 {bad if bad else ''}"

    def check_ortho():
        rep = harness.ortho_report(1, 2, 20000, min(bits, 128))
        return rep.all_pass, "orthogonality matrix within tail bounds"

    return [
        ("constants", check_constants),
        ("identities", check_identities),
        ("symmetry", check_symmetry),
        ("regions", check_regions),
        ("orthogonality", check_ortho),
    ]


def _cmd_selftest(args) -> int:
    bits = bits_of(args.prec if args.prec else 128)
    failures = 0
    for name, fn in _selftest_checks(bits):
        try:
            ok, detail = fn()
        except Exception as e:
            ok, detail = False, f"{type(e).__name__}: {e}"
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not ok:
            failures += 1
    print(f"selftest: {failures} failure(s)")
    return 0 if failures == 0 else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "regions":
            return _cmd_regions(args)
        if args.command == "ortho":
            return _cmd_ortho(args)
        if args.command == "selftest":
            return _cmd_selftest(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as e:
        print(json.dumps({"error": {"type": "config", "message": str(e)}}))
        return 1
    except DomainError as e:
        print(json.dumps({"error": {"type": "domain", "message": str(e)}}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
