"""Command-line interface: ``qmdos <command> [options]``.

Exit status: 0 success, 1 verification failure, 2 usage error.
Tables go to CSV (``,`` delimiter, ``.`` decimals, header row) or JSON.
Without ``--output`` results are written to stdout, or to
``$QMDOS_OUTPUT_DIR/<command>.<format>`` when that variable is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import mpmath

from . import __version__
from . import asymptotics as asy
from . import montecarlo as mc
from . import saddle as sd
from . import spectral as sp
from ._backend import BACKEND
from .numeric import to_decimal_str

OUTPUT_DIR_ENV = "QMDOS_OUTPUT_DIR"
TARGET_CONSTANT = 2 * mpmath.sqrt(3) / mpmath.sqrt(mpmath.pi)


class Result:
    """Tabular output plus optional extra JSON fields and a pass/fail flag."""

    def __init__(self, header, rows, extra=None, ok=True):
        self.header = header
        self.rows = rows
        self.extra = extra or {}
        self.ok = ok


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational 'p/q': {text!r}")


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _fmt(x, digits):
    if isinstance(x, Fraction):
        return to_decimal_str(x, digits)
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(x, digits)
    if isinstance(x, float):
        return repr(x)
    return x


def _json_value(x, digits):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {k: _json_value(v, digits) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v, digits) for v in x]
    return _fmt(x, digits)


# -- commands ---------------------------------------------------------------

def cmd_density(args) -> Result:
    pts = sp.grid(args.points)
    rows = [[E, sp.mu_linear(args.n, E)] for E in pts]
    return Result(["E", "mu"], rows)


def cmd_figure1(args) -> Result:
    pts = sp.grid(args.points)
    ns = (3, 6, 9)
    cols = {n: [sp.mu_linear(n, E) for E in pts] for n in ns}
    rows = [[E] + [cols[n][i] for n in ns] for i, E in enumerate(pts)]
    half = Fraction(1, 2)
    peaks = [sp.mu_linear(n, half) for n in ns]
    symmetric = all(c == c[::-1] for c in cols.values())
    h = Fraction(1, args.points - 1)
    trapz = {f"n{n}": float(h * (sum(c) - (c[0] + c[-1]) / 2)) for n, c in cols.items()}
    ok = symmetric and peaks[0] < peaks[1] < peaks[2] and all(abs(v - 1) <= 1e-3 for v in trapz.values())
    extra = {"peaks": dict(zip([f"n{n}" for n in ns], peaks)), "symmetric": symmetric, "trapezoid_integrals": trapz}
    return Result(["E", "mu_n3", "mu_n6", "mu_n9"], rows, extra, ok)


def cmd_normalize(args) -> Result:
    rows = []
    for n in range(1, args.max_n + 1):
        val = sp.integrate_mu(n)
        rows.append([n, val, val == 1])
    return Result(["n", "integral", "exact_one"], rows, ok=all(r[2] for r in rows))


def cmd_identity(args) -> Result:
    rows = []
    for n in range(1, args.max_n + 1):
        lhs, rhs = sp.discrete_difference_identity(n)
        rows.append([n, lhs, rhs, lhs == rhs])
    return Result(["n", "lhs", "rhs", "equal"], rows, ok=all(r[3] for r in rows))


def cmd_omega_series(args) -> Result:
    try:
        js = asy.valid_js(args.alpha, args.jmax, args.jstep)
    except asy.ParameterError as exc:
        raise UsageError(str(exc))
    if not js:
        raise UsageError("no valid J values; increase --jmax")
    table = asy.build_series(args.alpha, js, args.precision_digits + 10)
    profile = dict(asy.cancellation_profile(table))
    rows = [[r.J, int(args.alpha * r.J), r.omega_exact, r.omega_float, r.max_term_float, profile[r.J]]
            for r in table.rows]
    extra = {}
    if args.alpha > 2 and len(table.rows) >= 3:
        measured = asy.measure_decay_rate(table)
        predicted = sd.solve_saddle(mpmath.mpf(args.alpha.numerator) / args.alpha.denominator).predicted_rate
        extra["decay_rate"] = {"measured": measured, "saddle": predicted,
                               "relative_error": abs(measured - predicted) / predicted}
    return Result(["J", "n", "omega", "omega_float", "max_term", "cancellation_ratio"], rows, extra)


def cmd_richardson(args) -> Result:
    digits = args.precision_digits + 10
    table = asy.build_series(2, range(args.jstep, args.jmax + 1, args.jstep), digits)
    seq = asy.scaled_alpha2_sequence(table)
    if len(seq) <= args.order:
        raise UsageError(f"order {args.order} needs more than {args.order} J values")
    rows = []
    for order in range(1, args.order + 1):
        est = asy.richardson(seq, order, digits)
        rows.append([order, est, abs(est - TARGET_CONSTANT)])
    est = rows[-1][1]
    extra = {"sequence": [[J, v] for J, v in seq], "estimate": est, "target": TARGET_CONSTANT,
             "abs_error": abs(est - TARGET_CONSTANT)}
    return Result(["order", "estimate", "abs_error_vs_2sqrt3_over_sqrtpi"], rows, extra)


def cmd_saddle(args) -> Result:
    alpha = mpmath.mpf(args.alpha.numerator) / args.alpha.denominator
    try:
        res = sd.solve_saddle(alpha)
    except sd.SolverError as exc:
        print(f"qmdos: {exc}", file=sys.stderr)
        return Result(["field", "value"], [], ok=False)
    rows = [["alpha", res.alpha], ["lambda0", res.lambda0], ["f_at_saddle", res.f_at_saddle],
            ["f_second_at_saddle", res.f_second_at_saddle], ["predicted_rate", res.predicted_rate],
            ["f_prime_residual", res.f_prime_residual],
            ["prefactor_alpha2", "" if res.prefactor_alpha2 is None else res.prefactor_alpha2]]
    return Result(["field", "value"], rows)


def cmd_montecarlo(args) -> Result:
    try:
        emp = mc.build_histogram(args.n, args.samples, args.bins, args.seed)
    except mc.SamplingError as exc:
        raise UsageError(str(exc))
    report = mc.compare_density(emp, args.n, args.tolerance)
    masses = mc.exact_bin_masses(args.n, args.bins)
    heights = emp.normalized_heights
    rows = []
    for i in range(args.bins):
        rows.append([float(emp.bin_edges[i]), float(emp.bin_edges[i + 1]), int(emp.counts[i]),
                     float(heights[i]), float(masses[i] / Fraction(1, args.bins))])
    extra = {"sup_deviation": report.sup_deviation, "chi_square": report.chi_square, "dof": report.dof,
             "p_value": report.p_value, "tolerance": report.tolerance, "passed": report.passed}
    return Result(["bin_lo", "bin_hi", "count", "height", "exact_bin_average"], rows, extra, report.passed)


def _check(name, passed, residual=None, **detail):
    return {"name": name, "passed": bool(passed), "residual": residual, **detail}


def cmd_verify_all(args) -> Result:
    checks = []
    bad = [n for n in range(1, args.max_n + 1) if sp.integrate_mu(n) != 1]
    checks.append(_check("normalization", not bad, 0 if not bad else len(bad), max_n=args.max_n, failing_n=bad))

    bad = [n for n in range(1, args.max_n + 1) if len(set(sp.discrete_difference_identity(n))) != 1]
    checks.append(_check("discrete_difference_identity", not bad, 0 if not bad else len(bad), failing_n=bad))

    bad = [(n, str(E)) for n in range(1, 13) for E in (Fraction(i, 37) for i in range(38))
           if sp.mu_linear(n, E) != sp.mu_linear(n, 1 - E)]
    checks.append(_check("symmetry", not bad, len(bad), failing=bad))

    bad = [(n, str(E)) for n in range(1, 9) for E in (Fraction(i, 23) for i in range(24))
           if sp.mu_general(sp.Spectrum.linear(n), E) != sp.mu_linear(n, E)]
    checks.append(_check("general_vs_linear", not bad, len(bad), failing=bad))

    bad = []
    for alpha in (Fraction(2), Fraction(5, 2), Fraction(3), Fraction(4)):
        for J in asy.valid_js(alpha, 8):
            if asy.omega_j(alpha, J) != sp.mu_linear(int(alpha * J), 1 / alpha):
                bad.append((str(alpha), J))
    checks.append(_check("omega_mu_bridge", not bad, len(bad), failing=bad))

    with mpmath.workdps(30):
        worst = mpmath.mpf(0)
        for re_ in range(-4, 5):
            for im in range(-4, 5):
                lam = mpmath.mpc(re_ / 2, im / 2 + 0.1)
                worst = max(worst, sd.parametric_pair(lam).residual)
        checks.append(_check("parametric_residual", worst < 1e-10, worst))

    res2 = sd.solve_saddle(2)
    dev = max(abs(res2.lambda0), abs(res2.f_at_saddle), abs(res2.f_second_at_saddle + mpmath.mpf(2) / 3))
    checks.append(_check("saddle_alpha2", dev <= 1e-12, dev))
    g_dev = abs(sd.g_prefactor(0, 2, 1) + 2j / mpmath.pi)
    checks.append(_check("g_limit_alpha2", g_dev <= 1e-12, g_dev))

    est = asy.alpha2_constant(args.jmax, 4, 4)
    err = abs(est - TARGET_CONSTANT)
    checks.append(_check("richardson_constant", err <= args.richardson_tol, err, estimate=est,
                         target=TARGET_CONSTANT, reported_value="1.9544100476", tolerance=args.richardson_tol))

    ok = all(c["passed"] for c in checks)
    rows = [[c["name"], "pass" if c["passed"] else "FAIL", c["residual"]] for c in checks]
    return Result(["check", "status", "residual"], rows, {"checks": checks, "all_passed": ok}, ok)


COMMANDS = {
    "density": cmd_density,
    "figure1": cmd_figure1,
    "normalize": cmd_normalize,
    "identity": cmd_identity,
    "omega-series": cmd_omega_series,
    "richardson": cmd_richardson,
    "saddle": cmd_saddle,
    "montecarlo": cmd_montecarlo,
    "verify-all": cmd_verify_all,
}


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default=None,
                        help="output format (default csv, json for verify-all)")
    common.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    common.add_argument("--precision-digits", type=_positive_int, default=30,
                        help="significant digits when rendering values")

    parser = argparse.ArgumentParser(prog="qmdos", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", parents=[common], help="density on a uniform grid")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--points", type=_positive_int, default=101)

    p = sub.add_parser("figure1", parents=[common], help="n = 3, 6, 9 density curves")
    p.add_argument("--points", type=_positive_int, default=501)

    for name, default in (("normalize", 50), ("identity", 120)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--max-n", type=_positive_int, default=default)

    p = sub.add_parser("omega-series", parents=[common], help="exact omega_J(alpha) table")
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--jmax", type=_positive_int, default=60)
    p.add_argument("--jstep", type=_positive_int, default=None)

    p = sub.add_parser("richardson", parents=[common], help="extrapolate omega_J(2)/sqrt(J)")
    p.add_argument("--jmax", type=_positive_int, default=64)
    p.add_argument("--jstep", type=_positive_int, default=4)
    p.add_argument("--order", type=_positive_int, default=4)

    p = sub.add_parser("saddle", parents=[common], help="saddle point of the phase")
    p.add_argument("--alpha", type=_rational, required=True)

    p = sub.add_parser("montecarlo", parents=[common], help="sampled vs exact density")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--samples", type=_positive_int, default=1_000_000)
    p.add_argument("--bins", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tolerance", type=_positive_float, default=0.05)

    p = sub.add_parser("verify-all", parents=[common], help="run every identity check")
    p.add_argument("--max-n", type=_positive_int, default=100)
    p.add_argument("--jmax", type=_positive_int, default=64)
    p.add_argument("--richardson-tol", type=_positive_float, default=1e-6)
    return parser


def render(result: Result, args, fmt: str) -> str:
    digits = args.precision_digits
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(result.header)
        for row in result.rows:
            w.writerow([_fmt(v, digits) for v in row])
        return buf.getvalue()
    config = {k: (str(v) if isinstance(v, Fraction) else v) for k, v in vars(args).items()}
    doc = {
        "config": config,
        "backend": BACKEND,
        "ok": result.ok,
        "columns": result.header,
        "rows": [[_json_value(v, digits) for v in row] for row in result.rows],
    }
    doc.update(_json_value(result.extra, digits))
    return json.dumps(doc, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "alpha", None) is not None and args.alpha < 2:
        parser.error("--alpha must be >= 2")
    if getattr(args, "points", None) is not None and args.points < 2:
        parser.error("--points must be >= 2")
    fmt = args.format or ("json" if args.command == "verify-all" else "csv")
    try:
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    text = render(result, args, fmt)
    out = args.output
    if out is None and os.environ.get(OUTPUT_DIR_ENV):
        out = os.path.join(os.environ[OUTPUT_DIR_ENV], f"{args.command}.{fmt}")
    try:
        if out is None:
            sys.stdout.write(text)
        else:
            os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"qmdos: cannot write {out}: {exc}", file=sys.stderr)
        return 1
    if not result.ok:
        failing = [r[0] for r in result.rows if len(r) > 1 and r[1] == "FAIL"]
        if failing:
            print("qmdos: failed checks: " + ", ".join(map(str, failing)), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
