"""Command-line front end.

Exit status: 0 on success, 1 when a check fails, 2 on usage errors.
Data goes to standard output or ``--out``; diagnostics go to standard error.
"""
import argparse
import csv
import io
import sys
from math import sqrt

import numpy as np

from . import channel, cloner, measures, verify
from ._backend import backend_name
from .cloner import format_coefficient
from .linalg import projector

ALPHA_MAX = 1.0 / sqrt(2.0)
EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2

CSV_HEADER = measures.MeasureReport.FIELDS
CHANNEL_CHECKS = ("kraus", "dilation", "covariance", "twirl")


class UsageError(Exception):
    pass


def _err(msg):
    print("entclone: " + msg, file=sys.stderr)


def _canonical_alpha(value: float, name: str = "alpha") -> float:
    try:
        return cloner.EntanglementClass(value).alpha
    except ValueError:
        raise UsageError("%s=%s is outside the canonical range [0, 1/sqrt(2)]; "
                         "fold it with alpha -> sqrt(1 - alpha^2)" % (name, value)) from None


def format_number(x: float) -> str:
    s = "%.12g" % x
    return "0" if s == "-0" else s


def sweep_rows(alpha_min: float, alpha_max: float, steps: int):
    for a in np.linspace(alpha_min, alpha_max, steps):
        yield measures.measure_report(min(float(a), ALPHA_MAX))


def write_sweep(stream, alpha_min, alpha_max, steps):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in sweep_rows(alpha_min, alpha_max, steps):
        writer.writerow([format_number(v) for v in rec.as_row()])


def _open_out(path):
    if path in (None, "-"):
        return None
    try:
        return open(path, "w", newline="", encoding="ascii")
    except OSError as exc:
        raise UsageError("cannot write %s: %s" % (path, exc.strerror)) from None


def cmd_sweep(args) -> int:
    lo = _canonical_alpha(args.alpha_min, "alpha-min")
    hi = _canonical_alpha(args.alpha_max, "alpha-max")
    if not lo < hi:
        raise UsageError("need alpha-min < alpha-max")
    if args.steps < 2:
        raise UsageError("steps must be at least 2")
    buf = io.StringIO()
    write_sweep(buf, lo, hi, args.steps)
    fh = _open_out(args.out)
    if fh is None:
        sys.stdout.write(buf.getvalue())
    else:
        with fh:
            fh.write(buf.getvalue())
        _err("wrote %d rows to %s" % (args.steps, args.out))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.steps < 2:
        raise UsageError("steps must be at least 2")
    checks = verify.run_checks(tolerance=args.tolerance, seed=args.seed, steps=args.steps,
                               samples=args.samples)
    print(verify.format_report(checks))
    _err("backend: %s" % backend_name())
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK


def params_report(alpha: float) -> str:
    p = cloner.optimal_params(alpha)
    lines = ["alpha = %s" % format_coefficient(alpha)]
    lines += ["A%d = %s" % (n, format_coefficient(p[n])) for n in range(1, cloner.N_PARAMS + 1)]
    lines.append("v = %s" % format_coefficient(cloner.v_parameter(alpha)))
    lines.append("F_max = %s" % format_coefficient(cloner.f_max(alpha)))
    for name, ok, margin in cloner.check_inequalities(alpha, p):
        lines.append("margin %s = %.6e%s" % (name, margin, "" if ok else "  VIOLATED"))
    return "\n".join(lines)


def cmd_params(args) -> int:
    if args.alpha is None:
        raise UsageError("params needs --alpha")
    print(params_report(_canonical_alpha(args.alpha)))
    return EXIT_OK


def cmd_channel(args) -> int:
    if args.alpha is None:
        raise UsageError("channel needs --alpha")
    if args.samples < 1:
        raise UsageError("samples must be at least 1")
    a = _canonical_alpha(args.alpha)
    rng = np.random.default_rng(args.seed)
    psi = projector(cloner.schmidt_state(a))
    results = []
    if args.check == "kraus":
        ks = channel.kraus_set(a)
        results.append(("completeness", ks.completeness_residual(), 1e-12))
        out = channel.apply_channel(ks, psi)
        results.append(("fidelity_vs_f_max", abs(cloner.fidelity_direct(
            cloner.OutputState(out, a, cloner.optimal_params(a))) - cloner.f_max(a)), 1e-10))
    elif args.check == "dilation":
        d = channel.dilation(a)
        ks = channel.kraus_set(a)
        results.append(("isometry", d.isometry_residual(), 1e-10))
        results.append(("unitarity", d.unitarity_residual(), 1e-9))
        worst = 0.0
        for _ in range(args.samples):
            x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            r = x @ x.conj().T
            r /= np.trace(r).real
            worst = max(worst, np.linalg.norm(d.measure_and_discard(r) - channel.apply_channel(ks, r)))
        results.append(("equivalence", worst, 1e-10))
    elif args.check == "covariance":
        cmap = channel.channel_map(a)
        worst = max(channel.covariance_defect(a, *channel.haar_su2(rng, 2), channel=cmap)
                    for _ in range(args.samples))
        results.append(("max_defect", worst, 1e-10))
    else:
        ks = channel.kraus_set(a)
        est = channel.twirl(channel.channel_map(a), args.samples, psi, rng=rng)
        results.append(("twirl_vs_channel", np.linalg.norm(est - channel.apply_channel(ks, psi)),
                        5.0 / sqrt(args.samples)))
    ok = True
    print("alpha = %s  check = %s  samples = %d  seed = %d"
          % (format_coefficient(a), args.check, args.samples, args.seed))
    for name, value, limit in results:
        passed = value <= limit
        ok &= passed
        print("%-18s %.6e  (limit %.1e)  %s" % (name, value, limit, "PASS" if passed else "FAIL"))
    return EXIT_OK if ok else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entclone",
                                     description="Optimal covariant copying of entangled qubit pairs.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=1e-10)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default="-", help="output file, '-' for stdout")

    p = sub.add_parser("sweep", parents=[common], help="CSV of all quantities over an alpha grid")
    p.add_argument("--alpha-min", type=float, default=0.0)
    p.add_argument("--alpha-max", type=float, default=ALPHA_MAX)
    p.add_argument("--steps", type=int, default=101)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="run the self-check suite")
    p.add_argument("--steps", type=int, default=11, help="alpha grid size")
    p.add_argument("--samples", type=int, default=20, help="Haar samples per alpha")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("params", parents=[common], help="optimal coefficients at one alpha")
    p.add_argument("--alpha", type=float)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("channel", parents=[common], help="realisation checks at one alpha")
    p.add_argument("--alpha", type=float)
    p.add_argument("--check", choices=CHANNEL_CHECKS, default="kraus")
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_channel)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        _err(str(exc))
        return EXIT_USAGE
