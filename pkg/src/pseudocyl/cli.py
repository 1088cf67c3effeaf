"""Command-line interface.

Every subcommand prints a deterministic CSV table (default) or a JSON
document to stdout, or to ``--out FILE`` when given; repeated runs with the
same arguments produce byte-identical output. Exit codes: 0 success,
1 failed self-checks (``verify``), 2 invalid arguments or parameters,
3 a quadrature could not certify the requested tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from pseudocyl import census, curvature, efcore, ellip
from pseudocyl import verify as verify_mod
from pseudocyl.period import (
    NonConvergenceError,
    monotonicity_report,
    period,
    period_derivative,
    period_u,
)

__all__ = ["build_parser", "execute", "main"]

_FLOAT_FMT = "%.17g"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _FLOAT_FMT % value
    return str(value)


def _write_csv(sink, headers, rows) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(headers)
    for row in rows:
        writer.writerow([_cell(v) for v in row])


def _finite_or_none(value):
    value = float(value)
    return value if math.isfinite(value) else None


def _write_json(sink, payload) -> None:
    sink.write(json.dumps(payload, indent=2, sort_keys=True,
                          allow_nan=False))
    sink.write("\n")


def _kind(args) -> efcore.SystemKind:
    return efcore.SystemKind(efcore.Family(args.family), args.n)


def _branch_dict(br: census.SolutionBranch) -> dict:
    return {
        "j": int(br.j),
        "c": float(br.c),
        "fundamental_period": float(br.fundamental_period),
        "resolved": bool(br.resolved),
        "period_residual": float(br.period_residual),
    }


_BRANCH_HEADERS = ["j", "c", "fundamental_period", "resolved",
                   "period_residual"]


def _branch_row(br: census.SolutionBranch) -> list:
    return [int(br.j), float(br.c), float(br.fundamental_period),
            bool(br.resolved), float(br.period_residual)]


# ------------------------------------------------------------- handlers

def _cmd_count(args, sink) -> int:
    k = census.count_metrics(args.n, args.T)
    if args.format == "json":
        _write_json(sink, {"n": args.n, "T": args.T, "count": k})
    else:
        _write_csv(sink, ["n", "T", "count"], [[args.n, args.T, k]])
    return 0


def _cmd_branches(args, sink) -> int:
    branches = census.solve_branches(args.n, args.T)
    if args.format == "json":
        _write_json(sink, {
            "n": args.n,
            "T": args.T,
            "count": len(branches),
            "branches": [_branch_dict(br) for br in branches],
        })
    else:
        _write_csv(sink, _BRANCH_HEADERS,
                   [_branch_row(br) for br in branches])
    return 0


def _cmd_period(args, sink) -> int:
    kind = _kind(args)
    if args.grid is not None:
        report = monotonicity_report(kind, args.grid)
        if args.format == "json":
            _write_json(sink, {
                "family": kind.family.value,
                "n": args.n,
                "grid": [[float(c), float(t), float(tp)]
                         for c, t, tp in report.grid],
                "strictly_increasing": report.strictly_increasing,
                "min_T_prime": float(report.min_T_prime),
                "meta": {"time": "normalized"},
            })
        else:
            _write_csv(sink, ["c", "T", "Tprime"], report.grid)
        return 0
    period_kwargs = {} if args.tol is None else {"rel_tol": args.tol}
    t_value = period(kind, args.c, **period_kwargs)
    tp_value = (math.nan if args.c == 0.0 else
                period_derivative(kind, args.c, **period_kwargs))
    if args.format == "json":
        _write_json(sink, {
            "family": kind.family.value,
            "n": args.n,
            "c": args.c,
            "T": float(t_value),
            "Tprime": _finite_or_none(tp_value),
            "meta": {"time": "normalized",
                     "rel_tol": args.tol},
        })
    else:
        _write_csv(sink, ["c", "T", "Tprime"], [[args.c, t_value, tp_value]])
    return 0


_DERD_HEADERS = ["j", "status", "c", "fundamental_period", "period_residual",
                 "target_period", "attainable_limit", "note"]


def _cmd_derdzinski(args, sink) -> int:
    cen = census.derdzinski_census(args.n, args.C, args.R, args.T)
    if args.format == "json":
        _write_json(sink, {
            "n": args.n,
            "C": args.C,
            "R": args.R,
            "T": args.T,
            "k": cen.k,
            "alpha_D": float(cen.normalization.alpha_D),
            "beta_D": float(cen.normalization.beta_D),
            "branches": [_branch_dict(br) for br in cen.branches],
            "unresolved": [{
                "j": int(u.j),
                "target_period": float(u.target_period),
                "attainable_limit": float(u.attainable_limit),
                "note": u.note,
            } for u in cen.unresolved],
        })
    else:
        rows = [[int(br.j), "branch", float(br.c),
                 float(br.fundamental_period), float(br.period_residual),
                 None, None, None]
                for br in cen.branches]
        rows += [[int(u.j), "unresolved", None, None, None,
                  float(u.target_period), float(u.attainable_limit), u.note]
                 for u in cen.unresolved]
        rows.sort(key=lambda row: row[0])
        _write_csv(sink, _DERD_HEADERS, rows)
    return 0


def _cmd_closed_form(args, sink) -> int:
    form = ellip.closed_form(args.n, args.c)
    if args.grid is not None:
        if args.grid < 2:
            raise ValueError(
                f"--grid must be an integer >= 2, got {args.grid!r}")
        span = period_u(
            efcore.SystemKind.emden_fowler(args.n), args.c)
        samples = [
            (i * span / args.grid,
             ellip.evaluate_closed_form(form, i * span / args.grid))
            for i in range(args.grid + 1)]
    else:
        samples = None
    if args.format == "json":
        payload = {
            "variant": form.variant,
            "n": form.n,
            "c": form.c,
            "cbar": form.cbar,
            "modulus": form.modulus,
            "scale": form.scale,
            "time_scale": form.time_scale,
            "g2": form.g2,
            "g3": form.g3,
            "offset": form.offset,
        }
        if samples is not None:
            payload["samples"] = [[float(r), float(u)] for r, u in samples]
        _write_json(sink, payload)
    elif samples is not None:
        _write_csv(sink, ["r", "u"], samples)
    else:
        _write_csv(
            sink,
            ["variant", "n", "c", "cbar", "modulus", "scale", "time_scale",
             "g2", "g3", "offset"],
            [[form.variant, form.n, form.c, form.cbar, form.modulus,
              form.scale, form.time_scale, form.g2, form.g3, form.offset]])
    return 0


def _cmd_curvature(args, sink) -> int:
    kind = efcore.SystemKind.emden_fowler(args.n)
    orbit = efcore.integrate_orbit(kind, args.c, periods=args.j,
                                   steps_per_period=args.grid)
    report = curvature.nonparallel_witness(
        args.n, efcore.denormalize(args.n, orbit))
    if args.format == "json":
        _write_json(sink, {
            "n": args.n,
            "c": args.c,
            "periods": args.j,
            "max_witness": float(report.max_witness),
            "pohozaev": float(report.pohozaev),
            "yamabe_J": float(report.yamabe_J),
            "profile": [[t, v] for t, v in report.witness_profile],
            "meta": {"sign_note": curvature.SIGN_NOTE},
        })
    else:
        _write_csv(sink, ["t", "D0R00"], report.witness_profile)
    return 0


def _cmd_pohozaev(args, sink) -> int:
    value = curvature.pohozaev(args.n, args.c)
    if args.format == "json":
        _write_json(sink, {"n": args.n, "c": args.c, "pohozaev": value})
    else:
        _write_csv(sink, ["n", "c", "pohozaev"], [[args.n, args.c, value]])
    return 0


def _cmd_constants(args, sink) -> int:
    kind = _kind(args)
    cons = efcore.structural_constants(kind)
    circle = cons.T1 if args.T is None else args.T
    ref = curvature.reference_constants(args.n, circle)
    record = {
        "n": args.n,
        "family": kind.family.value,
        "alpha": cons.alpha,
        "beta": cons.beta,
        "b0": cons.b0,
        "c_max": cons.c_max,
        "T1": cons.T1,
        "T": circle,
        "omega_nm1": ref.omega_nm1,
        "omega_n": ref.omega_n,
        "J_trivial": ref.J_trivial,
        "mu_sphere": ref.mu_sphere,
        "K2": ref.K2,
        "hv_bound": ref.hv_bound,
    }
    if args.format == "json":
        _write_json(sink, record)
    else:
        headers = list(record)
        _write_csv(sink, headers, [[record[h] for h in headers]])
    return 0


def _cmd_bounds(args, sink) -> int:
    eb = ellip.estimate_bounds(args.n, args.c)
    if args.format == "json":
        _write_json(sink, {
            "n": eb.n,
            "c": eb.c,
            "C_n": eb.C_n,
            "C_n_prime": eb.C_n_prime,
            "T": _finite_or_none(eb.T),
            "homoclinic": bool(math.isinf(eb.T)),
        })
    else:
        _write_csv(sink, ["n", "c", "C_n", "C_n_prime", "T"],
                   [[eb.n, eb.c, eb.C_n, eb.C_n_prime, eb.T]])
    return 0


def _cmd_verify(args, sink) -> int:
    results = verify_mod.run_checks(args.modules or None)
    all_passed = all(r.passed for r in results)
    if args.format == "json":
        _write_json(sink, {
            "passed": all_passed,
            "results": [{
                "module": r.module,
                "name": r.name,
                "passed": r.passed,
                "measured": _finite_or_none(r.measured),
                "tolerance": r.tolerance,
                "note": r.note,
            } for r in results],
        })
    else:
        for r in results:
            verdict = "PASS" if r.passed else "FAIL"
            line = (f"{r.module}.{r.name}: {verdict} "
                    f"measured={r.measured:.6e} tol={r.tolerance:.6e}")
            if r.note:
                line += f" ({r.note})"
            sink.write(line + "\n")
        done = sum(1 for r in results if r.passed)
        sink.write(f"{done}/{len(results)} checks passed\n")
    return 0 if all_passed else 1


# --------------------------------------------------------------- parser

def _add_output(p, choices=("csv", "json"), default="csv"):
    p.add_argument("--format", choices=list(choices), default=default,
                   help=f"output format (default: {default})")
    p.add_argument("--out", metavar="FILE", default=None,
                   help="write the output to FILE instead of stdout")


def _add_family(p):
    p.add_argument("--family",
                   choices=[f.value for f in efcore.Family],
                   default=efcore.Family.EMDEN_FOWLER.value,
                   help="dynamical family (default: emden_fowler)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudocyl",
        description="Periodic constant-scalar-curvature metrics on the "
                    "cylinder: censuses, period functions, closed forms, "
                    "and curvature diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="number of metrics on a circle length")
    p.add_argument("--n", type=int, required=True, help="cylinder dimension")
    p.add_argument("--T", type=float, required=True, help="circle length")
    _add_output(p)
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("branches", help="solve every branch on a circle")
    p.add_argument("--n", type=int, required=True, help="cylinder dimension")
    p.add_argument("--T", type=float, required=True, help="circle length")
    _add_output(p)
    p.set_defaults(handler=_cmd_branches)

    p = sub.add_parser("period",
                       help="period T(c) and derivative T'(c), or a scan")
    p.add_argument("--n", type=int, required=True, help="cylinder dimension")
    p.add_argument("--c", type=float, default=None,
                   help="orbit energy (0 gives the small-oscillation limit)")
    p.add_argument("--grid", type=int, default=None, metavar="K",
                   help="scan a K-point interior energy grid instead")
    p.add_argument("--tol", type=float, default=None,
                   help="relative quadrature tolerance for a single energy")
    _add_family(p)
    _add_output(p)
    p.set_defaults(handler=_cmd_period)

    p = sub.add_parser("derdzinski", help="warped-product census")
    p.add_argument("--n", type=int, required=True, help="fiber dimension")
    p.add_argument("--C", type=float, required=True,
                   help="separation constant")
    p.add_argument("--R", type=float, required=True,
                   help="Einstein-factor scalar curvature")
    p.add_argument("--T", type=float, required=True, help="circle length")
    _add_output(p)
    p.set_defaults(handler=_cmd_derdzinski)

    p = sub.add_parser("closed-form",
                       help="elliptic closed form for n in {3, 4, 6}")
    p.add_argument("--n", type=int, required=True, help="cylinder dimension")
    p.add_argument("--c", type=float, required=True, help="orbit energy")
    p.add_argument("--grid", type=int, default=None, metavar="K",
                   help="also sample K+1 profile points over one period")
    _add_output(p)
    p.set_defaults(handler=_cmd_closed_form)

    p = sub.add_parser("curvature",
                       help="non-parallelism witness along an orbit")
    p.add_argument("--n", type=int, required=True, help="cylinder dimension")
    p.add_argument("--c", type=float, required=True, help="orbit energy")
    p.add_argument("--j", type=int, default=1,
                   help="number of fundamental periods (default: 1)")
    p.add_argument("--grid", type=int, default=2000, metavar="STEPS",
                   help="integration steps per period (default: 2000)")
    _add_output(p)
    p.set_defaults(handler=_cmd_curvature)

    p = sub.add_parser("pohozaev", help="balancing invariant at energy c")
    p.add_argument("--n", type=int, required=True, help="cylinder dimension")
    p.add_argument("--c", type=float, required=True, help="orbit energy")
    _add_output(p)
    p.set_defaults(handler=_cmd_pohozaev)

    p = sub.add_parser("constants",
                       help="structural and reference constants")
    p.add_argument("--n", type=int, required=True, help="cylinder dimension")
    p.add_argument("--T", type=float, default=None,
                   help="circle length (default: first bifurcation length)")
    _add_family(p)
    _add_output(p)
    p.set_defaults(handler=_cmd_constants)

    p = sub.add_parser("bounds", help="amplitude and gradient bounds")
    p.add_argument("--n", type=int, required=True, help="cylinder dimension")
    p.add_argument("--c", type=float, required=True, help="orbit energy")
    _add_output(p)
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser("verify", help="run the self-check suite")
    p.add_argument("modules", nargs="*",
                   help="restrict to these module groups")
    _add_output(p, choices=("text", "json"), default="text")
    p.set_defaults(handler=_cmd_verify)

    return parser


def _validate(args) -> None:
    if args.command == "period":
        if args.grid is None and args.c is None:
            raise ValueError("period requires --c ENERGY or --grid K")
        if args.grid is not None and args.c is not None:
            raise ValueError("--c and --grid are mutually exclusive")
        if args.tol is not None and args.grid is not None:
            raise ValueError("--tol applies to single-energy mode only")
    if args.command == "curvature" and args.j < 1:
        raise ValueError(f"--j must be a positive integer, got {args.j!r}")


def execute(argv, sink) -> int:
    """Run one command, writing output to ``sink``; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    buffer = io.StringIO() if args.out else None
    target = buffer if buffer is not None else sink
    try:
        _validate(args)
        code = args.handler(args, target)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if buffer is not None:
        with open(args.out, "w", newline="") as fh:
            fh.write(buffer.getvalue())
    return code


def main(argv=None) -> int:
    try:
        return execute(sys.argv[1:] if argv is None else argv, sys.stdout)
    except BrokenPipeError:
        # Downstream consumer (e.g. head) closed the pipe; exit quietly with
        # the conventional SIGPIPE status instead of a traceback.
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 141


if __name__ == "__main__":
    raise SystemExit(main())
