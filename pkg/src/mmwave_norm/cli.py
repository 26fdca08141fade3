"""Command-line interface.

Exit codes: 0 success, 2 configuration/usage error, 3 numeric error (incl. a
failed ``validate``), 4 I/O error.  Errors are reported on stderr as one line
``error[<code>]: <detail>``.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

from .coverage import Alignment, CoverageQuery, PdfMode, coverage
from .csvio import (
    COVERAGE_SCHEMA,
    DENSITIES_SCHEMA,
    MC_SCHEMA,
    OPT_SCHEMA,
    VALIDATE_SCHEMA,
    emit_csv,
)
from .errors import ConfigError, DomainError, NumericError, PreconditionError
from .mcsim import SimKind, branch_mirror_curve, simulate
from .netmodel import db_to_linear
from .normalize import build_los_profile, build_nlos_profiles
from .sweep import DEG, SweepAxis, SweepSpec, optimal_beamwidth, sweep
from . import config as _config

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"usage: {message}")


def _common(suppress: bool) -> argparse.ArgumentParser:
    # the subcommand copy must not overwrite flags given before the subcommand
    default = argparse.SUPPRESS if suppress else None
    common = argparse.ArgumentParser(add_help=False, argument_default=default)
    common.add_argument("--config", help="YAML run configuration (defaults are used if omitted)")
    common.add_argument("--out", help="output CSV path, '-' for stdout")
    common.add_argument("--seed", type=int, help="Monte Carlo seed (unsigned 64-bit)")
    common.add_argument("--mode", choices=[m.value for m in PdfMode], help="nearest-point density convention")
    common.add_argument("--workers", type=int, help="worker threads for trials/grid points")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mmwave-norm", description=__doc__.splitlines()[0], parents=[_common(False)])
    common = _common(True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("densities", parents=[common], help="emit the normalized step densities")

    p = sub.add_parser("coverage", parents=[common], help="analytical coverage at thresholds")
    p.add_argument("--thresholds-db", type=float, nargs="+")
    p.add_argument("--alignment", choices=[a.value for a in Alignment])

    p = sub.add_parser("mc", parents=[common], help="Monte Carlo coverage estimates")
    p.add_argument("--kind", choices=[k.value for k in SimKind])
    p.add_argument("--trials", type=int)
    p.add_argument("--thresholds-db", type=float, nargs="+")
    p.add_argument("--alignment", choices=[a.value for a in Alignment])

    p = sub.add_parser("sweep-threshold", parents=[common], help="coverage over a threshold grid")
    p.add_argument("--thresholds-db", type=float, nargs="+")
    p.add_argument("--alignments", choices=[a.value for a in Alignment], nargs="+")

    p = sub.add_parser("sweep-beamwidth", parents=[common], help="coverage over a beamwidth grid")
    p.add_argument("--beamwidths-deg", type=float, nargs="+")
    p.add_argument("--threshold-db", type=float)
    p.add_argument("--alignments", choices=[a.value for a in Alignment], nargs="+")

    p = sub.add_parser("opt-beamwidth", parents=[common], help="coverage-maximising beamwidth")
    p.add_argument("--thresholds-db", type=float, nargs="+")
    p.add_argument("--range-deg", type=float, nargs=2, metavar=("LO", "HI"))

    p = sub.add_parser("validate", parents=[common], help="branch-mirror MC vs analytic (rigorous) coverage")
    p.add_argument("--trials", type=int)
    p.add_argument("--thresholds-db", type=float, nargs="+")
    return parser


def _opt(args, name, fallback):
    value = getattr(args, name, None)
    return fallback if value is None else value


def _run_config(args) -> _config.RunConfig:
    run = _config.load_config(args.config)
    sim = run.sim
    try:
        if args.seed is not None:
            sim = replace(sim, seed=args.seed)
        if args.workers is not None:
            sim = replace(sim, workers=args.workers)
        if getattr(args, "kind", None):
            sim = replace(sim, kind=SimKind(args.kind))
        if getattr(args, "trials", None) is not None:
            sim = replace(sim, trials=args.trials)
        if getattr(args, "alignment", None):
            sim = replace(sim, alignment=Alignment(args.alignment))
    except DomainError as exc:
        raise ConfigError(str(exc), field="mc") from None
    return replace(
        run,
        sim=sim,
        mode=PdfMode(args.mode) if args.mode else run.mode,
        alignment=Alignment(args.alignment) if getattr(args, "alignment", None) else run.alignment,
        output=args.out if args.out is not None else run.output,
    )


def cmd_densities(args, run):
    net = run.network
    rows = []
    for j in (1, 2, 3, 4):
        prof = build_los_profile(net, j)
        rows += [("los", j, lo, hi, v, prof.prefactor) for lo, hi, v in prof.segments()]
    inner, outer = build_nlos_profiles(net)
    for name, prof in (("nlos_inner", inner), ("nlos_outer", outer)):
        rows += [(name, None, lo, hi, v, prof.prefactor) for lo, hi, v in prof.segments()]
    return rows, DENSITIES_SCHEMA


def _coverage_row(thr_db, res):
    return (thr_db, res.p_los, res.p_nlos_inner, res.p_nlos_outer, res.p_cov, res.method)


def cmd_coverage(args, run):
    rows = []
    for thr_db in _opt(args, "thresholds_db", run.thresholds_db):
        res = coverage(CoverageQuery(db_to_linear(thr_db), run.network, run.mode, run.alignment))
        rows.append(_coverage_row(thr_db, res))
    return rows, COVERAGE_SCHEMA


def cmd_mc(args, run):
    thr_db = list(_opt(args, "thresholds_db", run.thresholds_db))
    estimates = simulate(run.sim, [db_to_linear(t) for t in thr_db])
    rows = [
        (t, run.sim.kind.value, e.mean, e.std_error, e.trials, e.outage_trials)
        for t, e in zip(thr_db, estimates)
    ]
    return rows, MC_SCHEMA


def _workers(run):
    return run.sim.workers


def cmd_sweep_threshold(args, run):
    spec = SweepSpec(
        base=run.network,
        axis=SweepAxis.THRESHOLD_DB,
        grid=tuple(_opt(args, "thresholds_db", run.sweep_thresholds_db)),
        alignments=tuple(Alignment(a) for a in args.alignments) if args.alignments else run.sweep_alignments,
        mode=run.mode,
    )
    return [_coverage_row(r.threshold_db, r.result) for r in sweep(spec, _workers(run))], COVERAGE_SCHEMA


def cmd_sweep_beamwidth(args, run):
    spec = SweepSpec(
        base=run.network,
        axis=SweepAxis.BEAMWIDTH_DEG,
        grid=tuple(_opt(args, "beamwidths_deg", run.sweep_beamwidths_deg)),
        threshold_db=_opt(args, "threshold_db", run.sweep_threshold_db),
        alignments=tuple(Alignment(a) for a in args.alignments) if args.alignments else run.sweep_alignments,
        mode=run.mode,
    )
    rows = [(r.axis_value,) + _coverage_row(r.threshold_db, r.result) for r in sweep(spec, _workers(run))]
    return rows, ("beamwidth_deg",) + COVERAGE_SCHEMA


def cmd_opt_beamwidth(args, run):
    lo, hi = _opt(args, "range_deg", run.beamwidth_range_deg)
    rows = []
    for thr_db in _opt(args, "thresholds_db", (run.sweep_threshold_db,)):
        best = optimal_beamwidth(run.network, db_to_linear(thr_db), (lo * DEG, hi * DEG), run.mode)
        method = f"{run.mode.value}/{Alignment.WITH_ERRORS.value}"
        rows.append((thr_db, best.beamwidth / DEG, best.coverage, method, best.boundary))
    return rows, OPT_SCHEMA


def cmd_validate(args, run):
    thr_db = list(_opt(args, "thresholds_db", run.thresholds_db))
    sim = replace(run.sim, kind=SimKind.BRANCH_MIRROR)
    estimates = branch_mirror_curve(sim, [db_to_linear(t) for t in thr_db])
    rows = []
    passed = 0
    for t, est in zip(thr_db, estimates):
        analytic = coverage(CoverageQuery(db_to_linear(t), run.network, PdfMode.RIGOROUS, sim.alignment)).p_cov
        z = (est.mean - analytic) / est.std_error if est.std_error > 0 else (0.0 if est.mean == analytic else math.inf)
        ok = abs(z) <= 3.0
        passed += ok
        rows.append((t, analytic, est.mean, est.std_error, z, ok))
    args._validate_passed = passed / len(rows) >= 0.95
    return rows, VALIDATE_SCHEMA


COMMANDS = {
    "densities": cmd_densities,
    "coverage": cmd_coverage,
    "mc": cmd_mc,
    "sweep-threshold": cmd_sweep_threshold,
    "sweep-beamwidth": cmd_sweep_beamwidth,
    "opt-beamwidth": cmd_opt_beamwidth,
    "validate": cmd_validate,
}


def _fail(code, exit_code, detail):
    print(f"error[{code}]: {' '.join(str(detail).split())}", file=sys.stderr)
    return exit_code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        run = _run_config(args)
        rows, schema = COMMANDS[args.command](args, run)
        emit_csv(rows, schema, run.output)
    except (ConfigError, PreconditionError, DomainError) as exc:
        return _fail("config", EXIT_CONFIG, exc)
    except (NumericError, ArithmeticError) as exc:
        return _fail("numeric", EXIT_NUMERIC, exc)
    except OSError as exc:
        return _fail("io", EXIT_IO, exc)
    if args.command == "validate" and not args._validate_passed:
        return _fail("numeric", EXIT_NUMERIC, "fewer than 95% of thresholds agree within 3 standard errors")
    return 0


if __name__ == "__main__":
    sys.exit(main())
