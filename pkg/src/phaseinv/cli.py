"""Command-line interface: ``phaseinv forward|invert|assess|tune|reproduce``.

Exit status is 0 on success, 2 for bad input (arguments, files, domain
violations) and 3 when a numerical stage fails; failures print the stage.
"""

import argparse
from pathlib import Path
import sys

import numpy as np

from . import scenarios
from .bound_states import ExpWellParams, assess, bound_state_positions
from .config import MODES, InversionConfig
from .errors import DomainError, InversionError, NumericalError, ParseError
from .forward import PhaseShiftSet, RadialPotential, constant_well_phases, solve_phase_shifts
from .gelfand_levitan import reconstruct
from .io import (format_bound_states, format_curve_csv, format_phase_file, format_report, format_tune,
                 parse_phase_file)
from .tuning import TuneGrid, grid_search

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _float_list(text):
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _add_config_flags(p):
    g = p.add_argument_group("inversion")
    g.add_argument("--c", type=float, default=-1.0, help="Liouville parameter c < 0 (default -1)")
    g.add_argument("--h", type=float, default=0.0, help="boundary parameter h (default 0)")
    g.add_argument("--n-phases", type=int, default=None, help="use only the first N phases")
    g.add_argument("--mode", choices=MODES, default="auto", help="bound-state treatment (default auto)")
    g.add_argument("--bs-count", type=int, default=2, help="bound states in multi mode (default 2)")
    g.add_argument("--drop-c0", action="store_true", help="drop the n = 0 column in zero mode")
    g.add_argument("--r-min", type=float, default=None, help="inner radius of the reconstruction (default 0.01 a)")
    g.add_argument("--r0", type=float, default=0.05, help="inner end of the smoothness interval (default 0.05)")
    g.add_argument("--gl-step", type=float, default=None, help="x step of the Gel'fand-Levitan grid (default 0.02 |c|)")
    g.add_argument("--assess-q0", type=float, default=0.0, help="potential value assumed by the bound-state assessment")


def _config(args, **overrides):
    kw = dict(c=args.c, h=args.h, n_phases=args.n_phases, mode=args.mode, bs_count=args.bs_count,
              drop_c0=args.drop_c0, r_min=args.r_min, r0=args.r0, gl_step=args.gl_step, assess_q0=args.assess_q0)
    kw.update(overrides)
    return InversionConfig(**kw)


def build_parser():
    parser = argparse.ArgumentParser(prog="phaseinv", description="Potentials from fixed-energy phase shifts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forward", help="phase shifts of a model potential")
    p.add_argument("--potential", choices=("constant", "gauss", "woods-saxon"), required=True)
    p.add_argument("--depth", type=float, required=True, help="q inside (constant) or well depth (gauss, woods-saxon)")
    p.add_argument("--width", type=float, default=1.0, help="gauss: q = depth exp(-width r^2)")
    p.add_argument("--radius", type=float, default=1.0, help="woods-saxon radius")
    p.add_argument("--diffuseness", type=float, default=0.1, help="woods-saxon diffuseness")
    p.add_argument("--a", type=float, required=True, help="support radius")
    p.add_argument("--k", type=float, required=True, help="wavenumber")
    p.add_argument("--l-max", type=int, required=True, help="highest partial wave")
    p.add_argument("-o", "--output", help="phase file to write (stdout when omitted)")

    p = sub.add_parser("invert", help="reconstruct q(r) from a phase file")
    p.add_argument("phase_file")
    _add_config_flags(p)
    p.add_argument("--csv", help="write r,q here (stdout when omitted)")
    p.add_argument("--report", help="write the report here (stderr when omitted)")

    p = sub.add_parser("assess", help="bound states of the exponential-well model")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--kappa-a", type=float, help="kappa a of the model well")
    src.add_argument("--phase-file", help="take k and a from a phase file")
    p.add_argument("--c", type=float, default=-1.0)
    p.add_argument("--h", type=float, default=0.0)
    p.add_argument("--q0", type=float, default=0.0, help="kappa^2 = k^2 - q0 for phase-file input")
    p.add_argument("--weights", action="store_true", help="also compute step heights")

    p = sub.add_parser("tune", help="grid search over (c, h)")
    p.add_argument("phase_file")
    _add_config_flags(p)
    p.add_argument("--grid-c", type=_float_list, required=True, help="comma-separated c values, e.g. --grid-c=-1,-0.5")
    p.add_argument("--grid-h", type=_float_list, default=(0.0,), help="comma-separated h values")
    p.add_argument("--jobs", type=int, default=1, help="parallel cells (default 1)")

    p = sub.add_parser("reproduce", help="run a pinned scenario")
    p.add_argument("scenario", choices=sorted(scenarios.SCENARIOS))
    p.add_argument("--out-dir", help="also write <label>.csv and <label>.txt here")
    return parser


def _write_or_print(text, path, stream):
    if path:
        Path(path).write_text(text)
    else:
        stream.write(text)


def _cmd_forward(args, out, err):
    if args.potential == "constant":
        phases = constant_well_phases(args.depth, args.a, args.k, args.l_max + 1)
        phases = PhaseShiftSet(phases.k, phases.a, tuple(float(d) for d in phases.deltas))
        desc = f"constant potential q = {args.depth:g} for r < {args.a:g}"
    else:
        if args.potential == "gauss":
            pot = RadialPotential.gauss(args.depth, args.width, args.a)
            desc = f"gauss potential q = {args.depth:g} exp(-{args.width:g} r^2), r < {args.a:g}"
        else:
            pot = RadialPotential.woods_saxon(args.depth, args.radius, args.diffuseness, args.a)
            desc = f"woods-saxon potential depth {args.depth:g}, R = {args.radius:g}, d = {args.diffuseness:g}, r < {args.a:g}"
        phases = solve_phase_shifts(pot, args.k, args.l_max, ode_tol=1e-11)
    _write_or_print(format_phase_file(phases, desc), args.output, out)
    return EXIT_OK


def _cmd_invert(args, out, err):
    phases = parse_phase_file(args.phase_file)
    curve, report = reconstruct(phases, _config(args))
    _write_or_print(format_curve_csv(curve), args.csv, out)
    _write_or_print(format_report(report), args.report, err)
    return EXIT_OK


def _cmd_assess(args, out, err):
    if args.kappa_a is not None:
        if not args.c < 0:
            raise DomainError(f"c must be negative, got {args.c}")
        t = 1.0 / abs(args.c)
        p = ExpWellParams((args.kappa_a * t) ** 2, t, args.h, args.kappa_a)
        bs = bound_state_positions(p, with_weights=args.weights)
        bs = type(bs)(bs.count, bs.lambdas, bs.weights, {"kappa_a": args.kappa_a, "model": "exponential well"})
    else:
        phases = parse_phase_file(args.phase_file)
        bs = assess(phases.k, phases.a, args.c, args.h, q0=args.q0, with_weights=args.weights)
    out.write(format_bound_states(bs))
    return EXIT_OK


def _cmd_tune(args, out, err):
    phases = parse_phase_file(args.phase_file)
    grid = TuneGrid(args.grid_c, args.grid_h, r0=args.r0)
    result = grid_search(phases, grid, _config(args), n_jobs=args.jobs)
    out.write(format_tune(result))
    return EXIT_OK


def physical_summary(run, curve, r0):
    """Minimum of the physical potential V = scale * q on [r0, a]."""
    mask = curve.grid >= r0
    v = run.energy_scale * curve.values[mask]
    i = int(np.argmin(v))
    return float(v[i]), float(curve.grid[mask][i])


def _cmd_reproduce(args, out, err):
    failed = 0
    for run in scenarios.get(args.scenario):
        try:
            curve, report = reconstruct(run.phases, run.config)
        except NumericalError as exc:
            failed += 1
            out.write(f"[run]\nlabel={run.label}\nstatus=failed\nerror={exc}\n\n")
            continue
        text = format_report(report, run.label)
        v_min, r_at = physical_summary(run, curve, run.config.r0)
        extra = ["", "[physical]", f"energy_scale={run.energy_scale:.12g}",
                 f"energy_unit={run.energy_unit or 'q'}", f"length_unit={run.length_unit or 'a.u.'}",
                 f"v_min={v_min:.12g}", f"r_at_v_min={r_at:.12g}"]
        if run.exact is not None:
            mask = (curve.grid >= run.config.r0) & (curve.grid < run.phases.a)
            dev = np.max(np.abs(curve.values[mask] - run.exact(curve.grid[mask])))
            extra.append(f"max_abs_error={dev:.6e}")
        if run.expected:
            extra += ["", "[reference]"] + [f"{key}={val}" for key, val in sorted(run.expected.items())]
        out.write(text + "\n".join(extra) + "\n\n")
        if args.out_dir:
            d = Path(args.out_dir)
            d.mkdir(parents=True, exist_ok=True)
            (d / f"{run.label}.csv").write_text(format_curve_csv(curve))
            (d / f"{run.label}.txt").write_text(text + "\n".join(extra) + "\n")
    return EXIT_NUMERICAL if failed else EXIT_OK


COMMANDS = {
    "forward": _cmd_forward,
    "invert": _cmd_invert,
    "assess": _cmd_assess,
    "tune": _cmd_tune,
    "reproduce": _cmd_reproduce,
}


def run_cli(argv=None, out=None, err=None):
    """Run one command and return its exit status (never calls sys.exit)."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return COMMANDS[args.command](args, out, err)
    except (ParseError, DomainError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except NumericalError as exc:
        err.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except InversionError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_NUMERICAL
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


def main():
    sys.exit(run_cli())
