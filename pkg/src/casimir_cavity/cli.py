"""Command-line interface: figure data as CSV, validation, unit conversion.

Subcommands: energy, force, medium, validate, convert.  Every data run
writes a CSV (comma-separated, '#'-prefixed parameter echo) plus a
RunManifest JSON sufficient to reproduce it; outputs are deterministic
for identical flags.  Exit codes: 0 success, 1 validation failure
(--strict), 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .errors import CasimirCavityError, NoCrossing
from .force import Constraint, alpha_sweep, atom_force, cross_check, \
    wall_force_fixed_position, wall_force_fixed_ratio
from .energy import energy_closed_form, energy_series
from .medium import (
    MediumSpec,
    PairSpec,
    critical_atom_number,
    empty_casimir_force,
    medium_wall_force,
    pair_wall_force_fixed_ratio,
    uniform_wall_force,
)
from .model import (
    AtomSpec,
    Boundary,
    CavitySpec,
    SeriesControl,
    bare_point,
    smeared_diamagnetic,
    to_si,
)
from .validate import run_validation

_PI_RE = re.compile(r"^([+-]?[\d.]*(?:e[+-]?\d+)?)\*?pi(?:\*([+-]?[\d.]+(?:e[+-]?\d+)?))?$")


def parse_angular(text):
    """Parse '2pi', 'pi', '2pi*3', '2*pi' or a plain float literal."""

    t = str(text).strip().lower().replace(" ", "")
    m = _PI_RE.match(t)
    if m:
        lead = m.group(1)
        a = 1.0 if lead in ("", "+") else -1.0 if lead == "-" else float(lead)
        b = float(m.group(2)) if m.group(2) else 1.0
        return a * math.pi * b
    return float(t)


def parse_grid(text, lo, hi):
    """Either a point count (uniform grid on [lo, hi]) or a comma list."""

    t = str(text).strip()
    if "," in t or "." in t or "e" in t.lower():
        vals = [float(v) for v in t.split(",") if v.strip() != ""]
        return np.asarray(vals, dtype=float)
    return np.linspace(lo, hi, int(t))


@dataclass
class RunManifest:
    """Reproducibility record written alongside every data file."""

    command: str
    parameters: dict
    outputs: list = field(default_factory=list)
    tool_version: str = __version__
    timestamp: str = ""

    def write(self, path):
        self.timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _write_csv(path, header_params, columns, rows):
    lines = [f"# casimir-cavity {__version__}"]
    for k in sorted(header_params):
        lines.append(f"# {k} = {header_params[k]}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _thread_count(args):
    env = os.environ.get("CASIMIR_CAVITY_THREADS")
    if env:
        return max(1, int(env))
    return max(1, args.threads)


def _map_ordered(fn, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _ctl_from(args):
    return SeriesControl(rel_tol=args.rel_tol,
                         abs_tol=args.abs_tol,
                         max_modes=args.max_modes)


def _model_from(args):
    if args.coupling == "bare":
        return bare_point(), 0.0
    a0 = args.a0 if args.a0 is not None else 1e-3
    return smeared_diamagnetic(alpha=args.alpha), a0


def _echo(args, **extra):
    skip = {"func"}
    d = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    d.update(extra)
    return d


def _manifest(args, name, outputs, **extra):
    if args.out in (None, "-"):
        return
    man = RunManifest(command=name,
                      parameters={k: str(v) for k, v in _echo(args, **extra).items()},
                      outputs=[args.out])
    man.write(args.out + ".manifest.json")


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_energy(args):
    cavity = CavitySpec(args.L, Boundary(args.boundary))
    model, a0 = _model_from(args)
    ctl = _ctl_from(args)
    omega = parse_angular(args.Omega)
    xs = parse_grid(args.x_grid, 0.0, args.L)
    evaluate = energy_closed_form if args.use_closed_form else energy_series

    def one(x):
        atom = AtomSpec(float(x), omega, getattr(args, "lambda"), a0)
        try:
            r = evaluate(cavity, atom, model) if args.use_closed_form \
                else energy_series(cavity, atom, model, ctl)
            return (float(x), r.value, r.error_bound, r.path)
        except CasimirCavityError as exc:
            print(f"warning: x={x:g}: {exc}", file=sys.stderr)
            return (float(x), float("nan"), float("nan"), "error")

    rows = _map_ordered(one, list(xs), _thread_count(args))
    out = args.out or "-"
    _write_csv(out, _echo(args, Omega_value=omega),
               ["x_d", "energy", "error_bound", "path"], rows)
    _manifest(args, "energy", [out], Omega_value=omega)
    return 0


_CONSTRAINTS = {
    "fixed-ratio": Constraint.FIXED_RATIO,
    "fixed-position": Constraint.FIXED_POSITION,
    "atom": Constraint.ATOM_POSITION,
}

_FORCE_FN = {
    Constraint.FIXED_RATIO: wall_force_fixed_ratio,
    Constraint.FIXED_POSITION: wall_force_fixed_position,
    Constraint.ATOM_POSITION: atom_force,
}


def cmd_force(args):
    cavity = CavitySpec(args.L, Boundary(args.boundary))
    model, a0 = _model_from(args)
    ctl = _ctl_from(args)
    omega = parse_angular(args.Omega)
    constraint = _CONSTRAINTS[args.constraint]
    lam = getattr(args, "lambda")
    extra = {}

    if args.sweep == "alpha":
        if args.coupling != "smeared":
            print("force: --sweep alpha requires --coupling smeared", file=sys.stderr)
            return 2
        alphas = parse_grid(args.alpha_grid, 0.0, 1.0)
        atom = AtomSpec(args.x, omega, lam, a0)
        sweep = alpha_sweep(cavity, atom, ctl, alphas)
        rows = [(a, r.value, r.error_bound, r.method,
                 "suspect" in r.flags) for a, r in sweep.points]
        sweep_col = "alpha"
        extra["alpha_star"] = sweep.alpha_star
        extra["alpha_bracket"] = sweep.bracket
    else:
        xs = parse_grid(args.x_grid, 0.0, args.L)

        def one(x):
            atom = AtomSpec(float(x), omega, lam, a0)
            try:
                if args.cross_check:
                    an, fd, suspect = cross_check(cavity, atom, model, constraint, ctl)
                    out = [(float(x), an.value, an.error_bound, an.method, suspect)]
                    if suspect:
                        out.append((float(x), fd.value, fd.error_bound, "fd", suspect))
                    return out
                r = _FORCE_FN[constraint](cavity, atom, model, ctl)
                return [(float(x), r.value, r.error_bound, r.method,
                         "suspect" in r.flags)]
            except CasimirCavityError as exc:
                print(f"warning: x={x:g}: {exc}", file=sys.stderr)
                return [(float(x), float("nan"), float("nan"), "error", False)]

        rows = [r for chunk in _map_ordered(one, list(xs), _thread_count(args))
                for r in chunk]
        sweep_col = "x_d"

    out = args.out or "-"
    _write_csv(out, _echo(args, Omega_value=omega, **extra),
               [sweep_col, "force", "error_bound", "method", "suspect"], rows)
    _manifest(args, "force", [out], Omega_value=omega, **extra)
    return 0


def cmd_medium(args):
    cavity = CavitySpec(args.L, Boundary(args.boundary))
    model, a0 = _model_from(args)
    ctl = _ctl_from(args)
    omega = parse_angular(args.Omega)
    lam = getattr(args, "lambda")
    constraint = _CONSTRAINTS[args.constraint]
    if constraint is Constraint.ATOM_POSITION:
        print("medium: --constraint must be a wall constraint", file=sys.stderr)
        return 2
    si = args.si
    lm = args.L_meters if args.L_meters else args.L

    def conv(v):
        return to_si(v, "force", lm) if si else v

    out = args.out or "-"
    extra = {}

    if args.pair:
        seps = np.linspace(args.L * 0.02, args.L * 0.96, int(args.symmetric_sweep))
        rows = []
        for d in seps:
            pair = PairSpec(0.5 * args.L - d / 2, 0.5 * args.L + d / 2, omega, lam)
            r = pair_wall_force_fixed_ratio(cavity, pair, ctl)
            rows.append((float(d), conv(r.value), conv(r.error_bound)))
        _write_csv(out, _echo(args, Omega_value=omega),
                   ["separation", "pair_force", "error_bound"], rows)
        _manifest(args, "medium", [out], Omega_value=omega)
        return 0

    template = AtomSpec(0.5 * args.L, omega, lam, a0)
    casimir = empty_casimir_force(args.L)

    if args.find_critical:
        try:
            scan = critical_atom_number(cavity, template, model, ctl, constraint,
                                        int(args.N_max))
            extra["N_star"] = scan.n_star
            extra["bracket"] = scan.bracket
            extra["warnings"] = scan.warnings
            table = scan.table
        except NoCrossing as exc:
            extra["no_crossing"] = str(exc)
            table = []
    else:
        n_max = int(args.N_max)
        if n_max <= 512:
            grid = list(range(0, n_max + 1))
        else:
            grid = sorted({0, 1, *(int(round(2 ** (k * math.log2(max(n_max, 2)) / 127.0)))
                                   for k in range(128)), n_max})
            grid = [g for g in grid if g <= n_max]
        if model.smeared and n_max > 4096:
            print("medium: smeared media are summed per atom; use --N-max <= 4096",
                  file=sys.stderr)
            return 2

        def one(n):
            if n == 0:
                return (0, 0.0)
            if not model.smeared:
                f = uniform_wall_force(cavity, template, model, ctl, constraint, n)
            else:
                med = MediumSpec.uniform(n, args.L, omega, lam, a0)
                f = medium_wall_force(cavity, med, model, ctl, constraint)
            return (n, f.value)

        table = _map_ordered(one, grid, _thread_count(args))

    rows = [(n, conv(f), conv(casimir), conv(f + casimir)) for n, f in table]
    _write_csv(out, _echo(args, Omega_value=omega, **{k: str(v) for k, v in extra.items()}),
               ["N", "medium_force", "empty_casimir", "total"], rows)
    _manifest(args, "medium", [out], Omega_value=omega,
              **{k: str(v) for k, v in extra.items()})
    return 0


def cmd_validate(args):
    report = run_validation(seed=args.seed, strict=args.strict, n_sets=args.sets)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out and args.out != "-":
        with open(args.out, "w") as fh:
            fh.write(text)
        _manifest(args, "validate", [args.out])
    else:
        sys.stdout.write(text)
    for c in report["checks"]:
        status = "ok  " if c["passed"] else "FAIL"
        print(f"{status} {c['name']}: residual {c['residual']:.3e} "
              f"(tol {c['tolerance']:.3e})", file=sys.stderr)
    print(f"{report['n_checks'] - report['n_failed']}/{report['n_checks']} checks passed",
          file=sys.stderr)
    if args.strict and not report["passed"]:
        return 1
    return 0


def cmd_convert(args):
    value = to_si(args.value, args.unit, args.L_meters)
    unit = "J" if args.unit == "energy" else "N"
    print(f"{value:.10e} {unit}")
    if args.out:
        _write_csv(args.out, _echo(args), ["natural", "si", "unit"],
                   [(args.value, value, unit)])
        _manifest(args, "convert", [args.out])
    return 0


# ----------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--out", help="output CSV path ('-' for stdout)")
    p.add_argument("--rel-tol", type=float, default=1e-10, dest="rel_tol")
    p.add_argument("--abs-tol", type=float, default=None, dest="abs_tol")
    p.add_argument("--max-modes", type=int, default=10**7, dest="max_modes")
    p.add_argument("--threads", type=int, default=1,
                   help="grid-point parallelism (CASIMIR_CAVITY_THREADS overrides)")


def _add_physics(p):
    p.add_argument("--boundary", choices=["dirichlet", "neumann"], default="dirichlet")
    p.add_argument("--coupling", choices=["bare", "smeared"], default="bare")
    p.add_argument("--alpha", type=float, default=1.0,
                   help="diamagnetic weight (smeared coupling)")
    p.add_argument("--L", type=float, default=1.0, help="cavity length (natural units)")
    p.add_argument("--Omega", default="2pi", help="atom gap; accepts 2pi / 2pi*3 syntax")
    p.add_argument("--lambda", type=float, default=1e-4, help="coupling strength")
    p.add_argument("--a0", type=float, default=None,
                   help="smearing radius (default 1e-3 for smeared coupling)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="casimir-cavity",
        description="Casimir-Polder energies and forces in a 1+1D cavity")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("energy", help="energy vs atom position (CSV)")
    _add_physics(p)
    p.add_argument("--x-grid", default="200", dest="x_grid",
                   help="point count or explicit comma list")
    p.add_argument("--use-closed-form", action="store_true", dest="use_closed_form")
    _add_common(p)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("force", help="forces vs position or alpha (CSV)")
    _add_physics(p)
    p.add_argument("--constraint", choices=list(_CONSTRAINTS), default="fixed-ratio")
    p.add_argument("--sweep", choices=["x", "alpha"], default="x")
    p.add_argument("--x-grid", default="200", dest="x_grid")
    p.add_argument("--x", type=float, default=0.1, help="atom position for --sweep alpha")
    p.add_argument("--alpha-grid", default="101", dest="alpha_grid")
    p.add_argument("--cross-check", action="store_true", dest="cross_check",
                   help="reconcile each row against the finite difference")
    _add_common(p)
    p.set_defaults(func=cmd_force)

    p = sub.add_parser("medium", help="N-atom medium forces, critical N, pairs (CSV)")
    _add_physics(p)
    p.add_argument("--constraint", choices=["fixed-ratio", "fixed-position"],
                   default="fixed-ratio")
    p.add_argument("--N-max", type=float, default=100, dest="N_max")
    p.add_argument("--placement", choices=["uniform"], default="uniform")
    p.add_argument("--si", action="store_true", help="emit forces in newtons")
    p.add_argument("--L-meters", type=float, default=None, dest="L_meters")
    p.add_argument("--find-critical", action="store_true", dest="find_critical")
    p.add_argument("--pair", action="store_true",
                   help="fourth-order symmetric pair sweep instead of a medium table")
    p.add_argument("--symmetric-sweep", default="25", dest="symmetric_sweep")
    _add_common(p)
    p.set_defaults(func=cmd_medium)

    p = sub.add_parser("validate", help="run the validation suite (JSON report)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--sets", type=int, default=10,
                   help="random parameter sets per finite-difference case")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("convert", help="convert natural units to SI")
    p.add_argument("--value", type=float, required=True)
    p.add_argument("--unit", choices=["energy", "force"], required=True)
    p.add_argument("--L-meters", type=float, required=True, dest="L_meters")
    _add_common(p)
    p.set_defaults(func=cmd_convert)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CasimirCavityError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
