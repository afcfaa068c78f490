"""Command-line front end.

Exit codes: 0 success, 1 missing or unreadable input, 2 solver
non-convergence, 3 inconsistent inputs (e.g. data-hash mismatch),
4 verification failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import io as bio

EXIT_OK, EXIT_MISSING, EXIT_NONCONVERGED, EXIT_INCONSISTENT, EXIT_FAILED = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _need_file(path, what):
    if path is None:
        raise CliError(f"missing required {what}", EXIT_MISSING)
    if not Path(path).is_file():
        raise CliError(f"{what} not found: {path}", EXIT_MISSING)
    return path


def _floats_list(text):
    if text is None or text == "":
        return []
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]


def _bool(text):
    if isinstance(text, bool):
        return text
    return str(text).strip().lower() in ("1", "true", "yes", "on")


# ---------------------------------------------------------------- commands

def cmd_scatter(a):
    from .scattering import VolterraError, reflection_coefficients

    path = _need_file(a.input, "input file")
    data = bio.read_initial_csv(path)
    if a.xmax is not None:
        keep = np.abs(data.x) <= a.xmax + 1e-12
        data = type(data)(data.x[keep], data.u0[keep], data.v0[keep], data.decay_tail)
    try:
        table = reflection_coefficients(data, n_theta=a.ngrid, exclusion=a.exclusion, tol=a.tol,
                                        method=a.method)
    except VolterraError as exc:
        raise CliError(f"scattering solve failed: {exc}", EXIT_NONCONVERGED)
    meta = {"data_hash": bio.file_hash(path), "tol": bio.fmt(a.tol), "tool_version": __version__}
    bio.write_reflection_csv(a.out, table, meta)
    n_bad = int(np.count_nonzero(~table.converged & table.valid))
    if n_bad:
        print(f"{n_bad} samples did not reach tol={a.tol}", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_verify(a):
    from .scattering import verify_identities

    table = bio.read_reflection_csv(_need_file(a.r, "reflection file"))
    report = verify_identities(table, tol=a.tol, tol_ineq=a.tol_ineq)
    bio.write_json(a.report, report)
    return EXIT_OK if all(r["pass"] for r in report) else EXIT_FAILED


def cmd_asymptote(a):
    from .asymptotics import AsymptoteConfig, as_circle, u_asymptotic
    from .painleve import solve_hastings_mcleod

    table = bio.read_reflection_csv(_need_file(a.r, "reflection file"))
    if a.hm is not None:
        hm = bio.read_hm_csv(_need_file(a.hm, "Hastings-McLeod file"))
    else:
        hm = solve_hastings_mcleod()
    if a.t is None or a.xmin is None or a.xmax is None or a.dx is None:
        raise CliError("asymptote needs --t, --xmin, --xmax and --dx", EXIT_MISSING)
    cfg = AsymptoteConfig(M=a.M, t_min=a.t_min, transition_width=a.transition_width)
    cd = as_circle(table)
    n = int(math.floor((a.xmax - a.xmin) / a.dx + 1e-9)) + 1
    rows = []
    for t in _floats_list(a.t):
        for j in range(n):
            x = a.xmin + j * a.dx
            v = u_asymptotic(cd, hm, x, t, cfg)
            rows.append((x, t, v.u, v.sector, v.extrapolated))
    meta = {"data_hash": table.meta.get("data_hash", "unknown"), "M": bio.fmt(cfg.M),
            "transition_width": bio.fmt(cfg.transition_width), "dx": bio.fmt(a.dx)}
    bio.write_asymptote_csv(a.out, rows, meta)
    return EXIT_OK


def sim_config_from(values):
    from .simulator import Damping, SimConfig

    d = Damping()
    damping = Damping(kappa_c=float(values.get("kappa_c", d.kappa_c)), p=float(values.get("p", d.p)),
                      gamma=float(values.get("gamma", d.gamma)),
                      enabled=_bool(values.get("damping", d.enabled)))
    c = SimConfig()
    return SimConfig(L=float(values.get("L", c.L)), N=int(values.get("N", c.N)),
                     dt=float(values.get("dt", c.dt)), damping=damping,
                     dealias=float(values.get("dealias", c.dealias)),
                     t_end=float(values.get("t_end", c.t_end)),
                     snapshot_times=tuple(_floats_list(values.get("snapshot_times", ""))),
                     edge_guard=float(values.get("edge_guard", c.edge_guard)))


def initial_fields_on_grid(data, x):
    """Cubic interpolation of (u0, v0) onto the simulation grid, zero outside the data."""
    from scipy.interpolate import CubicSpline

    ends = max(abs(data.v0[0]), abs(data.v0[-1]))
    if ends > 1e-8 * max(1.0, float(np.max(np.abs(data.v0)))):
        raise ValueError("v0 does not vanish at both ends: u1 has nonzero integral and the "
                         "mass of u would grow linearly in t")
    inside = (x >= data.x[0]) & (x <= data.x[-1])
    u = np.zeros_like(x)
    v = np.zeros_like(x)
    u[inside] = CubicSpline(data.x, data.u0)(x[inside])
    v[inside] = CubicSpline(data.x, data.v0)(x[inside])
    return u, v


def cmd_simulate(a):
    from .simulator import InstabilityError, Simulator, WrapAroundError, run

    values = bio.read_config(_need_file(a.config, "config file")) if a.config else {}
    cfg = sim_config_from(values)
    src = values.get("input")
    if src is None:
        raise CliError("simulation config needs an 'input' initial-data CSV", EXIT_MISSING)
    src = str((Path(a.config).parent / src) if not Path(src).is_absolute() else Path(src))
    data = bio.read_initial_csv(_need_file(src, "initial data file"))
    u0, v0 = initial_fields_on_grid(data, cfg.x)
    sim = Simulator.from_fields(cfg, u0, v0)
    try:
        snaps = run(sim)
    except (InstabilityError, WrapAroundError) as exc:
        raise CliError(str(exc), EXIT_NONCONVERGED)
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    h = bio.file_hash(src)
    meta = {"data_hash": h, "L": bio.fmt(cfg.L), "N": cfg.N, "dt": bio.fmt(cfg.dt),
            "kappa_c": bio.fmt(cfg.damping.kappa_c), "p": bio.fmt(cfg.damping.p),
            "gamma": bio.fmt(cfg.damping.gamma), "damping": cfg.damping.enabled,
            "dealias": bio.fmt(cfg.dealias)}
    names = []
    for s in snaps:
        name = f"snapshot_t{s.t:.6f}.csv"
        bio.write_snapshot_csv(out / name, s, meta)
        names.append(name)
    bio.write_json(out / "simulation.json", {"config": meta, "snapshots": names,
                                             "mass_final": sim.mass(), "steps": sim.steps})
    return EXIT_OK


def load_snapshots(directory):
    d = Path(directory)
    if not d.is_dir():
        raise CliError(f"simulation directory not found: {directory}", EXIT_MISSING)
    snaps, hashes = [], set()
    for p in sorted(d.glob("snapshot_t*.csv")):
        s, meta = bio.read_snapshot_csv(p)
        snaps.append(s)
        hashes.add(meta.get("data_hash"))
    if not snaps:
        raise CliError(f"no snapshot files in {directory}", EXIT_MISSING)
    if len(hashes) > 1:
        raise CliError("snapshots come from different initial data", EXIT_INCONSISTENT)
    return snaps, hashes.pop()


def cmd_compare(a):
    from .compare import HashMismatch, Windows, compare

    snaps, sim_hash = load_snapshots(a.sim)
    parts = [bio.read_asymptote_csv(_need_file(f, "asymptote file")) for f in a.asym]
    hashes = {p["meta"].get("data_hash") for p in parts}
    if len(hashes) > 1:
        raise CliError("asymptote files come from different initial data", EXIT_INCONSISTENT)
    asym = {k: np.concatenate([p[k] for p in parts]) for k in ("x", "t", "u", "sector", "extrapolated")}
    w = Windows()
    w = Windows(I=tuple(_floats_list(a.window_I) or w.I), II=tuple(_floats_list(a.window_II) or w.II),
                IV=tuple(_floats_list(a.window_IV) or w.IV), V=tuple(_floats_list(a.window_V) or w.V),
                III_width=a.window_III_width if a.window_III_width is not None else w.III_width)
    try:
        rep = compare(snaps, asym, w, sim_hash, hashes.pop(), include_extrapolated=a.include_extrapolated)
    except HashMismatch as exc:
        raise CliError(str(exc), EXIT_INCONSISTENT)
    bio.write_json(a.report, rep.as_dict())
    csv = Path(a.report).with_suffix(".csv")
    cols = ("t", "sector", "n", "linf", "l2", "rel_linf", "rel_l2", "scaled_linf", "near_critical_linf")
    bio._write_rows(csv, cols, ([m[c] for c in cols] for m in rep.metrics), {"sim_hash": sim_hash})
    return EXIT_OK


def cmd_blowup(a):
    from .scattering import InsufficientData, estimate_blowup_T

    tau, r1, _ = bio.read_ray_csv(_need_file(a.ray, "ray file"))
    try:
        est = estimate_blowup_T(tau, r1, window=(a.window_lo, a.window_hi))
    except InsufficientData as exc:
        raise CliError(str(exc), EXIT_INCONSISTENT)
    bio.write_json(a.report, {"T_est": est.T_est, "fit_window": list(est.fit_window),
                              "residual": est.residual, "samples": est.samples})
    return EXIT_OK


def cmd_painleve(a):
    from .painleve import NewtonDivergence, eval_uP, solve_hastings_mcleod

    try:
        hm = solve_hastings_mcleod(a.ymax, a.n)
    except NewtonDivergence as exc:
        raise CliError(str(exc), EXIT_NONCONVERGED)
    bio.write_hm_csv(a.out, hm, eval_uP(hm, hm.y_grid))
    return EXIT_OK


# ---------------------------------------------------------------- parser

# (flag, type, default, help); None defaults mean "required unless set in the config file"
_SPECS = {
    "scatter": [("input", str, None, "initial data CSV (x,u0,v0)"), ("out", str, None, "reflection CSV"),
                ("xmax", float, None, "truncate the data to |x| <= xmax"),
                ("ngrid", int, 1200, "samples on the unit circle (multiple of 6)"),
                ("tol", float, 1e-6, "Richardson change tolerance per sample"),
                ("exclusion", float, 0.05, "excluded angle around each sixth root of unity"),
                ("method", str, "march", "march or neumann")],
    "verify": [("r", str, None, "reflection CSV"), ("report", str, None, "JSON report"),
               ("tol", float, 1e-6, "identity tolerance"), ("tol_ineq", float, 1e-8, "inequality tolerance")],
    "asymptote": [("r", str, None, "reflection CSV"), ("hm", str, None, "Hastings-McLeod CSV (solved if absent)"),
                  ("t", str, None, "time, or comma-separated times"), ("xmin", float, None, ""),
                  ("xmax", float, None, ""), ("dx", float, None, ""), ("out", str, None, "asymptote CSV"),
                  ("M", float, 2.0, "Sector III half-width in units of t^(-2/3)"),
                  ("t_min", float, 1.0, "smallest admissible t"),
                  ("transition_width", float, 0.05, "|zeta - 1| below which values are flagged extrapolated")],
    "simulate": [("out", str, None, "output directory")],
    "compare": [("sim", str, None, "simulation directory"), ("report", str, None, "JSON report"),
                ("window_I", str, None, "zeta range lo,hi"), ("window_II", str, None, "zeta range lo,hi"),
                ("window_IV", str, None, "zeta range lo,hi"), ("window_V", str, None, "zeta range lo,hi"),
                ("window_III_width", float, None, "Sector III half-width in units of t^(1/3)")],
    "blowup": [("ray", str, None, "ray CSV (tau,re_r1,im_r1)"), ("report", str, None, "JSON report"),
               ("window_lo", float, 0.05, ""), ("window_hi", float, 0.3, "")],
    "painleve": [("ymax", float, 12.0, ""), ("n", int, 2401, "grid points"), ("out", str, None, "CSV")],
}
_REQUIRED = {"scatter": ("input", "out"), "verify": ("r", "report"), "asymptote": ("r", "out"),
             "simulate": ("out",), "compare": ("sim", "report"), "blowup": ("ray", "report"),
             "painleve": ("out",)}


def build_parser():
    p = argparse.ArgumentParser(prog="boussinesq-ist", description="Inverse scattering experiments "
                                "for the bad Boussinesq equation")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, specs in _SPECS.items():
        sp_ = sub.add_parser(name)
        sp_.add_argument("--config", default=None, help="key=value file; command-line flags win")
        for flag, typ, _default, hlp in specs:
            sp_.add_argument("--" + flag.replace("_", "-"), dest=flag, type=typ, default=None, help=hlp)
        if name == "compare":
            sp_.add_argument("--asym", nargs="+", default=None, help="asymptote CSV file(s)")
            sp_.add_argument("--include-extrapolated", action="store_true", default=None)
    return p


def _merge(args):
    name = args.command
    cfg = {}
    if args.config and name != "simulate":
        cfg = bio.read_config(_need_file(args.config, "config file"))
    for flag, typ, default, _ in _SPECS[name]:
        if getattr(args, flag) is None:
            if flag in cfg:
                setattr(args, flag, typ(cfg[flag]))
            else:
                setattr(args, flag, default)
    if name == "compare":
        if args.asym is None and "asym" in cfg:
            args.asym = cfg["asym"].replace(",", " ").split()
        if args.include_extrapolated is None:
            args.include_extrapolated = _bool(cfg.get("include_extrapolated", False))
        if not args.asym:
            raise CliError("missing required --asym", EXIT_MISSING)
    for flag in _REQUIRED[name]:
        if getattr(args, flag) is None:
            raise CliError(f"missing required --{flag.replace('_', '-')}", EXIT_MISSING)
    return args


COMMANDS = {"scatter": cmd_scatter, "verify": cmd_verify, "asymptote": cmd_asymptote,
            "simulate": cmd_simulate, "compare": cmd_compare, "blowup": cmd_blowup,
            "painleve": cmd_painleve}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args = _merge(args)
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return EXIT_MISSING
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
