"""Command-line front end.

Examples
--------
::

    python3 -m tdlandau stats --ell 2 --z 1e-3
    python3 -m tdlandau pnd --ell 1.5 --z2 6
    python3 -m tdlandau wigner --ell 0.5 --z 1,0.5 --grid -2:2:41 --pgrid -1:1:21 --out w.csv
    python3 -m tdlandau verify --quick
"""

import argparse
import io
import json
import math
import os
import sys

import numpy as np

from . import figures, verify
from .dynamics import PROFILES, frame_at, load_profile, parse_key_values, solve_ermakov, static_frame
from .errors import ConfigError, DomainError, UndefinedPointError
from .measure import weight_function
from .states import StateSpec
from .statistics import g2, mandel_q, mean_photon_number, pnd
from .wigner import wigner_grid

NUM = "%.12e"


def parse_complex(text):
    """'re,im' or a plain real number."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"cannot read complex number from {text!r}")


def parse_grid(text):
    """'lo:hi:n' into a numpy grid (n >= 1)."""
    try:
        lo, hi, n = str(text).split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise ValueError(f"grid must look like lo:hi:n, got {text!r}") from None
    if n < 1:
        raise ValueError("grid needs at least one point")
    if n > 1 and not hi > lo:
        raise ValueError("grid needs hi > lo")
    return np.linspace(lo, hi, n)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return NUM % float(v)


def render(columns, rows, fmt="csv"):
    """Deterministic CSV or JSON text for a table of records."""
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        return buf.getvalue()
    if fmt == "json":
        recs = []
        for row in rows:
            rec = {}
            for c, v in zip(columns, row):
                s = _fmt(v)
                rec[c] = v if isinstance(v, str) else (int(s) if isinstance(v, (int, np.integer)) else float(s))
            recs.append(rec)
        return json.dumps(recs, indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _emit(args, columns, rows, path=None):
    text = render(columns, rows, args.format)
    path = path or args.out
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _spec(args):
    if args.z is not None and args.z2 is not None:
        raise ConfigError("give either --z or --z2, not both", field="z")
    if args.z2 is not None:
        if args.z2 < 0:
            raise ConfigError("|z|^2 must be non-negative", field="z2")
        z = complex(math.sqrt(args.z2), 0.0)
    elif args.z is not None:
        z = parse_complex(args.z)
    else:
        raise ConfigError("a state needs --z or --z2", field="z")
    return StateSpec(z, args.ell, args.m)


def _profile(args):
    name = args.profile or "constant"
    if name in PROFILES:
        return PROFILES[name]()
    if os.path.exists(name):
        return load_profile(name)
    raise ConfigError(f"unknown profile '{name}' (bundled: {', '.join(PROFILES)})", field="profile")


# subcommands --------------------------------------------------------------

def cmd_stats(args):
    if args.grid:
        radii = parse_grid(args.grid)
        phase = 0.0
        if args.z is not None:
            phase = math.atan2(parse_complex(args.z).imag, parse_complex(args.z).real)
        specs = [StateSpec(r * complex(math.cos(phase), math.sin(phase)), args.ell, args.m) for r in radii]
    else:
        specs = [_spec(args)]
    rows = []
    for s in specs:
        mean, mean2 = mean_photon_number(s)
        try:
            g, q = g2(s), mandel_q(s)
        except UndefinedPointError:
            g, q = float("nan"), float("nan")
        rows.append((s.r, mean, mean2, g, q))
    _emit(args, ("r", "mean_n", "mean_n2", "g2", "q"), rows)
    return 0


def cmd_pnd(args):
    d = pnd(_spec(args))
    rows = []
    acc = 0.0
    for lvl, p in zip(d.levels, d.probabilities):
        rows.append((int(lvl), float(p)))
        acc += p
        if acc >= 1.0 - args.tol:
            break
    _emit(args, ("n", "probability"), rows)
    return 0


def cmd_weight(args):
    radii = parse_grid(args.grid or "0.05:5:100")
    if np.any(radii <= 0):
        raise ConfigError("radii must be positive", field="grid")
    w = weight_function(args.ell, args.m)
    _emit(args, ("r", "weight"), [(float(r), w(float(r))) for r in radii])
    return 0


def cmd_wigner(args):
    spec = _spec(args)
    ys = parse_grid(args.grid or "-2:2:21")
    ps = parse_grid(args.pgrid or "-1:1:21")
    if args.time is None and args.profile is None:
        frame = static_frame()
    else:
        prof = _profile(args)
        t = args.time or 0.0
        rho0 = args.rho0 if args.rho0 is not None else prof.stationary_rho()
        env = solve_ermakov(prof, rho0, args.rho_dot0, np.linspace(0.0, max(t, 1e-9), 3))
        frame = frame_at(prof, env, t)
    wg = wigner_grid(spec, frame, ys, ps, experimental=args.experimental, time=args.time or 0.0)
    rows = [(float(y), float(p), float(wg.values[i, j]))
            for i, y in enumerate(ys) for j, p in enumerate(ps)]
    _emit(args, ("y", "p", "wigner"), rows)
    if wg.imag_residue > 1e-8:
        print(f"warning: imaginary residue {wg.imag_residue:.3e} exceeds 1e-8", file=sys.stderr)
    return 0


def cmd_ermakov(args):
    prof = _profile(args)
    grid = parse_grid(args.grid or "0:10:101")
    rho0 = args.rho0 if args.rho0 is not None else prof.stationary_rho()
    env = solve_ermakov(prof, rho0, args.rho_dot0, grid)
    rows = [(float(t), float(env.rho[i]), float(env.rho_dot[i]), float(env.residual[i]),
             *(float(v) for v in env.integrals[:, i])) for i, t in enumerate(grid)]
    _emit(args, ("t", "rho", "rho_dot", "residual", "int_inv_m_rho2", "int_cyclotron", "int_field"), rows)
    return 0


def cmd_verify(args):
    results = verify.run_suite(quick=args.quick)
    out = sys.stdout
    for r in results:
        out.write(r.line() + "\n")
    ok = verify.suite_passed(results)
    failed = [r.key for r in results if not r.passed and not r.report_only]
    out.write("suite: " + ("PASS" if ok else "FAIL (" + ", ".join(failed) + ")") + "\n")
    return 0 if ok else 1


def cmd_figures(args):
    names = args.only.split(",") if args.only else list(figures.NAMES)
    outdir = args.out or "."
    os.makedirs(outdir, exist_ok=True)
    for name in names:
        tab = figures.build(name.strip())
        _emit(args, tab.columns, tab.rows, path=os.path.join(outdir, f"{tab.name}.{args.format}"))
    return 0


COMMANDS = {
    "stats": cmd_stats, "pnd": cmd_pnd, "weight": cmd_weight, "wigner": cmd_wigner,
    "ermakov": cmd_ermakov, "verify": cmd_verify, "figures": cmd_figures,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ell", type=float, default=1.0, help="Bargmann index (>= 0)")
    common.add_argument("--m", type=int, default=0, help="number of added photons")
    common.add_argument("--z", default=None, help="complex label as re,im")
    common.add_argument("--z2", type=float, default=None, help="|z|^2 (real positive label)")
    common.add_argument("--profile", default=None, help="bundled profile name or profile config file")
    common.add_argument("--grid", default=None, help="lo:hi:n")
    common.add_argument("--out", default=None, help="output file (directory for figures)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--tol", type=float, default=1e-14, help="probability mass allowed outside the output")
    common.add_argument("--config", default=None, help="key = value file replacing flags")

    p = argparse.ArgumentParser(prog="tdlandau", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("stats", parents=[common], help="<N>, <N^2>, g2 and Q (one state or an |z| grid)")
    sub.add_parser("pnd", parents=[common], help="photon-number distribution")
    sub.add_parser("weight", parents=[common], help="resolution-of-identity weight against r")
    w = sub.add_parser("wigner", parents=[common], help="Wigner function on a (y, p) grid")
    w.add_argument("--pgrid", default=None, help="momentum grid lo:hi:n")
    w.add_argument("--time", type=float, default=None)
    w.add_argument("--rho0", type=float, default=None)
    w.add_argument("--rho-dot0", type=float, default=0.0)
    w.add_argument("--experimental", action="store_true", help="allow a moving envelope (complex varpi)")
    e = sub.add_parser("ermakov", parents=[common], help="envelope trajectory and phase integrals")
    e.add_argument("--rho0", type=float, default=None)
    e.add_argument("--rho-dot0", type=float, default=0.0)
    v = sub.add_parser("verify", parents=[common], help="run the verification suite")
    v.add_argument("--quick", action="store_true", help="lighter grids, same tolerances")
    f = sub.add_parser("figures", parents=[common], help="write plot datasets")
    f.add_argument("--only", default=None, help="comma-separated dataset names")
    return p


def _apply_config(parser, args, argv):
    """Fill flags from a key = value file; explicit command-line flags win."""
    with open(args.config, encoding="utf-8") as fh:
        values, lines = parse_key_values(fh.read(), source=args.config)
    given = {a.split("=", 1)[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    for key, raw in values.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest) or dest in ("command", "config"):
            raise ConfigError("unknown setting", line=lines.get(key), field=key)
        if dest in given:
            continue
        default = parser_default(parser, args.command, dest)
        try:
            if isinstance(default, bool):
                val = raw.strip().lower() in ("1", "true", "yes", "on")
            elif dest in ("ell", "z2", "tol", "time", "rho0", "rho_dot0"):
                val = float(raw)
            elif dest == "m":
                val = int(raw)
            else:
                val = raw.strip()
        except ValueError:
            raise ConfigError(f"bad value {raw!r}", line=lines.get(key), field=key) from None
        setattr(args, dest, val)


def parser_default(parser, command, dest):
    for action in parser._subparsers._group_actions:
        sp = action.choices.get(command)
        if sp is not None:
            return sp.get_default(dest)
    return None


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            _apply_config(parser, args, argv)
        if not args.tol > 0:
            raise ConfigError("tolerance must be positive", field="tol")
        return COMMANDS[args.command](args)
    except (ConfigError, DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
