"""Command-line front end: ``prdsu eval|sweep|figure|verify|identities``.

Exit codes: 0 success, 1 invalid input, 2 I/O failure, 3 verification failure.
"""

import argparse
import ast
import json
import math
import operator
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .coeffs import InterferometerConfig, recycling_constants, verify_commutator_identities
from .detection import Model, Scheme
from .enhancement import evaluate
from .figures import PHASE_RESOLUTION, PRESETS, figure
from .sweep import COLUMN_DOCS, PARAMETERS, Grid, SweepSpec, run_sweep, write_csv
from .verification import random_config_batch, run_verification

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_VERIFY = 0, 1, 2, 3
VERIFY_RTOL = 1e-8
CONFIG_KEYS = set(PARAMETERS) | {"scheme", "model", "out", "verify", "jobs", "trials"}

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}


class UsageError(Exception):
    pass


def parse_number(text):
    """Evaluate a plain arithmetic expression such as ``-pi/8`` or ``0.75``."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise ValueError
    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError, TypeError):
        raise UsageError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"not a finite number: {text!r}")
    return value


def parse_axis(text):
    """``value`` or ``start:stop:count``; returns a float or a :class:`Grid`."""
    parts = text.split(":")
    if len(parts) == 1:
        return parse_number(parts[0])
    if len(parts) != 3:
        raise UsageError(f"expected value or start:stop:count, got {text!r}")
    try:
        count = int(parts[2])
    except ValueError:
        raise UsageError(f"grid count must be an integer: {parts[2]!r}") from None
    try:
        return Grid(parse_number(parts[0]), parse_number(parts[1]), count)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value
    return values


def _choices(text, enum, label):
    if text in (None, "both", "all"):
        return tuple(enum)
    try:
        return tuple(enum(t.strip()) for t in text.split(","))
    except ValueError:
        raise UsageError(f"unknown {label} {text!r}") from None


def merged_settings(args):
    """Config-file values overlaid by command-line flags, as raw strings."""
    settings = read_config(args.config) if args.config else {}
    for key in CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    return settings


def _point_spec(settings, allow_grids):
    grids, fixed = {}, {}
    for name in PARAMETERS:
        if name not in settings:
            continue
        val = parse_axis(str(settings[name]))
        if isinstance(val, Grid):
            if not allow_grids:
                raise UsageError(f"{name}: eval takes a single value, not a grid")
            grids[name] = val
        else:
            fixed[name] = val
    return grids, fixed


def _int_setting(settings, key, default):
    try:
        return int(settings.get(key, default))
    except (TypeError, ValueError):
        raise UsageError(f"{key} must be an integer") from None


def _json_ready(value):
    arr = np.asarray(value)
    if arr.dtype == bool:
        return bool(arr)
    x = float(arr)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_eval(args):
    settings = merged_settings(args)
    _, fixed = _point_spec(settings, allow_grids=False)
    spec = SweepSpec(fixed=fixed)
    spec.validate()
    point = spec.point_values()
    cfg = InterferometerConfig.balanced(g=point["g"], r=point["r"], gamma_mag=point["gamma"],
                                        T=point["T"], theta=point["theta"])
    schemes = _choices(settings.get("scheme"), Scheme, "scheme")
    models = _choices(settings.get("model"), Model, "model")
    trials = _int_setting(settings, "trials", 1)
    if trials < 1:
        raise UsageError("trials must be >= 1")
    with np.errstate(all="ignore"):
        record = evaluate(cfg, point["phi"], schemes=schemes, models=models, trials=trials)
    payload = {"parameters": point, **{k: _json_ready(v) for k, v in record.items()}}
    _emit(json.dumps(payload, indent=2) + "\n", settings.get("out"))
    return EXIT_OK


def cmd_sweep(args):
    settings = merged_settings(args)
    grids, fixed = _point_spec(settings, allow_grids=True)
    spec = SweepSpec(
        grids=grids, fixed=fixed,
        schemes=_choices(settings.get("scheme"), Scheme, "scheme"),
        models=_choices(settings.get("model"), Model, "model"),
        trials=_int_setting(settings, "trials", 1),
        verify=parse_number(str(settings.get("verify", 0))),
        jobs=_int_setting(settings, "jobs", os.cpu_count() or 1),
    )
    columns, table = run_sweep(spec)
    out = settings.get("out")
    if out:
        write_csv(out, columns, table)
        stable = np.asarray(table["stable"])
        manifest = {
            "version": __version__,
            "fixed_parameters": {p: float(np.asarray(table[p])[0]) for p in PARAMETERS
                                 if p not in grids},
            "grids": {k: {"start": g.start, "stop": g.stop, "count": g.count}
                      for k, g in grids.items()},
            "columns": {c: COLUMN_DOCS.get(c, c) for c in columns},
            "rows": int(stable.size),
            "unstable_fraction": float(1 - stable.mean()),
        }
        Path(str(out) + ".json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    else:
        write_csv(sys.stdout, columns, table)
    verify_cols = [c for c in columns if c.startswith("verify_")]
    if verify_cols:
        checked = np.vstack([table[c] for c in verify_cols])
        worst = float(np.nanmax(checked)) if np.isfinite(checked).any() else float("nan")
        print(f"verified_rows={int(np.isfinite(checked[0]).sum())} max_residual={worst!r}",
              file=sys.stderr)
        if worst > VERIFY_RTOL:
            return EXIT_VERIFY
    return EXIT_OK


def cmd_figure(args):
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    if jobs < 1 or args.resolution < 2:
        raise UsageError("jobs must be >= 1 and resolution >= 2")
    result = figure(args.name, args.out or ".", resolution=args.resolution, jobs=jobs)
    for path in result.files:
        print(path)
    return EXIT_OK


def cmd_verify(args):
    report = run_verification(samples=args.samples, fock_points=args.fock_points, seed=args.seed)
    text = json.dumps(report, indent=2) + "\n"
    _emit(text, args.out)
    if args.out:
        print("passed" if report["passed"] else "FAILED")
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def cmd_identities(args):
    if args.samples < 1:
        raise UsageError("samples must be >= 1")
    cfg, phi = random_config_batch(np.random.default_rng(args.seed), args.samples)
    r1, r2 = verify_commutator_identities(cfg, phi)
    stable = recycling_constants(cfg, phi).stable
    worst_bog = float(r1.max())
    worst_c3 = float(r2[stable].max()) if stable.any() else 0.0
    ok = worst_bog <= args.tol and worst_c3 <= args.tol
    print(json.dumps({"samples": args.samples, "stable_samples": int(stable.sum()),
                      "max_bogoliubov_residual": worst_bog, "max_recycling_residual": worst_c3,
                      "tolerance": args.tol, "passed": ok}, indent=2))
    return EXIT_OK if ok else EXIT_VERIFY


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _point_flags(p):
    p.add_argument("--config", help="key = value file; flags override it")
    for name, help_ in (("g", "OPA gain"), ("r", "squeezing"), ("gamma", "displacement |gamma|"),
                        ("T", "recycling transmission"), ("theta", "recycling phase"),
                        ("phi", "probe phase")):
        p.add_argument(f"--{name}", help=f"{help_}; number, 'pi' expressions allowed")
    p.add_argument("--scheme", help="sid, hd or both (default both)")
    p.add_argument("--model", help="pr, conventional or both (default both)")
    p.add_argument("--trials", help="repetitions for the Cramer-Rao bound")
    p.add_argument("--out", help="output file (default stdout)")


def build_parser():
    parser = _Parser(prog="prdsu", description="Photon-recycled SU(1,1) interferometer tools")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="all quantities at one point, as JSON")
    _point_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="Cartesian grid; parameters take start:stop:count")
    _point_flags(p)
    p.add_argument("--verify", help="fraction of stable rows re-checked against the chain")
    p.add_argument("--jobs", help="worker processes (default: all CPUs)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="data files for one published figure")
    p.add_argument("name", choices=sorted(PRESETS, key=lambda n: int(n[3:])))
    p.add_argument("--out", help="output directory (default .)")
    p.add_argument("--jobs", type=int)
    p.add_argument("--resolution", type=int, default=PHASE_RESOLUTION,
                   help="points per phase axis")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", help="closed forms against the oracles")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--fock-points", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="report file (default stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("identities", help="commutator-identity residual scan")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_identities)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, ValueError, KeyError) as exc:
        print(f"prdsu: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"prdsu: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
