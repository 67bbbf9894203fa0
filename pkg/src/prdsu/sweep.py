"""Cartesian parameter sweeps with deterministic, worker-count independent output."""

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .coeffs import InterferometerConfig
from .detection import Model, Scheme
from .enhancement import evaluate

PARAMETERS = ("theta", "phi", "T", "g", "r", "gamma")
DEFAULTS = {"theta": -math.pi / 8, "phi": 0.0, "T": 0.8, "g": 1.2, "r": 0.5, "gamma": 1.0}
#: rows per work unit; fixed so results never depend on how work is split
CHUNK_ROWS = 4096
VERIFY_SEED = 0


class SweepSpecError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise SweepSpecError("grid count must be >= 1")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise SweepSpecError("grid bounds must be finite")

    def values(self):
        if self.count == 1:
            return np.array([self.start], dtype=float)
        return np.linspace(self.start, self.stop, self.count)


@dataclass
class SweepSpec:
    """What to sweep.  Parameters listed in ``grids`` vary (in that order, first slowest);
    the rest are taken from ``fixed`` or the defaults."""

    grids: dict = field(default_factory=dict)
    fixed: dict = field(default_factory=dict)
    schemes: tuple = (Scheme.SID, Scheme.HD)
    models: tuple = (Model.PR, Model.CONVENTIONAL)
    trials: int = 1
    verify: float = 0.0
    jobs: int = 1

    def validate(self):
        for name in list(self.grids) + list(self.fixed):
            if name not in PARAMETERS:
                raise SweepSpecError(f"unknown parameter {name!r}")
        for name, grid in self.grids.items():
            if not isinstance(grid, Grid):
                raise SweepSpecError(f"grid for {name!r} must be a Grid")
            if name == "T" and (min(grid.start, grid.stop) < 0 or max(grid.start, grid.stop) > 1):
                raise SweepSpecError("T grid must lie within [0, 1]")
            if name in ("g", "r", "gamma") and min(grid.start, grid.stop) < 0:
                raise SweepSpecError(f"{name} grid must be non-negative")
        for name, val in self.fixed.items():
            if not math.isfinite(val):
                raise SweepSpecError(f"{name} must be finite")
        if not 0.0 <= self.verify <= 1.0:
            raise SweepSpecError("verify fraction must lie in [0, 1]")
        if self.jobs < 1 or self.trials < 1:
            raise SweepSpecError("jobs and trials must be >= 1")
        try:
            InterferometerConfig.balanced(**_config_kwargs(
                {p: np.asarray(self.point_values()[p]) for p in PARAMETERS}))
        except ValueError as exc:
            raise SweepSpecError(str(exc)) from None

    def point_values(self):
        vals = {p: self.fixed.get(p, DEFAULTS[p]) for p in PARAMETERS}
        for name, grid in self.grids.items():
            vals[name] = grid.values()
        return vals

    @property
    def row_count(self):
        return int(np.prod([g.count for g in self.grids.values()])) if self.grids else 1


def _config_kwargs(p):
    return dict(g=p["g"], r=p["r"], gamma_mag=p["gamma"], T=p["T"], theta=p["theta"])


def expand(spec):
    """Flat per-row parameter arrays in row-major order of ``spec.grids``."""
    vals = spec.point_values()
    names = list(spec.grids)
    mesh = np.meshgrid(*[vals[n] for n in names], indexing="ij") if names else []
    n = spec.row_count
    out = {}
    for p in PARAMETERS:
        if p in spec.grids:
            out[p] = mesh[names.index(p)].ravel()
        else:
            out[p] = np.full(n, float(vals[p]))
    return out


def _evaluate_chunk(args):
    params, schemes, models, trials = args
    cfg = InterferometerConfig.balanced(**_config_kwargs(params))
    with np.errstate(all="ignore"):
        return evaluate(cfg, params["phi"], schemes=schemes, models=models, trials=trials)


def _verify_rows(params, result, fraction):
    from .verification import chain_residuals

    n = params["phi"].size
    cols = {k: np.full(n, np.nan) for k in
            ("verify_sid_mean", "verify_sid_std", "verify_hd_mean", "verify_hd_std")}
    # the chain only settles inside the stable region, so sample from there
    stable = np.flatnonzero(result["stable"])
    k = int(math.ceil(fraction * stable.size))
    if k == 0:
        return cols
    rows = np.sort(np.random.default_rng(VERIFY_SEED).choice(stable, size=k, replace=False))
    for i in rows:
        cfg = InterferometerConfig.balanced(**_config_kwargs({p: params[p][i] for p in PARAMETERS}))
        res = chain_residuals(cfg, params["phi"][i])
        for key, val in res.items():
            cols[f"verify_{key}"][i] = val
    return cols


def run_sweep(spec):
    """Evaluate every grid point.  Returns ``(columns, table)`` with ``table`` a dict of arrays."""
    spec.validate()
    params = expand(spec)
    n = spec.row_count
    schemes = tuple(Scheme(s) for s in spec.schemes)
    models = tuple(Model(m) for m in spec.models)
    chunks = [({p: v[i:i + CHUNK_ROWS] for p, v in params.items()}, schemes, models, spec.trials)
              for i in range(0, n, CHUNK_ROWS)]
    if spec.jobs == 1 or len(chunks) == 1:
        parts = [_evaluate_chunk(c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            parts = list(pool.map(_evaluate_chunk, chunks))
    result = {k: np.concatenate([np.atleast_1d(p[k]) for p in parts]) for k in parts[0]}
    if spec.verify > 0:
        result.update(_verify_rows(params, result, spec.verify))
    table = dict(params)
    table.update(result)
    columns = list(PARAMETERS) + [k for k in result]
    return columns, table


def format_value(x):
    """Shortest round-trip decimal; ``inf``, ``-inf``, ``nan`` literals."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def write_csv(target, columns, table):
    """Write ``table`` to a path or an open text stream."""
    if not hasattr(target, "write"):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            return write_csv(fh, columns, table)
    n = len(table[columns[0]])
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(columns)
    cols = [np.broadcast_to(table[c], (n,)) for c in columns]
    for i in range(n):
        writer.writerow([format_value(c[i]) for c in cols])


COLUMN_DOCS = {
    "theta": "recycling phase (rad)",
    "phi": "probe phase (rad)",
    "T": "recycling-arm transmission",
    "g": "OPA gain (both OPAs)",
    "r": "squeezing of the port-b input",
    "gamma": "displacement magnitude",
    "abs_A": "loop-gain magnitude; the recycled steady state exists when < 1",
    "stable": "true when abs_A < 1",
    "n_total": "photons inside the interferometer",
    "snl": "shot-noise limit 1/sqrt(n_total)",
    "qfi_pr": "quantum Fisher information, recycled",
    "qcrb_pr": "quantum Cramer-Rao bound, recycled",
    "qfi_conv": "quantum Fisher information, conventional",
    "qcrb_conv": "quantum Cramer-Rao bound, conventional",
    "xi": "qcrb_conv / qcrb_pr",
    "lambda": "snl / qcrb_pr",
    "dphi_pr_sid": "phase sensitivity, recycled, intensity detection",
    "dphi_conv_sid": "phase sensitivity, conventional, intensity detection",
    "sigma_sid": "dphi_conv_sid / dphi_pr_sid",
    "gamma_sid": "snl / dphi_pr_sid",
    "dphi_pr_hd": "phase sensitivity, recycled, homodyne",
    "dphi_conv_hd": "phase sensitivity, conventional, homodyne",
    "sigma_hd": "dphi_conv_hd / dphi_pr_hd",
    "gamma_hd": "snl / dphi_pr_hd",
    "verify_sid_mean": "relative residual of the intensity mean against the iterated chain",
    "verify_sid_std": "relative residual of the intensity spread against the iterated chain",
    "verify_hd_mean": "relative residual of the quadrature mean against the iterated chain",
    "verify_hd_std": "relative residual of the quadrature spread against the iterated chain",
}
