"""Data behind the published parameter studies, written as CSV plus a JSON manifest.

Every preset's fixed parameters are the caption values; ``PRESETS`` is the single
place they live.  Nothing here plots.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .detection import Model
from .sweep import COLUMN_DOCS, Grid, SweepSpec, run_sweep, write_csv

PHASE_RESOLUTION = 201
PHASE_GRID = (-math.pi, math.pi)
#: (theta, phi) used by the single-point studies and the default slice of fig3/fig4
REFERENCE_PHASES = (-math.pi / 8, 0.0)
#: sensitivities above this come from fringe slopes at roundoff level; such points
#: are kept in the data but left out of fig3 envelopes and monotone counts
DPHI_CEILING = 1e6


@dataclass(frozen=True)
class FigurePreset:
    name: str
    kind: str  # "vs_T" | "phase_map" | "series"
    fixed: dict
    panel_param: str = None
    panel_values: tuple = ()
    axis: str = None
    axis_grid: tuple = None  # (start, stop, count)
    quantity: str = None


def _step_grid(start, stop, step):
    return (start, stop, int(round((stop - start) / step)) + 1)


PRESETS = {
    "fig3": FigurePreset("fig3", "vs_T", {"g": 1.0, "r": 0.5, "gamma": 1.0},
                         axis="T", axis_grid=_step_grid(0.0, 0.95, 0.05), quantity="sigma"),
    "fig4": FigurePreset("fig4", "vs_T", {"g": 1.0, "r": 0.5, "gamma": 1.0},
                         axis="T", axis_grid=_step_grid(0.0, 0.95, 0.05), quantity="xi"),
    "fig5": FigurePreset("fig5", "phase_map", {"g": 1.2, "r": 0.5, "gamma": 1.0},
                         panel_param="T", panel_values=(0.75, 0.85, 0.95), quantity="gamma"),
    "fig6": FigurePreset("fig6", "phase_map", {"T": 0.8, "r": 0.5, "gamma": 1.0},
                         panel_param="g", panel_values=(0.5, 1.0, 1.5), quantity="gamma"),
    "fig7": FigurePreset("fig7", "phase_map", {"g": 1.0, "r": 0.7, "T": 0.8},
                         panel_param="gamma", panel_values=(1.0, 2.0, 3.0), quantity="gamma"),
    "fig8": FigurePreset("fig8", "phase_map", {"g": 1.0, "T": 0.8, "gamma": 3.0},
                         panel_param="r", panel_values=(0.0, 0.5, 1.0), quantity="gamma"),
    "fig9": FigurePreset("fig9", "series",
                         {"T": 0.8, "gamma": 1.0, "phi": 0.0, "theta": -math.pi / 8},
                         panel_param="g", panel_values=(0.5, 0.7, 1.0, 1.2),
                         axis="r", axis_grid=_step_grid(0.0, 1.5, 0.05), quantity="lambda"),
    "fig10": FigurePreset("fig10", "series",
                          {"g": 1.2, "r": 0.5, "phi": 0.0, "theta": -math.pi / 8},
                          panel_param="gamma", panel_values=(0.0, 0.5, 1.0, 2.0),
                          axis="T", axis_grid=_step_grid(0.0, 0.95, 0.05), quantity="lambda"),
    "fig11": FigurePreset("fig11", "series",
                          {"T": 0.8, "r": 0.5, "gamma": 1.0, "phi": 0.0, "theta": -math.pi / 8},
                          axis="g", axis_grid=_step_grid(0.5, 1.5, 0.05), quantity="log10"),
}

SERIES_COLUMNS = {
    "lambda": ["stable", "abs_A", "n_total", "snl", "qcrb_pr", "lambda"],
    "log10": ["stable", "abs_A", "log10_dphi_sid", "log10_dphi_hd", "log10_snl", "log10_qcrb"],
}
PHASE_MAP_COLUMNS = ["stable", "abs_A", "n_total", "snl", "dphi_pr_sid", "dphi_pr_hd",
                     "gamma_sid", "gamma_hd"]
LOG_DOCS = {
    "log10_dphi_sid": "log10 of the recycled intensity-detection sensitivity",
    "log10_dphi_hd": "log10 of the recycled homodyne sensitivity",
    "log10_snl": "log10 of the shot-noise limit",
    "log10_qcrb": "log10 of the recycled quantum Cramer-Rao bound",
}


@dataclass
class FigureOutput:
    name: str
    files: list
    manifest: dict


def _label(value):
    return format(value, "g")


def _phase_grids(resolution):
    return {"theta": Grid(*PHASE_GRID, resolution), "phi": Grid(*PHASE_GRID, resolution)}


def _stable_max(values, stable):
    masked = np.where(stable & np.isfinite(values), values, -np.inf)
    i = int(np.argmax(masked))
    return (float(masked[i]) if np.isfinite(masked[i]) else None), i


def _grid_meta(grid):
    return {"start": grid.start, "stop": grid.stop, "count": grid.count}


def _phase_map(preset, out_dir, resolution, jobs):
    files, panels = [], []
    for value in preset.panel_values:
        spec = SweepSpec(grids=_phase_grids(resolution),
                         fixed={**preset.fixed, preset.panel_param: value},
                         models=(Model.PR,), jobs=jobs)
        _, table = run_sweep(spec)
        cols = ["theta", "phi"] + PHASE_MAP_COLUMNS
        path = out_dir / f"{preset.name}_{preset.panel_param}{_label(value)}.csv"
        write_csv(path, cols, table)
        files.append(path)
        stable = table["stable"]
        panel = {"file": path.name, preset.panel_param: value, "rows": int(stable.size),
                 "unstable_fraction": float(1 - stable.mean())}
        for s in ("sid", "hd"):
            best, i = _stable_max(table[f"gamma_{s}"], stable)
            panel[f"max_gamma_{s}"] = best
            panel[f"argmax_gamma_{s}"] = (None if best is None else
                                          {"theta": float(table["theta"][i]),
                                           "phi": float(table["phi"][i])})
            panel[f"above_unity_{s}"] = int(np.sum(stable & (table[f"gamma_{s}"] > 1)))
        panels.append(panel)
    grids = {k: _grid_meta(g) for k, g in _phase_grids(resolution).items()}
    return files, panels, grids, ["theta", "phi"] + PHASE_MAP_COLUMNS


def _add_logs(table):
    with np.errstate(divide="ignore", invalid="ignore"):
        table["log10_dphi_sid"] = np.log10(table["dphi_pr_sid"])
        table["log10_dphi_hd"] = np.log10(table["dphi_pr_hd"])
        table["log10_snl"] = np.log10(table["snl"])
        table["log10_qcrb"] = np.log10(table["qcrb_pr"])


def _series(preset, out_dir, jobs):
    grid = Grid(*preset.axis_grid)
    cols = [preset.axis] + SERIES_COLUMNS[preset.quantity]
    panel_values = preset.panel_values or (None,)
    files, panels = [], []
    for value in panel_values:
        fixed = dict(preset.fixed)
        stem = preset.name
        if value is not None:
            fixed[preset.panel_param] = value
            stem = f"{preset.name}_{preset.panel_param}{_label(value)}"
            cols_here = [preset.panel_param] + cols
        else:
            cols_here = cols
        spec = SweepSpec(grids={preset.axis: grid}, fixed=fixed, models=(Model.PR,), jobs=jobs)
        _, table = run_sweep(spec)
        if preset.quantity == "log10":
            _add_logs(table)
        path = out_dir / f"{stem}.csv"
        write_csv(path, cols_here, table)
        files.append(path)
        panel = {"file": path.name, "rows": grid.count,
                 "unstable_fraction": float(1 - table["stable"].mean())}
        if value is not None:
            panel[preset.panel_param] = value
        panels.append(panel)
    return files, panels, {preset.axis: _grid_meta(grid)}, cols_here


def _strictly_increasing(a, axis):
    return np.all(np.diff(a, axis=axis) > 0, axis=axis)


def _vs_T(preset, out_dir, resolution, jobs):
    """Sigma or Xi against T for a family of (theta, phi) slices plus the envelope."""
    t_grid = Grid(*preset.axis_grid)
    grids = {"T": t_grid, **_phase_grids(resolution)}
    spec = SweepSpec(grids=grids, fixed=preset.fixed, jobs=jobs)
    _, table = run_sweep(spec)
    shape = (t_grid.count, resolution, resolution)
    keys = ["xi"] if preset.quantity == "xi" else ["sigma_sid", "sigma_hd"]
    cube = {k: table[k].reshape(shape) for k in keys}
    stable = table["stable"].reshape(shape)
    usable = {"xi": stable}
    for s in ("sid", "hd"):
        ok = (table[f"dphi_pr_{s}"] <= DPHI_CEILING) & (table[f"dphi_conv_{s}"] <= DPHI_CEILING)
        usable[f"sigma_{s}"] = stable & ok.reshape(shape)
    T = t_grid.values()
    theta = grids["theta"].values()
    phi = grids["phi"].values()

    env_table = {"T": T, "stable_fraction": stable.reshape(len(T), -1).mean(axis=1)}
    env_cols = ["T", "stable_fraction"]
    for k in keys:
        masked = np.where(usable[k] & np.isfinite(cube[k]), cube[k], -np.inf).reshape(len(T), -1)
        idx = np.argmax(masked, axis=1)
        best = masked[np.arange(len(T)), idx]
        env_table[f"max_{k}"] = np.where(np.isfinite(best), best, np.nan)
        env_table[f"argmax_{k}_theta"] = theta[idx // resolution]
        env_table[f"argmax_{k}_phi"] = phi[idx % resolution]
        env_cols += [f"max_{k}", f"argmax_{k}_theta", f"argmax_{k}_phi"]
    env_path = out_dir / f"{preset.name}_envelope.csv"
    write_csv(env_path, env_cols, env_table)

    # points whose curve is stable and strictly increasing over the T > 0 part of the grid
    positive = T > 0
    monotone, picks = {}, [REFERENCE_PHASES]
    for k in keys:
        sub = cube[k][positive]
        ok = np.all(usable[k][positive], axis=0) & np.all(np.isfinite(sub), axis=0)
        inc = ok & _strictly_increasing(sub, axis=0)
        monotone[k] = int(inc.sum())
        if inc.any():
            score = np.where(inc, sub[-1], -np.inf)
            i, j = np.unravel_index(int(np.argmax(score)), score.shape)
            picks.append((float(theta[i]), float(phi[j])))

    slice_rows = {"theta": [], "phi": [], "T": [], "stable": [], **{k: [] for k in keys}}
    seen = set()
    for th, ph in picks:
        if (th, ph) in seen:
            continue
        seen.add((th, ph))
        s = SweepSpec(grids={"T": t_grid}, fixed={**preset.fixed, "theta": th, "phi": ph})
        _, t = run_sweep(s)
        for c in slice_rows:
            slice_rows[c].extend(np.asarray(t[c]).tolist())
    slice_path = out_dir / f"{preset.name}_slices.csv"
    write_csv(slice_path, list(slice_rows), {k: np.asarray(v) for k, v in slice_rows.items()})

    panels = [
        {"file": env_path.name, "content": "maximum over stable (theta, phi) at each T",
         "dphi_ceiling": DPHI_CEILING},
        {"file": slice_path.name, "content": "fixed (theta, phi) slices: the reference phases "
                                              "and the strongest monotone point per column",
         "slices": [{"theta": th, "phi": ph} for th, ph in dict.fromkeys(picks)]},
    ]
    extra = {"monotone_points": monotone,
             "unstable_fraction": float(1 - stable.mean())}
    return ([env_path, slice_path], panels, {k: _grid_meta(g) for k, g in grids.items()},
            sorted(set(env_cols) | set(slice_rows), key=(env_cols + list(slice_rows)).index), extra)


def figure(name, out_dir, resolution=PHASE_RESOLUTION, jobs=1):
    """Write the data files for one figure and return a :class:`FigureOutput`."""
    if name not in PRESETS:
        raise KeyError(f"unknown figure {name!r}; choose from {', '.join(PRESETS)}")
    preset = PRESETS[name]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    extra = {}
    if preset.kind == "phase_map":
        files, panels, grids, cols = _phase_map(preset, out_dir, resolution, jobs)
    elif preset.kind == "series":
        files, panels, grids, cols = _series(preset, out_dir, jobs)
    else:
        files, panels, grids, cols, extra = _vs_T(preset, out_dir, resolution, jobs)
    docs = {**COLUMN_DOCS, **LOG_DOCS}
    manifest = {
        "figure": name,
        "version": __version__,
        "fixed_parameters": preset.fixed,
        "panel_parameter": preset.panel_param,
        "panel_values": list(preset.panel_values),
        "grids": grids,
        "columns": {c: docs.get(c, c.replace("_", " ")) for c in cols},
        "panels": panels,
        **extra,
    }
    manifest_path = out_dir / f"{name}_manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=False) + "\n", encoding="utf-8")
    return FigureOutput(name, files + [manifest_path], manifest)
