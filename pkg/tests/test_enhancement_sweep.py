import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from prdsu import InterferometerConfig, Model, Scheme, phase_sensitivity, qcrb, snl
from prdsu.enhancement import enhancement_factors, evaluate, ratio
from prdsu.sweep import (
    DEFAULTS, Grid, SweepSpec, SweepSpecError, expand, format_value, run_sweep, write_csv,
)

B = InterferometerConfig.balanced


def test_ratio_sentinels():
    assert ratio(2.0, 4.0) == 0.5
    for num, den in [(np.inf, 1.0), (1.0, np.inf), (0.0, 1.0), (1.0, 0.0), (np.nan, 1.0), (-1.0, 2.0)]:
        assert math.isnan(ratio(num, den))


@pytest.mark.parametrize("g, r, gamma, phi", [(1.0, 0.5, 1.0, 0.3), (0.6, 0.2, 2.0, -1.0)])
def test_t0_gives_unit_sigma_and_xi(g, r, gamma, phi):
    rec = enhancement_factors(B(g=g, r=r, gamma_mag=gamma), phi)
    assert rec.sigma_sid == 1.0 and rec.sigma_hd == 1.0 and rec.xi == 1.0


def test_record_matches_definitions():
    cfg = B(g=1.2, r=0.5, gamma_mag=1, T=0.8, theta=-np.pi / 8)
    rec = enhancement_factors(cfg, 0.05)
    assert rec.stable
    for s in Scheme:
        pr = phase_sensitivity(s, Model.PR, cfg, 0.05).delta_phi
        conv = phase_sensitivity(s, Model.CONVENTIONAL, cfg.conventional(), 0.05).delta_phi
        assert rec.gamma(s) == pytest.approx(snl(cfg, 0.05) / pr)
        assert rec.sigma(s) == pytest.approx(conv / pr)
    assert rec.lam == pytest.approx(snl(cfg, 0.05) / qcrb(cfg, 0.05))
    assert rec.xi == pytest.approx(qcrb(cfg.conventional(), 0.05) / qcrb(cfg, 0.05))


def test_hd_without_displacement_is_undefined():
    rec = enhancement_factors(B(g=1.0, r=0.5, gamma_mag=0.0, T=0.5), 0.4)
    assert rec.dphi_pr_hd == np.inf
    assert math.isnan(rec.gamma_hd) and math.isnan(rec.sigma_hd)


def test_unstable_points_are_flagged_not_dropped():
    out = evaluate(B(g=1.2, r=0.5, gamma_mag=1, T=0.8), np.array([0.0, np.pi]))
    assert list(out["stable"]) == [True, False]
    assert out["gamma_sid"].shape == (2,)


def test_fig3_monotone_point_exists():
    T = np.arange(1, 20) * 0.05
    th, ph = np.meshgrid(np.linspace(-np.pi, np.pi, 101), np.linspace(-np.pi, np.pi, 101),
                         indexing="ij")
    curves, ok = [], np.ones(th.shape, bool)
    for t in T:
        out = evaluate(B(g=1, r=0.5, gamma_mag=1, T=t, theta=th), ph)
        curves.append(out["sigma_sid"])
        ok &= out["stable"] & np.isfinite(out["sigma_sid"])
    inc = ok & np.all(np.diff(np.array(curves), axis=0) > 0, axis=0)
    assert inc.any()


# --- sweep ---------------------------------------------------------------------------

def test_single_point_sweep_equals_direct_call():
    spec = SweepSpec(fixed={"theta": -np.pi / 8, "phi": 0.1, "T": 0.75})
    cols, table = run_sweep(spec)
    direct = evaluate(B(g=DEFAULTS["g"], r=DEFAULTS["r"], gamma_mag=DEFAULTS["gamma"], T=0.75,
                        theta=-np.pi / 8), 0.1)
    assert len(table["phi"]) == 1
    for k, v in direct.items():
        np.testing.assert_allclose(table[k][0], v, rtol=1e-14)
    assert cols[:6] == ["theta", "phi", "T", "g", "r", "gamma"]


def test_row_major_order():
    spec = SweepSpec(grids={"T": Grid(0.1, 0.3, 3), "phi": Grid(0, 1, 2)})
    p = expand(spec)
    np.testing.assert_allclose(p["T"], [0.1, 0.1, 0.2, 0.2, 0.3, 0.3])
    np.testing.assert_allclose(p["phi"], [0, 1, 0, 1, 0, 1])
    assert spec.row_count == 6


@pytest.mark.parametrize("spec", [
    SweepSpec(grids={"T": Grid(0.0, 1.2, 3)}),
    SweepSpec(grids={"g": Grid(-1, 1, 3)}),
    SweepSpec(fixed={"T": 2.0}),
    SweepSpec(fixed={"bogus": 1.0}),
    SweepSpec(verify=1.5),
    SweepSpec(jobs=0),
    SweepSpec(grids={"T": (0, 1, 3)}),
])
def test_spec_validation(spec):
    with pytest.raises(SweepSpecError):
        spec.validate()


def test_grid_validation():
    with pytest.raises(SweepSpecError):
        Grid(0, 1, 0)
    with pytest.raises(SweepSpecError):
        Grid(0, np.inf, 3)


@given(st.floats(allow_nan=True, allow_infinity=True, width=64))
def test_format_round_trips(x):
    text = format_value(x)
    if math.isnan(x):
        assert text == "nan"
    else:
        assert float(text) == x
        assert len(text.replace("-", "").replace(".", "").split("e")[0].lstrip("0")) <= 17


def test_format_tokens():
    assert format_value(np.inf) == "inf" and format_value(-np.inf) == "-inf"
    assert format_value(np.True_) == "true" and format_value(False) == "false"
    assert format_value(np.float64(0.1)) == "0.1"


def test_csv_layout():
    spec = SweepSpec(grids={"phi": Grid(-0.2, 0.2, 5)}, fixed={"theta": -np.pi / 8})
    cols, table = run_sweep(spec)
    buf = io.StringIO()
    write_csv(buf, cols, table)
    text = buf.getvalue()
    assert "\r" not in text and text.endswith("\n")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == cols and len(rows) == 6
    assert {r[cols.index("stable")] for r in rows[1:]} <= {"true", "false"}


def test_sweep_independent_of_workers():
    spec = dict(grids={"theta": Grid(-np.pi, np.pi, 9), "phi": Grid(-np.pi, np.pi, 11)})
    outs = []
    for jobs in (1, 3):
        cols, table = run_sweep(SweepSpec(jobs=jobs, **spec))
        buf = io.StringIO()
        write_csv(buf, cols, table)
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]


def test_verify_columns():
    spec = SweepSpec(grids={"phi": Grid(-0.15, 0.15, 7)}, fixed={"theta": -np.pi / 8}, verify=0.5)
    cols, table = run_sweep(spec)
    checked = np.vstack([table[c] for c in cols if c.startswith("verify_")])
    done = np.isfinite(checked[0])
    assert done.sum() == math.ceil(0.5 * table["stable"].sum())
    assert np.all(table["stable"][done])
    assert np.nanmax(checked) < 1e-8


def test_scheme_and_model_selection():
    cols, _ = run_sweep(SweepSpec(schemes=("hd",), models=("pr",)))
    assert "dphi_pr_hd" in cols and "dphi_pr_sid" not in cols and "sigma_hd" not in cols


def test_evaluate_broadcasts_config_arrays():
    r = np.array([0.0, 0.5, 1.0])
    rec = evaluate(InterferometerConfig.balanced(g=1.0, r=r, gamma_mag=1.0, T=0.8, theta=-np.pi / 8), 0.0)
    for k, v in rec.items():
        assert v.shape == (3,), k
    single = evaluate(InterferometerConfig.balanced(g=1.0, r=0.5, gamma_mag=1.0, T=0.8, theta=-np.pi / 8), 0.0)
    assert rec["lambda"][1] == pytest.approx(float(single["lambda"]), rel=1e-14)
