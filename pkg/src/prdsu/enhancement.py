"""Enhancement factors comparing the recycled interferometer with its baselines.

``Sigma = dphi_conv / dphi_pr`` (per detection scheme), ``Xi = qcrb_conv / qcrb_pr``,
``Gamma = snl / dphi_pr`` (per scheme) and ``Lambda = snl / qcrb_pr``.  A ratio is
``nan`` unless both sides are finite and positive.

:func:`evaluate` is the vectorised, non-raising workhorse used by sweeps and
figures; unstable points are computed but flagged.
"""

from dataclasses import dataclass, fields

import numpy as np

from .coeffs import InterferometerConfig, recycling_constants
from .detection import Model, Scheme, phase_sensitivity
from .resources import _fisher, _n_total_oracle, _n_total_printed

SCHEMES = (Scheme.SID, Scheme.HD)
_CONFIG_FIELDS = tuple(f.name for f in fields(InterferometerConfig))


def ratio(num, den):
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    ok = np.isfinite(num) & np.isfinite(den) & (num > 0) & (den > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(ok, num / np.where(ok, den, 1.0), np.nan)
    return out if out.ndim else float(out)


def _inv_sqrt(x, zero_value):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x > 0, 1.0 / np.sqrt(np.where(x > 0, x, 1.0)), zero_value)
    return out


def evaluate(cfg, phi, schemes=SCHEMES, models=(Model.PR, Model.CONVENTIONAL), trials=1,
             n_total_method="oracle"):
    """Every sensitivity, resource and enhancement quantity at the given point(s).

    Returns a dict of arrays keyed by column name.
    """
    schemes = [Scheme(s) for s in schemes]
    models = [Model(m) for m in models]
    phi = np.asarray(phi, dtype=float)
    rc = recycling_constants(cfg, phi)
    shape = np.broadcast_shapes(phi.shape, np.shape(rc.A),
                                *(np.shape(getattr(cfg, f)) for f in _CONFIG_FIELDS))
    out = {
        "abs_A": np.broadcast_to(np.abs(rc.A), shape),
        "stable": np.broadcast_to(rc.stable, shape),
    }
    if n_total_method == "oracle":
        n_total, _ = _n_total_oracle(cfg, phi)
    else:
        n_total = _n_total_printed(cfg, phi)
    out["n_total"] = np.broadcast_to(n_total, shape)
    out["snl"] = np.broadcast_to(_inv_sqrt(n_total, np.nan), shape)
    F_pr, _ = _fisher(cfg, phi)
    F_conv, _ = _fisher(cfg.conventional(), phi)
    out["qfi_pr"] = np.broadcast_to(F_pr, shape)
    out["qcrb_pr"] = np.broadcast_to(_inv_sqrt(trials * F_pr, np.inf), shape)
    if Model.CONVENTIONAL in models:
        out["qfi_conv"] = np.broadcast_to(F_conv, shape)
        out["qcrb_conv"] = np.broadcast_to(_inv_sqrt(trials * F_conv, np.inf), shape)
        out["xi"] = ratio(out["qcrb_conv"], out["qcrb_pr"])
    out["lambda"] = ratio(out["snl"], out["qcrb_pr"])
    for s in schemes:
        pr = np.broadcast_to(phase_sensitivity(s, Model.PR, cfg, phi).delta_phi, shape)
        if Model.PR in models:
            out[f"dphi_pr_{s.value}"] = pr
        if Model.CONVENTIONAL in models:
            conv = np.broadcast_to(
                phase_sensitivity(s, Model.CONVENTIONAL, cfg.conventional(), phi).delta_phi, shape)
            out[f"dphi_conv_{s.value}"] = conv
            out[f"sigma_{s.value}"] = ratio(conv, pr)
        out[f"gamma_{s.value}"] = ratio(out["snl"], pr)
    return {k: np.asarray(v) for k, v in out.items()}


@dataclass(frozen=True)
class EnhancementRecord:
    sigma_sid: float
    sigma_hd: float
    xi: float
    gamma_sid: float
    gamma_hd: float
    lam: float
    dphi_pr_sid: float
    dphi_pr_hd: float
    dphi_conv_sid: float
    dphi_conv_hd: float
    qcrb_pr: float
    qcrb_conv: float
    snl: float
    n_total: float
    stable: bool

    def sigma(self, scheme):
        return self.sigma_sid if Scheme(scheme) is Scheme.SID else self.sigma_hd

    def gamma(self, scheme):
        return self.gamma_sid if Scheme(scheme) is Scheme.SID else self.gamma_hd


def enhancement_factors(cfg: InterferometerConfig, phi: float, trials: int = 1) -> EnhancementRecord:
    """Sigma, Xi, Gamma and Lambda at a single operating point."""
    v = {k: np.asarray(x).item() for k, x in evaluate(cfg, phi, trials=trials).items()}
    return EnhancementRecord(
        sigma_sid=v["sigma_sid"], sigma_hd=v["sigma_hd"], xi=v["xi"],
        gamma_sid=v["gamma_sid"], gamma_hd=v["gamma_hd"], lam=v["lambda"],
        dphi_pr_sid=v["dphi_pr_sid"], dphi_pr_hd=v["dphi_pr_hd"],
        dphi_conv_sid=v["dphi_conv_sid"], dphi_conv_hd=v["dphi_conv_hd"],
        qcrb_pr=v["qcrb_pr"], qcrb_conv=v["qcrb_conv"], snl=v["snl"],
        n_total=v["n_total"], stable=bool(v["stable"]),
    )
