"""Cross-checks of the closed forms against the oracles, plus known discrepancies."""

import numpy as np

from .coeffs import InterferometerConfig, recycling_constants, verify_commutator_identities
from .detection import (
    hd_moments_conventional, hd_moments_pr, sid_moments_conventional, sid_moments_pr,
)
from .oracle import fock_oracle_conventional, iterate_recycling
from .resources import _decompose, total_photon_number

CHAIN_RTOL = 1e-8
FOCK_RTOL = 1e-6
REDUCTION_RTOL = 1e-10


def relative_residual(closed, reference, scale=None):
    """``|closed - reference| / max(|closed|, scale)``; ``scale`` guards means near zero."""
    denom = abs(closed)
    if scale is not None:
        denom = max(denom, abs(scale))
    if denom == 0:
        return abs(closed - reference)
    return abs(closed - reference) / denom


def chain_residuals(cfg, phi, ancilla="shared", result=None):
    """Relative residuals of the port-b closed forms against the iterated chain."""
    if result is None:
        result = iterate_recycling(cfg, phi, ancilla=ancilla)
    sid = sid_moments_pr(cfg, phi)
    hd = hd_moments_pr(cfg, phi)
    return {
        "sid_mean": relative_residual(sid.mean, result.b_number.mean),
        "sid_std": relative_residual(sid.std_dev, result.b_number.std_dev),
        "hd_mean": relative_residual(hd.mean, result.b_quadrature.mean, scale=hd.std_dev),
        "hd_std": relative_residual(hd.std_dev, result.b_quadrature.std_dev),
    }


def random_config(rng, g_max=2.0, r_max=2.0, gamma_max=3.0, balanced=True):
    g = rng.uniform(0, g_max)
    kw = dict(r=rng.uniform(0, r_max), gamma_mag=rng.uniform(0, gamma_max),
              T=rng.uniform(0, 1), theta=rng.uniform(-np.pi, np.pi))
    if balanced:
        return InterferometerConfig.balanced(g=g, **kw)
    return InterferometerConfig(g1=g, g2=rng.uniform(0, g_max), eta1=rng.uniform(-np.pi, np.pi),
                                eta2=rng.uniform(-np.pi, np.pi), delta_xi=rng.uniform(-np.pi, np.pi),
                                delta_gamma=rng.uniform(-np.pi, np.pi), **kw)


def random_config_batch(rng, count, g_max=2.0, r_max=2.0, gamma_max=3.0):
    """``count`` unbalanced configs plus phases, as one array-valued config.

    Consumes the generator exactly like ``count`` calls of
    ``random_config(rng, balanced=False)`` each followed by one phase draw.
    """
    u = rng.random((count, 11))

    def span(col, lo, hi):
        return lo + (hi - lo) * u[:, col]

    pi = np.pi
    cfg = InterferometerConfig(
        g1=span(0, 0, g_max), r=span(1, 0, r_max), gamma_mag=span(2, 0, gamma_max),
        T=span(3, 0, 1), theta=span(4, -pi, pi), g2=span(5, 0, g_max), eta1=span(6, -pi, pi),
        eta2=span(7, -pi, pi), delta_xi=span(8, -pi, pi), delta_gamma=span(9, -pi, pi))
    return cfg, span(10, -pi, pi)


def stable_samples(rng, count, max_abs_A=0.9, **kw):
    out = []
    while len(out) < count:
        cfg = random_config(rng, **kw)
        phi = rng.uniform(-np.pi, np.pi)
        if abs(recycling_constants(cfg, phi).A) <= max_abs_A:
            out.append((cfg, phi))
    return out


def fock_samples(rng, count, cutoff=40, max_tries=10_000):
    """Random points in the Fock box whose truncated run certifies itself."""
    out = []
    for _ in range(max_tries):
        cfg = InterferometerConfig.balanced(g=rng.uniform(0, 0.9), r=rng.uniform(0, 0.3),
                                            gamma_mag=rng.uniform(0, 1))
        phi = rng.uniform(-np.pi, np.pi)
        res = fock_oracle_conventional(cfg, phi, cutoff)
        if res.trusted:
            out.append((cfg, phi, res))
            if len(out) == count:
                break
    return out


def run_verification(samples=50, fock_points=5, seed=0):
    """Run the oracle suite; returns a JSON-serialisable report with ``passed``."""
    rng = np.random.default_rng(seed)
    checks = {}
    findings = {}

    ident = [verify_commutator_identities(random_config(rng, balanced=False), rng.uniform(-np.pi, np.pi))
             for _ in range(samples)]
    checks["bogoliubov_identity_max"] = max(float(r1) for r1, _ in ident)

    pts = stable_samples(rng, samples)
    worst = dict.fromkeys(("sid_mean", "sid_std", "hd_mean", "hd_std"), 0.0)
    fresh_dev = 0.0
    verbatim_dev = 0.0
    n_total_dev = 0.0
    paper_n_dev = 0.0
    comm_res = 0.0
    rates = 0.0
    for cfg, phi in pts:
        res = iterate_recycling(cfg, phi)
        for k, v in chain_residuals(cfg, phi, result=res).items():
            worst[k] = max(worst[k], v)
        A = abs(recycling_constants(cfg, phi).A)
        if A > 0.05:
            rates = max(rates, abs(res.convergence_rate() - A) / A)
        fresh = iterate_recycling(cfg, phi, ancilla="fresh")
        fresh_dev = max(fresh_dev, relative_residual(sid_moments_pr(cfg, phi).std_dev,
                                                     fresh.b_number.std_dev))
        verbatim_dev = max(verbatim_dev, relative_residual(
            sid_moments_pr(cfg, phi, paper_verbatim=True).std_dev, res.b_number.std_dev))
        n_oracle = total_photon_number(cfg, phi)
        n_total_dev = max(n_total_dev, relative_residual(n_oracle, res.n_total))
        paper_n_dev = max(paper_n_dev, relative_residual(
            total_photon_number(cfg, phi, method="paper_formula"), n_oracle))
        dec, _ = _decompose(cfg, phi)
        comm_res = max(comm_res, *map(float, dec.commutator_residuals))
    for k, v in worst.items():
        checks[f"chain_{k}_max_rel"] = v
    checks["chain_rate_max_rel_dev"] = rates
    checks["n_total_vs_chain_max_rel"] = n_total_dev

    red = 0.0
    for _ in range(samples):
        cfg = random_config(rng).conventional()
        phi = rng.uniform(-np.pi, np.pi)
        for a, b in ((sid_moments_pr(cfg, phi), sid_moments_conventional(cfg, phi)),
                     (hd_moments_pr(cfg, phi), hd_moments_conventional(cfg, phi))):
            red = max(red, relative_residual(a.mean, b.mean, a.std_dev),
                      relative_residual(a.std_dev, b.std_dev))
    checks["t0_reduction_max_rel"] = red

    fock = 0.0
    for cfg, phi, res in fock_samples(rng, fock_points):
        exact = sid_moments_conventional(cfg, phi)
        fock = max(fock, relative_residual(exact.mean, res.number.mean),
                   relative_residual(exact.std_dev, res.number.std_dev))
    checks["fock_max_rel"] = fock

    limits = {
        "bogoliubov_identity_max": 1e-12,
        "chain_sid_mean_max_rel": CHAIN_RTOL, "chain_sid_std_max_rel": CHAIN_RTOL,
        "chain_hd_mean_max_rel": CHAIN_RTOL, "chain_hd_std_max_rel": CHAIN_RTOL,
        "chain_rate_max_rel_dev": 0.1, "n_total_vs_chain_max_rel": CHAIN_RTOL,
        "t0_reduction_max_rel": REDUCTION_RTOL, "fock_max_rel": FOCK_RTOL,
    }
    findings["printed_sid_variance_vs_chain_max_rel"] = verbatim_dev
    findings["fresh_vacuum_chain_vs_closed_form_sid_std_max_rel"] = fresh_dev
    findings["printed_n_total_vs_gaussian_max_rel"] = paper_n_dev
    findings["internal_mode_commutator_residual_max"] = comm_res
    results = {k: {"value": float(v), "limit": limits[k], "passed": bool(v <= limits[k])}
               for k, v in checks.items()}
    return {
        "samples": samples,
        "seed": seed,
        "checks": results,
        "findings": {k: float(v) for k, v in findings.items()},
        "passed": all(r["passed"] for r in results.values()),
    }
