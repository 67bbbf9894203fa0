"""Walk through one operating point: coefficients, loop gain, moments, and the chain that confirms them."""

import numpy as np

from prdsu import (
    InterferometerConfig, bogoliubov_coefficients, hd_moments_pr, recycling_constants,
    sid_moments_pr,
)
from prdsu.oracle import iterate_recycling


if __name__ == "__main__":
    cfg = InterferometerConfig.balanced(g=1.2, r=0.5, gamma_mag=1.0, T=0.75, theta=-np.pi / 8)
    phi = 0.1

    bog = bogoliubov_coefficients(cfg, phi)
    rc = recycling_constants(cfg, phi)
    print("Y  =", np.round(bog.Y, 6), "  Z =", np.round(bog.Z, 6))
    print("|Y|^2 - |Z|^2 =", abs(bog.Y) ** 2 - abs(bog.Z) ** 2)
    print("loop gain |A| =", round(abs(rc.A), 6), "(stable)" if rc.stable else "(divergent)")

    sid = sid_moments_pr(cfg, phi)
    hd = hd_moments_pr(cfg, phi)
    print(f"\nclosed form   <N_b> = {sid.mean:.10f}  std = {sid.std_dev:.10f}")
    print(f"              <X_b> = {hd.mean:.10f}  std = {hd.std_dev:.10f}")

    # round-by-round Gaussian simulation of the loop
    chain = iterate_recycling(cfg, phi)
    print(f"chain ({chain.rounds_used} rounds) <N_b> = {chain.b_number.mean:.10f}  "
          f"std = {chain.b_number.std_dev:.10f}")
    print(f"              <X_b> = {chain.b_quadrature.mean:.10f}  "
          f"std = {chain.b_quadrature.std_dev:.10f}")
    print("observed contraction per round:", round(chain.convergence_rate(), 6))

    # an independent vacuum on every pass is a different device
    fresh = iterate_recycling(cfg, phi, ancilla="fresh")
    print(f"\nfresh-vacuum loss each round: std N_b = {fresh.b_number.std_dev:.6f} "
          f"(vs {sid.std_dev:.6f})")

    # past |A| = 1 the loop runs away
    hot = cfg.replace(T=0.95)
    print("\nT=0.95, phi=1: |A| =", round(abs(recycling_constants(hot, 1.0).A), 3),
          " converged:", iterate_recycling(hot, 1.0, max_rounds=200).converged)
