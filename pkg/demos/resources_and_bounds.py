"""Photon budget, shot-noise limit and quantum Cramer-Rao bound along the gain axis.

Also contrasts the Gaussian photon count with the printed closed form, and
checks the conventional moments against a truncated Fock simulation.
"""

import numpy as np

from prdsu import InterferometerConfig, qcrb, sid_moments_conventional, snl, total_photon_number
from prdsu.detection import Model, Scheme, phase_sensitivity
from prdsu.oracle import fock_oracle_conventional


if __name__ == "__main__":
    print("   g     N_total   printed    SNL      QCRB     dphi_HD   dphi_SID")
    for g in np.linspace(0.5, 1.5, 6):
        cfg = InterferometerConfig.balanced(g=g, r=0.5, gamma_mag=1.0, T=0.8, theta=-np.pi / 8)
        n = total_photon_number(cfg, 0.0)
        printed = total_photon_number(cfg, 0.0, method="paper_formula")
        hd = phase_sensitivity(Scheme.HD, Model.PR, cfg, 0.0).delta_phi
        sid = phase_sensitivity(Scheme.SID, Model.PR, cfg, 0.0).delta_phi
        print(f"{g:5.2f}  {n:9.4f}  {printed:8.4f}  {snl(cfg, 0.0):.5f}  {qcrb(cfg, 0.0):.5f}  "
              f"{hd:.5f}  {sid:.5f}")

    # without gain the loop is a lossy cavity for the displacement
    for T in (0.0, 0.5, 0.9):
        cfg = InterferometerConfig.balanced(g=0.0, r=0.5, gamma_mag=1.0, T=T)
        print(f"\ng=0, T={T}: N_total = {total_photon_number(cfg, 0.0):.6f}", end="")
    print()

    cfg = InterferometerConfig.balanced(g=0.6, r=0.2, gamma_mag=0.8)
    for cutoff in (20, 30, 40):
        res = fock_oracle_conventional(cfg, 0.4, cutoff)
        exact = sid_moments_conventional(cfg, 0.4)
        print(f"\ncutoff {cutoff}: tail {res.tail_mass:.1e} trusted={res.trusted}  "
              f"<N> err {abs(res.number.mean - exact.mean):.1e}  "
              f"std err {abs(res.number.std_dev - exact.std_dev):.1e}", end="")
    print()
