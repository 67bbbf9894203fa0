"""Phase maps of the SNL enhancement Gamma and the recycled-vs-plain ratio Sigma.

Prints where the recycled device beats the shot-noise limit and by how much,
for the three transmissions of the reference map.
"""

import numpy as np

from prdsu import Model
from prdsu.sweep import Grid, SweepSpec, run_sweep

N = 121


def best(table, key):
    vals = np.where(table["stable"], table[key], np.nan)
    i = np.nanargmax(vals)
    return vals[i], table["theta"][i], table["phi"][i]


if __name__ == "__main__":
    for T in (0.75, 0.85, 0.95):
        spec = SweepSpec(grids={"theta": Grid(-np.pi, np.pi, N), "phi": Grid(-np.pi, np.pi, N)},
                         fixed={"g": 1.2, "r": 0.5, "gamma": 1.0, "T": T},
                         models=(Model.PR, Model.CONVENTIONAL))
        _, table = run_sweep(spec)
        st = table["stable"]
        print(f"T = {T}:  {100 * (1 - st.mean()):.1f}% of the map has |A| >= 1")
        for key in ("gamma_sid", "gamma_hd"):
            v, th, ph = best(table, key)
            above = np.nanmean(np.where(st, table[key] > 1, np.nan))
            print(f"   max {key:9s} = {v:.3f} at theta={th:+.3f}, phi={ph:+.3f}; "
                  f"above unity on {100 * above:.1f}% of stable points")

    # the plain device is a poor baseline here, so Sigma is large
    spec = SweepSpec(grids={"T": Grid(0.0, 0.9, 4)},
                     fixed={"g": 1.0, "r": 0.5, "gamma": 1.0, "theta": -np.pi / 8, "phi": 0.3})
    _, table = run_sweep(spec)
    print("\n   T    dphi_pr_hd  dphi_conv_hd   sigma_hd")
    for T, a, b, s in zip(table["T"], table["dphi_pr_hd"], table["dphi_conv_hd"], table["sigma_hd"]):
        print(f"{T:5.2f}  {a:10.4f}  {b:12.4f}  {s:9.3f}")
