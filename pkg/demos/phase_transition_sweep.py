"""Sweep the criticality parameter across the phase transition.

The giant SCC appears exactly when nu = E[D- D+] / lambda crosses 1.
This script sweeps nu for Poisson bi-degree pairs, printing the predicted
giant density eta beside the simulated v(giant)/n at a fixed n: zero
below the transition, positive and growing above it.
"""
import numpy as np

from dcm_giant.criticality import predict
from dcm_giant.degrees import poisson_pair, sample_sequence
from dcm_giant.generate import pair_configuration
from dcm_giant.scc import strongly_connected_components


def simulated_ratio(nu, n, trials, master_seed):
    d = poisson_pair(nu)
    ratios = []
    for t in range(trials):
        rng = np.random.default_rng(master_seed + t)
        g = pair_configuration(sample_sequence(d, n, rng), rng)
        ratios.append(strongly_connected_components(g).giant_order / n)
    return float(np.mean(ratios))


def main():
    n, trials = 20_000, 5
    print(f"n = {n}, {trials} trials per point")
    print(f"{'nu':>5}  {'predicted eta':>13}  {'simulated v/n':>13}")
    for nu in (0.5, 0.8, 0.95, 1.05, 1.2, 1.5, 2.0, 3.0):
        eta = predict(poisson_pair(nu)).eta
        sim = simulated_ratio(nu, n, trials, master_seed=int(nu * 1000))
        print(f"{nu:5.2f}  {eta:13.4f}  {sim:13.4f}")


if __name__ == "__main__":
    main()
