"""Branching-process view of the giant: survival and expansion times.

Neighborhood growth in the graph is approximated by a Galton-Watson
process with the size-biased offspring law, whose survival probability s
equals the chance that a node's out-component is large.  The expansion
experiment measures how often x independent processes push their total
generation size past a threshold omega within (1+eps) log_nu omega
generations; the limit is 1 - (1-s)^x.  At finite omega the empirical
fraction sits a little below the limit (slowly-growing surviving lines
need longer), which is visible in the printout.
"""
import numpy as np

from dcm_giant.branching import (
    OffspringLaw,
    expansion_experiment,
    survival_probability,
)


def main():
    law = OffspringLaw.poisson(2.0)
    s = survival_probability(law)
    print(f"Poisson(2) offspring: survival probability s = {s:.6f}")
    print()

    omega, eps, trials = 2000, 0.25, 20_000
    rng = np.random.default_rng(7)
    print(f"omega = {omega}, eps = {eps}, {trials} trials per x")
    print(f"{'x':>3}  {'empirical':>9}  {'limit 1-(1-s)^x':>15}")
    for x in (1, 2, 3, 5):
        emp, theo = expansion_experiment(law, x, omega, eps, trials, rng)
        print(f"{x:3d}  {emp:9.4f}  {theo:15.4f}")


if __name__ == "__main__":
    main()
