"""Galton-Watson branching processes: survival probabilities and
expansion-time experiments."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy import stats

from .criticality import TIE_TOLERANCE, _fixed_point

MASS_TOL = 1e-9
DEFAULT_POPULATION_CAP = 10**8


class OffspringLaw:
    """Finite-support offspring distribution on the nonnegative integers."""

    def __init__(self, mass: Mapping[int, float]):
        items = sorted((int(v), float(p)) for v, p in mass.items() if p > 0)
        if not items:
            raise ValueError("empty offspring support")
        if any(v < 0 for v, _ in items) or any(p < 0 for _, p in mass.items()):
            raise ValueError("offspring values must be nonnegative, masses >= 0")
        self.values = np.array([v for v, _ in items], dtype=np.int64)
        self.probs = np.array([p for _, p in items], dtype=np.float64)
        total = self.probs.sum()
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"offspring mass sums to {total}, not 1")
        self.mean = float(self.values @ self.probs)
        self._cdf = np.cumsum(self.probs)
        self._cdf[-1] = 1.0

    @property
    def mass(self) -> dict[int, float]:
        return dict(zip(self.values.tolist(), self.probs.tolist()))

    def pgf(self, z: float) -> float:
        if not 0.0 <= z <= 1.0:
            raise ValueError(f"pgf argument must lie in [0,1], got {z}")
        return float(self.probs @ np.power(float(z), self.values))

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """Inverse-transform sampling on the cumulative mass."""
        if size == 0:
            return np.empty(0, dtype=np.int64)
        return self.values[np.searchsorted(self._cdf, rng.random(size), side="right")]

    def __repr__(self) -> str:
        return f"OffspringLaw({len(self.probs)} support points, mean={self.mean:.6g})"

    @classmethod
    def constant(cls, c: int) -> "OffspringLaw":
        return cls({c: 1.0})

    @classmethod
    def poisson(cls, mean: float, tail: float = 1e-12) -> "OffspringLaw":
        kmax = int(stats.poisson.isf(tail / 2, mean)) + 1
        while stats.poisson.sf(kmax, mean) >= tail:
            kmax += 1
        pmf = stats.poisson.pmf(np.arange(kmax + 1), mean)
        return cls({k: float(p / pmf.sum()) for k, p in enumerate(pmf)})


def survival_probability(law: OffspringLaw, tie_tolerance: float = TIE_TOLERANCE) -> float:
    """1 minus the smallest nonnegative root of z = h(z), where h is the
    offspring pgf; positive exactly when the mean exceeds 1."""
    if law.mean <= 1.0 + tie_tolerance and law.pgf(0.0) > 0.0:
        return 0.0  # (sub)critical extinction is certain
    rho, _, _ = _fixed_point(law.pgf)
    return 1.0 - rho


@dataclass
class GenerationRun:
    """Raw trace of one multi-process run: totals per generation."""
    generation_sizes: list[int]
    extinct: bool
    capped: bool


@dataclass
class ExpansionTrial:
    x: int                       # number of independent processes
    omega: int                   # population threshold
    T: int | None                # first generation with total >= omega
    generation_sizes: list[int]


def simulate_generations(
    law: OffspringLaw,
    x: int,
    max_generations: int,
    population_cap: int,
    rng: np.random.Generator,
) -> GenerationRun:
    """Evolve x independent processes, recording the summed generation
    sizes; stops at extinction, the generation cap, or the population cap
    (flagged, not raised)."""
    if x < 1 or max_generations < 1 or population_cap < 1:
        raise ValueError("x, max_generations and population_cap must be positive")
    sizes = [x]
    total = x
    capped = False
    for _ in range(max_generations):
        if total == 0:
            break
        if total > population_cap:
            capped = True
            break
        total = int(law.sample(total, rng).sum())
        sizes.append(total)
    return GenerationRun(generation_sizes=sizes, extinct=sizes[-1] == 0, capped=capped)


def run_expansion_trial(
    law: OffspringLaw,
    x: int,
    omega: int,
    rng: np.random.Generator,
    max_generations: int = 10**6,
    population_cap: int = DEFAULT_POPULATION_CAP,
) -> ExpansionTrial:
    """One trial of the hitting time T = inf{t : total at generation t >= omega}."""
    sizes = [x]
    total = x
    T = 0 if x >= omega else None
    t = 0
    while T is None and total > 0 and t < max_generations and total <= population_cap:
        total = int(law.sample(total, rng).sum())
        t += 1
        sizes.append(total)
        if total >= omega:
            T = t
    return ExpansionTrial(x=x, omega=omega, T=T, generation_sizes=sizes)


def expansion_threshold(nu: float, omega: int, eps: float) -> int:
    """Generation budget floor((1+eps) log_nu omega) + 1."""
    return math.floor((1.0 + eps) * math.log(omega) / math.log(nu)) + 1


def expansion_experiment(
    law: OffspringLaw,
    x: int,
    omega: int,
    eps: float,
    trials: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Fraction of trials whose summed generation size reaches omega within
    floor((1+eps) log_nu omega) + 1 generations, next to the limiting value
    1 - (1 - s)^x where s is the single-process survival probability.

    Trials are simulated in one vectorized batch: per generation all active
    trials draw their offspring together and per-trial totals are reduced
    back, which matches the per-trial process law exactly.
    """
    if law.mean <= 1.0:
        raise ValueError("expansion experiment needs a supercritical law")
    if omega < 2:
        raise ValueError("omega must be >= 2")
    if not 0.0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    if trials < 1:
        raise ValueError("trials must be >= 1")

    s = survival_probability(law)
    theoretical = 1.0 - (1.0 - s) ** x
    if x >= omega:
        return 1.0, theoretical

    t1 = expansion_threshold(law.mean, omega, eps)
    hits = 0
    # chunk the trials so one generation's draws stay bounded in memory
    chunk = max(1, min(trials, 10**8 // (4 * omega)))
    for lo in range(0, trials, chunk):
        active = np.full(min(chunk, trials - lo), x, dtype=np.int64)
        for _ in range(t1):
            if active.size == 0:
                break
            draws = law.sample(int(active.sum()), rng)
            starts = np.concatenate(([0], np.cumsum(active)[:-1]))
            sums = np.add.reduceat(draws, starts)
            hit = sums >= omega
            hits += int(np.count_nonzero(hit))
            active = sums[~hit & (sums > 0)]
    return hits / trials, theoretical
