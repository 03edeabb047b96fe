"""Directed configuration model: analytic giant-SCC predictions and seeded
Monte Carlo verification of the law of large numbers for its order and size."""

from .degrees import (
    BiDegreeDistribution,
    BiDegreeSequence,
    SizeBiasedLaw,
    build_distribution,
    empirical_distribution,
    poisson_pair,
    product_distribution,
    regular,
    sample_sequence,
)
from .criticality import CriticalityReport, ConvergenceError, karp_rho, predict, solve_extinction
from .generate import Digraph, binomial_digraph, generate_simple, pair_configuration
from .scc import CycleCensus, SccReport, cycle_census, reachability_oracle, strongly_connected_components
from .branching import OffspringLaw, expansion_experiment, simulate_generations, survival_probability
from .explore import ExpansionProfile, LinearCore, core_vs_giant, default_omega, expand, linear_core
from .harness import ExperimentConfig, TrialRecord, derive_trial_seed, run_experiment

__version__ = "0.1.0"
