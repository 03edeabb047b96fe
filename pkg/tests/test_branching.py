import math

import numpy as np
import pytest

from dcm_giant.branching import (
    OffspringLaw,
    expansion_experiment,
    expansion_threshold,
    run_expansion_trial,
    simulate_generations,
    survival_probability,
)
from dcm_giant.criticality import solve_extinction
from dcm_giant.degrees import poisson_pair


def bisect_survival(nu, tol=1e-11):
    """Independent oracle for the Poisson survival probability."""
    lo, hi = 0.0, 1.0 - 1e-12
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid - math.exp(-nu * (1.0 - mid)) < 0.0:
            lo = mid
        else:
            hi = mid
    return 1.0 - 0.5 * (lo + hi)


def test_law_validation():
    with pytest.raises(ValueError):
        OffspringLaw({})
    with pytest.raises(ValueError):
        OffspringLaw({-1: 1.0})
    with pytest.raises(ValueError):
        OffspringLaw({0: 0.5, 1: 0.6})
    law = OffspringLaw({0: 0.25, 2: 0.75})
    assert law.mean == pytest.approx(1.5)
    assert law.pgf(1.0) == pytest.approx(1.0)
    assert law.pgf(0.0) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        law.pgf(1.5)


def test_poisson_law_constructor():
    law = OffspringLaw.poisson(2.0)
    assert law.probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert law.mean == pytest.approx(2.0, abs=1e-9)


def test_sampling_matches_mass():
    law = OffspringLaw({0: 0.5, 2: 0.5})
    draws = law.sample(10**5, np.random.default_rng(0))
    assert set(np.unique(draws)) == {0, 2}
    # binomial 3-sigma band on the count of 2s
    sigma = np.sqrt(10**5 * 0.25)
    assert abs(np.count_nonzero(draws == 2) - 5 * 10**4) < 3 * sigma


def test_survival_constant_two_is_one():
    assert survival_probability(OffspringLaw.constant(2)) == 1.0


def test_survival_zero_when_mean_at_most_one():
    assert survival_probability(OffspringLaw({0: 0.5, 2: 0.5})) == 0.0
    assert survival_probability(OffspringLaw.poisson(0.5)) == 0.0
    # degenerate exception: exactly one child forever never dies out
    assert survival_probability(OffspringLaw({1: 1.0})) == 1.0


def test_survival_poisson_matches_bisection_oracle():
    s = survival_probability(OffspringLaw.poisson(2.0))
    assert s == pytest.approx(bisect_survival(2.0), abs=1e-9)


def test_survival_agrees_with_criticality_solver():
    # the forward survival s+ of a bi-degree law equals the survival of its
    # in-size-biased offspring marginal
    for d in (poisson_pair(2.0), poisson_pair(1.3), poisson_pair(0.7)):
        _, rho_plus = solve_extinction(d)
        law = OffspringLaw(d.size_biased("in").offspring_marginal)
        assert survival_probability(law) == pytest.approx(1.0 - rho_plus, abs=1e-9)


def test_generations_constant_two_doubles():
    run = simulate_generations(OffspringLaw.constant(2), 1, 6, 10**6,
                               np.random.default_rng(0))
    assert run.generation_sizes == [1, 2, 4, 8, 16, 32, 64]
    assert not run.extinct and not run.capped


def test_generations_constant_zero_dies_immediately():
    run = simulate_generations(OffspringLaw.constant(0), 3, 10, 10**6,
                               np.random.default_rng(0))
    assert run.generation_sizes == [3, 0]
    assert run.extinct


def test_generations_population_cap_flags():
    run = simulate_generations(OffspringLaw.constant(2), 1, 100, 50,
                               np.random.default_rng(0))
    assert run.capped and not run.extinct
    assert max(run.generation_sizes) <= 100  # one generation past the cap at most


def test_generations_argument_validation():
    law = OffspringLaw.constant(1)
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        simulate_generations(law, 0, 1, 1, rng)
    with pytest.raises(ValueError):
        simulate_generations(law, 1, 0, 1, rng)


def test_subcritical_extinction_is_certain_empirically():
    law = OffspringLaw.poisson(0.5)
    for seed in range(500):
        run = simulate_generations(law, 1, 10**4, 10**6,
                                   np.random.default_rng(seed))
        assert run.extinct


def test_extinction_frequency_matches_survival():
    # supercritical: extinct fraction ~ (1-s)^x within 3 sigma
    law = OffspringLaw.poisson(2.0)
    s = bisect_survival(2.0)
    for x in (1, 2):
        trials = 2000
        extinct = sum(
            simulate_generations(law, x, 10**4, 10**5,
                                 np.random.default_rng(10_000 * x + t)).extinct
            for t in range(trials)
        )
        p = (1.0 - s) ** x
        sigma = math.sqrt(p * (1.0 - p) / trials)
        assert abs(extinct / trials - p) < 3 * sigma


def test_expansion_trial_invariants():
    law = OffspringLaw.poisson(2.0)
    for seed in range(50):
        trial = run_expansion_trial(law, 1, 50, np.random.default_rng(seed))
        assert trial.generation_sizes[0] == 1
        if trial.T is not None:
            assert trial.generation_sizes[trial.T] >= 50
            assert all(v < 50 for v in trial.generation_sizes[:trial.T])
        else:
            assert trial.generation_sizes[-1] == 0


def test_expansion_trial_constant_two():
    trial = run_expansion_trial(OffspringLaw.constant(2), 1, 8,
                                np.random.default_rng(0))
    assert trial.T == 3
    assert trial.generation_sizes == [1, 2, 4, 8]


def test_expansion_threshold_values():
    # floor((1+eps) log_nu omega) + 1
    assert expansion_threshold(2.0, 8, 0.25) == math.floor(1.25 * 3.0) + 1
    assert expansion_threshold(2.0, 1024, 0.25) == math.floor(1.25 * 10.0) + 1


def test_expansion_experiment_deterministic_doubling():
    emp, theo = expansion_experiment(OffspringLaw.constant(2), 1, 8, 0.25, 100,
                                     np.random.default_rng(0))
    assert emp == 1.0 and theo == 1.0


def test_expansion_experiment_validation():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        expansion_experiment(OffspringLaw.poisson(0.5), 1, 10, 0.25, 10, rng)
    with pytest.raises(ValueError):
        expansion_experiment(OffspringLaw.constant(2), 1, 1, 0.25, 10, rng)
    with pytest.raises(ValueError):
        expansion_experiment(OffspringLaw.constant(2), 1, 10, 0.6, 10, rng)


def test_expansion_experiment_monotone_in_x():
    law = OffspringLaw.poisson(2.0)
    fracs = []
    for x in (1, 2, 4):
        emp, theo = expansion_experiment(law, x, 500, 0.25, 4000,
                                         np.random.default_rng(7))
        fracs.append(emp)
        assert 0.0 <= emp <= 1.0
        assert theo == pytest.approx(1.0 - (1.0 - bisect_survival(2.0)) ** x, abs=1e-9)
    assert fracs[0] < fracs[1] < fracs[2]


def test_expansion_experiment_matches_per_trial_simulator():
    # the vectorized batch must agree statistically with run_expansion_trial
    law = OffspringLaw.poisson(2.0)
    omega, eps, trials = 200, 0.25, 3000
    emp, _ = expansion_experiment(law, 1, omega, eps, trials,
                                  np.random.default_rng(11))
    t1 = expansion_threshold(law.mean, omega, eps)
    hits = sum(
        1
        for seed in range(trials)
        if (run_expansion_trial(law, 1, omega, np.random.default_rng(seed),
                                max_generations=t1).T or t1 + 1) <= t1
    )
    ref = hits / trials
    sigma = math.sqrt(ref * (1 - ref) / trials)
    assert abs(emp - ref) < 4 * sigma
