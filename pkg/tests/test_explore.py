import math

import numpy as np
import pytest

from dcm_giant.degrees import poisson_pair, sample_sequence
from dcm_giant.explore import (
    core_vs_giant,
    default_omega,
    expand,
    linear_core,
    linear_core_direct,
)
from dcm_giant.generate import Digraph, pair_configuration
from dcm_giant.scc import strongly_connected_components


def directed_cycle(n):
    nodes = np.arange(n)
    return Digraph(n, nodes, (nodes + 1) % n)


def complete_digraph(n):
    tails = np.repeat(np.arange(n), n - 1)
    heads = np.concatenate([[v for v in range(n) if v != u] for u in range(n)])
    return Digraph(n, tails, heads)


def random_digraph(n, m, rng):
    return Digraph(n, rng.integers(0, n, m), rng.integers(0, n, m))


def test_cycle_profile():
    g = directed_cycle(10)
    for start in (0, 3, 9):
        p = expand(g, [start], "forward", 2)
        assert p.t_omega is None and not p.expanded
        assert p.level_sizes == [1] * 10
        assert p.reachable_halfedges == 10


def test_fan_profile():
    # node 0 with 5 out-arcs to distinct nodes: level 1 holds 5 half-edges
    g = Digraph(6, [0] * 5, [1, 2, 3, 4, 5])
    p = expand(g, [0], "forward", 5)
    assert p.t_omega == 1
    assert p.level_sizes == [5]
    # the fan tips have no out-arcs, so a larger omega is never reached
    p = expand(g, [0], "forward", 6)
    assert p.t_omega is None and p.level_sizes == [5, 0]


def test_expand_validation():
    g = directed_cycle(4)
    with pytest.raises(ValueError):
        expand(g, [0], "sideways", 2)
    with pytest.raises(ValueError):
        expand(g, [], "forward", 2)
    with pytest.raises(ValueError):
        expand(g, [4], "forward", 2)
    with pytest.raises(ValueError):
        expand(g, [0], "forward", 0)


def test_forward_equals_backward_on_reversed():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 40))
        g = random_digraph(n, int(rng.integers(0, 3 * n)), rng)
        rev = Digraph(n, g.heads, g.tails)
        start = [int(rng.integers(0, n))]
        f = expand(g, start, "forward", 5)
        b = expand(rev, start, "backward", 5)
        assert f.level_sizes == b.level_sizes
        assert f.t_omega == b.t_omega
        assert f.reachable_halfedges == b.reachable_halfedges


def test_t_max_truncates():
    g = directed_cycle(10)
    p = expand(g, [0], "forward", 2, t_max=3)
    assert p.level_sizes == [1, 1, 1]
    assert p.t_omega is None


def test_default_omega():
    assert default_omega(1) >= 1
    assert default_omega(10**5) == math.ceil(math.log(10**5) ** 2)
    assert default_omega(10**5) < 10**3


def test_core_empty_on_cycle_level_threshold():
    core = linear_core(directed_cycle(12), 2, "level-threshold")
    assert core.order == 0 and core.core_edges == 0
    # reachable-count differs: every node reaches all 12 half-edges
    core = linear_core(directed_cycle(12), 2, "reachable-count")
    assert core.order == 12 and core.core_edges == 12


def test_core_complete_digraph():
    for criterion in ("level-threshold", "reachable-count"):
        core = linear_core(complete_digraph(10), 5, criterion)
        assert core.order == 10
        assert core.core_edges == 90
        assert core_vs_giant(complete_digraph(10), 5, criterion) == (0, 0)


def test_core_criterion_validation():
    with pytest.raises(ValueError):
        linear_core(directed_cycle(4), 2, "nope")
    with pytest.raises(ValueError):
        linear_core(directed_cycle(4), 0)


def test_fast_core_equals_direct_oracle():
    for seed in range(30):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 60))
        g = random_digraph(n, int(rng.integers(0, 3 * n)), rng)
        omega = int(rng.integers(1, 8))
        for criterion in ("level-threshold", "reachable-count"):
            fast = linear_core(g, omega, criterion)
            direct = linear_core_direct(g, omega, criterion)
            assert np.array_equal(fast.members, direct.members), (seed, criterion)
            assert fast.core_edges == direct.core_edges


def test_core_monotone_in_omega():
    for seed in range(15):
        rng = np.random.default_rng(seed)
        g = random_digraph(40, 90, rng)
        for criterion in ("level-threshold", "reachable-count"):
            small = set(linear_core(g, 3, criterion).members.tolist())
            large = set(linear_core(g, 7, criterion).members.tolist())
            assert large <= small


def test_member_mask_matches_members():
    g = complete_digraph(6)
    core = linear_core(g, 3)
    mask = core.member_mask(g.n)
    assert np.array_equal(np.flatnonzero(mask), core.members)


def test_supercritical_giant_inside_core():
    # the giant's internal expansion reaches a modest omega, so it sits
    # inside the core and the core adds few outside nodes
    d = poisson_pair(2.0)
    for seed in range(3):
        rng = np.random.default_rng(seed)
        seq = sample_sequence(d, 3000, rng)
        g = pair_configuration(seq, rng)
        cmg, gmc = core_vs_giant(g, 10)
        assert gmc == 0
        assert cmg <= 0.01 * g.n


def test_subcritical_core_is_empty():
    d = poisson_pair(0.5)
    for seed in range(3):
        rng = np.random.default_rng(seed)
        seq = sample_sequence(d, 10**4, rng)
        g = pair_configuration(seq, rng)
        core = linear_core(g, 50)
        assert core.order == 0
        cmg, gmc = core_vs_giant(g, 50)
        assert cmg == 0
        assert gmc == strongly_connected_components(g).giant_order


def test_forward_hit_fraction_tracks_survival():
    # fraction of nodes whose forward expansion reaches omega ~ s+ = 0.7968
    d = poisson_pair(2.0)
    rng = np.random.default_rng(2)
    seq = sample_sequence(d, 10**5, rng)
    g = pair_configuration(seq, rng)
    nodes = rng.choice(g.n, size=1000, replace=False)
    hits = sum(expand(g, [int(v)], "forward", 100).expanded for v in nodes)
    s = 0.79681213
    sigma = math.sqrt(s * (1 - s) / 1000)
    assert abs(hits / 1000 - s) < 4 * sigma
