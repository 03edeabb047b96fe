"""BFS expansion profiles, expansion times, and the linear core.

Forward expansion from a node set counts, at level t, the out half-edges
sitting on nodes at arc-distance t-1 from the set: these are exactly the
half-edges whose arc can be the t-th arc of a shortest path out of the
set.  The expansion time is the first level whose half-edge count reaches
a threshold.  The linear core is the set of nodes whose forward and
backward expansions both reach the threshold; in the supercritical regime
its density converges to the giant-SCC node fraction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .generate import Digraph
from .scc import strongly_connected_components

try:
    from numba import njit
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

CRITERIA = ("level-threshold", "reachable-count")


@dataclass
class ExpansionProfile:
    direction: str                 # "forward" or "backward"
    level_sizes: list[int]         # half-edge counts at levels 1, 2, ...
    t_omega: int | None            # first level with >= omega half-edges
    reachable_halfedges: int       # total over the computed levels

    @property
    def expanded(self) -> bool:
        return self.t_omega is not None


@dataclass
class LinearCore:
    members: np.ndarray            # sorted node ids
    omega: int
    criterion: str
    core_edges: int                # arcs with both endpoints in the core

    @property
    def order(self) -> int:
        return int(self.members.size)

    def member_mask(self, n: int) -> np.ndarray:
        mask = np.zeros(n, dtype=bool)
        mask[self.members] = True
        return mask


def default_omega(n: int) -> int:
    """ceil(log^2 n): grows unboundedly but stays well below n at desk scale."""
    return max(1, int(np.ceil(np.log(max(n, 2)) ** 2)))


def expand(g: Digraph, start_nodes, direction: str, omega: int, t_max: int | None = None) -> ExpansionProfile:
    """Level-by-level BFS from a node set, stopping at the first level with
    at least omega half-edges or when the frontier empties."""
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be 'forward' or 'backward', got {direction!r}")
    if omega < 1:
        raise ValueError("omega must be >= 1")
    starts = np.unique(np.asarray(list(start_nodes), dtype=np.int64))
    if starts.size == 0:
        raise ValueError("start_nodes must be nonempty")
    if starts.min() < 0 or starts.max() >= g.n:
        raise ValueError("start node out of range")

    if direction == "forward":
        indptr, targets = g.out_csr()
        deg = g.out_degrees()
    else:
        indptr, targets = g.in_csr()
        deg = g.in_degrees()

    visited = np.zeros(g.n, dtype=bool)
    visited[starts] = True
    frontier = starts
    level_sizes: list[int] = []
    total = 0
    t_omega: int | None = None
    t = 1
    while frontier.size and (t_max is None or t <= t_max):
        level = int(deg[frontier].sum())
        level_sizes.append(level)
        total += level
        if level >= omega:
            t_omega = t
            break
        nxt = _gather_neighbors(indptr, targets, frontier)
        nxt = nxt[~visited[nxt]]
        frontier = np.unique(nxt)
        visited[frontier] = True
        t += 1
    return ExpansionProfile(
        direction=direction,
        level_sizes=level_sizes,
        t_omega=t_omega,
        reachable_halfedges=total,
    )


def _gather_neighbors(indptr: np.ndarray, targets: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    counts = indptr[nodes + 1] - indptr[nodes]
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    # index array selecting each node's CSR slice
    offsets = np.repeat(indptr[nodes] - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
    return targets[np.arange(total, dtype=np.int64) + offsets]


# -- whole-graph linear core ------------------------------------------------

def linear_core(g: Digraph, omega: int, criterion: str = "level-threshold") -> LinearCore:
    """Nodes whose forward and backward expansions both reach omega.

    level-threshold: some BFS level has >= omega half-edges (finite
    expansion time); the paper-literal criterion.  reachable-count: the
    total reachable half-edge count is >= omega; computed via SCC
    condensation.  Both fast paths agree exactly with the per-node BFS
    definition (see linear_core_direct).
    """
    _check_criterion(criterion)
    if omega < 1:
        raise ValueError("omega must be >= 1")
    if criterion == "level-threshold":
        fwd = _threshold_flags_graph(g, forward=True, omega=omega)
        bwd = _threshold_flags_graph(g, forward=False, omega=omega)
    else:
        fwd = _reach_flags_condensation(g, forward=True, omega=omega)
        bwd = _reach_flags_condensation(g, forward=False, omega=omega)
    mask = fwd & bwd
    return _core_from_mask(g, mask, omega, criterion)


def linear_core_direct(g: Digraph, omega: int, criterion: str = "level-threshold") -> LinearCore:
    """Per-node BFS realization of the core definition; the oracle the fast
    paths are checked against."""
    _check_criterion(criterion)
    mask = np.zeros(g.n, dtype=bool)
    for v in range(g.n):
        f = expand(g, [v], "forward", omega)
        if not _passes(f, omega, criterion):
            continue
        b = expand(g, [v], "backward", omega)
        if _passes(b, omega, criterion):
            mask[v] = True
    return _core_from_mask(g, mask, omega, criterion)


def _passes(profile: ExpansionProfile, omega: int, criterion: str) -> bool:
    if criterion == "level-threshold":
        return profile.t_omega is not None
    # a finite expansion time implies >= omega reachable half-edges, so the
    # truncated profile total is still conclusive
    return profile.t_omega is not None or profile.reachable_halfedges >= omega


def _check_criterion(criterion: str) -> None:
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}, got {criterion!r}")


def _core_from_mask(g: Digraph, mask: np.ndarray, omega: int, criterion: str) -> LinearCore:
    core_edges = int(np.count_nonzero(mask[g.tails] & mask[g.heads]))
    return LinearCore(
        members=np.flatnonzero(mask),
        omega=omega,
        criterion=criterion,
        core_edges=core_edges,
    )


def core_vs_giant(g: Digraph, omega: int, criterion: str = "level-threshold") -> tuple[int, int]:
    """Symmetric-difference counts (core minus giant, giant minus core)
    between the linear core and the largest SCC's node set."""
    core_mask = linear_core(g, omega, criterion).member_mask(g.n)
    giant_mask = strongly_connected_components(g).giant_members()
    return (
        int(np.count_nonzero(core_mask & ~giant_mask)),
        int(np.count_nonzero(giant_mask & ~core_mask)),
    )


# -- level-threshold fast path ----------------------------------------------

def _threshold_flags_graph(g: Digraph, forward: bool, omega: int) -> np.ndarray:
    if forward:
        indptr, targets = g.out_csr()
        deg = g.out_degrees().astype(np.int64)
    else:
        indptr, targets = g.in_csr()
        deg = g.in_degrees().astype(np.int64)
    if _HAVE_NUMBA:
        return _threshold_flags_nb(indptr, targets, deg, omega)
    return _threshold_flags_py(indptr, targets, deg, omega)


def _threshold_flags_py(indptr, targets, deg, omega):
    n = indptr.size - 1
    flags = np.zeros(n, dtype=bool)
    stamp = np.full(n, -1, dtype=np.int64)
    for s in range(n):
        stamp[s] = s
        frontier = [s]
        while frontier:
            if sum(deg[u] for u in frontier) >= omega:
                flags[s] = True
                break
            nxt = []
            for u in frontier:
                for j in range(indptr[u], indptr[u + 1]):
                    v = targets[j]
                    if stamp[v] != s:
                        stamp[v] = s
                        nxt.append(v)
            frontier = nxt
    return flags


if _HAVE_NUMBA:

    @njit(cache=True)
    def _threshold_flags_nb(indptr, targets, deg, omega):  # pragma: no cover - compiled
        n = indptr.size - 1
        flags = np.zeros(n, np.bool_)
        stamp = np.full(n, -1, np.int64)
        cur = np.empty(n, np.int64)
        nxt = np.empty(n, np.int64)
        for s in range(n):
            stamp[s] = s
            cur[0] = s
            cur_len = 1
            while cur_len > 0:
                level = 0
                for i in range(cur_len):
                    level += deg[cur[i]]
                if level >= omega:
                    flags[s] = True
                    break
                nxt_len = 0
                for i in range(cur_len):
                    u = cur[i]
                    for j in range(indptr[u], indptr[u + 1]):
                        v = targets[j]
                        if stamp[v] != s:
                            stamp[v] = s
                            nxt[nxt_len] = v
                            nxt_len += 1
                tmp = cur
                cur = nxt
                nxt = tmp
                cur_len = nxt_len
        return flags


# -- reachable-count fast path ----------------------------------------------

def _reach_flags_condensation(g: Digraph, forward: bool, omega: int) -> np.ndarray:
    """Per-node flags for 'total reachable half-edges >= omega'.

    All nodes of an SCC share the same forward reachable set (their own
    component included), so the flag is computed per condensation component
    with memoized reachable component sets, cut off as soon as the running
    half-edge total hits omega.
    """
    labels = strongly_connected_components(g).component_ids
    ncomp = int(labels.max()) + 1
    if forward:
        src, dst = labels[g.tails], labels[g.heads]
        deg_sum = np.bincount(labels, weights=g.out_degrees(), minlength=ncomp).astype(np.int64)
    else:
        src, dst = labels[g.heads], labels[g.tails]
        deg_sum = np.bincount(labels, weights=g.in_degrees(), minlength=ncomp).astype(np.int64)
    # condensation adjacency, deduplicated, self-arcs dropped
    keep = src != dst
    key = src[keep] * np.int64(ncomp) + dst[keep]
    key = np.unique(key)
    csrc, cdst = key // ncomp, key % ncomp
    order = np.argsort(csrc, kind="stable")
    counts = np.bincount(csrc, minlength=ncomp)
    indptr = np.zeros(ncomp + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    succ = cdst[order]

    BIG, UNKNOWN = -1, -2
    state = np.full(ncomp, UNKNOWN, dtype=np.int64)  # BIG, UNKNOWN, or >=0 (done, small)
    small_sets: dict[int, frozenset[int]] = {}

    for root in range(ncomp):
        if state[root] != UNKNOWN:
            continue
        stack = [(root, 0)]
        while stack:
            c, phase = stack.pop()
            if phase == 0:
                if state[c] != UNKNOWN:
                    continue
                stack.append((c, 1))
                for j in range(indptr[c], indptr[c + 1]):
                    d = succ[j]
                    if state[d] == UNKNOWN:
                        stack.append((d, 0))
            else:
                if state[c] != UNKNOWN:
                    continue
                reach = {c}
                big = deg_sum[c] >= omega
                if not big:
                    for j in range(indptr[c], indptr[c + 1]):
                        d = succ[j]
                        if state[d] == BIG:
                            big = True
                            break
                        reach |= small_sets[d]
                    if not big:
                        total = int(sum(deg_sum[e] for e in reach))
                        big = total >= omega
                if big:
                    state[c] = BIG
                else:
                    state[c] = 1
                    small_sets[c] = frozenset(reach)
    return (state == BIG)[labels]
