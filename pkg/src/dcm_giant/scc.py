"""Strongly connected components and bounded-length cycle census."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cs_connected_components

from .generate import Digraph

ORACLE_MAX_NODES = 256
DEFAULT_L_MAX = 12
DEFAULT_WORK_CAP = 10**8


@dataclass
class SccReport:
    component_ids: np.ndarray   # per-node component label, 0..component_count-1
    component_count: int
    giant_order: int            # node count of the chosen largest SCC
    giant_size: int             # arcs (incl. loops/parallels) inside it
    second_order: int           # order of the second-largest SCC (0 if none)
    giant_label: int            # component id of the chosen giant

    def giant_members(self) -> np.ndarray:
        """Boolean membership mask of the chosen largest SCC."""
        return self.component_ids == self.giant_label


def _report_from_labels(g: Digraph, labels: np.ndarray) -> SccReport:
    count = int(labels.max()) + 1 if labels.size else 0
    orders = np.bincount(labels, minlength=count)
    max_order = int(orders.max())
    # tie-break: among maximal components, the one containing the smallest
    # node id, i.e. the first node (in id order) in a maximal component
    giant_label = int(labels[np.argmax(orders[labels] == max_order)])
    inside = (labels[g.tails] == giant_label) & (labels[g.heads] == giant_label)
    giant_size = int(np.count_nonzero(inside))
    if count > 1:
        top2 = np.partition(orders, count - 2)
        second = int(top2[count - 2])
    else:
        second = 0
    return SccReport(
        component_ids=labels,
        component_count=count,
        giant_order=max_order,
        giant_size=giant_size,
        second_order=second,
        giant_label=giant_label,
    )


def strongly_connected_components(g: Digraph) -> SccReport:
    """Exact SCC partition of a directed multigraph.

    The partition itself is delegated to scipy's compiled SCC routine;
    giant selection, order/size accounting and tie-breaking live here.
    """
    data = np.ones(g.m, dtype=np.int8)
    adj = csr_matrix((data, (g.tails, g.heads)), shape=(g.n, g.n))
    _, labels = _cs_connected_components(adj, directed=True, connection="strong")
    return _report_from_labels(g, np.asarray(labels, dtype=np.int64))


def reachability_oracle(g: Digraph) -> SccReport:
    """SCCs by definition: mutual reachability via dense transitive closure.

    Quadratic memory; limited to small graphs and used as an independent
    check of the fast path.
    """
    if g.n > ORACLE_MAX_NODES:
        raise ValueError(f"oracle limited to n <= {ORACLE_MAX_NODES}, got n={g.n}")
    reach = np.eye(g.n, dtype=bool)
    reach[g.tails, g.heads] = True
    while True:
        closure = reach | (reach @ reach)
        if (closure == reach).all():
            break
        reach = closure
    mutual = reach & reach.T
    labels = np.full(g.n, -1, dtype=np.int64)
    next_label = 0
    for v in range(g.n):
        if labels[v] < 0:
            labels[mutual[v]] = next_label
            next_label += 1
    return _report_from_labels(g, labels)


def same_partition(a: np.ndarray, b: np.ndarray) -> bool:
    """True if two label arrays induce the same partition of the nodes."""
    if a.shape != b.shape:
        return False
    return (_canonical_labels(a) == _canonical_labels(b)).all()

def _canonical_labels(labels: np.ndarray) -> np.ndarray:
    seen: dict[int, int] = {}
    out = np.empty_like(labels)
    for i, lab in enumerate(labels.tolist()):
        out[i] = seen.setdefault(lab, len(seen))
    return out


@dataclass
class CycleCensus:
    counts: dict[int, int] = field(default_factory=dict)
    truncated: bool = False

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def cycle_census(g: Digraph, l_max: int = DEFAULT_L_MAX, work_cap: int = DEFAULT_WORK_CAP) -> CycleCensus:
    """Count directed simple cycles of length <= l_max, each exactly once.

    A cycle is an arc sequence, distinct nodes except for the closing
    endpoint; rotations are identified by anchoring each cycle at its
    minimal node.  Parallel arcs give distinct cycles; loops are cycles of
    length 1.  If expanded states exceed work_cap the census is flagged
    truncated (never raised).
    """
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    census = CycleCensus()
    loops = g.loop_count()
    if loops:
        census.counts[1] = loops
    if l_max == 1 or g.m == 0:
        return census

    indptr, targets = g.out_csr()
    indptr = indptr.tolist()
    targets = targets.tolist()
    outdeg = g.out_degrees()
    indeg = g.in_degrees()
    active = (outdeg > 0) & (indeg > 0)

    counts = census.counts
    on_path = np.zeros(g.n, dtype=bool)
    work = 0

    def search(start: int, u: int, depth: int) -> bool:
        """DFS over nodes > start; depth = arcs on the current path."""
        nonlocal work
        for j in range(indptr[u], indptr[u + 1]):
            work += 1
            if work > work_cap:
                return False
            v = targets[j]
            if v == start:
                if depth + 1 >= 2:
                    counts[depth + 1] = counts.get(depth + 1, 0) + 1
                continue
            if v < start or on_path[v] or not active[v]:
                continue
            if depth + 1 < l_max:
                on_path[v] = True
                ok = search(start, v, depth + 1)
                on_path[v] = False
                if not ok:
                    return False
        return True

    for s in range(g.n):
        if not active[s]:
            continue
        on_path[s] = True
        ok = search(s, s, 0)
        on_path[s] = False
        if not ok:
            census.truncated = True
            break
    return census
