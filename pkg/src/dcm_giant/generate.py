"""Directed multigraph generation: half-edge pairing and binomial digraphs."""
from __future__ import annotations

import numpy as np

from .degrees import BiDegreeSequence


class Digraph:
    """Immutable directed multigraph: n nodes plus an arc multiset.

    Arcs are stored in generation order as parallel (tails, heads) arrays;
    loops and parallel arcs are permitted.  Forward and reverse CSR
    adjacency views are built lazily and describe the same arc multiset.
    """

    def __init__(self, n: int, tails, heads):
        tails = np.asarray(tails, dtype=np.int64)
        heads = np.asarray(heads, dtype=np.int64)
        if tails.shape != heads.shape or tails.ndim != 1:
            raise ValueError("tails and heads must be 1-d arrays of equal length")
        if n < 1:
            raise ValueError("a digraph needs at least one node")
        if tails.size and (tails.min() < 0 or tails.max() >= n or heads.min() < 0 or heads.max() >= n):
            raise ValueError("arc endpoint out of range")
        self.n = int(n)
        self.tails = tails
        self.heads = heads
        self._out = None
        self._in = None

    @property
    def m(self) -> int:
        return int(self.tails.size)

    def out_degrees(self) -> np.ndarray:
        return np.bincount(self.tails, minlength=self.n)

    def in_degrees(self) -> np.ndarray:
        return np.bincount(self.heads, minlength=self.n)

    def out_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, targets): heads of arcs grouped by tail node."""
        if self._out is None:
            self._out = _build_csr(self.tails, self.heads, self.n)
        return self._out

    def in_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, sources): tails of arcs grouped by head node."""
        if self._in is None:
            self._in = _build_csr(self.heads, self.tails, self.n)
        return self._in

    def reverse(self) -> "Digraph":
        return Digraph(self.n, self.heads, self.tails)

    def loop_count(self) -> int:
        return int(np.count_nonzero(self.tails == self.heads))

    def parallel_arc_count(self) -> int:
        """Number of arcs in excess of one per distinct (tail, head) pair."""
        if self.m == 0:
            return 0
        key = self.tails * np.int64(self.n) + self.heads
        return self.m - int(np.unique(key).size)

    def is_simple(self) -> bool:
        return self.loop_count() == 0 and self.parallel_arc_count() == 0

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"


def _build_csr(src: np.ndarray, dst: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    order = np.argsort(src, kind="stable")
    return indptr, dst[order]


class SimplicityError(RuntimeError):
    """Rejection sampling exhausted its attempt budget without a simple graph."""


def pair_configuration(seq: BiDegreeSequence, rng: np.random.Generator) -> Digraph:
    """Uniform random pairing of out half-edges (tails) to in half-edges
    (heads): every perfect matching of the m tails to the m heads has
    probability 1/m!.  Loops and parallel arcs are kept.  Arc order in the
    output is the pairing order, so results are bit-reproducible per seed.
    """
    tails = np.repeat(np.arange(seq.n, dtype=np.int64), seq.d_plus)
    heads = np.repeat(np.arange(seq.n, dtype=np.int64), seq.d_minus)
    if seq.m > 0:
        heads = heads[rng.permutation(seq.m)]
    return Digraph(seq.n, tails, heads)


def generate_simple(seq: BiDegreeSequence, rng: np.random.Generator, max_attempts: int = 1000) -> Digraph:
    """Rejection-sample a simple digraph (no loops, no parallel arcs) with
    the given degree sequence; uniform over such digraphs.  The acceptance
    probability is bounded away from zero for well-behaved sequences, so an
    exhausted budget signals a degenerate sequence."""
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    for _ in range(max_attempts):
        g = pair_configuration(seq, rng)
        if g.is_simple():
            return g
    raise SimplicityError(
        f"no simple pairing found in {max_attempts} attempts (n={seq.n}, m={seq.m})"
    )


def binomial_digraph(n: int, p: float, rng: np.random.Generator) -> Digraph:
    """Simple digraph where each of the n(n-1) ordered pairs is an arc
    independently with probability p (no loops)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must be a probability, got {p}")
    npairs = n * (n - 1)
    if npairs == 0 or p == 0.0:
        return Digraph(n, [], [])
    if npairs <= 2**20 or p > 0.01:
        # dense draw: materialize all ordered pairs
        u = np.repeat(np.arange(n, dtype=np.int64), n - 1)
        v = _offdiag_targets(n)
        keep = rng.random(npairs) < p
        return Digraph(n, u[keep], v[keep])
    # sparse draw: sample the arc count, then that many distinct pair indices
    k = int(rng.binomial(npairs, p))
    idx = _sample_distinct(npairs, k, rng)
    u = idx // (n - 1)
    r = idx % (n - 1)
    v = r + (r >= u)
    return Digraph(n, u, v)


def _offdiag_targets(n: int) -> np.ndarray:
    r = np.tile(np.arange(n - 1, dtype=np.int64), n)
    u = np.repeat(np.arange(n, dtype=np.int64), n - 1)
    return r + (r >= u)


def _sample_distinct(population: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """k distinct uniform indices from range(population), unordered."""
    if k == 0:
        return np.empty(0, dtype=np.int64)
    picked = np.empty(0, dtype=np.int64)
    while picked.size < k:
        extra = rng.integers(0, population, size=int((k - picked.size) * 1.1) + 16)
        picked = np.unique(np.concatenate([picked, extra]))
    if picked.size > k:
        picked = rng.choice(picked, size=k, replace=False)
    return picked


# -- graph text format ------------------------------------------------------

def write_graph(g: Digraph, path) -> None:
    """First line "n m", then one arc per line "tail head"."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for t, h in zip(g.tails.tolist(), g.heads.tolist()):
            fh.write(f"{t} {h}\n")


def read_graph(path) -> Digraph:
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().split()
        if len(first) != 2:
            raise ValueError(f"{path}: expected header 'n m'")
        n, m = int(first[0]), int(first[1])
        tails = np.empty(m, dtype=np.int64)
        heads = np.empty(m, dtype=np.int64)
        for i in range(m):
            parts = fh.readline().split()
            if len(parts) != 2:
                raise ValueError(f"{path}: truncated arc list at arc {i}")
            tails[i], heads[i] = int(parts[0]), int(parts[1])
    return Digraph(n, tails, heads)
