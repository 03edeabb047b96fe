"""Bi-degree distributions and sequences for directed random graphs.

A bi-degree distribution puts probability mass on (in-degree, out-degree)
pairs with equal in- and out-means.  A bi-degree sequence is a concrete
assignment of such pairs to n nodes with matched half-edge totals, which is
what the half-edge pairing generator consumes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy import stats

MASS_TOL = 1e-9
DEFAULT_TRUNCATION_TAIL = 1e-12


class DistributionError(ValueError):
    """A mass table violates the distribution invariants."""


@dataclass(frozen=True)
class Moments:
    lam: float          # common mean of in- and out-degree
    cross: float        # E[D_in * D_out]
    second_in: float    # E[D_in^2]
    second_out: float   # E[D_out^2]
    nu: float           # cross / lam, the criticality parameter


@dataclass(frozen=True)
class PgfValue:
    f: float
    df_dz: float
    df_dw: float


class BiDegreeDistribution:
    """Finite-support probability mass on (in-degree, out-degree) pairs.

    Entries with zero mass are dropped.  Construction validates that the
    mass is nonnegative, sums to 1 within MASS_TOL, and that the in- and
    out-means agree within MASS_TOL and are positive.
    """

    def __init__(self, mass: Mapping[tuple[int, int], float]):
        cleaned = {}
        for key, p in mass.items():
            k, l = key
            if k < 0 or l < 0 or k != int(k) or l != int(l):
                raise DistributionError(f"degree pair {key!r} is not a pair of nonnegative integers")
            if p < 0:
                raise DistributionError(f"negative mass {p} at {key!r}")
            if p > 0:
                cleaned[(int(k), int(l))] = float(p)
        if not cleaned:
            raise DistributionError("empty support")

        keys = sorted(cleaned)
        self._k = np.array([k for k, _ in keys], dtype=np.int64)
        self._l = np.array([l for _, l in keys], dtype=np.int64)
        self._p = np.array([cleaned[key] for key in keys], dtype=np.float64)

        total = self._p.sum()
        if abs(total - 1.0) > MASS_TOL:
            raise DistributionError(f"total mass {total} is not 1 within {MASS_TOL}")
        mean_in = float(self._k @ self._p)
        mean_out = float(self._l @ self._p)
        if abs(mean_in - mean_out) > MASS_TOL:
            raise DistributionError(
                f"in-mean {mean_in} and out-mean {mean_out} differ by more than {MASS_TOL}"
            )
        lam = 0.5 * (mean_in + mean_out)
        if lam <= 0:
            raise DistributionError("mean degree must be positive")

        self.mass = cleaned
        self._lam = lam

    # -- basic views ------------------------------------------------------

    @property
    def support(self) -> list[tuple[int, int]]:
        return list(zip(self._k.tolist(), self._l.tolist()))

    @property
    def lam(self) -> float:
        return self._lam

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(in-degrees, out-degrees, probabilities) over the support."""
        return self._k, self._l, self._p

    def __repr__(self) -> str:
        return f"BiDegreeDistribution({len(self._p)} support points, lam={self._lam:.6g})"

    # -- moments and generating function ----------------------------------

    def moments(self) -> Moments:
        k, l, p = self._k, self._l, self._p
        cross = float((k * l) @ p)
        return Moments(
            lam=self._lam,
            cross=cross,
            second_in=float((k * k) @ p),
            second_out=float((l * l) @ p),
            nu=cross / self._lam,
        )

    def pgf(self, z: float, w: float) -> PgfValue:
        """Evaluate f(z, w) = sum p_{k,l} z^k w^l and its partials on [0,1]^2."""
        if not (0.0 <= z <= 1.0 and 0.0 <= w <= 1.0):
            raise ValueError(f"pgf arguments must lie in [0,1], got ({z}, {w})")
        k, l, p = self._k, self._l, self._p
        # 0^0 = 1 convention; numpy's float power already follows it.
        zk = np.power(float(z), k)
        wl = np.power(float(w), l)
        f = float(p @ (zk * wl))
        with np.errstate(divide="ignore", invalid="ignore"):
            zk1 = np.where(k >= 1, np.power(float(z), np.maximum(k - 1, 0)), 0.0)
            wl1 = np.where(l >= 1, np.power(float(w), np.maximum(l - 1, 0)), 0.0)
        df_dz = float(p @ (k * zk1 * wl))
        df_dw = float(p @ (l * zk * wl1))
        return PgfValue(f=f, df_dz=df_dz, df_dw=df_dw)

    def size_biased(self, direction: str) -> "SizeBiasedLaw":
        """In- or out-size-biased law with its offspring marginal.

        In-bias puts mass k*p_{k,l}/lam at (k-1, l); its offspring marginal
        (over the out-coordinate) has mean equal to nu.  Out-bias is the
        mirror image.
        """
        if direction not in ("in", "out"):
            raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")
        k, l, p = self._k, self._l, self._p
        mass: dict[tuple[int, int], float] = {}
        marginal: dict[int, float] = {}
        if direction == "in":
            weights = k * p / self._lam
            for ki, li, wi in zip(k.tolist(), l.tolist(), weights.tolist()):
                if wi <= 0:
                    continue
                mass[(ki - 1, li)] = mass.get((ki - 1, li), 0.0) + wi
                marginal[li] = marginal.get(li, 0.0) + wi
        else:
            weights = l * p / self._lam
            for ki, li, wi in zip(k.tolist(), l.tolist(), weights.tolist()):
                if wi <= 0:
                    continue
                mass[(ki, li - 1)] = mass.get((ki, li - 1), 0.0) + wi
                marginal[ki] = marginal.get(ki, 0.0) + wi
        return SizeBiasedLaw(direction=direction, mass=mass, offspring_marginal=marginal)


@dataclass(frozen=True)
class SizeBiasedLaw:
    """Size-biased bi-degree law plus the offspring marginal used by the
    branching approximation (out-marginal for in-bias, in-marginal for
    out-bias)."""

    direction: str
    mass: dict[tuple[int, int], float]
    offspring_marginal: dict[int, float]

    def __post_init__(self):
        total = sum(self.mass.values())
        if abs(total - 1.0) > MASS_TOL:
            raise DistributionError(f"size-biased mass sums to {total}, not 1")
        mtotal = sum(self.offspring_marginal.values())
        if abs(mtotal - 1.0) > MASS_TOL:
            raise DistributionError(f"offspring marginal sums to {mtotal}, not 1")

    def offspring_mean(self) -> float:
        return sum(v * p for v, p in self.offspring_marginal.items())


class BiDegreeSequence:
    """Per-node (in-degree, out-degree) pairs with matched totals."""

    def __init__(self, d_minus, d_plus):
        d_minus = np.asarray(d_minus, dtype=np.int64)
        d_plus = np.asarray(d_plus, dtype=np.int64)
        if d_minus.shape != d_plus.shape or d_minus.ndim != 1:
            raise ValueError("degree arrays must be 1-d and of equal length")
        if d_minus.size < 1:
            raise ValueError("a degree sequence needs at least one node")
        if (d_minus < 0).any() or (d_plus < 0).any():
            raise ValueError("degrees must be nonnegative")
        if int(d_minus.sum()) != int(d_plus.sum()):
            raise ValueError(
                f"in-total {int(d_minus.sum())} != out-total {int(d_plus.sum())}"
            )
        self.d_minus = d_minus
        self.d_plus = d_plus
        self.n = int(d_minus.size)
        self.m = int(d_plus.sum())

    @property
    def pairs(self) -> np.ndarray:
        """(n, 2) array of (in-degree, out-degree) rows."""
        return np.column_stack([self.d_minus, self.d_plus])

    @property
    def max_degree(self) -> int:
        return int(max(self.d_minus.max(), self.d_plus.max()))

    def __repr__(self) -> str:
        return f"BiDegreeSequence(n={self.n}, m={self.m})"


# -- named families -------------------------------------------------------

def regular(d: int) -> BiDegreeDistribution:
    """Point mass at (d, d)."""
    if d < 1:
        raise DistributionError("regular degree must be >= 1")
    return BiDegreeDistribution({(d, d): 1.0})


def poisson_pair(nu: float, truncation_tail: float = DEFAULT_TRUNCATION_TAIL) -> BiDegreeDistribution:
    """Independent product of two Poisson(nu) marginals, truncated so the
    discarded joint mass is below truncation_tail, then renormalized."""
    _check_tail(truncation_tail)
    if nu <= 0:
        raise DistributionError("poisson mean must be positive")
    kmax = int(stats.poisson.isf(truncation_tail / 4, nu)) + 1
    while stats.poisson.sf(kmax, nu) >= truncation_tail / 2:
        kmax += 1
    pmf = stats.poisson.pmf(np.arange(kmax + 1), nu)
    return product_distribution(
        {k: float(p) for k, p in enumerate(pmf)},
        {k: float(p) for k, p in enumerate(pmf)},
    )


def product_distribution(in_mass: Mapping[int, float], out_mass: Mapping[int, float]) -> BiDegreeDistribution:
    """Independent product of two univariate degree laws (renormalized)."""
    in_items = [(k, p) for k, p in in_mass.items() if p > 0]
    out_items = [(l, p) for l, p in out_mass.items() if p > 0]
    if not in_items or not out_items:
        raise DistributionError("empty support")
    ztot = sum(p for _, p in in_items) * sum(p for _, p in out_items)
    mass = {
        (k, l): pk * pl / ztot
        for k, pk in in_items
        for l, pl in out_items
    }
    return BiDegreeDistribution(mass)


def build_distribution(spec, truncation_tail: float = DEFAULT_TRUNCATION_TAIL) -> BiDegreeDistribution:
    """Build a validated distribution from a family descriptor.

    Accepted specs:
      - a mapping from (k, l) pairs to probabilities (explicit table;
        rejected if the in/out means differ by more than truncation_tail)
      - {"family": "poisson", "nu": x}
      - {"family": "regular", "d": k}
      - {"family": "product", "in": {k: p}, "out": {l: p}}
    """
    _check_tail(truncation_tail)
    if isinstance(spec, Mapping) and "family" not in spec:
        mean_in = sum(k * p for (k, _), p in spec.items())
        mean_out = sum(l * p for (_, l), p in spec.items())
        if abs(mean_in - mean_out) > truncation_tail:
            raise DistributionError(
                f"explicit table has unequal means ({mean_in} vs {mean_out}); not rescaling"
            )
        return BiDegreeDistribution(spec)
    family = spec["family"]
    if family == "poisson":
        return poisson_pair(float(spec["nu"]), truncation_tail)
    if family == "regular":
        return regular(int(spec["d"]))
    if family == "product":
        return product_distribution(spec["in"], spec["out"])
    raise DistributionError(f"unknown family {family!r}")


def _check_tail(tail: float) -> None:
    if not (0.0 < tail <= 1e-6):
        raise ValueError(f"truncation_tail must be in (0, 1e-6], got {tail}")


# -- sequences ------------------------------------------------------------

def sample_sequence(dist: BiDegreeDistribution, n: int, rng: np.random.Generator) -> BiDegreeSequence:
    """Draw n iid degree pairs and repair the half-edge imbalance.

    The imbalance delta = sum(d+) - sum(d-) is repaired by adding single
    half-edges to the deficient side, one per uniformly chosen node, so the
    result satisfies sum(d+) == sum(d-) exactly for every seed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k, l, p = dist.arrays()
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    d_minus = k[idx].copy()
    d_plus = l[idx].copy()
    delta = int(d_plus.sum() - d_minus.sum())
    if delta > 0:
        np.add.at(d_minus, rng.integers(0, n, size=delta), 1)
    elif delta < 0:
        np.add.at(d_plus, rng.integers(0, n, size=-delta), 1)
    return BiDegreeSequence(d_minus, d_plus)


def empirical_distribution(seq: BiDegreeSequence) -> BiDegreeDistribution:
    """Empirical mass n_{k,l}/n of a degree sequence."""
    pairs, counts = np.unique(seq.pairs, axis=0, return_counts=True)
    mass = {
        (int(k), int(l)): c / seq.n
        for (k, l), c in zip(pairs.tolist(), counts.tolist())
    }
    return BiDegreeDistribution(mass)


def total_variation(a: BiDegreeDistribution, b: BiDegreeDistribution) -> float:
    keys = set(a.mass) | set(b.mass)
    return 0.5 * sum(abs(a.mass.get(key, 0.0) - b.mass.get(key, 0.0)) for key in keys)


# -- file formats ----------------------------------------------------------

def read_degree_sequence(path) -> BiDegreeSequence:
    """One node per line: "d_minus d_plus"; blanks and '#' lines ignored."""
    d_minus, d_plus = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'd_minus d_plus', got {line!r}")
            d_minus.append(int(parts[0]))
            d_plus.append(int(parts[1]))
    return BiDegreeSequence(d_minus, d_plus)


def write_degree_sequence(seq: BiDegreeSequence, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for dm, dp in zip(seq.d_minus.tolist(), seq.d_plus.tolist()):
            fh.write(f"{dm} {dp}\n")


def read_distribution_spec(path, truncation_tail: float = DEFAULT_TRUNCATION_TAIL) -> BiDegreeDistribution:
    """Distribution spec file: either key-value lines (family = poisson,
    nu = 2) or an inline mass table of lines "k l probability"."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [
            line.strip()
            for line in fh
            if line.strip() and not line.strip().startswith("#")
        ]
    if not lines:
        raise DistributionError(f"{path}: empty distribution spec")
    tokens = [line.replace("=", " ").split() for line in lines]
    if all(len(t) == 3 and _all_numeric(t) for t in tokens):
        mass = {(int(t[0]), int(t[1])): float(t[2]) for t in tokens}
        return build_distribution(mass, truncation_tail)
    kv = {}
    for t in tokens:
        if len(t) < 2:
            raise DistributionError(f"{path}: malformed spec line {' '.join(t)!r}")
        kv[t[0].lower()] = t[1]
    family = kv.get("family")
    if family == "poisson":
        return build_distribution({"family": "poisson", "nu": float(kv.get("nu", kv.get("mean", "nan")))},
                                  truncation_tail)
    if family == "regular":
        return build_distribution({"family": "regular", "d": int(kv["d"])}, truncation_tail)
    raise DistributionError(f"{path}: unknown family {family!r}")


def _all_numeric(tokens) -> bool:
    try:
        for t in tokens:
            float(t)
    except ValueError:
        return False
    return True
