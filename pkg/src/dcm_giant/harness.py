"""Seeded Monte Carlo experiment runner: prediction next to simulation."""
from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import degrees
from .criticality import predict
from .explore import default_omega, linear_core
from .generate import binomial_digraph, generate_simple, pair_configuration
from .scc import cycle_census, strongly_connected_components, DEFAULT_L_MAX

MODES = ("multigraph", "simple", "binomial")

CSV_COLUMNS = [
    "n", "trial", "seed", "v_giant", "e_giant", "v_ratio", "e_ratio",
    "core_ratio", "core_edge_ratio", "second_order", "cycles_total",
    "ms_generate", "ms_scc",
]


@dataclass
class ExperimentConfig:
    family: dict                      # build_distribution spec (or {"family": "poisson", ...})
    n_list: list[int]
    trials: int
    master_seed: int
    mode: str = "multigraph"
    omega: int | str | None = None    # None: skip core; "auto": ceil(log^2 n); int: fixed
    cycles: bool = False
    l_max: int = DEFAULT_L_MAX
    workers: int = 1
    out_csv: str | None = None
    out_json: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.n_list or sorted(self.n_list) != list(self.n_list):
            raise ValueError("n_list must be nonempty and ascending")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master seed must be a 64-bit value")


@dataclass
class TrialRecord:
    n: int
    trial: int
    seed: int
    v_giant: int
    e_giant: int
    v_ratio: float
    e_ratio: float
    core_ratio: float        # nan when the core is not computed
    core_edge_ratio: float
    second_order: int
    cycles_total: int        # -1 when the census is not computed
    ms_generate: float
    ms_scc: float


def derive_trial_seed(master: int, n: int, trial: int) -> int:
    """Stateless 64-bit mixing of (master, n, trial); identical on all
    platforms, avalanche via the splitmix64 finalizer."""
    h = master & 0xFFFFFFFFFFFFFFFF
    for word in (n, trial):
        h = _splitmix64(h ^ _splitmix64(word & 0xFFFFFFFFFFFFFFFF))
    return h


def _splitmix64(z: int) -> int:
    mask = 0xFFFFFFFFFFFFFFFF
    z = (z + 0x9E3779B97F4A7C15) & mask
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4B289) & mask
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
    return z ^ (z >> 31)


def run_trial(config: ExperimentConfig, n: int, trial: int) -> TrialRecord:
    """One seeded trial: sample, generate, analyze."""
    seed = derive_trial_seed(config.master_seed, n, trial)
    rng = np.random.default_rng(seed)
    dist = degrees.build_distribution(config.family)

    t0 = time.perf_counter()
    if config.mode == "binomial":
        g = binomial_digraph(n, dist.lam / n, rng)
    else:
        seq = degrees.sample_sequence(dist, n, rng)
        if config.mode == "simple":
            g = generate_simple(seq, rng)
        else:
            g = pair_configuration(seq, rng)
    ms_generate = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    report = strongly_connected_components(g)
    ms_scc = (time.perf_counter() - t0) * 1e3

    core_ratio = core_edge_ratio = float("nan")
    if config.omega is not None:
        omega = default_omega(n) if config.omega == "auto" else int(config.omega)
        core = linear_core(g, omega)
        core_ratio = core.order / n
        core_edge_ratio = core.core_edges / n

    cycles_total = -1
    if config.cycles:
        cycles_total = cycle_census(g, config.l_max).total

    return TrialRecord(
        n=n,
        trial=trial,
        seed=seed,
        v_giant=report.giant_order,
        e_giant=report.giant_size,
        v_ratio=report.giant_order / n,
        e_ratio=report.giant_size / n,
        core_ratio=core_ratio,
        core_edge_ratio=core_edge_ratio,
        second_order=report.second_order,
        cycles_total=cycles_total,
        ms_generate=ms_generate,
        ms_scc=ms_scc,
    )


def run_experiment(config: ExperimentConfig) -> tuple[dict, list[TrialRecord]]:
    """All (n, trial) cells of the grid, optionally across worker processes.

    Per-trial seeds depend only on (master seed, n, trial), so records are
    independent of scheduling; they are emitted in grid order regardless.
    Returns (summary, records) and writes CSV/JSON side outputs if paths
    are configured.
    """
    cells = [(n, t) for n in config.n_list for t in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_run_cell, [(config, n, t) for n, t in cells],
                                    chunksize=max(1, len(cells) // (4 * config.workers))))
    else:
        records = [run_trial(config, n, t) for n, t in cells]

    dist = degrees.build_distribution(config.family)
    theory = predict(dist)
    per_n = {}
    for n in config.n_list:
        v = np.array([r.v_ratio for r in records if r.n == n])
        e = np.array([r.e_ratio for r in records if r.n == n])
        per_n[n] = {
            "trials": int(v.size),
            "v_ratio_mean": float(v.mean()),
            "v_ratio_var": float(v.var(ddof=1)) if v.size > 1 else 0.0,
            "v_ratio_second_moment": float((v * v).mean()),
            "e_ratio_mean": float(e.mean()),
            "e_ratio_var": float(e.var(ddof=1)) if e.size > 1 else 0.0,
            "max_giant_order": int(max(r.v_giant for r in records if r.n == n)),
        }
    summary = {
        "mode": config.mode,
        "master_seed": config.master_seed,
        "theoretical": {
            "nu": theory.nu,
            "eta": theory.eta,
            "edge_density": theory.edge_density,
            "regime": theory.regime,
        },
        "per_n": per_n,
    }
    if config.out_csv:
        write_records_csv(records, config.out_csv)
    if config.out_json:
        with open(config.out_json, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2)
    return summary, records


def _run_cell(args):
    config, n, trial = args
    return run_trial(config, n, trial)


def write_records_csv(records: list[TrialRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            d = asdict(r)
            writer.writerow([d[c] for c in CSV_COLUMNS])


def format_summary(summary: dict) -> str:
    th = summary["theoretical"]
    lines = [
        f"regime={th['regime']}  nu={th['nu']:.6f}  eta={th['eta']:.6f}  "
        f"edge_density={th['edge_density']:.6f}",
    ]
    for n, s in summary["per_n"].items():
        lines.append(
            f"n={n}: mean v/n={s['v_ratio_mean']:.6f} (var {s['v_ratio_var']:.3e})  "
            f"mean e/n={s['e_ratio_mean']:.6f}  max giant order={s['max_giant_order']}"
        )
    return "\n".join(lines)


# -- config file -------------------------------------------------------------

def read_experiment_config(path, **overrides) -> ExperimentConfig:
    """Key-value config: one "key = value" per line, '#' comments.

    Keys: family (poisson|regular), nu, d, n_list (comma separated),
    trials, seed, mode, omega (auto|int|none), cycles (0/1), l_max,
    workers, out_csv, out_json.
    """
    kv = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" in line:
                key, _, value = line.partition("=")
            else:
                key, _, value = line.partition(" ")
            kv[key.strip().lower()] = value.strip()
    kv.update({k: v for k, v in overrides.items() if v is not None})

    family = kv.get("family", "poisson")
    if family == "poisson":
        spec = {"family": "poisson", "nu": float(kv["nu"])}
    elif family == "regular":
        spec = {"family": "regular", "d": int(kv["d"])}
    else:
        raise ValueError(f"config family must be poisson or regular, got {family!r}")

    omega = kv.get("omega", "none")
    omega = None if str(omega).lower() in ("none", "") else (omega if omega == "auto" else int(omega))
    return ExperimentConfig(
        family=spec,
        n_list=[int(x) for x in str(kv["n_list"]).split(",")],
        trials=int(kv.get("trials", 1)),
        master_seed=int(kv.get("seed", 0)),
        mode=kv.get("mode", "multigraph"),
        omega=omega,
        cycles=str(kv.get("cycles", "0")).lower() in ("1", "true", "yes"),
        l_max=int(kv.get("l_max", DEFAULT_L_MAX)),
        workers=int(kv.get("workers", 1)),
        out_csv=kv.get("out_csv"),
        out_json=kv.get("out_json"),
    )
