"""Command line front end: predict, generate, analyze, core, branching, experiment."""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

import numpy as np

from . import degrees
from .branching import OffspringLaw, expansion_experiment, survival_probability
from .criticality import ConvergenceError, karp_rho, predict
from .explore import core_vs_giant, default_omega, linear_core
from .generate import generate_simple, pair_configuration, read_graph, write_graph
from .harness import format_summary, read_experiment_config, run_experiment, ExperimentConfig
from .scc import cycle_census, strongly_connected_components, DEFAULT_L_MAX


def _family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["poisson", "regular"], help="named degree family")
    p.add_argument("--nu", type=float, help="mean for the poisson family")
    p.add_argument("--d", type=int, help="degree for the regular family")
    p.add_argument("--dist-file", help="distribution spec file")


def _resolve_distribution(args) -> degrees.BiDegreeDistribution:
    if args.dist_file:
        return degrees.read_distribution_spec(args.dist_file)
    if args.family == "poisson":
        if args.nu is None:
            raise SystemExit("--family poisson requires --nu")
        return degrees.poisson_pair(args.nu)
    if args.family == "regular":
        if args.d is None:
            raise SystemExit("--family regular requires --d")
        return degrees.regular(args.d)
    raise SystemExit("specify --family or --dist-file")


def _emit(payload: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dcm-giant",
        description="Directed configuration model: analytic giant-SCC "
                    "predictions and seeded Monte Carlo verification.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (64-bit)")
    common.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    common.add_argument("--out", help="write the result here instead of stdout")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", parents=[common], help="analytic criticality report")
    _family_args(p)

    p = sub.add_parser("generate", parents=[common], help="generate one graph")
    _family_args(p)
    p.add_argument("--sequence-file", help="degree sequence file instead of sampling")
    p.add_argument("--n", type=int, help="node count when sampling a sequence")
    p.add_argument("--simple", action="store_true", help="condition on simplicity")
    p.add_argument("--max-attempts", type=int, default=1000)

    p = sub.add_parser("analyze", parents=[common], help="SCC report for a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--cycles", action="store_true", help="add a bounded cycle census")
    p.add_argument("--l-max", type=int, default=DEFAULT_L_MAX)

    p = sub.add_parser("core", parents=[common], help="linear core of a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--omega", type=int, help="expansion threshold; default ceil(log^2 n)")
    p.add_argument("--criterion", choices=["level-threshold", "reachable-count"],
                   default="level-threshold")

    p = sub.add_parser("branching", parents=[common], help="expansion-time experiment")
    p.add_argument("--poisson-mean", type=float, help="Poisson offspring mean")
    p.add_argument("--offspring-file", help="offspring table: lines 'value probability'")
    p.add_argument("--x", type=int, default=1, help="independent process count")
    p.add_argument("--omega", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--trials", type=int, default=10000)

    p = sub.add_parser("experiment", parents=[common], help="Monte Carlo grid run")
    p.add_argument("--config", required=True, help="key-value config file")
    p.add_argument("--csv", help="override records CSV path")
    p.add_argument("--json", dest="json_path", help="override summary JSON path")

    args = parser.parse_args(argv)
    return COMMANDS[args.command](args)


def cmd_predict(args) -> int:
    dist = _resolve_distribution(args)
    try:
        report = predict(dist)
    except ConvergenceError as exc:
        print(f"solver did not converge: {exc}", file=sys.stderr)
        return 2
    _emit(report.to_json(), args.out)
    return 0


def cmd_generate(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.sequence_file:
        seq = degrees.read_degree_sequence(args.sequence_file)
    else:
        if args.n is None:
            raise SystemExit("need --n when sampling from a family")
        seq = degrees.sample_sequence(_resolve_distribution(args), args.n, rng)
    g = generate_simple(seq, rng, args.max_attempts) if args.simple else pair_configuration(seq, rng)
    if args.out:
        write_graph(g, args.out)
    else:
        sys.stdout.write(f"{g.n} {g.m}\n")
        for t, h in zip(g.tails.tolist(), g.heads.tolist()):
            sys.stdout.write(f"{t} {h}\n")
    return 0


def cmd_analyze(args) -> int:
    g = read_graph(args.graph)
    report = strongly_connected_components(g)
    payload = {
        "n": g.n,
        "m": g.m,
        "component_count": report.component_count,
        "giant_order": report.giant_order,
        "giant_size": report.giant_size,
        "second_order": report.second_order,
    }
    if args.cycles:
        census = cycle_census(g, args.l_max)
        payload["cycles"] = {str(k): v for k, v in sorted(census.counts.items())}
        payload["cycles_total"] = census.total
        payload["cycles_truncated"] = census.truncated
    _emit(json.dumps(payload), args.out)
    return 0


def cmd_core(args) -> int:
    g = read_graph(args.graph)
    omega = args.omega if args.omega is not None else default_omega(g.n)
    core = linear_core(g, omega, args.criterion)
    cmg, gmc = core_vs_giant(g, omega, args.criterion)
    payload = {
        "n": g.n,
        "omega": omega,
        "criterion": args.criterion,
        "core_order": core.order,
        "core_edges": core.core_edges,
        "core_minus_giant": cmg,
        "giant_minus_core": gmc,
    }
    _emit(json.dumps(payload), args.out)
    return 0


def cmd_branching(args) -> int:
    if args.offspring_file:
        mass = {}
        with open(args.offspring_file, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                value, prob = line.split()
                mass[int(value)] = float(prob)
        law = OffspringLaw(mass)
    elif args.poisson_mean is not None:
        law = OffspringLaw.poisson(args.poisson_mean)
    else:
        raise SystemExit("specify --poisson-mean or --offspring-file")
    rng = np.random.default_rng(args.seed)
    empirical, theoretical = expansion_experiment(law, args.x, args.omega, args.eps, args.trials, rng)
    stderr = math.sqrt(max(theoretical * (1.0 - theoretical), 1e-300) / args.trials)
    _emit(json.dumps({"empirical": empirical, "theoretical": theoretical, "stderr": stderr}),
          args.out)
    return 0


def cmd_experiment(args) -> int:
    config = read_experiment_config(
        args.config,
        seed=str(args.seed) if args.seed else None,
        workers=str(args.workers) if args.workers != 1 else None,
        out_csv=args.csv,
        out_json=args.json_path,
    )
    summary, _ = run_experiment(config)
    _emit(format_summary(summary), args.out)
    return 0


COMMANDS = {
    "predict": cmd_predict,
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "core": cmd_core,
    "branching": cmd_branching,
    "experiment": cmd_experiment,
}


if __name__ == "__main__":
    raise SystemExit(main())
