"""Command line entry points: ``simulate`` and ``match``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .experiments import (
    FIGURES,
    VerificationFailure,
    load_config,
    run_experiment,
    run_figure,
)
from .matching import deferred_acceptance, mmq_match, parse_instance, verify
from .scenario import ConfigurationError


def simulate_main(argv=None) -> int:
    """Run a config-file experiment or one of the canned figure sweeps."""
    argv = sys.argv[1:] if argv is None else list(argv)

    if argv and argv[0] == "figure":
        parser = argparse.ArgumentParser(
            prog="simulate figure", description="Run a canned figure sweep."
        )
        parser.add_argument("figure_id", choices=FIGURES)
        parser.add_argument("--runs", type=int, default=None)
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--out", default=None)
        parser.add_argument("--workers", type=int, default=1)
        args = parser.parse_args(argv[1:])
        try:
            out = run_figure(
                args.figure_id,
                output_path=args.out,
                n_runs=args.runs,
                seed=args.seed,
                workers=args.workers,
            )
        except (ConfigurationError, VerificationFailure, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(out)
        return 0

    parser = argparse.ArgumentParser(
        prog="simulate", description="Run a Monte Carlo cell association experiment."
    )
    parser.add_argument("--config", required=True, help="experiment config file")
    parser.add_argument("--runs", type=int, default=None, help="override run count")
    parser.add_argument("--seed", type=int, default=None, help="override base seed")
    parser.add_argument("--out", default=None, help="override output CSV path")
    parser.add_argument("--workers", type=int, default=1, help="worker processes")
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        if args.runs is not None:
            config = replace(config, n_runs=args.runs)
        if args.seed is not None:
            config = replace(config, scenario=replace(config.scenario, seed=args.seed))
        if args.out is not None:
            config = replace(config, output_path=args.out)
        out = run_experiment(config, workers=args.workers)
    except (ConfigurationError, VerificationFailure, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


def match_main(argv=None) -> int:
    """Solve a text-format matching instance and print the verifier report."""
    parser = argparse.ArgumentParser(
        prog="match", description="Run the matching engine on an instance file."
    )
    parser.add_argument("--instance", required=True, help="instance file path")
    parser.add_argument(
        "--algorithm", choices=("mmq", "da"), default="mmq",
        help="mmq (quota-aware, default) or da (deferred acceptance)",
    )
    args = parser.parse_args(sys.argv[1:] if argv is None else list(argv))
    try:
        instance = parse_instance(Path(args.instance).read_text())
        solver = mmq_match if args.algorithm == "mmq" else deferred_acceptance
        matching = solver(instance)
        report = verify(instance, matching)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    for host, agents in enumerate(matching.host_to_agents):
        members = " ".join(str(a) for a in agents) or "-"
        print(f"host {host} (load {matching.loads[host]}): {members}")
    unmatched = [a for a, h in enumerate(matching.agent_to_host) if h is None]
    if unmatched:
        print(f"unmatched agents: {' '.join(str(a) for a in unmatched)}")
    print(f"feasible: {report.feasible}")
    print(f"blocking pairs: {len(report.blocking_pairs)} {list(report.blocking_pairs)}")
    if report.pareto_optimal is not None:
        print(f"pareto optimal: {report.pareto_optimal}")
    ok = report.feasible and not report.blocking_pairs
    return 0 if ok else 1
