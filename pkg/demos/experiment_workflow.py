"""End-to-end experiment workflow: config file, Monte Carlo sweep, CSV output.

Writes a small config file, runs the sweep through the same code path as the
``simulate`` command, and summarizes the aggregate CSV. Finishes with a
reduced-scale canned figure sweep.

Run: python demos/experiment_workflow.py
"""

import csv
import tempfile
from dataclasses import replace
from pathlib import Path

from cellassoc import load_config, run_experiment, run_figure
from cellassoc.experiments import aggregate_path

CONFIG = """
# Sum rate vs UE count, quota policy against the biased baselines.
scenario.n_mmw = 10
scenario.n_muw = 10
scenario.seed = 1

policy.q_min_muw = 2

experiment.policies = mmq, max_rssi, max_sinr
experiment.runs = 40
experiment.slots = 10
experiment.auto_bias = true

sweep.m = 30, 50, 70
"""


def main():
    workdir = Path(tempfile.mkdtemp(prefix="cellassoc_demo_"))
    cfg_path = workdir / "experiment.cfg"
    cfg_path.write_text(CONFIG)
    print(f"Config file: {cfg_path}")

    config = replace(load_config(cfg_path), output_path=str(workdir / "sweep.csv"))
    out = run_experiment(config, workers=2)
    print(f"Per-run rows: {out}")
    print(f"Aggregate:    {aggregate_path(out)}\n")

    with open(aggregate_path(out), newline="") as fh:
        rows = list(csv.DictReader(fh))
    print(f"{'M':>4} {'policy':<10} {'sum rate [Gbps]':>16} {'load spread':>12}")
    for r in rows:
        print(f"{r['m']:>4} {r['policy']:<10} "
              f"{float(r['sum_rate_mean_bps']) / 1e9:>16.1f} "
              f"{float(r['delta_kappa_mean']):>12.1f}")

    print("\nCanned figure sweep at reduced scale (optimal quota per UE count):")
    fig_out = run_figure("fig4", output_path=workdir / "fig4.csv", n_runs=20)
    with open(fig_out, newline="") as fh:
        optimal = [r for r in csv.DictReader(fh) if r["optimal"] == "true"]
    for r in optimal:
        print(f"  M={r['m']:>3}: best microwave minimum quota = {r['q_min_muw']}")
    print(f"\nFull-scale runs: `simulate figure fig4` (or fig3/fig5/fig6/fig7).")


if __name__ == "__main__":
    main()
