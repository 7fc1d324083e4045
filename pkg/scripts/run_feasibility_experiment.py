#!/usr/bin/env python3
"""Feasibility-solver experiment: trained schedule vs fixed relaxations.

Trains the unfolded feasibility solver on the N=5 / K=15 configuration, then
runs the trained schedule and fixed lambda in {1.0, 1.9} on the 50 held-out
realizations, writing mean feasibility loss per iteration to CSV (the data
behind a loss-vs-iteration convergence plot).
"""

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pocsbeam import load_config, save_checkpoint, train_du_pocs
from pocsbeam.batch import channel_batch, prepare, run_pocs_batch
from pocsbeam.training import heldout_seeds

HERE = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=str(HERE / "configs" / "du_pocs_n5k15.cfg"))
    ap.add_argument("--out", default="feasibility_curves.csv")
    ap.add_argument("--checkpoint", default="du_pocs_n5k15.ckpt.json")
    ap.add_argument("--horizon", type=int, default=5000, help="iterations for fixed lambdas")
    args = ap.parse_args()

    cfg = load_config(args.config)
    print(f"training {cfg.algorithm} T={cfg.depth} on N={cfg.problem.n_antennas} "
          f"K={cfg.problem.n_users} ({cfg.n_batches} batches of {cfg.batch_size}) ...")
    schedule, log = train_du_pocs(cfg)
    save_checkpoint(args.checkpoint, schedule, cfg)
    print(f"final training loss {log[-1].mean_loss:.3e}; checkpoint -> {args.checkpoint}")

    prep = prepare(channel_batch(cfg.problem, heldout_seeds(cfg)))
    runs = {
        "trained": schedule.lambdas,
        "pocs_lambda_1.9": np.full(args.horizon, 1.9),
        "pocs_lambda_1.0": np.full(args.horizon, 1.0),
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("method,iteration,mean_loss,frac_feasible\n")
        for name, lambdas in runs.items():
            _, losses, first = run_pocs_batch(
                prep, cfg.problem.snr_target, cfg.power_bound, lambdas, track_losses=True
            )
            for t in range(losses.shape[0]):
                frac = float(np.mean(first <= t + 1))
                fh.write(f"{name},{t + 1},{float(losses[t].mean())!r},{frac!r}\n")
            reached = first[first <= len(lambdas)]
            print(f"{name}: feasible on {reached.size}/{first.size} realizations, "
                  f"mean iterations {reached.mean() if reached.size else float('nan'):.1f}")
    print(f"curves -> {args.out}")


if __name__ == "__main__":
    main()
