#!/usr/bin/env python3
"""Opt-in full-scale run (N=30, K in {20, 50}, T=35).

Training with finite-difference gradients at this size takes hours; this is
deliberately not part of the test suite.  After training, the trained
schedule and the hand-tuned reference run on 50 held-out realizations; the
script reports iterations-to-convergence (0.01 dB criterion) and convergent
min-SNR for both, to be read against the targets quoted in the README with
the +-50% iteration and +-0.3 dB tolerances stated there.
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pocsbeam import load_config, reference_schedule, save_checkpoint, to_db, train
from pocsbeam.batch import channel_batch, prepare, run_pocs_bp_batch
from pocsbeam.training import heldout_seeds

HERE = Path(__file__).resolve().parent.parent


def iters_to_convergence_db(snr_db, tol=0.01):
    depth, batch = snr_db.shape
    out = np.empty(batch, dtype=int)
    for b in range(batch):
        t = depth
        for i in range(depth - 1, -1, -1):
            if abs(snr_db[i, b] - snr_db[-1, b]) <= tol:
                t = i + 1
            else:
                break
        out[b] = t
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=str(HERE / "configs" / "du_pocs_bp_paper_k20.cfg"))
    ap.add_argument("--checkpoint", default="du_pocs_bp_paper.ckpt.json")
    ap.add_argument("--reference-horizon", type=int, default=200,
                    help="iterations to run the hand-tuned schedule for its convergence count")
    args = ap.parse_args()

    cfg = load_config(args.config)
    print(f"training at N={cfg.problem.n_antennas}, K={cfg.problem.n_users}, "
          f"T={cfg.depth}; this is the long preset, expect hours")
    t0 = time.time()
    schedule, _ = train(cfg)
    save_checkpoint(args.checkpoint, schedule, cfg)
    print(f"trained in {(time.time() - t0) / 3600:.2f} h -> {args.checkpoint}")

    prep = prepare(channel_batch(cfg.problem, heldout_seeds(cfg)))
    gamma, sigma = cfg.problem.snr_target, cfg.problem.noise_std
    _, snr_tr, _ = run_pocs_bp_batch(
        prep, gamma, sigma, schedule.lambdas, schedule.betas, track=True
    )
    ref = reference_schedule(args.reference_horizon)
    _, snr_ref, _ = run_pocs_bp_batch(prep, gamma, sigma, ref.lambdas, ref.betas, track=True)

    for name, snr in (("trained", snr_tr), ("reference", snr_ref)):
        conv = iters_to_convergence_db(to_db(snr))
        print(f"{name}: iterations-to-convergence {conv.mean():.1f}, "
              f"convergent min-SNR {np.mean(to_db(snr[-1])):.2f} dB")


if __name__ == "__main__":
    main()
