#!/usr/bin/env python3
"""Desk-scale beamforming comparison: train the desk preset, then compare.

Thin wrapper over the CLI: trains configs/du_pocs_bp_desk.cfg (unless a
checkpoint already exists) and emits the comparison CSV with the trained
schedule, the hand-tuned reference, fixed-lambda runs, the randomized
SDP-style baseline and the certified SNR bound on shared realizations.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pocsbeam.cli import main as cli_main

HERE = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=str(HERE / "configs" / "du_pocs_bp_desk.cfg"))
    ap.add_argument("--checkpoint", default="du_pocs_bp_desk.ckpt.json")
    ap.add_argument("--out", default="desk_comparison.csv")
    ap.add_argument("--realizations", type=int, default=50)
    args = ap.parse_args()

    if not Path(args.checkpoint).exists():
        code = cli_main(["train", "--config", args.config, "--out", args.checkpoint])
        if code != 0:
            return code
    return cli_main(
        [
            "compare",
            "--config", args.config,
            "--checkpoint", args.checkpoint,
            "--realizations", str(args.realizations),
            "--out", args.out,
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
