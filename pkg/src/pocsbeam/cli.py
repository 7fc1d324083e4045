"""Command-line front end: train, evaluate, compare, sweep softmin beta, show.

All state flows through flags and config files (no environment variables),
and every CSV starts with a comment line carrying the tool version, the hash
of the governing config or checkpoint, and the seed, so emitted data is
reproducible byte for byte from the command that made it.

Exit codes: 0 ok, 2 usage, 3 unreadable/unwritable file, 4 config schema
violation, 5 checkpoint error, 6 non-finite values during a run.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .algorithms import UnfoldedSchedule, run_pocs, run_pocs_bp
from .baselines import RANDA_DEFAULT_SAMPLES, rand_a, reference_schedule, sdp_bound_estimate
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .config import ConfigError, config_from_mapping, config_to_mapping, parse_config_text
from .linalg import derive_seed, sample_channels
from .objectives import min_snr, to_db
from .projections import FeasibilitySpec
from .training import (
    HELDOUT_POOL_SIZE,
    HELDOUT_STREAM,
    TrainConfig,
    heldout_seeds,
    train,
)

EXIT_OK = 0
EXIT_IO = 3
EXIT_CONFIG = 4
EXIT_CHECKPOINT = 5
EXIT_NONFINITE = 6


class NonFiniteRunError(ValueError):
    """A run produced non-finite values; outputs are not trustworthy."""


def _fmt(x) -> str:
    # plain-float repr is the shortest round-trip form; also strips numpy scalars
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return str(x)


def _mapping_hash(mapping: dict) -> str:
    canon = json.dumps(mapping, sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _write_csv(path, columns, rows, config_hash: str, seed: int):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# tool_version={__version__} config_hash={config_hash} seed={seed}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _read_config(path) -> TrainConfig:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return config_from_mapping(parse_config_text(text))


def _cmd_train(args) -> int:
    cfg = _read_config(args.config)
    schedule, log = train(cfg)
    digest = save_checkpoint(args.out, schedule, cfg)
    log_path = args.log if args.log else args.out + ".train_log.csv"
    _write_csv(
        log_path,
        ("depth", "batch_index", "mean_loss", "wall_time_ms"),
        [(e.depth, e.batch_index, e.mean_loss, e.wall_time_ms) for e in log],
        digest,
        cfg.seed,
    )
    print(f"wrote checkpoint {args.out} ({digest}) and log {log_path}")
    return EXIT_OK


def _eval_realization(cfg: TrainConfig, schedule: UnfoldedSchedule, seed: int):
    """Run the checkpointed algorithm on one realization; returns the trace."""
    channels = sample_channels(cfg.problem, seed)
    if cfg.algorithm == "du_pocs":
        spec = FeasibilitySpec.from_channels(channels, power_bound=cfg.power_bound)
        n = cfg.problem.n_antennas
        _, trace = run_pocs(
            np.zeros((n, n), complex), spec, schedule.lambdas, channels=channels
        )
    else:
        _, trace = run_pocs_bp(channels, schedule)
    return trace


def _cmd_eval(args) -> int:
    ckpt = load_checkpoint(args.checkpoint)
    cfg = ckpt.config
    rows = []
    for r in range(args.realizations):
        seed = derive_seed(args.seed, HELDOUT_STREAM, r)
        trace = _eval_realization(cfg, ckpt.schedule, seed)
        for t, loss, snr_db in zip(trace.iterations, trace.feasibility_loss, trace.min_snr_db):
            rows.append((r, t, loss, snr_db))
        if not all(np.isfinite(trace.feasibility_loss)):
            raise NonFiniteRunError(f"non-finite loss in realization {r} (seed {seed})")
    rows.sort(key=lambda row: (row[0], row[1]))
    _write_csv(
        args.out,
        ("realization", "iteration", "feasibility_loss", "min_snr_db"),
        rows,
        ckpt.content_hash,
        args.seed,
    )
    print(f"wrote {args.out} ({args.realizations} realizations)")
    return EXIT_OK


def _cmd_compare(args) -> int:
    cfg = _read_config(args.config)
    ckpt = load_checkpoint(args.checkpoint)
    depth = len(ckpt.schedule)
    n = cfg.problem.n_antennas
    rows = []
    for r in range(args.realizations):
        seed = derive_seed(cfg.seed, HELDOUT_STREAM, r)
        channels = sample_channels(cfg.problem, seed)

        traces = {"trained": _eval_realization(cfg, ckpt.schedule, seed)}
        _, traces["pocs_bp_reference"] = run_pocs_bp(channels, reference_schedule(depth))
        for lam in (1.0, 1.9):
            if cfg.algorithm == "du_pocs":
                spec = FeasibilitySpec.from_channels(channels, power_bound=cfg.power_bound)
                _, tr = run_pocs(
                    np.zeros((n, n), complex),
                    spec,
                    np.full(depth, lam),
                    channels=channels,
                )
            else:
                _, tr = run_pocs_bp(channels, UnfoldedSchedule.constant(depth, lam))
            traces[f"pocs_lambda_{lam}"] = tr
        for method, tr in traces.items():
            for t, snr_db in zip(tr.iterations, tr.min_snr_db):
                rows.append((r, t, method, snr_db))

        est = sdp_bound_estimate(channels)
        w_rand = rand_a(est.x_star, channels, n_samples=args.randa_samples, seed=seed)
        rows.append((r, 0, "rand_a_sdp", float(to_db(min_snr(w_rand, channels)))))
        rows.append((r, 0, "sdp_bound", float(to_db(est.bound))))
    rows.sort(key=lambda row: (row[0], row[1], row[2]))
    _write_csv(
        args.out,
        ("realization", "iteration", "method", "value_db"),
        rows,
        ckpt.content_hash,
        cfg.seed,
    )
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_sweep_beta(args) -> int:
    cfg = _read_config(args.config)
    if cfg.algorithm != "du_pocs_bp":
        raise ConfigError("sweep-beta retrains the beamforming variant; use algorithm = du_pocs_bp")
    try:
        betas = [float(b) for b in args.betas.split(",") if b.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad --betas list: {exc}") from exc
    if not betas:
        raise ConfigError("--betas must list at least one value")
    rows = []
    for beta in betas:
        sub = replace(cfg, softmin_beta=beta)
        schedule, _ = train(sub)
        for r, seed in enumerate(heldout_seeds(sub, args.realizations)):
            channels = sample_channels(sub.problem, seed)
            _, trace = run_pocs_bp(channels, schedule)
            rows.append((beta, r, trace.min_snr_db[-1]))
    rows.sort(key=lambda row: (row[0], row[1]))
    _write_csv(
        args.out,
        ("softmin_beta", "realization", "convergent_snr_db"),
        rows,
        _mapping_hash(config_to_mapping(cfg)),
        cfg.seed,
    )
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_show(args) -> int:
    ckpt = load_checkpoint(args.checkpoint)
    cfg_map = config_to_mapping(ckpt.config)
    print(f"# checkpoint {args.checkpoint} hash={ckpt.content_hash}")
    print(f"# algorithm={cfg_map['algorithm']} depth={len(ckpt.schedule)} seed={cfg_map['seed']}")
    print("t,lambda,beta")
    for t in range(len(ckpt.schedule)):
        print(f"{t + 1},{ckpt.schedule.lambdas[t]!r},{ckpt.schedule.betas[t]!r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pocsbeam", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="train a schedule from a config file")
    t.add_argument("--config", required=True)
    t.add_argument("--out", required=True, help="checkpoint path")
    t.add_argument("--log", default=None, help="training log CSV (default <out>.train_log.csv)")
    t.set_defaults(func=_cmd_train)

    e = sub.add_parser("eval", help="run a checkpoint on held-out realizations")
    e.add_argument("--checkpoint", required=True)
    e.add_argument("--realizations", type=int, default=HELDOUT_POOL_SIZE)
    e.add_argument("--seed", type=int, required=True)
    e.add_argument("--out", required=True)
    e.set_defaults(func=_cmd_eval)

    c = sub.add_parser("compare", help="trained vs baselines on shared realizations")
    c.add_argument("--config", required=True)
    c.add_argument("--checkpoint", required=True)
    c.add_argument("--realizations", type=int, default=HELDOUT_POOL_SIZE)
    c.add_argument("--randa-samples", type=int, default=RANDA_DEFAULT_SAMPLES)
    c.add_argument("--out", required=True)
    c.set_defaults(func=_cmd_compare)

    s = sub.add_parser("sweep-beta", help="retrain at each softmin beta (Fig. 4 style)")
    s.add_argument("--config", required=True)
    s.add_argument("--betas", required=True, help="comma-separated list, e.g. 0,1,3,10")
    s.add_argument("--realizations", type=int, default=HELDOUT_POOL_SIZE)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_sweep_beta)

    w = sub.add_parser("show", help="print the per-iteration parameters of a checkpoint")
    w.add_argument("--checkpoint", required=True)
    w.set_defaults(func=_cmd_show)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CheckpointError as exc:
        print(f"error: checkpoint: {exc}", file=sys.stderr)
        return EXIT_CHECKPOINT
    except NonFiniteRunError as exc:
        print(f"error: non-finite: {exc}", file=sys.stderr)
        return EXIT_NONFINITE
    except ValueError as exc:
        if "non-finite" in str(exc):
            print(f"error: non-finite: {exc}", file=sys.stderr)
            return EXIT_NONFINITE
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
