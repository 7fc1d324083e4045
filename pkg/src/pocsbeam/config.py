"""Flat key=value experiment configs.

One experiment = one small text file; '#' starts a comment, every line is
`key = value`.  Unknown keys are hard errors so a config can never silently
drift from the code that consumed it.  The same mapping is embedded in
checkpoints, which keeps training provenance with the trained parameters.
"""

from __future__ import annotations

import math

from .linalg import SystemConfig
from .objectives import DEFAULT_SOFTMIN_BETA
from .training import TrainConfig


class ConfigError(ValueError):
    """Malformed, unknown, or inconsistent experiment configuration."""


def _to_bool(s: str) -> bool:
    low = s.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ConfigError(f"expected a boolean, got {s!r}")


# key -> (converter, required)
_SCHEMA = {
    "n_antennas": (int, True),
    "n_users": (int, True),
    "gamma": (float, False),
    "sigma": (float, False),
    "power_bound": (float, False),
    "depth": (int, True),
    "learning_rate": (float, False),
    "n_batches": (int, False),
    "batch_size": (int, False),
    "fd_step": (float, False),
    "softmin_beta": (float, False),
    "init_lambda": (float, False),
    "init_beta": (float, False),
    "seed": (int, True),
    "incremental": (_to_bool, False),
    "algorithm": (str, True),
}


def parse_config_text(text: str) -> dict:
    """Parse flat `key = value` lines into a typed mapping."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        conv, _ = _SCHEMA[key]
        try:
            out[key] = conv(value)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
    return out


def load_config(path) -> TrainConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_mapping(parse_config_text(text))


def config_from_mapping(d: dict) -> TrainConfig:
    """Build a TrainConfig from a flat mapping, validating the schema."""
    for key, (_, required) in _SCHEMA.items():
        if required and key not in d:
            raise ConfigError(f"missing required key {key!r}")
    extra = set(d) - set(_SCHEMA)
    if extra:
        raise ConfigError(f"unknown keys: {sorted(extra)}")
    problem = SystemConfig(
        n_antennas=d["n_antennas"],
        n_users=d["n_users"],
        noise_std=d.get("sigma", 1.0),
        snr_target=d.get("gamma", 1.0),
    )
    try:
        return TrainConfig(
            problem=problem,
            depth=d["depth"],
            algorithm=d["algorithm"],
            power_bound=d.get("power_bound"),
            learning_rate=d.get("learning_rate", 0.003),
            n_batches=d.get("n_batches", 1000),
            batch_size=d.get("batch_size", 30),
            fd_step=d.get("fd_step", 1e-4),
            softmin_beta=d.get("softmin_beta", DEFAULT_SOFTMIN_BETA),
            init_lambda=d.get("init_lambda", 1.0),
            init_beta=d.get("init_beta", math.sqrt(0.9)),
            seed=d["seed"],
            incremental=d.get("incremental", True),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def config_to_mapping(cfg: TrainConfig) -> dict:
    """Flat mapping with the same keys the config files use."""
    d = {
        "n_antennas": cfg.problem.n_antennas,
        "n_users": cfg.problem.n_users,
        "gamma": cfg.problem.snr_target,
        "sigma": cfg.problem.noise_std,
        "depth": cfg.depth,
        "learning_rate": cfg.learning_rate,
        "n_batches": cfg.n_batches,
        "batch_size": cfg.batch_size,
        "fd_step": cfg.fd_step,
        "softmin_beta": cfg.softmin_beta,
        "init_lambda": cfg.init_lambda,
        "init_beta": cfg.init_beta,
        "seed": cfg.seed,
        "incremental": cfg.incremental,
        "algorithm": cfg.algorithm,
    }
    if cfg.power_bound is not None:
        d["power_bound"] = cfg.power_bound
    return d
