"""Versioned, hash-guarded checkpoint files for trained schedules.

Human-readable JSON; float lists round-trip bit exactly because json uses
repr-shortest serialization.  The content hash covers everything except the
hash field itself, so a single flipped byte is rejected at load time.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .algorithms import UnfoldedSchedule
from .config import ConfigError, config_from_mapping, config_to_mapping
from .training import TrainConfig

FORMAT_VERSION = 1


class CheckpointError(ValueError):
    """Malformed checkpoint file."""


class CheckpointVersionError(CheckpointError):
    """Checkpoint written by an incompatible format version."""


class CheckpointHashError(CheckpointError):
    """Stored content hash does not match the payload."""


@dataclass(frozen=True)
class Checkpoint:
    schedule: UnfoldedSchedule
    config: TrainConfig
    content_hash: str


def _payload(schedule: UnfoldedSchedule, cfg: TrainConfig) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "depth": len(schedule),
        "lambda": [float(v) for v in schedule.lambdas],
        "beta": [float(v) for v in schedule.betas],
        "seed": cfg.seed,
        "train_config": config_to_mapping(cfg),
    }


def _hash(payload: dict) -> str:
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canon.encode("utf-8")).hexdigest()


def save_checkpoint(path, schedule: UnfoldedSchedule, cfg: TrainConfig) -> str:
    """Write schedule + provenance; returns the content hash."""
    payload = _payload(schedule, cfg)
    digest = _hash(payload)
    doc = dict(payload)
    doc["content_hash"] = digest
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return digest


def load_checkpoint(path) -> Checkpoint:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"malformed checkpoint {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise CheckpointError("checkpoint root must be an object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise CheckpointVersionError(
            f"checkpoint format version {version!r}, expected {FORMAT_VERSION}"
        )
    stored = doc.pop("content_hash", None)
    if stored is None:
        raise CheckpointError("checkpoint is missing its content hash")
    digest = _hash(doc)
    if digest != stored:
        raise CheckpointHashError(f"content hash mismatch: stored {stored}, computed {digest}")
    try:
        schedule = UnfoldedSchedule(
            lambdas=np.asarray(doc["lambda"], dtype=float),
            betas=np.asarray(doc["beta"], dtype=float),
        )
        cfg = config_from_mapping(doc["train_config"])
    except (KeyError, ValueError, ConfigError) as exc:
        raise CheckpointError(f"malformed checkpoint payload: {exc}") from exc
    if len(schedule) != doc.get("depth"):
        raise CheckpointError("depth field disagrees with schedule length")
    return Checkpoint(schedule=schedule, config=cfg, content_hash=digest)
