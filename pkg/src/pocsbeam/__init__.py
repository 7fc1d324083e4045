"""Multicast beamforming by projections onto convex sets with learned schedules."""

__version__ = "0.1.0"

from .algorithms import (
    IterateTrace,
    UnfoldedSchedule,
    extract_beamformer,
    iterations_to_convergence,
    iterations_to_feasibility,
    pocs_sweep,
    run_pocs,
    run_pocs_bp,
)
from .baselines import BoundEstimate, rand_a, reference_schedule, sdp_bound_estimate
from .checkpoint import (
    Checkpoint,
    CheckpointError,
    CheckpointHashError,
    CheckpointVersionError,
    load_checkpoint,
    save_checkpoint,
)
from .config import ConfigError, config_from_mapping, config_to_mapping, load_config
from .eigen import EigenPair, eig_oracle, power_method, residual_component
from .linalg import (
    ChannelSet,
    SystemConfig,
    derive_seed,
    fro_norm,
    hermitize,
    inner,
    outer,
    sample_channels,
)
from .objectives import (
    DEFAULT_SOFTMIN_BETA,
    feasibility_loss,
    min_snr,
    mmf_loss,
    snr_per_user,
    softmin,
    to_db,
)
from .projections import (
    FeasibilitySpec,
    PowerHalfSpace,
    QoSHalfSpace,
    project_power,
    project_qos,
    relax,
)
from .training import (
    AdamState,
    TrainConfig,
    TrainLogEntry,
    adam_step,
    fd_grad,
    heldout_seeds,
    train,
    train_du_pocs,
    train_du_pocs_bp,
)
