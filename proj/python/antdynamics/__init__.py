"""Python access to the ant trail replication environment core."""

from ._core import (
    ACTIONS,
    OBS_SIZE,
    ConfigError,
    ContractViolation,
    DataError,
    Environment,
    episode_reward,
    evolve,
    forward_pass,
    gen_synthetic,
    load_recording,
    minimal_genome,
    px_of_mm,
    segment_index,
    step_penalty,
    trail_area_step,
)

__all__ = [
    "ACTIONS",
    "OBS_SIZE",
    "ConfigError",
    "ContractViolation",
    "DataError",
    "Environment",
    "episode_reward",
    "evolve",
    "forward_pass",
    "gen_synthetic",
    "load_recording",
    "minimal_genome",
    "px_of_mm",
    "segment_index",
    "step_penalty",
    "trail_area_step",
]
