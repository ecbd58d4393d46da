"""Crowd trajectory prediction by energy minimisation."""

from ._crowdcast import (
    CrowdcastError,
    PredictorConfig,
    __version__,
    ade2_fde2,
    discrete_frechet,
    divide_groups,
    interaction_gain,
    linear_baseline,
    predict,
)

__all__ = [
    "CrowdcastError",
    "PredictorConfig",
    "__version__",
    "ade2_fde2",
    "discrete_frechet",
    "divide_groups",
    "interaction_gain",
    "linear_baseline",
    "predict",
]
